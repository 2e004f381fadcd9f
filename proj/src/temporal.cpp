#include "spinsim/temporal.hpp"

#include <bit>

namespace spinsim {

TemporalRound temporal_round(const UnitVector3& a0, const MeasurementSequence& seq,
                             const std::vector<UnitVector3>& shared) {
  const std::size_t n = seq.size();
  if (n == 0) throw std::invalid_argument("empty measurement sequence");
  if (shared.size() != 2 * n + 1) throw ResourceMismatch("temporal protocol needs 2n+1 shared vectors");
  TemporalRound r;
  r.outputs.reserve(n);
  r.outputs.push_back(sgn(seq[0].dot(shared[0].vec() + a0.vec())));
  for (std::size_t i = 2; i <= n; ++i) {
    const int prev = r.outputs.back();
    const UnitVector3& ap = seq[i - 2];
    const UnitVector3& l1 = shared[2 * i - 3];
    const UnitVector3& l2 = shared[2 * i - 2];
    const int c1 = prev * sgn(ap.dot(l1));
    const int c2 = prev * sgn(ap.dot(l2));
    r.transcripts.push_back({c1, c2});
    r.outputs.push_back(sgn(seq[i - 1].dot(c1 * l1.vec() + c2 * l2.vec())));
  }
  return r;
}

void TemporalEnsemble::merge(const TemporalEnsemble& o) {
  if (n_steps == 0) n_steps = o.n_steps;
  outputs.insert(outputs.end(), o.outputs.begin(), o.outputs.end());
  cbits.insert(cbits.end(), o.cbits.begin(), o.cbits.end());
}

TemporalEnsemble simulate_temporal(const InitialState& state, const MeasurementSequence& seq, std::int64_t n_rounds,
                                   std::uint64_t seed, int workers) {
  if (state.spin.twice_s() != 1) throw std::invalid_argument("temporal protocol simulates a qubit");
  const int n = static_cast<int>(seq.size());
  if (n < 1 || n > 16) throw std::invalid_argument("sequence length must be in 1..16");
  const double p_plus = state.effective_weights()[0];

  return run_chunked<TemporalEnsemble>(n_rounds, seed, workers, [&](RandomStream& rng, std::int64_t count) {
    TemporalEnsemble part;
    part.n_steps = n;
    part.outputs.reserve(count);
    part.cbits.reserve(count);
    std::vector<UnitVector3> shared(2 * n + 1);
    for (std::int64_t r = 0; r < count; ++r) {
      // A mixture is a convex combination of the two pure preparations along +-a0.
      const UnitVector3 a0 = rng.uniform() < p_plus ? state.axis : -state.axis;
      for (auto& v : shared) v = sample_unit_sphere(rng);
      const auto round = temporal_round(a0, seq, shared);
      std::uint32_t out = 0, cb = 0;
      for (int i = 0; i < n; ++i)
        if (round.outputs[i] < 0) out |= 1u << i;
      for (std::size_t i = 0; i < round.transcripts.size(); ++i) {
        if (round.transcripts[i][0] < 0) cb |= 1u << (2 * i);
        if (round.transcripts[i][1] < 0) cb |= 1u << (2 * i + 1);
      }
      part.outputs.push_back(out);
      part.cbits.push_back(cb);
    }
    return part;
  });
}

MomentEstimate temporal_moment(const TemporalEnsemble& ens, const std::vector<int>& idx) {
  if (ens.size() < kMinTemporalEnsemble) throw InsufficientData("temporal moments need at least 1e5 rounds");
  std::uint32_t mask = 0;
  for (int i : idx) {
    if (i < 1 || i > ens.n_steps) throw std::invalid_argument("step index out of range");
    mask |= 1u << (i - 1);
  }
  MomentAccumulator acc;
  for (auto o : ens.outputs) acc.add(std::popcount(o & mask) % 2 ? -1.0 : 1.0);
  return {acc.mean(), acc.stderr_of_mean(), acc.count()};
}

double transcript_leakage_bits(const TemporalEnsemble& ens, int step) {
  if (step < 2 || step > ens.n_steps) throw std::invalid_argument("cbits enter steps 2..n");
  const int shift = 2 * (step - 2);
  const std::uint32_t prior_mask = (1u << (step - 1)) - 1u;
  std::vector<std::vector<std::int64_t>> joint(4, std::vector<std::int64_t>(std::size_t(1) << (step - 1), 0));
  for (std::size_t r = 0; r < ens.outputs.size(); ++r) ++joint[(ens.cbits[r] >> shift) & 3u][ens.outputs[r] & prior_mask];
  return mutual_information_bits(joint);
}

} // namespace spinsim
