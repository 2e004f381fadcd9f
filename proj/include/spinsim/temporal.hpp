#pragma once

#include "spinsim/montecarlo.hpp"
#include "spinsim/protocols.hpp"
#include "spinsim/successive.hpp"

#include <array>
#include <cstdint>
#include <vector>

namespace spinsim {

struct TemporalRound {
  std::vector<int> outputs;                  // alpha_1 .. alpha_n
  std::vector<std::array<int, 2>> transcripts; // (c_{2i-3}, c_{2i-2}) sent into step i = 2..n
};

// Shared vectors lambda_0 .. lambda_{2n}; step i >= 2 reads lambda_{2i-3} and lambda_{2i-2}.
TemporalRound temporal_round(const UnitVector3& a0, const MeasurementSequence& seq,
                             const std::vector<UnitVector3>& shared);

// Packed outcomes: bit i of outputs[r] set means alpha_{i+1} = -1 in round r;
// bits 2(i-2) and 2(i-2)+1 of cbits[r] hold the pair sent into step i, set meaning -1.
struct TemporalEnsemble {
  int n_steps = 0;
  std::vector<std::uint32_t> outputs;
  std::vector<std::uint32_t> cbits;

  std::int64_t size() const { return static_cast<std::int64_t>(outputs.size()); }
  void merge(const TemporalEnsemble& o);
};

// Qubit only. A mixed initial state is sampled per round and realised by flipping a0.
TemporalEnsemble simulate_temporal(const InitialState& state, const MeasurementSequence& seq, std::int64_t n_rounds,
                                   std::uint64_t seed, int workers = 0);

struct MomentEstimate {
  double mean = 0;
  double stderr = 0;
  std::int64_t n = 0;
};

inline constexpr std::int64_t kMinTemporalEnsemble = 100000;

// Mean of prod_{i in idx} alpha_i, idx 1-based; throws InsufficientData below kMinTemporalEnsemble rounds.
MomentEstimate temporal_moment(const TemporalEnsemble& ens, const std::vector<int>& idx);

// Mutual information in bits between the cbit pair entering step i and the outputs alpha_1..alpha_{i-1}.
double transcript_leakage_bits(const TemporalEnsemble& ens, int step);

} // namespace spinsim
