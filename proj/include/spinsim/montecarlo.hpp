#pragma once

#include "spinsim/protocols.hpp"
#include "spinsim/random.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <thread>
#include <vector>

namespace spinsim {

// Neumaier compensated sum.
class CompensatedSum {
public:
  void add(double x) {
    double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  void merge(const CompensatedSum& o) {
    add(o.sum_);
    add(o.comp_);
  }
  double value() const { return sum_ + comp_; }

private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// Running first and second moments of one observable.
class MomentAccumulator {
public:
  void add(double x) {
    s1_.add(x);
    s2_.add(x * x);
    ++n_;
  }
  void merge(const MomentAccumulator& o) {
    s1_.merge(o.s1_);
    s2_.merge(o.s2_);
    n_ += o.n_;
  }
  std::int64_t count() const { return n_; }
  double mean() const { return n_ ? s1_.value() / double(n_) : 0.0; }
  // Sample standard deviation over sqrt(n).
  double stderr_of_mean() const {
    if (n_ < 2) return 0.0;
    double m = mean();
    double var = (s2_.value() - double(n_) * m * m) / double(n_ - 1);
    return std::sqrt(std::max(var, 0.0) / double(n_));
  }

private:
  CompensatedSum s1_, s2_;
  std::int64_t n_ = 0;
};

inline constexpr std::int64_t kChunkRounds = 1 << 16;

inline int resolve_workers(int requested) {
  if (requested > 0) return requested;
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? int(hw) : 1;
}

// Splits n_rounds into fixed chunks; chunk c draws from RandomStream(seed, c) and the
// partial results are merged in chunk order, so the outcome is independent of the
// worker count. Acc must provide merge(const Acc&).
template <class Acc, class ChunkFn>
Acc run_chunked(std::int64_t n_rounds, std::uint64_t seed, int workers, ChunkFn chunk_fn) {
  const std::int64_t n_chunks = (n_rounds + kChunkRounds - 1) / kChunkRounds;
  std::vector<Acc> parts(static_cast<std::size_t>(n_chunks));
  auto run_chunk = [&](std::int64_t c) {
    RandomStream rng(seed, static_cast<std::uint64_t>(c));
    std::int64_t count = std::min(kChunkRounds, n_rounds - c * kChunkRounds);
    parts[static_cast<std::size_t>(c)] = chunk_fn(rng, count);
  };

  const int w = std::max(1, std::min<int>(resolve_workers(workers), int(std::max<std::int64_t>(n_chunks, 1))));
  if (w == 1) {
    for (std::int64_t c = 0; c < n_chunks; ++c) run_chunk(c);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(w));
    for (int t = 0; t < w; ++t)
      pool.emplace_back([&, t] {
        for (std::int64_t c = t; c < n_chunks; c += w) run_chunk(c);
      });
    for (auto& th : pool) th.join();
  }

  Acc total{};
  for (const auto& p : parts) total.merge(p);
  return total;
}

struct CorrelationEstimate {
  double mean_alpha = 0, mean_beta = 0, mean_alphabeta = 0;
  double stderr_alpha = 0, stderr_beta = 0, stderr_alphabeta = 0;
  std::int64_t n_rounds = 0;
  std::vector<std::int64_t> marginal_hist_alpha;
  std::vector<std::int64_t> marginal_hist_beta;
  // Transcript length seen on every round; -1 if it varied.
  int cbits_per_round = 0;
};

enum class Moment { alpha, beta, alphabeta };

struct OracleComparison {
  double exact_value = 0;
  double estimate = 0;
  double stderr = 0;
  double z_score = 0;
  double threshold = 4.0;
  bool pass = false;
};

CorrelationEstimate estimate(const ProtocolKind& kind, SpinValue s, const UnitVector3& a, const UnitVector3& b,
                             std::int64_t n_rounds, std::uint64_t seed, int workers = 0);

OracleComparison compare_to_oracle(const CorrelationEstimate& est, double exact, double threshold = 4.0,
                                   Moment which = Moment::alphabeta);

class InsufficientData : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// Upper tail of the chi-square distribution with integer degrees of freedom.
double chi_square_sf(double x, int dof);

// Goodness of fit against the uniform distribution, dof = bins - 1.
double uniformity_test(const std::vector<std::int64_t>& hist);

// Plug-in mutual information in bits between two discrete labels given as a joint table.
double mutual_information_bits(const std::vector<std::vector<std::int64_t>>& joint);

} // namespace spinsim
