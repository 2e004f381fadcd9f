#include "spinsim/montecarlo.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace spinsim {

namespace {

struct ChunkAcc {
  MomentAccumulator alpha, beta, ab;
  std::vector<std::int64_t> hist_a, hist_b;
  int cbits_min = std::numeric_limits<int>::max();
  int cbits_max = -1;

  void merge(const ChunkAcc& o) {
    alpha.merge(o.alpha);
    beta.merge(o.beta);
    ab.merge(o.ab);
    if (hist_a.empty()) {
      hist_a.assign(o.hist_a.size(), 0);
      hist_b.assign(o.hist_b.size(), 0);
    }
    for (std::size_t i = 0; i < o.hist_a.size(); ++i) {
      hist_a[i] += o.hist_a[i];
      hist_b[i] += o.hist_b[i];
    }
    cbits_min = std::min(cbits_min, o.cbits_min);
    cbits_max = std::max(cbits_max, o.cbits_max);
  }
};

} // namespace

CorrelationEstimate estimate(const ProtocolKind& kind, SpinValue s, const UnitVector3& a, const UnitVector3& b,
                             std::int64_t n_rounds, std::uint64_t seed, int workers) {
  if (n_rounds < 1000) throw InsufficientData("estimate needs at least 1000 rounds");
  validate(kind, s, a, b);
  const ResourceCount need = resources(kind, s);
  // The nonmax protocol reports +-1, everything else the spin ladder.
  const bool pm_one = std::holds_alternative<NonMaxEntangled>(kind);
  const int bins = pm_one ? 2 : s.dim();
  const double top = pm_one ? 1.0 : s.value();
  const double step = pm_one ? 2.0 : 1.0;
  auto bin_of = [&](double x) { return static_cast<int>(std::lround((top - x) / step)); };

  auto total = run_chunked<ChunkAcc>(n_rounds, seed, workers, [&](RandomStream& rng, std::int64_t count) {
    ChunkAcc acc;
    acc.hist_a.assign(bins, 0);
    acc.hist_b.assign(bins, 0);
    for (std::int64_t r = 0; r < count; ++r) {
      auto shared = SharedRandomness::draw(need.n_lambda, need.n_mu, need.n_nu, rng);
      auto o = play_round(kind, s, a, b, shared);
      acc.alpha.add(o.alpha);
      acc.beta.add(o.beta);
      acc.ab.add(o.alpha * o.beta);
      ++acc.hist_a[bin_of(o.alpha)];
      ++acc.hist_b[bin_of(o.beta)];
      const int nc = static_cast<int>(o.cbits.size());
      acc.cbits_min = std::min(acc.cbits_min, nc);
      acc.cbits_max = std::max(acc.cbits_max, nc);
    }
    return acc;
  });

  CorrelationEstimate e;
  e.mean_alpha = total.alpha.mean();
  e.mean_beta = total.beta.mean();
  e.mean_alphabeta = total.ab.mean();
  e.stderr_alpha = total.alpha.stderr_of_mean();
  e.stderr_beta = total.beta.stderr_of_mean();
  e.stderr_alphabeta = total.ab.stderr_of_mean();
  e.n_rounds = total.ab.count();
  e.marginal_hist_alpha = std::move(total.hist_a);
  e.marginal_hist_beta = std::move(total.hist_b);
  e.cbits_per_round = total.cbits_min == total.cbits_max ? total.cbits_max : -1;
  return e;
}

OracleComparison compare_to_oracle(const CorrelationEstimate& est, double exact, double threshold, Moment which) {
  if (est.n_rounds < 1000) throw InsufficientData("comparison needs at least 1000 rounds");
  OracleComparison c;
  c.exact_value = exact;
  c.threshold = threshold;
  switch (which) {
  case Moment::alpha:
    c.estimate = est.mean_alpha;
    c.stderr = est.stderr_alpha;
    break;
  case Moment::beta:
    c.estimate = est.mean_beta;
    c.stderr = est.stderr_beta;
    break;
  case Moment::alphabeta:
    c.estimate = est.mean_alphabeta;
    c.stderr = est.stderr_alphabeta;
    break;
  }
  const double diff = c.estimate - exact;
  if (c.stderr == 0.0) {
    if (std::abs(diff) > 1e-12) throw std::domain_error("degenerate comparison: zero standard error, mean differs");
    c.z_score = 0.0;
  } else {
    c.z_score = diff / c.stderr;
  }
  c.pass = std::abs(c.z_score) <= threshold;
  return c;
}

double chi_square_sf(double x, int dof) {
  if (dof < 1) throw std::invalid_argument("dof must be positive");
  if (x <= 0.0) return 1.0;
  const double h = 0.5 * x;
  double sum = 0.0;
  if (dof % 2 == 0) {
    double term = 1.0;
    for (int j = 0; j < dof / 2; ++j) {
      if (j > 0) term *= h / j;
      sum += term;
    }
    return std::min(1.0, std::exp(-h) * sum);
  }
  // Odd dof: erfc plus the half-integer Poisson-like tail.
  double term = std::sqrt(h) / (0.5 * std::sqrt(std::numbers::pi));
  for (int j = 1; j <= (dof - 1) / 2; ++j) {
    if (j > 1) term *= h / (j - 0.5);
    sum += term;
  }
  return std::min(1.0, std::erfc(std::sqrt(h)) + std::exp(-h) * sum);
}

double uniformity_test(const std::vector<std::int64_t>& hist) {
  if (hist.size() < 2) throw std::invalid_argument("need at least two bins");
  std::int64_t total = 0;
  for (auto h : hist) total += h;
  if (total < 100 * static_cast<std::int64_t>(hist.size())) throw InsufficientData("too few samples for chi-square");
  const double expect = double(total) / double(hist.size());
  double chi2 = 0.0;
  for (auto h : hist) chi2 += (double(h) - expect) * (double(h) - expect) / expect;
  return chi_square_sf(chi2, static_cast<int>(hist.size()) - 1);
}

double mutual_information_bits(const std::vector<std::vector<std::int64_t>>& joint) {
  double n = 0.0;
  std::vector<double> row(joint.size(), 0.0), col;
  for (std::size_t i = 0; i < joint.size(); ++i) {
    if (col.size() < joint[i].size()) col.resize(joint[i].size(), 0.0);
    for (std::size_t j = 0; j < joint[i].size(); ++j) {
      row[i] += double(joint[i][j]);
      col[j] += double(joint[i][j]);
      n += double(joint[i][j]);
    }
  }
  if (n == 0.0) return 0.0;
  double mi = 0.0;
  for (std::size_t i = 0; i < joint.size(); ++i)
    for (std::size_t j = 0; j < joint[i].size(); ++j) {
      const double p = double(joint[i][j]) / n;
      if (p > 0.0) mi += p * std::log2(p * n * n / (row[i] * col[j]));
    }
  return std::max(0.0, mi);
}

} // namespace spinsim
