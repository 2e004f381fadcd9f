#include "spinsim/successive.hpp"
#include "spinsim/search.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <numeric>

namespace spinsim {

namespace {

void require_qubit(const InitialState& st) {
  if (st.spin.twice_s() != 1) throw std::invalid_argument("qubit-only operation called with s != 1/2");
}

double polarization(const InitialState& st) {
  auto w = st.effective_weights();
  return w[0] - w[1];
}

std::vector<double> planar_or_axis(const UnitVector3& a0, const MeasurementSequence& seq) {
  std::vector<double> c(seq.size());
  for (std::size_t i = 0; i < seq.size(); ++i) c[i] = (i == 0 ? a0 : seq[i - 1]).dot(seq[i]);
  return c;
}

} // namespace

InitialState::InitialState(SpinValue s, UnitVector3 a0, std::vector<double> w, double f)
    : spin(s), axis(a0), weights(std::move(w)), noise_f(f) {
  if (static_cast<int>(weights.size()) != s.dim()) throw std::invalid_argument("weights must have 2s+1 entries");
  double total = 0.0;
  for (double p : weights) {
    if (p < 0.0) throw std::invalid_argument("weights must be non-negative");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9) throw std::invalid_argument("weights must sum to 1");
  if (!(f >= 0.0 && f <= 1.0)) throw std::invalid_argument("noise fraction must lie in [0, 1]");
}

InitialState InitialState::top(SpinValue s, UnitVector3 a0, double f) {
  std::vector<double> w(s.dim(), 0.0);
  w[0] = 1.0;
  return {s, a0, std::move(w), f};
}

InitialState InitialState::qubit(UnitVector3 a0, double p_plus) {
  return {SpinValue(1), a0, {p_plus, 1.0 - p_plus}, 0.0};
}

std::vector<double> InitialState::effective_weights() const {
  std::vector<double> w(weights);
  const double mix = noise_f / spin.dim();
  for (double& p : w) p = (1.0 - noise_f) * p + mix;
  return w;
}

ChiParams chi_params(const InitialState& state) {
  const auto w = state.effective_weights();
  const double s = state.spin.value();
  const double ss = state.spin.casimir();
  ChiParams p;
  p.s = s;
  for (int k = 0; k < state.spin.dim(); ++k) {
    const double m = state.spin.eigenvalue(k);
    p.chi += w[k] * m * m;
    p.mu1 += w[k] * m;
    p.mu3 += w[k] * m * m * m;
    p.M += w[k] * m * (9 * m * m + ss - 3);
    p.N += w[k] * m * (5 * ss - 3 * m * m + 1);
    p.R += w[k] * m * (5 * m * m - 3 * ss + 1);
  }
  p.xi = p.chi / (s * s);
  p.A = 3 * p.chi - ss;
  p.B = ss - p.chi;
  return p;
}

ChiParams chi_params_from_xi(SpinValue s, double xi) {
  ChiParams p;
  p.s = s.value();
  p.xi = xi;
  p.chi = xi * p.s * p.s;
  p.A = 3 * p.chi - s.casimir();
  p.B = s.casimir() - p.chi;
  return p;
}

double corr1(const InitialState& state, const UnitVector3& a1) {
  return chi_params(state).mu1 * state.axis.dot(a1);
}

double second_moment1(const InitialState& state, const UnitVector3& a1) {
  const auto p = chi_params(state);
  const double c = state.axis.dot(a1);
  return 0.5 * (p.A * c * c + p.B);
}

double corr2(const InitialState& state, const UnitVector3& a1, const UnitVector3& a2) {
  return a1.dot(a2) * second_moment1(state, a1);
}

double second_moment2(const InitialState& state, const UnitVector3& a1, const UnitVector3& a2) {
  const double ss = state.spin.casimir();
  const double x = second_moment1(state, a1);
  const double c12 = a1.dot(a2);
  return 0.5 * (ss - x) + 0.5 * (3 * x - ss) * c12 * c12;
}

double third_moment1(const InitialState& state, const UnitVector3& a1) {
  const auto p = chi_params(state);
  const double ss = state.spin.casimir();
  const double c = state.axis.dot(a1);
  return 0.5 * p.R * c * c * c + 0.5 * (3 * ss * p.mu1 - 3 * p.mu3 - p.mu1) * c;
}

double corr3_from(const ChiParams& p, double c, double c12, double c23) {
  const double ss = p.s * (p.s + 1);
  const double m3 = 0.5 * p.R * c * c * c + 0.5 * (3 * ss * p.mu1 - 3 * p.mu3 - p.mu1) * c;
  // <a1 a2 a3> = c23 <a1 (a2.S)^2>; the a2 projection splits into an isotropic part and a quadrupole part.
  return c23 * (0.5 * ss * (1 - c12 * c12) * p.mu1 * c + 0.5 * (3 * c12 * c12 - 1) * m3);
}

double corr3(const InitialState& state, const UnitVector3& a1, const UnitVector3& a2, const UnitVector3& a3) {
  return corr3_from(chi_params(state), state.axis.dot(a1), a1.dot(a2), a2.dot(a3));
}

double corr3_mnr_form(const InitialState& state, const UnitVector3& a1, const UnitVector3& a2,
                      const UnitVector3& a3) {
  const auto p = chi_params(state);
  const double c = state.axis.dot(a1);
  const double c12 = a1.dot(a2);
  return a2.dot(a3) * (c * (p.M * c12 * c12 + p.N) + p.R * (3 * c12 * c12 - 1)) / 16.0;
}

double corr13(const InitialState& state, const UnitVector3& a1, const UnitVector3& a2, const UnitVector3& a3) {
  return a3.dot(a2) * corr2(state, a1, a2);
}

double corr23(const InitialState& state, const UnitVector3& a1, const UnitVector3& a2, const UnitVector3& a3) {
  return a2.dot(a3) * second_moment2(state, a1, a2);
}

double successive_oracle(const InitialState& state, const MeasurementSequence& seq, const std::vector<int>& exponents) {
  if (seq.empty()) throw std::invalid_argument("empty measurement sequence");
  if (exponents.size() != seq.size()) throw std::invalid_argument("one exponent per step");
  const SpinValue s = state.spin;
  const int d = s.dim();
  double paths = 1.0;
  for (std::size_t i = 0; i < seq.size(); ++i) paths *= d;
  if (paths > double(kOraclePathCap)) throw InstanceTooLarge("more than 3e5 outcome paths");

  // Forward pass over the Markov chain: v(j) accumulates sum over path prefixes ending in j of
  // probability times the selected outcome powers. Equivalent to enumerating every path.
  Eigen::VectorXd v = Eigen::Map<const Eigen::VectorXd>(state.effective_weights().data(), d);
  UnitVector3 prev = state.axis;
  for (std::size_t k = 0; k < seq.size(); ++k) {
    const Eigen::MatrixXd T = transition_matrix<double>(s, prev, seq[k]);
    Eigen::VectorXd next = T.transpose() * v;
    for (int j = 0; j < d; ++j) next(j) *= std::pow(s.eigenvalue(j), exponents[k]);
    v = next;
    prev = seq[k];
  }
  return v.sum();
}

double qubit_joint_prob(int initial_sign, const UnitVector3& a0, const MeasurementSequence& seq,
                        const std::vector<int>& outcomes) {
  if (outcomes.size() != seq.size()) throw std::invalid_argument("one outcome per step");
  const auto c = planar_or_axis(a0, seq);
  double p = 1.0;
  int prev = initial_sign;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    p *= 0.5 * (1.0 + prev * outcomes[i] * c[i]);
    prev = outcomes[i];
  }
  return p;
}

double qubit_moment(const InitialState& state, const MeasurementSequence& seq, const std::vector<int>& idx) {
  require_qubit(state);
  const int n = static_cast<int>(seq.size());
  for (std::size_t i = 0; i < idx.size(); ++i)
    if (idx[i] < 1 || idx[i] > n || (i > 0 && idx[i] <= idx[i - 1]))
      throw std::invalid_argument("indices must be increasing and within the sequence");
  const auto c = planar_or_axis(state.axis, seq);
  // Link (j-1, j) contributes its cosine iff an odd number of selected outputs sit at or after j.
  double v = idx.size() % 2 == 0 ? 1.0 : polarization(state);
  std::size_t after = idx.size();
  std::size_t next = 0;
  for (int j = 1; j <= n; ++j) {
    while (next < idx.size() && idx[next] < j) {
      ++next;
      --after;
    }
    if (after % 2 == 1) v *= c[j - 1];
  }
  return v;
}

double qubit_corr_lastk(const InitialState& state, const MeasurementSequence& seq, int k) {
  const int n = static_cast<int>(seq.size());
  if (k < 0 || k >= n) throw std::invalid_argument("need 0 <= k < n");
  std::vector<int> idx(k + 1);
  std::iota(idx.begin(), idx.end(), n - k);
  return qubit_moment(state, seq, idx);
}

InequalitySetting InequalitySetting::planar(const std::vector<double>& angles) {
  if (angles.size() % 2 != 0) throw std::invalid_argument("planar settings come in plain/primed pairs");
  InequalitySetting out;
  for (std::size_t i = 0; i < angles.size(); i += 2)
    out.steps.push_back({UnitVector3::planar(angles[i]), UnitVector3::planar(angles[i + 1])});
  return out;
}

double full_correlation(const InitialState& state, const MeasurementSequence& seq, Units units) {
  const int n = static_cast<int>(seq.size());
  if (state.spin.twice_s() == 1) {
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 1);
    const double v = qubit_moment(state, seq, idx);
    return units == Units::pm_one ? v : v * std::pow(0.5, n);
  }
  if (units == Units::pm_one) throw std::invalid_argument("+-1 units exist only for s = 1/2");
  switch (n) {
  case 1:
    return corr1(state, seq[0]);
  case 2:
    return corr2(state, seq[0], seq[1]);
  case 3:
    return corr3(state, seq[0], seq[1], seq[2]);
  default:
    return successive_oracle(state, seq, std::vector<int>(n, 1));
  }
}

std::vector<std::pair<std::uint32_t, double>> mk_terms(int n, bool primed_polynomial) {
  if (n < 1 || n > 30) throw std::invalid_argument("MK order out of range");
  std::map<std::uint32_t, double> m{{0u, 1.0}}, mp{{1u, 1.0}};
  for (int k = 1; k < n; ++k) {
    const std::uint32_t bit = 1u << k;
    std::map<std::uint32_t, double> nm, nmp;
    for (auto [mask, c] : m) {
      nm[mask] += 0.5 * c;
      nm[mask | bit] += 0.5 * c;
      nmp[mask | bit] += 0.5 * c;
      nmp[mask] -= 0.5 * c;
    }
    for (auto [mask, c] : mp) {
      nm[mask] += 0.5 * c;
      nm[mask | bit] -= 0.5 * c;
      nmp[mask | bit] += 0.5 * c;
      nmp[mask] += 0.5 * c;
    }
    m.swap(nm);
    mp.swap(nmp);
  }
  std::vector<std::pair<std::uint32_t, double>> out;
  for (auto [mask, c] : primed_polynomial ? mp : m)
    if (std::abs(c) > 1e-15) out.emplace_back(mask, c);
  return out;
}

namespace {

double mk_eval(const InitialState& state, const InequalitySetting& setting, int n, Units units, bool primed) {
  if (static_cast<int>(setting.steps.size()) < n) throw std::invalid_argument("setting has fewer steps than n");
  double v = 0.0;
  MeasurementSequence seq(n);
  for (auto [mask, c] : mk_terms(n, primed)) {
    for (int k = 0; k < n; ++k) seq[k] = (mask >> k) & 1u ? setting.steps[k].primed : setting.steps[k].plain;
    v += c * full_correlation(state, seq, units);
  }
  return v;
}

} // namespace

double mk_value(const InitialState& state, const InequalitySetting& setting, int n, Units units) {
  if (n < 2) throw std::invalid_argument("MK polynomial needs n >= 2");
  return mk_eval(state, setting, n, units, false);
}

double bi_value(const InitialState& state, const InequalitySetting& setting, Units units) {
  return mk_value(state, setting, 2, units);
}

double bi_planar(const InitialState& state, double t1, double t1p, double t2, double t2p) {
  const auto p = chi_params(state);
  auto c2 = [&](double a, double b) { return 0.5 * std::cos(b - a) * (p.A * std::cos(a) * std::cos(a) + p.B); };
  return 0.5 * (c2(t1, t2) + c2(t1, t2p) + c2(t1p, t2) - c2(t1p, t2p));
}

double svetlichny_value(const InitialState& state, const InequalitySetting& setting, Units units) {
  return mk_eval(state, setting, 3, units, false) + mk_eval(state, setting, 3, units, true);
}

double chained_value(const std::vector<double>& thetas) {
  if (thetas.size() < 4 || thetas.size() % 2 != 0) throw std::invalid_argument("chained expression needs 2n >= 4 angles");
  double v = 0.0;
  for (std::size_t i = 0; i + 1 < thetas.size(); ++i) v += std::cos(thetas[i + 1] - thetas[i]);
  v -= std::cos(thetas.back() - thetas.front());
  return std::abs(v);
}

ChainedOptimum chained_optimum(int n) {
  if (n < 2) throw std::invalid_argument("chained expression needs n >= 2");
  auto f = [n](const Eigen::VectorXd& x) {
    std::vector<double> t(2 * n);
    for (int i = 0; i < 2 * n; ++i) t[i] = i * x(0);
    return chained_value(t);
  };
  SearchSpec spec = SearchSpec::uniform(1, 0.0, std::numbers::pi / 2, 2001);
  spec.refine_tolerance = 1e-12;
  auto r = maximize(f, spec);
  return {r.value, r.argmax(0)};
}

double scarani_gisin_sum(const InequalitySetting& setting) {
  const auto& st = setting.steps;
  if (st.size() < 2) throw std::invalid_argument("need at least two steps");
  double v = 0.0;
  for (std::size_t k = 0; k + 1 < st.size(); ++k) {
    const auto &a = st[k], &b = st[k + 1];
    v += 0.5 * (a.plain.dot(b.plain) + a.plain.dot(b.primed) + a.primed.dot(b.plain) - a.primed.dot(b.primed));
  }
  return v;
}

HybridValues hybrid_values(const InitialState& state, const InequalitySetting& setting, StepTwoContext context) {
  require_qubit(state);
  if (setting.steps.size() != 3) throw std::invalid_argument("hybrid expressions need three steps");
  const auto& s1 = setting.steps[0];
  const auto& s2 = setting.steps[1];
  const auto& s3 = setting.steps[2];
  auto tri = [&](const UnitVector3& a, const UnitVector3& b, const UnitVector3& c) {
    return qubit_moment(state, {a, b, c}, {1, 2, 3});
  };
  const double t = tri(s1.plain, s2.plain, s3.plain) - tri(s1.plain, s2.primed, s3.primed) -
                   tri(s1.primed, s2.plain, s3.primed) - tri(s1.primed, s2.primed, s3.plain);
  const double b12 = qubit_moment(state, {s1.plain, s2.primed}, {1, 2});
  double b13 = 0.0;
  switch (context) {
  case StepTwoContext::primed:
    b13 = qubit_moment(state, {s1.plain, s2.primed, s3.primed}, {1, 3});
    break;
  case StepTwoContext::plain:
    b13 = qubit_moment(state, {s1.plain, s2.plain, s3.primed}, {1, 3});
    break;
  case StepTwoContext::absent:
    b13 = qubit_moment(state, {s1.plain, s3.primed}, {1, 2});
    break;
  }
  const double b23 = qubit_moment(state, {s1.plain, s2.primed, s3.primed}, {2, 3});
  const double bi = b12 + b13 + b23;
  return {t - bi, t - 2 * bi};
}

double eta2_profile(const ChiParams& p, double theta1) {
  const double c = std::cos(theta1);
  return std::abs(std::sin(theta1) + c) * (p.A * c * c + p.B) / (2 * p.s * p.s);
}

double eta2_profile(const InitialState& state, double theta1) { return eta2_profile(chi_params(state), theta1); }

std::vector<double> eta2_cubic_roots(const ChiParams& p) {
  return real_cubic_roots(p.B, 2 * p.A - p.B, 3 * p.A + p.B, -(p.A + p.B));
}

Eta2Max eta2_max(const ChiParams& p) {
  // Stationary points of the profile are t = tan(theta1) roots; theta1 = pi/2 covers t -> infinity.
  Eta2Max best{eta2_profile(p, std::numbers::pi / 2), std::numbers::pi / 2};
  for (double t : eta2_cubic_roots(p)) {
    double th = std::atan(t);
    if (th < 0) th += std::numbers::pi;
    const double v = eta2_profile(p, th);
    if (v > best.value) best = {v, th};
  }
  return best;
}

double disentangling_bound(const InitialState& state, const InequalitySetting& setting) {
  if (setting.steps.size() != 3) throw std::invalid_argument("need three steps");
  const auto& s1 = setting.steps[0];
  const UnitVector3& mid = setting.steps[1].plain;
  const auto& s3 = setting.steps[2];
  auto c = [&](const UnitVector3& a, const UnitVector3& b) { return corr13(state, a, mid, b); };
  return std::abs(0.5 * (c(s1.plain, s3.plain) + c(s1.plain, s3.primed) + c(s1.primed, s3.plain) -
                         c(s1.primed, s3.primed)));
}

} // namespace spinsim
