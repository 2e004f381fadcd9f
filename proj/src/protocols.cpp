#include "spinsim/protocols.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace spinsim {

namespace {

int ipow(int b, int e) {
  long long r = 1;
  for (int i = 0; i < e; ++i) {
    r *= b;
    if (r > std::numeric_limits<int>::max()) throw std::overflow_error("P^n overflows");
  }
  return static_cast<int>(r);
}

void require_sizes(const SharedRandomness& shared, const ResourceCount& need) {
  if (static_cast<int>(shared.lambdas.size()) != need.n_lambda || static_cast<int>(shared.mus.size()) != need.n_mu ||
      static_cast<int>(shared.nus.size()) != need.n_nu)
    throw ResourceMismatch("shared randomness does not match the protocol's resource count");
}

// Pre-negation Alice value and Bob value of one protocol-1 run, reading the bundle from offsets.
struct Partial {
  double alpha;
  double beta;
};

Partial protocol1_core(const std::vector<int>& digits, const UnitVector3& a, const UnitVector3& b,
                       const SharedRandomness& sh, std::size_t lam_off, std::size_t nu_off, std::vector<int>& cbits) {
  double alpha = 0.0, beta = 0.0;
  int prefix = 1;
  std::size_t nu_i = nu_off;
  for (std::size_t k = 1; k < digits.size(); ++k) {
    const UnitVector3& lam = sh.lambdas[lam_off + k - 1];
    const UnitVector3& mu = sh.mus[lam_off + k - 1];
    const int sa = sgn(a.dot(lam));
    const int c = sa * sgn(a.dot(mu));
    const int sb = sgn(b.dot(lam.vec() + c * mu.vec()));
    cbits.push_back(c);
    const int prev = prefix;
    prefix = 2 * prefix + digits[k];
    if (digits[k] == 0) {
      alpha = 0.5 * prev * sa + alpha;
      beta = 0.5 * prev * sb + beta;
    } else {
      const int f = biased_sign(sh.nus[nu_i++], double(prefix - 2) / double(prefix));
      const double gate = 0.5 * (1 + f);
      alpha = gate * (0.5 * (prev + 1) * sa + alpha);
      beta = gate * (0.5 * (prev + 1) * sb + beta);
    }
  }
  return {alpha, beta};
}

} // namespace

std::string protocol_name(const ProtocolKind& kind) {
  struct V {
    std::string operator()(const TonerBacon&) const { return "toner-bacon"; }
    std::string operator()(const BinaryRecursive&) const { return "binary"; }
    std::string operator()(const PAdicComposite&) const { return "padic"; }
    std::string operator()(const NonMaxEntangled&) const { return "nonmax"; }
  };
  return std::visit(V{}, kind);
}

RoundOutcome toner_bacon_round(const UnitVector3& a, const UnitVector3& b, const UnitVector3& lam,
                               const UnitVector3& mu) {
  const int sa = sgn(a.dot(lam));
  const int c = sa * sgn(a.dot(mu));
  RoundOutcome out;
  out.alpha = -0.5 * sa;
  out.beta = 0.5 * sgn(b.dot(lam.vec() + c * mu.vec()));
  out.cbits = {c};
  return out;
}

std::vector<int> binary_digits(int d) {
  if (d < 2) throw std::invalid_argument("binary_digits needs d >= 2");
  std::vector<int> bits;
  while (d > 0) {
    bits.push_back(d & 1);
    d >>= 1;
  }
  return {bits.rbegin(), bits.rend()};
}

ResourceCount protocol1_resources(SpinValue s) {
  const auto digits = binary_digits(s.dim());
  const int n = static_cast<int>(digits.size()) - 1;
  int nu = 0;
  for (std::size_t k = 1; k < digits.size(); ++k) nu += digits[k];
  return {n, n, n, nu};
}

RoundOutcome protocol1_round(SpinValue s, const UnitVector3& a, const UnitVector3& b,
                             const SharedRandomness& shared) {
  require_sizes(shared, protocol1_resources(s));
  RoundOutcome out;
  auto p = protocol1_core(binary_digits(s.dim()), a, b, shared, 0, 0, out.cbits);
  out.alpha = -p.alpha;
  out.beta = p.beta;
  return out;
}

ResourceCount protocol2_resources(int P, int n) {
  if (P < 2 || n < 1) throw std::invalid_argument("protocol 2 needs P >= 2 and n >= 1");
  const ResourceCount sub = protocol1_resources(SpinValue(P - 1));
  return {n * sub.n_cbits, n * sub.n_lambda, n * sub.n_mu, n * sub.n_nu};
}

RoundOutcome protocol2_round(int P, int n, const UnitVector3& a, const UnitVector3& b,
                             const SharedRandomness& shared) {
  require_sizes(shared, protocol2_resources(P, n));
  const auto digits = binary_digits(P);
  const ResourceCount sub = protocol1_resources(SpinValue(P - 1));
  RoundOutcome out;
  double alpha = 0.0, beta = 0.0;
  for (int k = 1; k <= n; ++k) {
    const double w = std::pow(double(P), n - k);
    auto p = protocol1_core(digits, a, b, shared, std::size_t(k - 1) * sub.n_lambda, std::size_t(k - 1) * sub.n_nu,
                            out.cbits);
    alpha += w * p.alpha;
    beta += w * p.beta;
  }
  out.alpha = -alpha;
  out.beta = beta;
  return out;
}

double nonmax_offset(double gamma, const UnitVector3& a) {
  const double sin2g = std::sin(2 * gamma);
  const double tilt = std::abs(a.z() * std::cos(2 * gamma));
  if (sin2g + tilt > 1.0 + 1e-12) throw UnsupportedRegime("sin 2g + |a_z cos 2g| exceeds 1");
  return std::sqrt(std::max(0.0, 1.0 - sin2g / (1.0 - tilt)));
}

RoundOutcome nonmax_round(double gamma, const UnitVector3& a, const UnitVector3& b, const UnitVector3& lam0,
                          const UnitVector3& lam1, const UnitVector3& lam2) {
  const double l = nonmax_offset(gamma, a);
  const int s0 = sgn(a.dot(lam0));
  const int c1 = s0 * sgn(a.dot(lam1) + l);
  const int c2 = s0 * sgn(a.dot(lam2) + l);
  RoundOutcome out;
  out.alpha = sgn(a.dot(lam0) + a.z() * std::cos(2 * gamma));
  out.beta = sgn(b.dot(c1 * lam1.vec() + c2 * lam2.vec()));
  out.cbits = {c1, c2};
  return out;
}

SpinValue protocol_spin(const ProtocolKind& kind, SpinValue requested) {
  if (std::holds_alternative<TonerBacon>(kind) || std::holds_alternative<NonMaxEntangled>(kind)) return SpinValue(1);
  if (const auto* p = std::get_if<PAdicComposite>(&kind)) return SpinValue(ipow(p->P, p->n) - 1);
  return requested;
}

ResourceCount resources(const ProtocolKind& kind, SpinValue s) {
  if (std::holds_alternative<TonerBacon>(kind)) return {1, 1, 1, 0};
  if (std::holds_alternative<NonMaxEntangled>(kind)) return {2, 3, 0, 0};
  if (const auto* p = std::get_if<PAdicComposite>(&kind)) return protocol2_resources(p->P, p->n);
  return protocol1_resources(s);
}

void validate(const ProtocolKind& kind, SpinValue s, const UnitVector3& a, const UnitVector3& b) {
  if (std::holds_alternative<TonerBacon>(kind)) {
    if (s.twice_s() != 1) throw UnsupportedRegime("toner-bacon simulates spin 1/2 only");
  } else if (const auto* p = std::get_if<PAdicComposite>(&kind)) {
    if (p->P < 2 || p->n < 1) throw std::invalid_argument("protocol 2 needs P >= 2 and n >= 1");
    if (ipow(p->P, p->n) != s.dim()) throw UnsupportedRegime("2s+1 must equal P^n");
  } else if (const auto* m = std::get_if<NonMaxEntangled>(&kind)) {
    if (s.twice_s() != 1) throw UnsupportedRegime("nonmax protocol is for qubits");
    if (!(m->gamma > 0.0 && m->gamma < std::numbers::pi / 4)) throw UnsupportedRegime("gamma must lie in (0, pi/4)");
    if (std::abs(b.z()) > 1e-12) throw UnsupportedRegime("Bob's direction must lie in the x-y plane");
    nonmax_offset(m->gamma, a);
  }
}

RoundOutcome play_round(const ProtocolKind& kind, SpinValue s, const UnitVector3& a, const UnitVector3& b,
                        const SharedRandomness& shared) {
  if (std::holds_alternative<TonerBacon>(kind)) {
    require_sizes(shared, {1, 1, 1, 0});
    return toner_bacon_round(a, b, shared.lambdas[0], shared.mus[0]);
  }
  if (const auto* p = std::get_if<PAdicComposite>(&kind)) return protocol2_round(p->P, p->n, a, b, shared);
  if (const auto* m = std::get_if<NonMaxEntangled>(&kind)) {
    require_sizes(shared, {2, 3, 0, 0});
    return nonmax_round(m->gamma, a, b, shared.lambdas[0], shared.lambdas[1], shared.lambdas[2]);
  }
  return protocol1_round(s, a, b, shared);
}

StaircaseRow staircase_row(SpinValue s) {
  const int d = s.dim();
  StaircaseRow row{s, protocol1_resources(s).n_cbits, 0, d, 1};
  row.protocol2_cbits = row.protocol1_cbits;
  for (int P = 2; P < d; ++P) {
    int n = 0;
    long long v = 1;
    while (v < d) {
      v *= P;
      ++n;
    }
    if (v != d) continue;
    const int c = protocol2_resources(P, n).n_cbits;
    if (c < row.protocol2_cbits) {
      row.protocol2_cbits = c;
      row.best_P = P;
      row.best_n = n;
    }
  }
  return row;
}

} // namespace spinsim
