#include "spinsim/nonlocality.hpp"
#include "spinsim/search.hpp"
#include "spinsim/spin.hpp"

#include <cmath>
#include <numbers>

namespace spinsim {

namespace {

constexpr double kPi = std::numbers::pi;

struct Half {
  double c, s;
  explicit Half(double theta) : c(std::cos(0.5 * theta)), s(std::sin(0.5 * theta)) {}
};

// |<A sa, B sb|psi>|^2 for sa, sb in {+1, -1}.
double joint(const SchmidtState& st, const Angle& A, int sa, const Angle& B, int sb) {
  const Half a(A.theta), b(B.theta);
  const double cb = std::cos(st.beta), sbt = std::sin(st.beta);
  const double ph = std::cos(st.gamma - A.phi - B.phi);
  const double a0 = sa > 0 ? a.c : a.s, a1 = sa > 0 ? a.s : a.c;
  const double b0 = sb > 0 ? b.c : b.s, b1 = sb > 0 ? b.s : b.c;
  const double sign = sa * sb;
  return cb * cb * a0 * a0 * b0 * b0 + sbt * sbt * a1 * a1 * b1 * b1 + 2 * sign * cb * sbt * a0 * a1 * b0 * b1 * ph;
}

double fold_cos_beta(double beta) {
  const double c = std::cos(beta);
  return c > std::numbers::sqrt2 / 2 ? std::sin(beta) : c;
}

} // namespace

bool SchmidtState::entangled() const {
  return std::abs(std::sin(2 * beta)) > 1e-12;
}

bool SchmidtState::maximally_entangled() const { return std::abs(std::cos(2 * beta)) < 1e-12; }

double SchmidtState::schmidt_ratio() const {
  const double c = std::abs(std::cos(beta)), s = std::abs(std::sin(beta));
  return std::min(c, s) / std::max(c, s);
}

CabelloProbs cabello_probs(const SchmidtState& st, const ObservableAngles& a) {
  return {joint(st, a.F, +1, a.G, +1), joint(st, a.D, +1, a.G, -1), joint(st, a.F, -1, a.E, +1),
          joint(st, a.D, +1, a.E, +1)};
}

CabelloProbs cabello_probs_oracle(const SchmidtState& st, const ObservableAngles& a) {
  using C = std::complex<double>;
  Eigen::Vector4cd psi = Eigen::Vector4cd::Zero();
  psi(0) = std::cos(st.beta);
  psi(3) = std::sin(st.beta) * std::exp(C(0, st.gamma));
  const SpinValue half(1);
  auto ket = [&](const Angle& ang, int sign) -> Eigen::Vector2cd {
    // Column 0 is the +1/2 eigenvector, column 1 the -1/2 one.
    auto eb = eigenbasis<double>(half, UnitVector3::polar(ang.theta, ang.phi));
    return eb.eigenvectors.col(sign > 0 ? 0 : 1);
  };
  auto prob = [&](const Angle& A, int sa, const Angle& B, int sb) {
    const Eigen::Vector2cd u = ket(A, sa), v = ket(B, sb);
    Eigen::Vector4cd uv;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) uv(2 * i + j) = u(i) * v(j);
    return std::norm(uv.dot(psi));
  };
  return {prob(a.F, +1, a.G, +1), prob(a.D, +1, a.G, -1), prob(a.F, -1, a.E, +1), prob(a.D, +1, a.E, +1)};
}

double cabello_constraint(const SchmidtState& st, double theta) {
  // atan2 keeps theta = pi (infinite half-angle tangent) finite: it maps to pi.
  return 2.0 * std::atan2(std::tan(st.beta) * std::sin(0.5 * theta), std::cos(0.5 * theta));
}

ObservableAngles cabello_angles(const SchmidtState& st, double theta_D, double theta_E, int branch) {
  ObservableAngles a;
  a.D = {theta_D, 0.0};
  a.E = {theta_E, st.gamma + (branch < 0 ? kPi : 0.0)};
  a.G = {cabello_constraint(st, theta_D), st.gamma};
  a.F = {cabello_constraint(st, theta_E), st.gamma - a.E.phi};
  return a;
}

double cabello_objective(const SchmidtState& st, double theta_D, double theta_E, int branch) {
  const double T = std::tan(st.beta);
  const double x = std::tan(0.5 * theta_D), y = std::tan(0.5 * theta_E);
  const double k1 = 1.0 / ((T * T * x * x + 1) * (T * T * y * y + 1));
  const double k2 = 1.0 / ((x * x + 1) * (y * y + 1));
  const double cb = std::cos(st.beta);
  const double c = branch < 0 ? -1.0 : 1.0;
  return cb * cb *
         ((k2 - k1) + T * T * x * x * y * y * (k2 - k1 * T * T * T * T) + 2 * T * x * y * (k2 - k1 * T * T) * c);
}

ObservableAngles cabello3_angles(const SchmidtState& st, double theta_D, double theta_E, double theta_G) {
  ObservableAngles a;
  a.G = {theta_G, 0.0};
  a.D = {theta_D, st.gamma + kPi};
  a.F = {cabello_constraint(st, theta_E), st.gamma + kPi};
  a.E = {theta_E, kPi};
  return a;
}

double cabello3_objective(const SchmidtState& st, double theta_D, double theta_E, double theta_G) {
  const double cb = std::cos(st.beta), sb = std::sin(st.beta), T = std::tan(st.beta);
  const Half D(theta_D), E(theta_E), G(theta_G);
  const double tE = std::tan(0.5 * theta_E), tG = std::tan(0.5 * theta_G);
  const double q4 = std::pow(cb * D.c * E.c + sb * D.s * E.s, 2);
  const double q2 = std::pow(cb * D.c * G.s + sb * D.s * G.c, 2);
  const double q1 = cb * cb * G.c * G.c / (1 + T * T * tE * tE) * std::pow(1 - T * T * tE * tG, 2);
  return q4 - q1 - q2;
}

ObservableAngles hardy_angles(const SchmidtState& st, double theta_D) {
  const double T = std::tan(st.beta);
  const double theta_E = 2.0 * std::atan(1.0 / (T * T * T * std::tan(0.5 * theta_D)));
  return cabello_angles(st, theta_D, theta_E, -1);
}

HardyValue hardy_objective(const SchmidtState& st, double theta_D) {
  // theta_D = +-pi lands on tan ~ 1e16 rather than infinity.
  const double x = std::tan(0.5 * theta_D);
  if (!st.entangled() || st.maximally_entangled() || !(std::abs(x) < 1e15) || std::abs(x) < 1e-300) return {0.0, false};
  const double T = std::tan(st.beta);
  const double y = 1.0 / (T * T * T * x);
  const double cb = std::cos(st.beta);
  const double g = 1.0 - 1.0 / (T * T);
  return {cb * cb * g * g / ((1 + x * x) * (1 + y * y)), true};
}

NonlocalityMax cabello_max_at(double beta, int workers) {
  const SchmidtState st{beta, 0.0};
  NonlocalityMax best{-1.0, std::cos(beta), {}};
  for (int branch : {-1, 1}) {
    SearchSpec spec = SearchSpec::uniform(2, -kPi, kPi, 121);
    spec.workers = workers;
    auto r = maximize([&](const Eigen::VectorXd& x) { return cabello_objective(st, x(0), x(1), branch); }, spec);
    if (r.value > best.value) best = {r.value, std::cos(beta), r.argmax};
  }
  return best;
}

NonlocalityMax cabello3_max_at(double beta, int workers) {
  const SchmidtState st{beta, 0.0};
  SearchSpec spec = SearchSpec::uniform(3, -kPi, kPi, 41);
  spec.workers = workers;
  auto r = maximize([&](const Eigen::VectorXd& x) { return cabello3_objective(st, x(0), x(1), x(2)); }, spec);
  return {r.value, std::cos(beta), r.argmax};
}

NonlocalityMax hardy_max_at(double beta) {
  const SchmidtState st{beta, 0.0};
  if (!st.entangled() || st.maximally_entangled()) return {0.0, std::cos(beta), Eigen::VectorXd::Zero(1)};
  SearchSpec spec = SearchSpec::uniform(1, 1e-6, kPi - 1e-6, 2001);
  spec.clamp = true;
  auto r = maximize([&](const Eigen::VectorXd& x) { return hardy_objective(st, x(0)).value; }, spec);
  return {r.value, std::cos(beta), r.argmax};
}

namespace {

// Search over (cos beta, thetas...), then re-optimise the angles at the folded beta.
template <class AtBeta>
NonlocalityMax global_max(const Objective& f, int n_thetas, int theta_points, int workers, AtBeta at_beta) {
  SearchSpec spec;
  spec.dimension = 1 + n_thetas;
  spec.bounds.assign(spec.dimension, {-kPi, kPi});
  spec.bounds[0] = {0.005, 0.995};
  spec.grid_points.assign(spec.dimension, theta_points);
  spec.grid_points[0] = 100;
  spec.clamp = true;
  spec.workers = workers;
  auto r = maximize(f, spec);
  const double beta = std::acos(r.argmax(0));
  const double c = fold_cos_beta(beta);
  NonlocalityMax out = at_beta(std::acos(c));
  if (r.value > out.value) out.value = r.value;
  out.cos_beta = c;
  return out;
}

} // namespace

NonlocalityMax cabello_global_max(int workers) {
  NonlocalityMax best{-1.0, 0.0, {}};
  for (int branch : {-1, 1}) {
    auto f = [branch](const Eigen::VectorXd& x) {
      return cabello_objective({std::acos(x(0)), 0.0}, x(1), x(2), branch);
    };
    auto r = global_max(f, 2, 61, workers, [&](double b) { return cabello_max_at(b, workers); });
    if (r.value > best.value) best = r;
  }
  return best;
}

NonlocalityMax cabello3_global_max(int workers) {
  auto f = [](const Eigen::VectorXd& x) { return cabello3_objective({std::acos(x(0)), 0.0}, x(1), x(2), x(3)); };
  return global_max(f, 3, 25, workers, [&](double b) { return cabello3_max_at(b, workers); });
}

NonlocalityMax hardy_global_max() {
  auto f = [](const Eigen::VectorXd& x) { return hardy_objective({std::acos(x(0)), 0.0}, x(1)).value; };
  return global_max(f, 1, 201, 1, [](double b) { return hardy_max_at(b); });
}

} // namespace spinsim
