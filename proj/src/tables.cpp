#include "spinsim/tables.hpp"
#include "spinsim/search.hpp"
#include "spinsim/successive.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <numbers>

namespace spinsim {

namespace {

// Bisection on a bracketed sign change.
double bisect(const std::function<double(double)>& g, double lo, double hi) {
  double glo = g(lo);
  for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double gm = g(mid);
    if ((gm > 0) == (glo > 0)) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double eta2_of_xi(SpinValue s, double xi) { return eta2_max(chi_params_from_xi(s, xi)).value; }

template <class T>
std::optional<T> lookup(const std::map<int, T>& m, int k) {
  auto it = m.find(k);
  if (it == m.end()) return std::nullopt;
  return it->second;
}

} // namespace

std::vector<SpinValue> table_spins() {
  std::vector<SpinValue> out;
  for (int t = 1; t <= 12; ++t) out.emplace_back(t);
  return out;
}

double table2_eta2(SpinValue s) { return eta2_max(chi_params(InitialState::top(s))).value; }

std::vector<XiWindow> table1_windows(SpinValue s) {
  if (s.twice_s() == 1) return {{1.0, 1.0}};
  auto g = [s](double xi) { return eta2_of_xi(s, xi) - 1.0; };
  constexpr int kScan = 4000;
  std::vector<XiWindow> out;
  double prev_x = 0.0, prev_g = g(0.0);
  double start = prev_g > 0 ? 0.0 : -1.0;
  for (int i = 1; i <= kScan; ++i) {
    const double x = double(i) / kScan;
    const double gx = g(x);
    if ((gx > 0) != (prev_g > 0)) {
      const double r = bisect(g, prev_x, x);
      if (gx > 0) {
        start = r;
      } else {
        out.push_back({start, r});
        start = -1.0;
      }
    }
    prev_x = x;
    prev_g = gx;
  }
  if (start >= 0.0) out.push_back({start, 1.0});
  return out;
}

double table3_threshold(SpinValue s) {
  auto g = [s](double f) { return eta2_max(chi_params(InitialState::top(s, {}, f))).value - 1.0; };
  if (g(1.0) > 0) return 1.0;
  constexpr int kScan = 2000;
  double prev = 0.0;
  for (int i = 1; i <= kScan; ++i) {
    const double f = double(i) / kScan;
    if (g(f) <= 0) return bisect(g, prev, f);
    prev = f;
  }
  return 1.0;
}

Eta3Result table4_eta3(SpinValue s, int workers) {
  const ChiParams p = chi_params(InitialState::top(s));
  const double s3 = std::pow(s.value(), 3);
  auto mki = [&](const Eigen::VectorXd& x) {
    // x = (t1, t1', t2, t2', t3, t3'); the initial axis sits at angle 0.
    auto T = [&](double a, double b, double c) { return corr3_from(p, std::cos(a), std::cos(a - b), std::cos(b - c)); };
    const double v = 0.5 * (T(x(0), x(2), x(5)) + T(x(0), x(3), x(4)) + T(x(1), x(2), x(4)) - T(x(1), x(3), x(5)));
    return std::abs(v) / s3;
  };
  SearchSpec spec = SearchSpec::uniform(6, 0.0, 2 * std::numbers::pi, 8);
  spec.starts = 20;
  spec.workers = workers;
  auto r = maximize(mki, spec);
  return {r.value, std::vector<double>(r.argmax.data(), r.argmax.data() + r.argmax.size())};
}

std::optional<double> TableReference::eta2(int t) {
  static const std::map<int, double> m{{1, std::numbers::sqrt2}, {2, 1.2112}, {3, 1.1817}, {4, 1.17},
                                       {5, 1.1638}, {6, 1.1599}, {7, 1.1572}, {8, 1.1553},
                                       {9, 1.1538}, {10, 1.1526}, {11, 1.1517}, {12, 1.1509},
                                       {2000, 1.143}};
  return lookup(m, t);
}

std::optional<std::vector<XiWindow>> TableReference::xi_windows(int t) {
  static const std::map<int, std::vector<XiWindow>> m{
      {1, {{1.0, 1.0}}},     {2, {{0.0, 0.33}, {0.77, 1.0}}}, {3, {{0.824, 1.0}}}, {4, {{0.84, 1.0}}},
      {5, {{0.847, 1.0}}},   {6, {{0.851, 1.0}}},             {7, {{0.854, 1.0}}}, {8, {{0.856, 1.0}}},
      {9, {{0.858, 1.0}}},   {10, {{0.859, 1.0}}},            {11, {{0.860, 1.0}}}, {12, {{0.862, 1.0}}},
      {2000, {{0.87, 1.0}}}};
  return lookup(m, t);
}

std::optional<double> TableReference::noise_threshold(int t) {
  static const std::map<int, double> m{{1, 1.0},    {2, 0.696},  {3, 0.395},  {4, 0.321},   {5, 0.287},
                                       {6, 0.267},  {7, 0.254},  {8, 0.245},  {9, 0.239},   {10, 0.234},
                                       {11, 0.230}, {12, 0.227}, {2000, 0.195}};
  return lookup(m, t);
}

std::optional<double> TableReference::eta3(int t) {
  static const std::map<int, double> m{{1, std::numbers::sqrt2}, {2, 1.2178}, {3, 1.1907}, {4, 1.1793},
                                       {5, 1.1736}, {6, 1.1698}, {7, 1.1670}, {8, 1.1650},
                                       {9, 1.1634}, {10, 1.1621}, {11, 1.1610}, {12, 1.1601},
                                       {2000, 1.1527}};
  return lookup(m, t);
}

} // namespace spinsim
