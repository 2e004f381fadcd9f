#include "spinsim/search.hpp"
#include "spinsim/random.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <thread>

namespace spinsim {

namespace {

double checked(const Objective& f, const Eigen::VectorXd& x) {
  const double v = f(x);
  if (!std::isfinite(v)) {
    std::ostringstream os;
    os << "objective is not finite at (";
    for (int i = 0; i < x.size(); ++i) os << (i ? ", " : "") << x(i);
    os << ")";
    throw NonFiniteObjective(os.str(), x);
  }
  return v;
}

void check_spec(const SearchSpec& spec) {
  if (spec.dimension < 1) throw std::invalid_argument("dimension must be positive");
  if (static_cast<int>(spec.bounds.size()) != spec.dimension ||
      static_cast<int>(spec.grid_points.size()) != spec.dimension)
    throw std::invalid_argument("bounds and grid_points need one entry per axis");
  for (int i = 0; i < spec.dimension; ++i) {
    if (!(spec.bounds[i].second > spec.bounds[i].first)) throw std::invalid_argument("empty bound interval");
    if (spec.grid_points[i] < 2) throw std::invalid_argument("need at least two grid points per axis");
  }
  if (!(spec.refine_tolerance > 0)) throw std::invalid_argument("refine_tolerance must be positive");
  if (spec.starts < 1) throw std::invalid_argument("need at least one start");
}

Eigen::VectorXd clamp_to(const SearchSpec& spec, Eigen::VectorXd x) {
  for (int i = 0; i < x.size(); ++i) x(i) = std::clamp(x(i), spec.bounds[i].first, spec.bounds[i].second);
  return x;
}

} // namespace

SearchSpec SearchSpec::uniform(int dimension, double lo, double hi, int points) {
  SearchSpec s;
  s.dimension = dimension;
  s.bounds.assign(dimension, {lo, hi});
  s.grid_points.assign(dimension, points);
  return s;
}

SearchResult nelder_mead_max(const Objective& f, const Eigen::VectorXd& x0, const Eigen::VectorXd& step, double tol,
                             std::int64_t max_evals) {
  const int n = static_cast<int>(x0.size());
  std::vector<Eigen::VectorXd> x(n + 1, x0);
  std::vector<double> v(n + 1);
  std::int64_t evals = 0;
  auto eval = [&](const Eigen::VectorXd& p) {
    ++evals;
    return checked(f, p);
  };
  for (int i = 0; i < n; ++i) x[i + 1](i) += step(i);
  for (int i = 0; i <= n; ++i) v[i] = eval(x[i]);

  std::vector<int> order(n + 1);
  int flat_iters = 0;
  while (evals < max_evals) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return v[a] > v[b]; });
    const int best = order.front(), worst = order.back(), second = order[n - 1];

    double diam = 0.0;
    for (int i = 0; i <= n; ++i) diam = std::max(diam, (x[i] - x[best]).lpNorm<Eigen::Infinity>());
    if (diam < tol) break;
    if (v[best] - v[worst] <= 1e-15 * (1.0 + std::abs(v[best]))) {
      if (++flat_iters > 20 * n) break;
    } else {
      flat_iters = 0;
    }

    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
    for (int i = 0; i <= n; ++i)
      if (i != worst) centroid += x[i];
    centroid /= n;

    const Eigen::VectorXd xr = centroid + (centroid - x[worst]);
    const double vr = eval(xr);
    if (vr > v[best]) {
      const Eigen::VectorXd xe = centroid + 2.0 * (centroid - x[worst]);
      const double ve = eval(xe);
      if (ve > vr) {
        x[worst] = xe;
        v[worst] = ve;
      } else {
        x[worst] = xr;
        v[worst] = vr;
      }
    } else if (vr > v[second]) {
      x[worst] = xr;
      v[worst] = vr;
    } else {
      const bool outside = vr > v[worst];
      const Eigen::VectorXd xc = outside ? Eigen::VectorXd(centroid + 0.5 * (xr - centroid))
                                         : Eigen::VectorXd(centroid + 0.5 * (x[worst] - centroid));
      const double vc = eval(xc);
      if (vc > (outside ? vr : v[worst])) {
        x[worst] = xc;
        v[worst] = vc;
      } else {
        for (int i = 0; i <= n; ++i) {
          if (i == best) continue;
          x[i] = x[best] + 0.5 * (x[i] - x[best]);
          v[i] = eval(x[i]);
        }
      }
    }
  }
  const int best = static_cast<int>(std::max_element(v.begin(), v.end()) - v.begin());
  return {x[best], v[best], evals};
}

SearchResult maximize(const Objective& f, const SearchSpec& spec, std::uint64_t seed) {
  check_spec(spec);
  const int dim = spec.dimension;

  double cells = 1.0;
  for (int g : spec.grid_points) cells *= g;
  const bool full_grid = cells <= double(spec.max_grid);
  const std::int64_t n_samples = full_grid ? static_cast<std::int64_t>(cells) : spec.max_grid;

  Eigen::VectorXd spacing(dim);
  for (int i = 0; i < dim; ++i)
    spacing(i) = (spec.bounds[i].second - spec.bounds[i].first) / (spec.grid_points[i] - 1);

  // Sample points are generated up front so the scan is independent of the worker count.
  std::vector<Eigen::VectorXd> pts(static_cast<std::size_t>(n_samples), Eigen::VectorXd(dim));
  if (full_grid) {
    std::vector<int> idx(dim, 0);
    for (std::int64_t k = 0; k < n_samples; ++k) {
      for (int i = 0; i < dim; ++i) pts[k](i) = spec.bounds[i].first + idx[i] * spacing(i);
      for (int i = dim - 1; i >= 0; --i) {
        if (++idx[i] < spec.grid_points[i]) break;
        idx[i] = 0;
      }
    }
  } else {
    RandomStream rng(seed, 0);
    for (auto& p : pts)
      for (int i = 0; i < dim; ++i)
        p(i) = spec.bounds[i].first + rng.uniform() * (spec.bounds[i].second - spec.bounds[i].first);
  }

  std::vector<double> vals(pts.size());
  const int w = std::max(1, std::min<int>(spec.workers, static_cast<int>(std::max<std::size_t>(pts.size() / 1024, 1))));
  if (w == 1) {
    for (std::size_t k = 0; k < pts.size(); ++k) vals[k] = checked(f, pts[k]);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errs(w);
    for (int t = 0; t < w; ++t)
      pool.emplace_back([&, t] {
        try {
          for (std::size_t k = t; k < pts.size(); k += w) vals[k] = checked(f, pts[k]);
        } catch (...) {
          errs[t] = std::current_exception();
        }
      });
    for (auto& th : pool) th.join();
    for (auto& e : errs)
      if (e) std::rethrow_exception(e);
  }

  std::vector<std::size_t> order(pts.size());
  std::iota(order.begin(), order.end(), 0);
  const std::size_t k_starts = std::min<std::size_t>(spec.starts, order.size());
  std::partial_sort(order.begin(), order.begin() + k_starts, order.end(), [&](std::size_t a, std::size_t b) {
    return vals[a] > vals[b] || (vals[a] == vals[b] && a < b);
  });

  Objective g = spec.clamp ? Objective([&](const Eigen::VectorXd& x) { return f(clamp_to(spec, x)); }) : f;
  Eigen::VectorXd step = full_grid ? spacing : Eigen::VectorXd(spacing * 4.0);
  if (!full_grid)
    for (int i = 0; i < dim; ++i)
      step(i) = std::min(step(i), 0.1 * (spec.bounds[i].second - spec.bounds[i].first));

  SearchResult best{pts[order[0]], vals[order[0]], static_cast<std::int64_t>(pts.size())};
  std::vector<SearchResult> local(k_starts);
  auto refine = [&](std::size_t s) {
    SearchResult r = nelder_mead_max(g, pts[order[s]], step, spec.refine_tolerance);
    // Restart from the incumbent until the simplex stops finding anything better.
    for (int rep = 0; rep < 50; ++rep) {
      SearchResult again = nelder_mead_max(g, r.argmax, step * 0.1, spec.refine_tolerance);
      const bool improved = again.value > r.value + 1e-15 * (1.0 + std::abs(r.value));
      const std::int64_t used = r.n_evaluations + again.n_evaluations;
      if (again.value >= r.value) r = again;
      r.n_evaluations = used;
      if (!improved) break;
    }
    local[s] = r;
  };
  const int ws = std::max(1, std::min<int>(spec.workers, static_cast<int>(k_starts)));
  if (ws == 1) {
    for (std::size_t s = 0; s < k_starts; ++s) refine(s);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errs(ws);
    for (int t = 0; t < ws; ++t)
      pool.emplace_back([&, t] {
        try {
          for (std::size_t s = t; s < k_starts; s += ws) refine(s);
        } catch (...) {
          errs[t] = std::current_exception();
        }
      });
    for (auto& th : pool) th.join();
    for (auto& e : errs)
      if (e) std::rethrow_exception(e);
  }
  for (const auto& r : local) {
    best.n_evaluations += r.n_evaluations;
    if (r.value > best.value) {
      best.value = r.value;
      best.argmax = r.argmax;
    }
  }
  if (spec.clamp) best.argmax = clamp_to(spec, best.argmax);
  return best;
}

SearchResult minimize(const Objective& f, const SearchSpec& spec, std::uint64_t seed) {
  auto r = maximize([&](const Eigen::VectorXd& x) { return -f(x); }, spec, seed);
  r.value = -r.value;
  return r;
}

std::vector<double> real_cubic_roots(double c3, double c2, double c1, double c0) {
  const double scale = std::max({std::abs(c3), std::abs(c2), std::abs(c1), std::abs(c0)});
  if (scale == 0.0) throw std::invalid_argument("all coefficients are zero");
  const double eps = 1e-14 * scale;
  std::vector<double> roots;
  auto poly = [&](double t) { return ((c3 * t + c2) * t + c1) * t + c0; };
  auto dpoly = [&](double t) { return (3 * c3 * t + 2 * c2) * t + c1; };

  if (std::abs(c3) > eps) {
    Eigen::Matrix3d comp = Eigen::Matrix3d::Zero();
    comp(0, 0) = -c2 / c3;
    comp(0, 1) = -c1 / c3;
    comp(0, 2) = -c0 / c3;
    comp(1, 0) = 1.0;
    comp(2, 1) = 1.0;
    Eigen::EigenSolver<Eigen::Matrix3d> es(comp, false);
    for (int i = 0; i < 3; ++i) {
      const auto z = es.eigenvalues()(i);
      if (std::abs(z.imag()) > 1e-9 * std::max(1.0, std::abs(z))) {
        // A double root can come back as a pair with a tiny imaginary part.
        if (std::abs(z.imag()) > 1e-6 * std::max(1.0, std::abs(z))) continue;
        if (std::abs(poly(z.real())) > 1e-8 * scale * std::max(1.0, std::pow(std::abs(z.real()), 3))) continue;
      }
      double t = z.real();
      for (int it = 0; it < 3; ++it) {
        const double d = dpoly(t);
        if (d == 0.0) break;
        const double nt = t - poly(t) / d;
        if (std::abs(poly(nt)) >= std::abs(poly(t))) break;
        t = nt;
      }
      roots.push_back(t);
    }
  } else if (std::abs(c2) > eps) {
    const double disc = c1 * c1 - 4 * c2 * c0;
    if (disc >= -eps * eps) {
      const double sq = std::sqrt(std::max(0.0, disc));
      // Stable form avoids cancellation in the smaller root.
      const double q = -0.5 * (c1 + (c1 >= 0 ? sq : -sq));
      if (q != 0.0) {
        roots.push_back(q / c2);
        roots.push_back(c0 / q);
      } else {
        roots.push_back(0.0);
        roots.push_back(0.0);
      }
    }
  } else if (std::abs(c1) > eps) {
    roots.push_back(-c0 / c1);
  }
  std::sort(roots.begin(), roots.end());
  std::vector<double> out;
  for (double r : roots)
    if (out.empty() || std::abs(r - out.back()) > 1e-7 * std::max(1.0, std::abs(r))) out.push_back(r);
  return out;
}

} // namespace spinsim
