#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace spinsim {

using Objective = std::function<double(const Eigen::VectorXd&)>;

struct SearchSpec {
  int dimension = 1;
  std::vector<std::pair<double, double>> bounds;
  std::vector<int> grid_points;
  double refine_tolerance = 1e-8;
  int starts = 10;
  // Refinement evaluates the objective at the point clamped into bounds.
  bool clamp = false;
  // Above this many grid cells the scan switches to this many seeded uniform samples.
  std::int64_t max_grid = 2000000;
  int workers = 1;

  // Same bounds and count on every axis.
  static SearchSpec uniform(int dimension, double lo, double hi, int points);
};

struct SearchResult {
  Eigen::VectorXd argmax;
  double value = 0;
  std::int64_t n_evaluations = 0;
};

class NonFiniteObjective : public std::runtime_error {
public:
  NonFiniteObjective(const std::string& msg, Eigen::VectorXd where) : std::runtime_error(msg), at(std::move(where)) {}
  Eigen::VectorXd at;
};

// Grid scan, then Nelder-Mead from the best `starts` grid points, restarted until it stops improving.
SearchResult maximize(const Objective& f, const SearchSpec& spec, std::uint64_t seed = 0);

SearchResult minimize(const Objective& f, const SearchSpec& spec, std::uint64_t seed = 0);

// Local simplex ascent from x0 with initial edge `step`.
SearchResult nelder_mead_max(const Objective& f, const Eigen::VectorXd& x0, const Eigen::VectorXd& step, double tol,
                             std::int64_t max_evals = 200000);

// Real roots, ascending; falls back to quadratic or linear when leading coefficients vanish.
std::vector<double> real_cubic_roots(double c3, double c2, double c1, double c0);

} // namespace spinsim
