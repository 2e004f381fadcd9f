#pragma once

#include "spinsim/spin.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace spinsim {

// Rows cover s = 1/2 .. 6; large_s stands in for the s -> infinity column.
std::vector<SpinValue> table_spins();
inline SpinValue large_s() { return SpinValue(2000); }

struct XiWindow {
  double lo;
  double hi;
};

// Two-step maximum over the planar family for the pure state |a0, s>.
double table2_eta2(SpinValue s);

// Sub-intervals of xi in [0, 1] on which the two-step maximum exceeds 1.
// For s = 1/2 every state has xi = 1 and the result is the single point [1, 1].
std::vector<XiWindow> table1_windows(SpinValue s);

// Largest noise fraction f that keeps the two-step maximum above 1 for the noisy top state;
// 1 when every f in [0, 1] violates.
double table3_threshold(SpinValue s);

struct Eta3Result {
  double eta3;
  std::vector<double> angles; // plain/primed polar angles for steps 1..3, initial axis at 0
};

// Three-step MK maximum |MKI| / s^3 for the top state, planar multi-start search.
Eta3Result table4_eta3(SpinValue s, int workers = 1);

// Published reference values, keyed by 2s; nullopt where none is listed.
struct TableReference {
  static std::optional<double> eta2(int twice_s);
  static std::optional<std::vector<XiWindow>> xi_windows(int twice_s);
  static std::optional<double> noise_threshold(int twice_s);
  static std::optional<double> eta3(int twice_s);
};

} // namespace spinsim
