#pragma once

#include "spinsim/spin.hpp"

#include <array>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

namespace spinsim {

using MeasurementSequence = std::vector<UnitVector3>;

// Outcome units: physical eigenvalues {s, ..., -s}, or the qubit-only +-1 convention.
enum class Units { spin, pm_one };

// rho0 is diagonal in the eigenbasis of a0.S; weights run over the ladder s, s-1, ..., -s.
// noise_f mixes in the maximally mixed state: (1 - f) rho0 + f I / (2s+1).
struct InitialState {
  SpinValue spin;
  UnitVector3 axis;
  std::vector<double> weights;
  double noise_f = 0.0;

  InitialState(SpinValue s, UnitVector3 a0, std::vector<double> w, double f = 0.0);

  // Pure |a0, m = s>.
  static InitialState top(SpinValue s, UnitVector3 a0 = {}, double f = 0.0);
  // Qubit with P(+1) = p_plus along a0.
  static InitialState qubit(UnitVector3 a0, double p_plus = 1.0);

  std::vector<double> effective_weights() const;
};

struct ChiParams {
  double s = 0;
  double chi = 0; // sum p m^2
  double xi = 0;  // chi / s^2
  double A = 0;   // 3 chi - s(s+1)
  double B = 0;   // s(s+1) - chi
  double M = 0, N = 0, R = 0;
  double mu1 = 0; // sum p m
  double mu3 = 0; // sum p m^3
};

ChiParams chi_params(const InitialState& state);

// Only the second-moment part is meaningful here; used when scanning xi directly.
ChiParams chi_params_from_xi(SpinValue s, double xi);

// Closed-form correlations in physical units.
double corr1(const InitialState& state, const UnitVector3& a1);
double corr2(const InitialState& state, const UnitVector3& a1, const UnitVector3& a2);
double corr3(const InitialState& state, const UnitVector3& a1, const UnitVector3& a2, const UnitVector3& a3);
double corr13(const InitialState& state, const UnitVector3& a1, const UnitVector3& a2, const UnitVector3& a3);
double corr23(const InitialState& state, const UnitVector3& a1, const UnitVector3& a2, const UnitVector3& a3);
// <alpha_1^2> and <alpha_2^2>.
double second_moment1(const InitialState& state, const UnitVector3& a1);
double second_moment2(const InitialState& state, const UnitVector3& a1, const UnitVector3& a2);
// <alpha_1^3>.
double third_moment1(const InitialState& state, const UnitVector3& a1);

// corr3 from precomputed moments and the three cosines (a0.a1, a1.a2, a2.a3).
double corr3_from(const ChiParams& p, double c1, double c12, double c23);

// Same three-step correlation written with the M, N, R combinations as commonly
// quoted; agrees with corr3 only for s <= 1 and is kept for comparison.
double corr3_mnr_form(const InitialState& state, const UnitVector3& a1, const UnitVector3& a2,
                      const UnitVector3& a3);

class InstanceTooLarge : public std::length_error {
public:
  using std::length_error::length_error;
};

inline constexpr std::int64_t kOraclePathCap = 300000;

// <alpha_1^{w_1} ... alpha_n^{w_n}> by summing every outcome path of the projector chain.
double successive_oracle(const InitialState& state, const MeasurementSequence& seq, const std::vector<int>& exponents);

// Qubit, +-1 units.
double qubit_joint_prob(int initial_sign, const UnitVector3& a0, const MeasurementSequence& seq,
                        const std::vector<int>& outcomes);
// <prod_{i in idx} alpha_i>, idx 1-based and strictly increasing.
double qubit_moment(const InitialState& state, const MeasurementSequence& seq, const std::vector<int>& idx);
// <alpha_{n-k} ... alpha_n> with n = seq.size().
double qubit_corr_lastk(const InitialState& state, const MeasurementSequence& seq, int k);

struct SettingPair {
  UnitVector3 plain;
  UnitVector3 primed;
};

struct InequalitySetting {
  std::vector<SettingPair> steps;

  // Planar settings from polar angles (plain_1, primed_1, plain_2, primed_2, ...).
  static InequalitySetting planar(const std::vector<double>& angles);
};

// <alpha_1 ... alpha_n> along the given directions.
double full_correlation(const InitialState& state, const MeasurementSequence& seq, Units units = Units::spin);

// Expansion of the recursive MK polynomial: bit i of the mask selects the primed setting at step i+1.
std::vector<std::pair<std::uint32_t, double>> mk_terms(int n, bool primed_polynomial = false);

double mk_value(const InitialState& state, const InequalitySetting& setting, int n, Units units = Units::spin);
double bi_value(const InitialState& state, const InequalitySetting& setting, Units units = Units::spin);
// Planar two-step expression with the initial axis at angle 0.
double bi_planar(const InitialState& state, double t1, double t1p, double t2, double t2p);
double svetlichny_value(const InitialState& state, const InequalitySetting& setting, Units units = Units::spin);

// Chained expression over 2n planar angles: sum of adjacent cosines minus the wrap-around term.
double chained_value(const std::vector<double>& thetas);
struct ChainedOptimum {
  double value;
  double spacing;
};
ChainedOptimum chained_optimum(int n);

// Sum of consecutive two-step Bell expressions B(k, k+1), each (1/2)[c + c + c - c], +-1 units.
double scarani_gisin_sum(const InequalitySetting& setting);

// Which step-2 setting sits between steps 1 and 3 when <alpha_1 alpha_3'> is read off.
enum class StepTwoContext { primed, plain, absent };

struct HybridValues {
  double tri_bi_1;
  double tri_bi_2;
};

// Hybrid tri/bi-partite combinations in +-1 units for a qubit:
//   <a1 a2 a3> - <a1 a2' a3'> - <a1' a2 a3'> - <a1' a2' a3> - w (<a1 a2'> + <a1 a3'> + <a2' a3'>)
// with w = 1 and w = 2. Deterministic +-1 assignments span [-5, 3] and [-8, 4].
HybridValues hybrid_values(const InitialState& state, const InequalitySetting& setting,
                           StepTwoContext context = StepTwoContext::primed);

// Two-step profile for the planar family t1' = pi - t1, t2 = pi/2, t2' = 0.
double eta2_profile(const ChiParams& p, double theta1);
double eta2_profile(const InitialState& state, double theta1);
std::vector<double> eta2_cubic_roots(const ChiParams& p);
struct Eta2Max {
  double value;
  double theta1;
};
Eta2Max eta2_max(const ChiParams& p);

// |BI| on steps 1 and 3 with a single intervening step-2 measurement along the plain step-2 setting.
double disentangling_bound(const InitialState& state, const InequalitySetting& setting);

} // namespace spinsim
