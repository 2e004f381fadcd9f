#pragma once

#include <Eigen/Dense>

#include <array>
#include <complex>

namespace spinsim {

// cos(beta)|00> + sin(beta) e^{i gamma}|11>.
struct SchmidtState {
  double beta = 0;
  double gamma = 0;

  bool entangled() const;
  bool maximally_entangled() const;
  // Smaller over larger Schmidt coefficient.
  double schmidt_ratio() const;
};

struct Angle {
  double theta = 0;
  double phi = 0;
};

// Alice measures F or D, Bob measures G or E.
struct ObservableAngles {
  Angle F, D, G, E;
};

struct CabelloProbs {
  double q1; // P(F=+1, G=+1)
  double q2; // P(D=+1, G=-1)
  double q3; // P(F=-1, E=+1)
  double q4; // P(D=+1, E=+1)
};

CabelloProbs cabello_probs(const SchmidtState& state, const ObservableAngles& angles);

// Same probabilities from the 4-dim state vector and spin-1/2 eigenprojectors.
CabelloProbs cabello_probs_oracle(const SchmidtState& state, const ObservableAngles& angles);

// Partner polar angle enforcing a zero probability: tan(theta'/2) = tan(beta) tan(theta/2).
// Gives theta_F from theta_E, or theta_G from theta_D.
double cabello_constraint(const SchmidtState& state, double theta);

// Angles realising q2 = q3 = 0 with cos(phi_D + phi_E - gamma) = branch.
ObservableAngles cabello_angles(const SchmidtState& state, double theta_D, double theta_E, int branch = -1);

// q4 - q1 under the two zero constraints, closed form.
double cabello_objective(const SchmidtState& state, double theta_D, double theta_E, int branch = -1);

// Only q3 = 0 enforced; phases fixed so every cosine factor saturates.
ObservableAngles cabello3_angles(const SchmidtState& state, double theta_D, double theta_E, double theta_G);
double cabello3_objective(const SchmidtState& state, double theta_D, double theta_E, double theta_G);

struct HardyValue {
  double value = 0;
  bool feasible = false;
};

// q4 with q1 = q2 = q3 = 0; theta_E is fixed by tan(theta_D/2) tan(theta_E/2) = 1 / tan^3(beta).
HardyValue hardy_objective(const SchmidtState& state, double theta_D);
ObservableAngles hardy_angles(const SchmidtState& state, double theta_D);

struct NonlocalityMax {
  double value = 0;
  double cos_beta = 0;
  Eigen::VectorXd thetas;
};

// Optima at fixed beta.
NonlocalityMax cabello_max_at(double beta, int workers = 1);
NonlocalityMax cabello3_max_at(double beta, int workers = 1);
NonlocalityMax hardy_max_at(double beta);

// Optima over the state as well. The objectives are symmetric under beta -> pi/2 - beta;
// the reported maximiser is folded onto cos(beta) <= 1/sqrt(2).
NonlocalityMax cabello_global_max(int workers = 1);
NonlocalityMax cabello3_global_max(int workers = 1);
NonlocalityMax hardy_global_max();

} // namespace spinsim
