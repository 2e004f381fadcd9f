#pragma once

#include "spinsim/random.hpp"
#include "spinsim/spin.hpp"

#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace spinsim {

struct TonerBacon {};
struct BinaryRecursive {};
struct PAdicComposite {
  int P;
  int n;
};
struct NonMaxEntangled {
  double gamma;
};

using ProtocolKind = std::variant<TonerBacon, BinaryRecursive, PAdicComposite, NonMaxEntangled>;

std::string protocol_name(const ProtocolKind& kind);

struct ResourceCount {
  int n_cbits = 0;
  int n_lambda = 0;
  int n_mu = 0;
  int n_nu = 0;

  bool operator==(const ResourceCount&) const = default;
};

struct RoundOutcome {
  double alpha = 0.0;
  double beta = 0.0;
  std::vector<int> cbits;
};

class ResourceMismatch : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

class UnsupportedRegime : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

RoundOutcome toner_bacon_round(const UnitVector3& a, const UnitVector3& b, const UnitVector3& lam,
                               const UnitVector3& mu);

// Most significant first, a_0 = 1.
std::vector<int> binary_digits(int d);

ResourceCount protocol1_resources(SpinValue s);

RoundOutcome protocol1_round(SpinValue s, const UnitVector3& a, const UnitVector3& b,
                             const SharedRandomness& shared);

ResourceCount protocol2_resources(int P, int n);

// shared holds n consecutive sub-bundles, each sized for protocol 1 at spin (P-1)/2.
RoundOutcome protocol2_round(int P, int n, const UnitVector3& a, const UnitVector3& b,
                             const SharedRandomness& shared);

// Valid iff sin 2g + |a_z cos 2g| <= 1; outside that region throws UnsupportedRegime.
double nonmax_offset(double gamma, const UnitVector3& a);

RoundOutcome nonmax_round(double gamma, const UnitVector3& a, const UnitVector3& b, const UnitVector3& lam0,
                          const UnitVector3& lam1, const UnitVector3& lam2);

// Spin simulated by a protocol kind; NonMax and TonerBacon are qubit protocols.
SpinValue protocol_spin(const ProtocolKind& kind, SpinValue requested);

ResourceCount resources(const ProtocolKind& kind, SpinValue s);

// Checks preconditions once so the per-round path can skip them.
void validate(const ProtocolKind& kind, SpinValue s, const UnitVector3& a, const UnitVector3& b);

RoundOutcome play_round(const ProtocolKind& kind, SpinValue s, const UnitVector3& a, const UnitVector3& b,
                        const SharedRandomness& shared);

// Cheapest protocol-2 transcript over all factorizations 2s+1 = P^n.
struct StaircaseRow {
  SpinValue s;
  int protocol1_cbits;
  int protocol2_cbits;
  int best_P;
  int best_n;
};

StaircaseRow staircase_row(SpinValue s);

} // namespace spinsim
