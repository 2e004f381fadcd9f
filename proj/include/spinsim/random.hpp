#pragma once

#include "spinsim/spin.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace spinsim {

// One independent PRNG sequence per (seed, stream_id). Workers never share a stream.
class RandomStream {
public:
  RandomStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  std::uint64_t next_u64() { return engine_(); }
  // 53-bit uniform in [0, 1); spelled out so results do not depend on the
  // standard library's distribution implementation.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
};

inline int sgn(double x) { return x >= 0.0 ? 1 : -1; }

UnitVector3 sample_unit_sphere(RandomStream& rng);

// sgn(z.nu + p); over uniform nu this is +1 with probability (1 + p) / 2.
int biased_sign(const UnitVector3& nu, double p);

struct SharedRandomness {
  std::vector<UnitVector3> lambdas;
  std::vector<UnitVector3> mus;
  std::vector<UnitVector3> nus;

  static SharedRandomness draw(int n_lambda, int n_mu, int n_nu, RandomStream& rng);
};

} // namespace spinsim
