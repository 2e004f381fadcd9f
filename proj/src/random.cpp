#include "spinsim/random.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace spinsim {

namespace {

std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t stream_id) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream_id), static_cast<std::uint32_t>(stream_id >> 32),
                    0x5eed5eedu};
  return std::mt19937_64(seq);
}

} // namespace

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id), engine_(make_engine(seed, stream_id)) {}

UnitVector3 sample_unit_sphere(RandomStream& rng) {
  // Archimedes: z uniform on [-1, 1] gives uniform area.
  const double z = 2.0 * rng.uniform() - 1.0;
  const double phi = 2.0 * std::numbers::pi * rng.uniform();
  const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
  return UnitVector3::normalized(r * std::cos(phi), r * std::sin(phi), z);
}

int biased_sign(const UnitVector3& nu, double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("bias must lie in (0, 1)");
  return sgn(nu.z() + p);
}

SharedRandomness SharedRandomness::draw(int n_lambda, int n_mu, int n_nu, RandomStream& rng) {
  SharedRandomness out;
  out.lambdas.reserve(n_lambda);
  out.mus.reserve(n_mu);
  out.nus.reserve(n_nu);
  for (int i = 0; i < n_lambda; ++i) out.lambdas.push_back(sample_unit_sphere(rng));
  for (int i = 0; i < n_mu; ++i) out.mus.push_back(sample_unit_sphere(rng));
  for (int i = 0; i < n_nu; ++i) out.nus.push_back(sample_unit_sphere(rng));
  return out;
}

} // namespace spinsim
