#include "spinsim/random.hpp"
#include "spinsim/temporal.hpp"

#include <doctest.h>

#include <cmath>

using namespace spinsim;

namespace {

MeasurementSequence fixed_seq() {
  return {UnitVector3::polar(0.7, 0.2), UnitVector3::polar(1.9, -0.8), UnitVector3::polar(2.6, 2.1)};
}

} // namespace

TEST_CASE("single round structure") {
  RandomStream r(40, 0);
  auto q = fixed_seq();
  std::vector<UnitVector3> shared(7);
  for (auto& v : shared) v = sample_unit_sphere(r);
  auto round = temporal_round(UnitVector3(), q, shared);
  CHECK(round.outputs.size() == 3);
  CHECK(round.transcripts.size() == 2);
  for (int o : round.outputs) CHECK(std::abs(o) == 1);
  // The transcript into step i is the previous output times the sign of a_{i-1} against each shared vector.
  CHECK(round.transcripts[0][0] == round.outputs[0] * sgn(q[0].dot(shared[1])));
  CHECK(round.transcripts[1][1] == round.outputs[1] * sgn(q[1].dot(shared[4])));
  shared.pop_back();
  CHECK_THROWS_AS(temporal_round(UnitVector3(), q, shared), ResourceMismatch);
  CHECK_THROWS(temporal_round(UnitVector3(), {}, {}));
}

TEST_CASE("first output follows the initial axis") {
  // lambda_0 = -a0 is a measure-zero tie broken towards +1.
  auto a = UnitVector3::planar(0.3);
  std::vector<UnitVector3> shared{-a, a, a};
  CHECK(temporal_round(a, {a}, shared).outputs[0] == 1);
}

TEST_CASE("simulated moments reproduce the quantum sequential moments") {
  auto q = fixed_seq();
  for (double p : {1.0, 0.8}) {
    auto st = InitialState::qubit(UnitVector3::polar(0.4, 1.0), p);
    auto ens = simulate_temporal(st, q, 400000, 11, 4);
    REQUIRE(ens.size() == 400000);
    for (int m = 1; m < 8; ++m) {
      std::vector<int> idx;
      for (int i = 0; i < 3; ++i)
        if ((m >> i) & 1) idx.push_back(i + 1);
      const auto est = temporal_moment(ens, idx);
      const double exact = qubit_moment(st, q, idx);
      INFO("p = " << p << " mask " << m << " est " << est.mean << " exact " << exact);
      CHECK(std::abs(est.mean - exact) < 5 * est.stderr + 1e-12);
    }
  }
}

TEST_CASE("identities: single, adjacent and last-pair correlations") {
  auto q = fixed_seq();
  auto a0 = UnitVector3::polar(0.4, 1.0);
  auto ens = simulate_temporal(InitialState::qubit(a0), q, 400000, 12, 2);
  auto m1 = temporal_moment(ens, {1});
  CHECK(std::abs(m1.mean - a0.dot(q[0])) < 5 * m1.stderr);
  auto m12 = temporal_moment(ens, {1, 2});
  CHECK(std::abs(m12.mean - q[0].dot(q[1])) < 5 * m12.stderr);
  auto m23 = temporal_moment(ens, {2, 3});
  CHECK(std::abs(m23.mean - q[1].dot(q[2])) < 5 * m23.stderr);
  auto m3 = temporal_moment(ens, {3});
  CHECK(std::abs(m3.mean - a0.dot(q[0]) * q[0].dot(q[1]) * q[1].dot(q[2])) < 5 * m3.stderr);
}

TEST_CASE("transcripts carry no information about earlier outputs") {
  auto q = fixed_seq();
  auto ens = simulate_temporal(InitialState::qubit(UnitVector3::polar(0.4, 1.0)), q, 400000, 13, 4);
  CHECK(transcript_leakage_bits(ens, 2) < 1e-3);
  CHECK(transcript_leakage_bits(ens, 3) < 1e-3);
  CHECK_THROWS(transcript_leakage_bits(ens, 1));
  CHECK_THROWS(transcript_leakage_bits(ens, 4));
}

TEST_CASE("determinism and worker independence") {
  auto q = fixed_seq();
  auto st = InitialState::qubit(UnitVector3(), 0.9);
  auto a = simulate_temporal(st, q, 150000, 5, 1);
  auto b = simulate_temporal(st, q, 150000, 5, 3);
  CHECK(a.outputs == b.outputs);
  CHECK(a.cbits == b.cbits);
  auto c = simulate_temporal(st, q, 150000, 6, 1);
  CHECK(a.outputs != c.outputs);
}

TEST_CASE("preconditions") {
  auto q = fixed_seq();
  auto small = simulate_temporal(InitialState::qubit(UnitVector3()), q, 1000, 1, 1);
  CHECK_THROWS_AS(temporal_moment(small, {1}), InsufficientData);
  CHECK_THROWS(simulate_temporal(InitialState::top(SpinValue(2)), q, 10, 1, 1));
  CHECK_THROWS(simulate_temporal(InitialState::qubit(UnitVector3()), {}, 10, 1, 1));
  auto ens = simulate_temporal(InitialState::qubit(UnitVector3()), q, 100000, 1, 1);
  CHECK_THROWS(temporal_moment(ens, {4}));
}
