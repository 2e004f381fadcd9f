#include "spinsim/random.hpp"
#include "spinsim/spin.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace spinsim;
using C = std::complex<double>;

TEST_CASE("spin value ladder") {
  SpinValue s(5);
  CHECK(s.dim() == 6);
  CHECK(s.value() == doctest::Approx(2.5));
  CHECK(s.casimir() == doctest::Approx(8.75));
  CHECK_FALSE(s.is_integer());
  CHECK(s.eigenvalue(0) == 2.5);
  CHECK(s.eigenvalue(5) == -2.5);
  CHECK(s.index_of(-0.5) == 3);
  CHECK_THROWS_AS(s.index_of(0.0), std::domain_error);
  CHECK_THROWS_AS(s.index_of(3.5), std::domain_error);
  CHECK_THROWS_AS(SpinValue(0), std::invalid_argument);
  CHECK(to_string(SpinValue(5)) == "5/2");
  CHECK(to_string(SpinValue(4)) == "2");
}

TEST_CASE("unit vectors reject unnormalised input") {
  CHECK_THROWS_AS(UnitVector3(1.0, 1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(UnitVector3::normalized(0, 0, 0), std::invalid_argument);
  auto u = UnitVector3::normalized(3, 0, 4);
  CHECK(u.x() == doctest::Approx(0.6));
  CHECK(UnitVector3::planar(std::numbers::pi / 2).x() == doctest::Approx(1.0));
}

TEST_CASE("spin matrices satisfy the angular momentum algebra") {
  for (int t = 1; t <= 8; ++t) {
    SpinValue s(t);
    auto S = spin_matrices(s);
    const int d = s.dim();
    ComplexMatrix<double> comm = S.sx * S.sy - S.sy * S.sx - C(0, 1) * S.sz;
    CHECK(comm.norm() < 1e-12);
    ComplexMatrix<double> cas = S.sx * S.sx + S.sy * S.sy + S.sz * S.sz;
    CHECK((cas - C(s.casimir()) * ComplexMatrix<double>::Identity(d, d)).norm() < 1e-11);
  }
}

TEST_CASE("eigenbasis along z for a qubit") {
  auto eb = eigenbasis(SpinValue(1), UnitVector3(0, 0, 1));
  CHECK(eb.eigenvalues(0) == doctest::Approx(0.5));
  CHECK(eb.eigenvalues(1) == doctest::Approx(-0.5));
  CHECK(std::abs(eb.eigenvectors(0, 0) - C(1)) < 1e-12);
  CHECK(std::abs(eb.eigenvectors(1, 1) - C(1)) < 1e-12);
}

TEST_CASE("eigenbasis columns are eigenvectors with the phase convention") {
  RandomStream rng(1, 0);
  for (int t = 1; t <= 8; ++t) {
    SpinValue s(t);
    for (int k = 0; k < 5; ++k) {
      auto a = sample_unit_sphere(rng);
      auto eb = eigenbasis(s, a);
      auto A = spin_component(s, a);
      for (int j = 0; j < s.dim(); ++j) {
        ComplexVector<double> v = eb.eigenvectors.col(j);
        CHECK((A * v - C(s.eigenvalue(j)) * v).norm() < 1e-9);
        for (int r = 0; r < s.dim(); ++r)
          if (std::abs(v(r)) > 1e-9) {
            CHECK(std::abs(v(r).imag()) < 1e-12);
            CHECK(v(r).real() > 0);
            break;
          }
      }
    }
  }
}

TEST_CASE("transition matrix is doubly stochastic and matches the qubit half-angle law") {
  RandomStream rng(2, 0);
  for (int t = 1; t <= 6; ++t) {
    auto a = sample_unit_sphere(rng), b = sample_unit_sphere(rng);
    auto T = transition_matrix(SpinValue(t), a, b);
    for (int i = 0; i < T.rows(); ++i) {
      CHECK(T.row(i).sum() == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(T.col(i).sum() == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
  auto a = UnitVector3::planar(0.0), b = UnitVector3::planar(1.1);
  CHECK(transition_prob(SpinValue(1), a, 0.5, b, 0.5) == doctest::Approx(std::pow(std::cos(0.55), 2)));
}

TEST_CASE("singlet state is normalised with maximally mixed marginal") {
  for (int t = 1; t <= 8; ++t) {
    SpinValue s(t);
    auto psi = singlet_state(s);
    CHECK(psi.amplitudes.norm() == doctest::Approx(1.0));
    auto rho = reduced_density_alice(psi);
    CHECK((rho - ComplexMatrix<double>::Identity(s.dim(), s.dim()) / double(s.dim())).norm() < 1e-12);
  }
}

TEST_CASE("singlet is annihilated by every component of the total spin") {
  for (int t = 1; t <= 6; ++t) {
    SpinValue s(t);
    auto S = spin_matrices(s);
    const int d = s.dim();
    const auto psi = singlet_state(s).amplitudes;
    for (const auto* M : {&S.sx, &S.sy, &S.sz}) {
      // (M x 1 + 1 x M) psi, applied on the reshaped amplitude matrix.
      ComplexMatrix<double> P(d, d);
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) P(i, j) = psi(i * d + j);
      ComplexMatrix<double> out = (*M) * P + P * M->transpose();
      CHECK(out.norm() < 1e-12);
    }
  }
}

TEST_CASE("singlet correlation contraction equals the closed form") {
  RandomStream rng(3, 0);
  for (int t = 1; t <= 8; ++t) {
    SpinValue s(t);
    for (int k = 0; k < 100; ++k) {
      auto a = sample_unit_sphere(rng), b = sample_unit_sphere(rng);
      CHECK(std::abs(singlet_correlation_exact(s, a, b) - singlet_correlation_closed_form(s, a, b)) < 1e-9);
    }
  }
}

TEST_CASE("long double instantiation agrees") {
  auto a = UnitVector3::planar(0.3), b = UnitVector3::polar(1.2, 0.4);
  const long double v = singlet_correlation_exact<long double>(SpinValue(3), a, b);
  CHECK(double(v) == doctest::Approx(singlet_correlation_closed_form(SpinValue(3), a, b)).epsilon(1e-12));
}
