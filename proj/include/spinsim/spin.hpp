#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <compare>
#include <stdexcept>
#include <string>

namespace spinsim {

// Spin quantum number kept as the integer 2s so half-integers stay exact.
class SpinValue {
public:
  explicit SpinValue(int twice_s) : twice_s_(twice_s) {
    if (twice_s < 1) throw std::invalid_argument("spin must satisfy 2s >= 1");
  }

  int twice_s() const { return twice_s_; }
  int dim() const { return twice_s_ + 1; }
  double value() const { return 0.5 * twice_s_; }
  double casimir() const { return value() * (value() + 1.0); }
  bool is_integer() const { return twice_s_ % 2 == 0; }

  // Ladder entry k counts down from the top: k = 0 is m = s, k = d-1 is m = -s.
  double eigenvalue(int k) const { return value() - k; }

  int index_of(double m) const {
    double k = value() - m;
    double r = std::round(k);
    if (std::abs(k - r) > 1e-9 || r < 0 || r > twice_s_)
      throw std::domain_error("value is not on the eigenvalue ladder");
    return static_cast<int>(r);
  }

  auto operator<=>(const SpinValue&) const = default;

private:
  int twice_s_;
};

std::string to_string(SpinValue s);

class UnitVector3 {
public:
  UnitVector3() : v_(0.0, 0.0, 1.0) {}

  UnitVector3(double x, double y, double z) : v_(x, y, z) {
    if (std::abs(v_.squaredNorm() - 1.0) > 1e-12)
      throw std::invalid_argument("direction is not normalized");
  }

  explicit UnitVector3(const Eigen::Vector3d& v) : UnitVector3(v.x(), v.y(), v.z()) {}

  static UnitVector3 normalized(double x, double y, double z) {
    Eigen::Vector3d v(x, y, z);
    double n = v.norm();
    if (!(n > 0.0)) throw std::invalid_argument("cannot normalize a zero vector");
    v /= n;
    UnitVector3 u;
    u.v_ = v;
    return u;
  }

  static UnitVector3 polar(double theta, double phi) {
    return normalized(std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta));
  }

  // Direction in the x-z plane at angle theta from +z.
  static UnitVector3 planar(double theta) { return polar(theta, 0.0); }

  double x() const { return v_.x(); }
  double y() const { return v_.y(); }
  double z() const { return v_.z(); }
  const Eigen::Vector3d& vec() const { return v_; }

  double dot(const UnitVector3& o) const { return v_.dot(o.v_); }
  double dot(const Eigen::Vector3d& o) const { return v_.dot(o); }

  UnitVector3 operator-() const {
    UnitVector3 u;
    u.v_ = -v_;
    return u;
  }

private:
  Eigen::Vector3d v_;
};

template <typename Scalar>
using ComplexMatrix = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using ComplexVector = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>;
template <typename Scalar>
using RealMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using RealVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar = double>
struct SpinMatrices {
  ComplexMatrix<Scalar> sx, sy, sz;
};

template <typename Scalar = double>
SpinMatrices<Scalar> spin_matrices(SpinValue s) {
  using C = std::complex<Scalar>;
  const int d = s.dim();
  const Scalar j = Scalar(s.twice_s()) / Scalar(2);

  ComplexMatrix<Scalar> raise = ComplexMatrix<Scalar>::Zero(d, d);
  ComplexMatrix<Scalar> sz = ComplexMatrix<Scalar>::Zero(d, d);
  for (int k = 0; k < d; ++k) {
    const Scalar m = j - Scalar(k);
    sz(k, k) = C(m);
    if (k > 0) raise(k - 1, k) = C(std::sqrt(j * (j + 1) - m * (m + 1)));
  }
  ComplexMatrix<Scalar> lower = raise.adjoint();

  SpinMatrices<Scalar> out;
  out.sx = (raise + lower) * C(Scalar(0.5));
  out.sy = (raise - lower) * C(Scalar(0), Scalar(-0.5));
  out.sz = sz;
  return out;
}

template <typename Scalar = double>
ComplexMatrix<Scalar> spin_component(const SpinMatrices<Scalar>& S, const UnitVector3& a) {
  using C = std::complex<Scalar>;
  return S.sx * C(Scalar(a.x())) + S.sy * C(Scalar(a.y())) + S.sz * C(Scalar(a.z()));
}

template <typename Scalar = double>
ComplexMatrix<Scalar> spin_component(SpinValue s, const UnitVector3& a) {
  return spin_component<Scalar>(spin_matrices<Scalar>(s), a);
}

template <typename Scalar = double>
struct SpinEigenbasis {
  UnitVector3 direction;
  RealVector<Scalar> eigenvalues;     // s, s-1, ..., -s
  ComplexMatrix<Scalar> eigenvectors; // column k pairs with eigenvalues(k)
};

// Columns sorted by descending eigenvalue. Each column is rephased so its first
// non-negligible entry (scanning from the m = s row) is real and positive.
template <typename Scalar = double>
SpinEigenbasis<Scalar> eigenbasis(SpinValue s, const UnitVector3& a) {
  const int d = s.dim();
  Eigen::SelfAdjointEigenSolver<ComplexMatrix<Scalar>> solver(spin_component<Scalar>(s, a));
  if (solver.info() != Eigen::Success) throw std::runtime_error("eigensolver did not converge");

  SpinEigenbasis<Scalar> out{a, RealVector<Scalar>(d), ComplexMatrix<Scalar>(d, d)};
  for (int k = 0; k < d; ++k) {
    // Eigen returns ascending order; the ladder is descending.
    out.eigenvalues(k) = Scalar(s.eigenvalue(k));
    ComplexVector<Scalar> v = solver.eigenvectors().col(d - 1 - k);
    for (int r = 0; r < d; ++r) {
      if (std::abs(v(r)) > Scalar(1e-9)) {
        v *= std::conj(v(r)) / std::abs(v(r));
        v(r) = std::complex<Scalar>(v(r).real(), Scalar(0));
        break;
      }
    }
    out.eigenvectors.col(k) = v;
  }
  return out;
}

// T(i, j) = |<a, m_i | b, m_j>|^2 with both ladders in descending order.
template <typename Scalar = double>
RealMatrix<Scalar> transition_matrix(SpinValue s, const UnitVector3& a, const UnitVector3& b) {
  auto ea = eigenbasis<Scalar>(s, a);
  auto eb = eigenbasis<Scalar>(s, b);
  return (ea.eigenvectors.adjoint() * eb.eigenvectors).cwiseAbs2();
}

template <typename Scalar = double>
Scalar transition_prob(SpinValue s, const UnitVector3& a, double m_a, const UnitVector3& b, double m_b) {
  const int i = s.index_of(m_a);
  const int j = s.index_of(m_b);
  auto ea = eigenbasis<Scalar>(s, a);
  auto eb = eigenbasis<Scalar>(s, b);
  return std::norm(ea.eigenvectors.col(i).dot(eb.eigenvectors.col(j)));
}

template <typename Scalar = double>
struct SingletState {
  SpinValue spin;
  ComplexVector<Scalar> amplitudes; // index i*d + j for |m_i> (x) |m_j>
};

template <typename Scalar = double>
SingletState<Scalar> singlet_state(SpinValue s) {
  const int d = s.dim();
  ComplexVector<Scalar> psi = ComplexVector<Scalar>::Zero(d * d);
  const Scalar norm = Scalar(1) / std::sqrt(Scalar(d));
  // s - m_i = i, so the sign is (-1)^i; the partner index carries -m_i.
  for (int i = 0; i < d; ++i) psi(i * d + (d - 1 - i)) = (i % 2 == 0 ? norm : -norm);
  return {s, psi};
}

// Amplitudes reshaped so that row = Alice's index, column = Bob's index.
template <typename Scalar>
ComplexMatrix<Scalar> amplitude_matrix(const SingletState<Scalar>& psi) {
  const int d = psi.spin.dim();
  ComplexMatrix<Scalar> m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = psi.amplitudes(i * d + j);
  return m;
}

template <typename Scalar = double>
ComplexMatrix<Scalar> reduced_density_alice(const SingletState<Scalar>& psi) {
  ComplexMatrix<Scalar> m = amplitude_matrix(psi);
  return m * m.adjoint();
}

// <psi| (a.S) (x) (b.S) |psi> by explicit contraction: tr(Psi^dag A Psi B^T).
template <typename Scalar = double>
Scalar singlet_correlation_exact(SpinValue s, const UnitVector3& a, const UnitVector3& b) {
  auto S = spin_matrices<Scalar>(s);
  ComplexMatrix<Scalar> A = spin_component<Scalar>(S, a);
  ComplexMatrix<Scalar> B = spin_component<Scalar>(S, b);
  ComplexMatrix<Scalar> psi = amplitude_matrix(singlet_state<Scalar>(s));
  ComplexMatrix<Scalar> t = A * psi * B.transpose();
  return (psi.conjugate().cwiseProduct(t)).sum().real();
}

inline double singlet_correlation_closed_form(SpinValue s, const UnitVector3& a, const UnitVector3& b) {
  return -s.casimir() / 3.0 * a.dot(b);
}

} // namespace spinsim
