#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "matspec/hpd.hpp"

namespace matspec {

// Hyperspherical parametrization of unit-trace Hpd matrices.
//
// A unit-trace Hpd matrix U has a lower-triangular Cholesky factor T with
// positive diagonal and sum_{ij} |T_ij|^2 = tr U = 1, so the real degrees of
// freedom of T form a unit vector in R^{d^2}. We vectorize them as
//   c = (T_11, ..., T_{d-1,d-1},
//        Re T_21, Im T_21, Re T_31, Im T_31, Re T_32, Im T_32, ..., T_dd)
// (row-major lower triangle for the off-diagonal pairs, last diagonal entry
// placed last) and apply standard hyperspherical coordinates to c. The first
// d-1 angles live in (0, pi/2), keeping T_11..T_{d-1,d-1} positive, and the
// remaining angles in (0, pi); the final coordinate T_dd is a pure product of
// sines and hence positive automatically. This yields a bijection between the
// open angle box and strictly positive definite unit-trace matrices.

inline int n_angles(int d) { return d * d - 1; }

inline double angle_interval_length(int d, int j) {
  // j is the 0-based angle index.
  return j < d - 1 ? std::numbers::pi / 2 : std::numbers::pi;
}

inline void check_angles(const Vector& phi, int d) {
  if (phi.size() != n_angles(d)) throw std::domain_error("angles: wrong length for dimension");
  for (int j = 0; j < phi.size(); ++j) {
    if (!(phi[j] > 0.0 && phi[j] < angle_interval_length(d, j)))
      throw std::domain_error("angles: component outside its open interval");
  }
}

namespace detail {

// c(phi): unit vector in R^m, m = d^2.
inline Vector angles_to_unit_vector(const Vector& phi) {
  const int m = static_cast<int>(phi.size()) + 1;
  Vector c(m);
  double sines = 1.0;
  for (int i = 0; i < m - 1; ++i) {
    c[i] = sines * std::cos(phi[i]);
    sines *= std::sin(phi[i]);
  }
  c[m - 1] = sines;
  return c;
}

inline Matrix unit_vector_to_cholesky(const Vector& c, int d) {
  Matrix t = Matrix::Zero(d, d);
  for (int i = 0; i < d - 1; ++i) t(i, i) = c[i];
  int pos = d - 1;
  for (int i = 1; i < d; ++i)
    for (int j = 0; j < i; ++j) {
      t(i, j) = Complex(c[pos], c[pos + 1]);
      pos += 2;
    }
  t(d - 1, d - 1) = c[d * d - 1];
  return t;
}

inline Vector cholesky_to_unit_vector(const Matrix& t) {
  const int d = static_cast<int>(t.rows());
  Vector c(d * d);
  for (int i = 0; i < d - 1; ++i) c[i] = t(i, i).real();
  int pos = d - 1;
  for (int i = 1; i < d; ++i)
    for (int j = 0; j < i; ++j) {
      c[pos] = t(i, j).real();
      c[pos + 1] = t(i, j).imag();
      pos += 2;
    }
  c[d * d - 1] = t(d - 1, d - 1).real();
  return c;
}

}  // namespace detail

inline Matrix angles_to_unit_hpd(const Vector& phi, int d) {
  check_angles(phi, d);
  if (d == 1) return Matrix::Ones(1, 1);
  const Vector c = detail::angles_to_unit_vector(phi);
  const Matrix t = detail::unit_vector_to_cholesky(c, d);
  Matrix u = t * t.adjoint();
  // tr U = |c|^2 = 1 up to rounding; re-pin the diagonal's real part.
  return hermitian_part(u);
}

inline Vector unit_hpd_to_angles(const Matrix& u) {
  const int d = static_cast<int>(u.rows());
  if (d == 1) return Vector(0);
  Eigen::LLT<Matrix> llt(hermitian_part(u));
  if (llt.info() != Eigen::Success) throw std::domain_error("unit_hpd_to_angles: matrix not positive definite");
  const Vector c = detail::cholesky_to_unit_vector(llt.matrixL());
  const int m = d * d;
  Vector phi(m - 1);
  // tail[i] = ||c_{i..m-1}||; strictly positive since T_dd > 0.
  double tail = c[m - 1] * c[m - 1];
  Vector tails(m);
  tails[m - 1] = std::sqrt(tail);
  for (int i = m - 2; i >= 0; --i) {
    tail += c[i] * c[i];
    tails[i] = std::sqrt(tail);
  }
  for (int i = 0; i < m - 1; ++i) phi[i] = std::atan2(tails[i + 1], c[i]);
  return phi;
}

// log |det d(vec U)/d(phi)| for the map phi -> U restricted to the unit-trace
// slice, with vec U the d^2-1 independent real coordinates of U (diagonal
// entries except U_dd, plus Re/Im of the lower triangle). Derived from the
// spherical-coordinate Jacobian r^{m-1} prod sin^{m-1-i}(phi_i) composed with
// the complex Cholesky Jacobian 2^d prod T_ii^{2(d-i)+1} and the linear
// trade of the radial coordinate for the trace.
inline double log_jacobian_angles(const Vector& phi, int d) {
  check_angles(phi, d);
  if (d == 1) return 0.0;
  const int m = d * d;
  double logj = d * std::numbers::ln2 - std::numbers::ln2;
  for (int i = 0; i < m - 2; ++i) logj += (m - 2 - i) * std::log(std::sin(phi[i]));
  const Vector c = detail::angles_to_unit_vector(phi);
  // Diagonal entries of T in matrix order: T_ii = c_i for i < d, T_dd = c_{m-1}.
  for (int i = 0; i < d - 1; ++i) logj += (2 * (d - 1 - i) + 1) * std::log(c[i]);
  logj += 1.0 * std::log(c[m - 1]);  // exponent 2(d-d)+1 = 1
  return logj;
}

// Lebesgue volume (in the independent-coordinate chart above) of the set of
// unit-trace Hpsd matrices: pi^{d(d-1)/2} * prod_{k=1}^{d} Gamma(k) / Gamma(d^2).
inline double unit_trace_hpsd_volume(int d) {
  double logv = 0.5 * d * (d - 1) * std::log(std::numbers::pi) - std::lgamma(static_cast<double>(d * d));
  for (int k = 1; k <= d; ++k) logv += std::lgamma(static_cast<double>(k));
  return std::exp(logv);
}

// Lebesgue-uniform draw from the unit-trace Hpsd set: U = GG*/tr(GG*) with a
// square complex Ginibre matrix G.
template <class RngT>
inline Matrix uniform_unit_trace_hpd(int d, RngT& rng) {
  Matrix g(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) g(i, j) = Complex(rng.normal(), rng.normal());
  Matrix w = g * g.adjoint();
  return hermitian_part(w / w.trace().real());
}

}  // namespace matspec
