#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "matspec/fourier.hpp"
#include "matspec/hpd.hpp"

namespace matspec {

// All likelihoods below are log densities of the Fourier coefficient tuple
// (Z~_0, Re Z~_1, Im Z~_1, ..., Re Z~_N, Im Z~_N [, Z~_{n/2}]) with respect to
// Lebesgue measure on those coordinates, except exact_gaussian_log_likelihood
// which is the time-domain density; lambda_n carries the (constant) Jacobian
// between the two coordinate systems.

namespace detail {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// log |S| and the quadratic form z* S^{-1} z via one Cholesky; no inverses.
inline bool chol_logdet_quad(const Matrix& s, const Eigen::VectorXcd& z, double& logdet, double& quad) {
  Eigen::LLT<Matrix> llt(s);
  if (llt.info() != Eigen::Success) return false;
  const Matrix l = llt.matrixL();
  logdet = 0.0;
  for (Eigen::Index i = 0; i < l.rows(); ++i) {
    const double lii = l(i, i).real();
    if (!(lii > 0.0)) return false;
    logdet += std::log(lii);
  }
  logdet *= 2.0;
  const Eigen::VectorXcd y = llt.matrixL().solve(z);
  quad = y.squaredNorm();
  return true;
}

// Real multivariate normal log density at z with covariance c.
inline double real_normal_logpdf(const Eigen::VectorXd& z, const Eigen::MatrixXd& c) {
  Eigen::LLT<Eigen::MatrixXd> llt(c);
  if (llt.info() != Eigen::Success) return kNegInf;
  double logdet = 0.0;
  for (Eigen::Index i = 0; i < c.rows(); ++i) logdet += std::log(llt.matrixL()(i, i));
  logdet *= 2.0;
  const Eigen::VectorXd y = llt.matrixL().solve(z);
  return -0.5 * z.size() * std::log(2.0 * std::numbers::pi) - 0.5 * logdet - 0.5 * y.squaredNorm();
}

}  // namespace detail

// Whittle log likelihood over interior frequencies: f_at_freqs[j-1] is
// f(omega_j) for j = 1..N. Non-Hpd f yields -inf (an MH rejection, not an
// exception).
inline double whittle_log_likelihood(const FourierCoefficients& fc, const std::vector<Matrix>& f_at_freqs) {
  const int nn = fc.n_interior(), d = fc.d();
  if (static_cast<int>(f_at_freqs.size()) < nn) throw std::invalid_argument("whittle: spectrum grid too short");
  const double log_pi = std::log(std::numbers::pi);
  const double log_2pi = std::log(2.0 * std::numbers::pi);
  double ll = 0.0;
  for (int j = 1; j <= nn; ++j) {
    double logdet, quad;
    if (!detail::chol_logdet_quad(f_at_freqs[j - 1], fc.coeffs.row(j).transpose(), logdet, quad))
      return detail::kNegInf;
    ll += -d * log_pi - d * log_2pi - logdet - quad / (2.0 * std::numbers::pi);
  }
  return ll;
}

// Extended Whittle: adds the real N_d(0, 2 pi f(0)) term for Z~_0 and, for
// even n, the N_d(0, 2 pi f(pi)) term for Z~_{n/2}. f_at_all[j] is f(omega_j)
// for j = 0..floor(n/2).
inline double extended_whittle_log_likelihood(const FourierCoefficients& fc, const std::vector<Matrix>& f_at_all) {
  const int half = fc.n / 2;
  if (static_cast<int>(f_at_all.size()) != half + 1) throw std::invalid_argument("extended whittle: need f at omega_0..omega_{n/2}");
  std::vector<Matrix> interior(f_at_all.begin() + 1, f_at_all.begin() + 1 + fc.n_interior());
  double ll = whittle_log_likelihood(fc, interior);
  const Eigen::VectorXd z0 = fc.coeffs.row(0).transpose().real();
  ll += detail::real_normal_logpdf(z0, 2.0 * std::numbers::pi * f_at_all[0].real());
  if (fc.n % 2 == 0) {
    const Eigen::VectorXd zh = fc.coeffs.row(half).transpose().real();
    ll += detail::real_normal_logpdf(zh, 2.0 * std::numbers::pi * f_at_all[half].real());
  }
  return ll;
}

// The block-diagonal real-valued form of the extended Whittle likelihood: the
// stacked vector (Z~_0, Re Z~_j, Im Z~_j, ..., Z~_{n/2}) is Gaussian with
// block covariance diag(2 pi f(0), pi B f(omega_1), ..., 2 pi f(pi)), where B
// is the real-block isomorphism. Evaluated blockwise; the nd x nd matrix is
// never materialized. Equals extended_whittle_log_likelihood identically.
inline double real_valued_whittle_log_likelihood(const FourierCoefficients& fc, const std::vector<Matrix>& f_at_all) {
  const int half = fc.n / 2, d = fc.d();
  if (static_cast<int>(f_at_all.size()) != half + 1) throw std::invalid_argument("real whittle: need f at omega_0..omega_{n/2}");
  double ll = detail::real_normal_logpdf(fc.coeffs.row(0).transpose().real(), 2.0 * std::numbers::pi * f_at_all[0].real());
  for (int j = 1; j <= fc.n_interior(); ++j) {
    Eigen::VectorXd z(2 * d);
    z.head(d) = fc.coeffs.row(j).transpose().real();
    z.tail(d) = fc.coeffs.row(j).transpose().imag();
    ll += detail::real_normal_logpdf(z, std::numbers::pi * complex_to_real_block(f_at_all[j]));
  }
  if (fc.n % 2 == 0)
    ll += detail::real_normal_logpdf(fc.coeffs.row(half).transpose().real(), 2.0 * std::numbers::pi * f_at_all[half].real());
  return ll;
}

// Exact zero-mean Gaussian log likelihood in the time domain, via dense
// Cholesky of the nd x nd block-Toeplitz covariance. Diagnostic; documented
// policy limits it to n <= 4096.
inline double exact_gaussian_log_likelihood(const TimeSeries& ts, const std::vector<RealMatrix>& autocov) {
  const int n = ts.n(), d = ts.d();
  if (n > 4096) throw std::domain_error("exact_gaussian_log_likelihood: n exceeds the documented 4096 limit");
  if (static_cast<int>(autocov.size()) < n) throw std::invalid_argument("exact gaussian: need Gamma(h) for |h| < n");
  Eigen::MatrixXd gamma(n * d, n * d);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const int h = i - j;  // block (i, j) = E[z_i z_j^T] = Gamma(i - j); Gamma(-h) = Gamma(h)^T
      gamma.block(i * d, j * d, d, d) = h >= 0 ? autocov[h] : RealMatrix(autocov[-h].transpose());
    }
  Eigen::LLT<Eigen::MatrixXd> llt(gamma);
  if (llt.info() != Eigen::Success) throw std::domain_error("exact gaussian: covariance not positive definite");
  double logdet = 0.0;
  for (int i = 0; i < n * d; ++i) logdet += std::log(llt.matrixL()(i, i));
  logdet *= 2.0;
  Eigen::VectorXd z(n * d);
  for (int t = 0; t < n; ++t) z.segment(t * d, d) = ts.values.row(t).transpose();
  const Eigen::VectorXd y = llt.matrixL().solve(z);
  return -0.5 * n * d * std::log(2.0 * std::numbers::pi) - 0.5 * logdet - 0.5 * y.squaredNorm();
}

// Gamma(h) = int_0^{2pi} f(w) e^{ihw} dw = 2 int_0^pi Re(f(w) e^{ihw}) dw,
// by trapezoidal integration on a uniform grid over [0, pi].
template <class F>
inline std::vector<RealMatrix> autocov_from_spectrum(const F& f, int d, int max_lag, int grid_size = 4096) {
  std::vector<Matrix> fg(grid_size + 1);
  const double hstep = std::numbers::pi / grid_size;
  for (int i = 0; i <= grid_size; ++i) fg[i] = f(i * hstep);
  std::vector<RealMatrix> out;
  out.reserve(max_lag + 1);
  for (int h = 0; h <= max_lag; ++h) {
    Matrix acc = Matrix::Zero(d, d);
    for (int i = 0; i <= grid_size; ++i) {
      const double wgt = (i == 0 || i == grid_size) ? 0.5 : 1.0;
      acc += wgt * fg[i] * std::exp(Complex(0.0, h * i * hstep));
    }
    out.push_back(2.0 * hstep * acc.real());
  }
  return out;
}

// Lambda_n = log likelihood ratio of the extended Whittle vs the exact
// Gaussian likelihood, both expressed as densities of the same Fourier
// coefficient coordinates (hence the d*N*log 2 coordinate constant applied to
// the time-domain density).
template <class F>
inline double lambda_n(const TimeSeries& ts, const F& f, int autocov_grid = 4096) {
  const FourierCoefficients fc = fourier_coefficients(ts);
  const int half = ts.n() / 2, d = ts.d();
  std::vector<Matrix> f_all(half + 1);
  for (int j = 0; j <= half; ++j) f_all[j] = f(fc.omega(j));
  const double ext = extended_whittle_log_likelihood(fc, f_all);
  const auto autocov = autocov_from_spectrum(f, d, ts.n() - 1, autocov_grid);
  const double exact = exact_gaussian_log_likelihood(ts, autocov);
  return ext - exact - d * fc.n_interior() * std::numbers::ln2;
}

// Squared Hellinger distance between CN_d(0, s1) and CN_d(0, s2), via the
// eigenvalues b_j of s2^{-1/2} s1 s2^{-1/2}: 1 - prod_j 2 sqrt(b_j)/(1+b_j).
inline double hellinger_complex_normal(const Matrix& s1, const Matrix& s2) {
  Eigen::LLT<Matrix> llt(s2);
  if (!is_hermitian(s1) || llt.info() != Eigen::Success) throw std::domain_error("hellinger: inputs must be Hpd");
  const Matrix l = llt.matrixL();
  const Matrix b = l.triangularView<Eigen::Lower>().solve(
      Matrix(l.triangularView<Eigen::Lower>().solve(s1).adjoint()));
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(b), Eigen::EigenvaluesOnly);
  double prod = 1.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double bi = es.eigenvalues()(i);
    if (!(bi > 0.0)) throw std::domain_error("hellinger: inputs must be Hpd");
    prod *= 2.0 * std::sqrt(bi) / (1.0 + bi);
  }
  return 1.0 - prod;
}

// Determinant form 1 - |2 s1^{1/2} s2^{1/2}| / |s1 + s2|; equals the
// eigenvalue form, kept as the dual algebraic route.
inline double hellinger_complex_normal_det(const Matrix& s1, const Matrix& s2) {
  const Matrix r1 = hpd_sqrt(s1), r2 = hpd_sqrt(s2);
  const double num = std::abs(Complex((2.0 * r1 * r2).determinant()));
  const double den = (s1 + s2).determinant().real();
  return 1.0 - num / den;
}

// Average squared Hellinger distance (1/N) sum_j d_H^2 over interior Fourier
// frequencies, between CN(0, 2 pi f1(w_j)) and CN(0, 2 pi f2(w_j)).
inline double average_hellinger(const std::vector<Matrix>& f1, const std::vector<Matrix>& f2) {
  if (f1.size() != f2.size() || f1.empty()) throw std::invalid_argument("average_hellinger: grid mismatch");
  double acc = 0.0;
  for (std::size_t j = 0; j < f1.size(); ++j)
    acc += hellinger_complex_normal(2.0 * std::numbers::pi * f1[j], 2.0 * std::numbers::pi * f2[j]);
  return acc / f1.size();
}

}  // namespace matspec
