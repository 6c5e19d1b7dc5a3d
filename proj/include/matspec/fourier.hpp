#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "matspec/hpd.hpp"

namespace matspec {

struct TimeSeries {
  RealMatrix values;  // n x d

  int n() const { return static_cast<int>(values.rows()); }
  int d() const { return static_cast<int>(values.cols()); }
};

// Z~_j = n^{-1/2} sum_{t=1}^n Z_t exp(-i t omega_j), omega_j = 2 pi j / n,
// for j = 0..floor(n/2). Row t-1 of the data is Z_t.
struct FourierCoefficients {
  Matrix coeffs;  // (floor(n/2)+1) x d
  int n = 0;

  int d() const { return static_cast<int>(coeffs.cols()); }
  int n_interior() const { return (n + 1) / 2 - 1; }  // N = ceil(n/2) - 1
  double omega(int j) const { return 2.0 * std::numbers::pi * j / n; }
};

inline FourierCoefficients fourier_coefficients(const TimeSeries& ts) {
  const int n = ts.n(), d = ts.d();
  if (n < 2) throw std::domain_error("fourier_coefficients: series too short");
  FourierCoefficients fc;
  fc.n = n;
  fc.coeffs.resize(n / 2 + 1, d);
  Eigen::FFT<double> fft;
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  std::vector<double> in(n);
  std::vector<std::complex<double>> out(n);
  for (int c = 0; c < d; ++c) {
    for (int t = 0; t < n; ++t) in[t] = ts.values(t, c);
    fft.fwd(out, in);
    for (int j = 0; j <= n / 2; ++j) {
      // FFT sums over t = 0..n-1; the data are indexed from t = 1.
      const double w = fc.omega(j);
      fc.coeffs(j, c) = scale * out[j] * std::exp(Complex(0.0, -w));
    }
  }
  return fc;
}

// Periodogram Z~_j Z~_j^* / (2 pi) at interior Fourier frequencies.
inline std::vector<Matrix> periodogram(const FourierCoefficients& fc) {
  std::vector<Matrix> out;
  const int nn = fc.n_interior();
  out.reserve(nn);
  for (int j = 1; j <= nn; ++j) {
    const Eigen::VectorXcd z = fc.coeffs.row(j).transpose();
    out.push_back(z * z.adjoint() / (2.0 * std::numbers::pi));
  }
  return out;
}

// Centers every component by its sample mean; returns the means.
inline Vector center_series(TimeSeries& ts) {
  Vector means = ts.values.colwise().mean();
  ts.values.rowwise() -= means.transpose();
  return means;
}

inline TimeSeries difference_lag(const TimeSeries& ts, int lag) {
  if (lag < 1 || lag >= ts.n()) throw std::domain_error("difference_lag: lag out of range");
  TimeSeries out;
  out.values = ts.values.bottomRows(ts.n() - lag) - ts.values.topRows(ts.n() - lag);
  return out;
}

}  // namespace matspec
