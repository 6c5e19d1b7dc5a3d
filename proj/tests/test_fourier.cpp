#include <doctest.h>

#include <matspec/fourier.hpp>
#include <matspec/rng.hpp>

#include "helpers.hpp"

using namespace matspec;

namespace {

TimeSeries random_series(int n, int d, Rng& rng) {
  TimeSeries ts;
  ts.values.resize(n, d);
  for (int t = 0; t < n; ++t)
    for (int c = 0; c < d; ++c) ts.values(t, c) = rng.normal();
  return ts;
}

// Direct O(n^2) DFT with the same convention: Z~_j = n^{-1/2} sum_{t=1}^n Z_t e^{-i t w_j}.
Matrix direct_dft(const TimeSeries& ts) {
  const int n = ts.n(), d = ts.d();
  Matrix out(n / 2 + 1, d);
  for (int j = 0; j <= n / 2; ++j) {
    const double w = 2.0 * std::numbers::pi * j / n;
    for (int c = 0; c < d; ++c) {
      Complex acc = 0.0;
      for (int t = 1; t <= n; ++t) acc += ts.values(t - 1, c) * std::exp(Complex(0.0, -t * w));
      out(j, c) = acc / std::sqrt(static_cast<double>(n));
    }
  }
  return out;
}

}  // namespace

TEST_CASE("fft matches the direct DFT, odd and even n") {
  Rng rng(401);
  for (int n : {8, 9, 64, 65}) {
    const TimeSeries ts = random_series(n, 2, rng);
    const FourierCoefficients fc = fourier_coefficients(ts);
    const Matrix ref = direct_dft(ts);
    REQUIRE(fc.coeffs.rows() == ref.rows());
    CHECK((fc.coeffs - ref).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(fc.n_interior() == (n + 1) / 2 - 1);
    CHECK(fc.omega(1) == doctest::Approx(2.0 * std::numbers::pi / n));
  }
}

TEST_CASE("parseval: coefficient energy equals series energy") {
  Rng rng(409);
  for (int n : {16, 33}) {
    const TimeSeries ts = random_series(n, 1, rng);
    const FourierCoefficients fc = fourier_coefficients(ts);
    double energy = std::norm(fc.coeffs(0, 0));
    for (int j = 1; j <= fc.n_interior(); ++j) energy += 2.0 * std::norm(fc.coeffs(j, 0));
    if (n % 2 == 0) energy += std::norm(fc.coeffs(n / 2, 0));
    CHECK(energy == doctest::Approx(ts.values.col(0).squaredNorm()).epsilon(1e-10));
  }
}

TEST_CASE("constant series loads frequency zero only") {
  TimeSeries ts;
  ts.values = RealMatrix::Constant(12, 1, 3.0);
  const FourierCoefficients fc = fourier_coefficients(ts);
  CHECK(std::abs(fc.coeffs(0, 0)) == doctest::Approx(3.0 * std::sqrt(12.0)));
  for (int j = 1; j <= 6; ++j) CHECK(std::abs(fc.coeffs(j, 0)) < 1e-10);
}

TEST_CASE("periodogram is rank-one psd at each frequency") {
  Rng rng(419);
  const TimeSeries ts = random_series(32, 2, rng);
  const auto pg = periodogram(fourier_coefficients(ts));
  REQUIRE(static_cast<int>(pg.size()) == 15);
  for (const auto& p : pg) {
    CHECK(is_hpsd(p));
    CHECK(std::abs(Complex(p.determinant())) < 1e-12);  // rank one for d=2
  }
}

TEST_CASE("center and difference") {
  TimeSeries ts;
  ts.values.resize(3, 1);
  ts.values << 1.0, 2.0, 4.0;
  TimeSeries diff = difference_lag(ts, 1);
  REQUIRE(diff.n() == 2);
  CHECK(diff.values(0, 0) == 1.0);
  CHECK(diff.values(1, 0) == 2.0);
  CHECK_THROWS_AS(difference_lag(ts, 3), std::domain_error);

  TimeSeries cts = ts;
  const Vector means = center_series(cts);
  CHECK(means[0] == doctest::Approx(7.0 / 3));
  CHECK(std::abs(cts.values.col(0).sum()) < 1e-12);

  // periodic series with period = lag differences to zero
  TimeSeries per;
  per.values.resize(9, 1);
  for (int t = 0; t < 9; ++t) per.values(t, 0) = (t % 3 == 0) ? 5.0 : -1.0;
  CHECK(difference_lag(per, 3).values.cwiseAbs().maxCoeff() == 0.0);
}
