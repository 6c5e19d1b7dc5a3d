#include <doctest.h>

#include <matspec/varma.hpp>

#include "helpers.hpp"

using namespace matspec;

namespace {

VarmaModel var2_model() {
  VarmaModel m;
  m.ar = {RealMatrix(2, 2), RealMatrix(2, 2)};
  m.ar[0] << 0.5, 0.0, 0.0, -0.3;
  m.ar[1] << 0.0, 0.0, 0.0, -0.5;
  m.sigma = RealMatrix(2, 2);
  m.sigma << 1.0, 0.9, 0.9, 1.0;
  return m;
}

VarmaModel vma1_model() {
  VarmaModel m;
  m.ma = {RealMatrix(2, 2)};
  m.ma[0] << -0.75, 0.5, 0.5, 0.75;
  m.sigma = RealMatrix(2, 2);
  m.sigma << 1.0, 0.5, 0.5, 1.0;
  return m;
}

}  // namespace

TEST_CASE("model json round trip") {
  VarmaModel m = var2_model();
  m.innovations = Innovations::student_t4;
  const VarmaModel back = VarmaModel::from_json(m.to_json());
  CHECK(back.p() == 2);
  CHECK(back.q() == 0);
  CHECK((back.ar[1] - m.ar[1]).cwiseAbs().maxCoeff() == 0.0);
  CHECK((back.sigma - m.sigma).cwiseAbs().maxCoeff() == 0.0);
  CHECK(back.innovations == Innovations::student_t4);
  CHECK(innovations_from_name(innovations_name(Innovations::centered_exponential)) ==
        Innovations::centered_exponential);
  CHECK_THROWS_AS(innovations_from_name("cauchy"), std::domain_error);
}

TEST_CASE("simulation is deterministic and respects the model") {
  Rng a(601), b(601);
  const VarmaModel m = var2_model();
  const TimeSeries t1 = simulate_varma(m, 128, a);
  const TimeSeries t2 = simulate_varma(m, 128, b);
  CHECK((t1.values - t2.values).cwiseAbs().maxCoeff() == 0.0);
  CHECK(t1.n() == 128);
  CHECK(t1.d() == 2);

  VarmaModel null_model;
  null_model.sigma = RealMatrix::Zero(2, 2);
  Rng c(7);
  CHECK(simulate_varma(null_model, 50, c).values.cwiseAbs().maxCoeff() == 0.0);

  VarmaModel unstable;
  unstable.ar = {RealMatrix(1, 1)};
  unstable.ar[0] << 1.01;
  unstable.sigma = RealMatrix::Identity(1, 1);
  Rng d(8);
  CHECK_THROWS_AS(simulate_varma(unstable, 10, d), std::domain_error);
}

TEST_CASE("all innovation families have unit-variance margins") {
  const int n = 200000;
  for (auto fam : {Innovations::gaussian, Innovations::student_t4, Innovations::centered_exponential}) {
    VarmaModel m;
    m.sigma = RealMatrix(2, 2);
    m.sigma << 1.0, 0.5, 0.5, 1.0;
    m.innovations = fam;
    Rng rng(613);
    const TimeSeries ts = simulate_varma(m, n, rng);
    for (int c = 0; c < 2; ++c) {
      const double mean = ts.values.col(c).mean();
      const double var = (ts.values.col(c).array() - mean).square().sum() / (n - 1);
      CHECK(std::abs(mean) < 0.03);
      CHECK(std::abs(var - 1.0) < 0.05);
    }
    const double cov = ((ts.values.col(0).array() - ts.values.col(0).mean()) *
                        (ts.values.col(1).array() - ts.values.col(1).mean()))
                           .sum() /
                       (n - 1);
    CHECK(std::abs(cov - 0.5) < 0.05);
  }
}

TEST_CASE("spectral density is Hpd and integrates to the variance") {
  const VarmaModel m = var2_model();
  for (double w : {0.0, 0.3, 1.5, 3.0}) CHECK(is_hpd(varma_spectral_density(m, w)));

  // white noise: f = Sigma / (2 pi) flat
  VarmaModel wn;
  wn.sigma = RealMatrix(2, 2);
  wn.sigma << 2.0, 0.7, 0.7, 1.0;
  const Matrix f = varma_spectral_density(wn, 1.234);
  CHECK((f.real() * 2.0 * std::numbers::pi - wn.sigma).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(f.imag().cwiseAbs().maxCoeff() < 1e-15);

  // VMA(1) closed form at omega: (I + M e^{-iw}) Sigma (I + M e^{-iw})^* / 2pi
  const VarmaModel vma = vma1_model();
  const double w0 = 0.77;
  const Matrix c = Matrix::Identity(2, 2) + vma.ma[0].cast<Complex>() * std::exp(Complex(0.0, -w0));
  const Matrix want = c * vma.sigma.cast<Complex>() * c.adjoint() / (2.0 * std::numbers::pi);
  CHECK((varma_spectral_density(vma, w0) - want).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("yule-walker autocovariances: long-simulation cross-check") {
  const VarmaModel m = var2_model();
  const auto g = var_autocovariances(m.ar, m.sigma, 3);
  CHECK((g[0] - g[0].transpose()).cwiseAbs().maxCoeff() < 1e-10);
  Rng rng(617);
  const int n = 400000;
  const TimeSeries ts = simulate_varma(m, n, rng);
  for (int h = 0; h <= 2; ++h) {
    RealMatrix emp = RealMatrix::Zero(2, 2);
    for (int t = h; t < n; ++t) emp += ts.values.row(t).transpose() * ts.values.row(t - h);
    emp /= static_cast<double>(n - h);
    CHECK((emp - g[h]).cwiseAbs().maxCoeff() < 0.05);
  }
}

TEST_CASE("AIC selects the right order in the majority of replicates") {
  const VarmaModel m = var2_model();
  int correct = 0, small = 0;
  for (int rep = 0; rep < 20; ++rep) {
    Rng rng(700 + rep);
    const TimeSeries ts = simulate_varma(m, 1024, rng);
    if (select_order_aic(ts, 5) == 2) ++correct;

    VarmaModel wn;
    wn.sigma = RealMatrix::Identity(2, 2);
    Rng rng2(800 + rep);
    const TimeSeries noise = simulate_varma(wn, 1024, rng2);
    if (select_order_aic(noise, 5) <= 1) ++small;
  }
  CHECK(correct > 10);
  CHECK(small > 10);
}

TEST_CASE("gibbs var fit recovers coefficients and concentrates") {
  VarmaModel m;
  m.ar = {RealMatrix(2, 2)};
  m.ar[0] << 0.5, 0.1, -0.2, 0.3;
  m.sigma = RealMatrix(2, 2);
  m.sigma << 1.0, 0.3, 0.3, 1.5;

  VarFitConfig cfg;
  cfg.total_iterations = 3000;
  cfg.burn_in = 1000;
  cfg.thin = 2;

  auto fit_once = [&](int n, double& sd_out) {
    Rng rng(909);
    const TimeSeries ts = simulate_varma(m, n, rng);
    Rng chain(910);
    const VarPosterior post = fit_var(ts, 1, cfg, chain);
    std::vector<double> b00;
    for (const auto& draw : post.coef_draws) b00.push_back(draw[0](0, 0));
    sd_out = std::sqrt(oracle::variance(b00));
    return oracle::mean(b00);
  };
  double sd_small = 0.0, sd_big = 0.0;
  const double mean_small = fit_once(512, sd_small);
  fit_once(2048, sd_big);
  CHECK(std::abs(mean_small - 0.5) < 0.2);
  CHECK(sd_big < sd_small);  // posterior concentrates with n
  CHECK(sd_big < 0.05);
}
