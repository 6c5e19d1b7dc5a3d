#include <doctest.h>

#include <matspec/gamma_process.hpp>

#include "helpers.hpp"

using namespace matspec;

TEST_CASE("sampled radii are strictly decreasing and atoms lie in range") {
  Rng rng(211);
  const auto spec = uniform_gamma_process_spec(2, 1.0);
  const ProcessAtoms atoms = sample_process(spec, 50, rng);
  REQUIRE(atoms.size() == 50);
  for (std::size_t l = 0; l < atoms.size(); ++l) {
    const auto& a = atoms.atoms[l];
    CHECK(a.x >= 0.0);
    CHECK(a.x <= std::numbers::pi);
    CHECK(a.r > 0.0);
    if (l > 0) CHECK(a.r < atoms.atoms[l - 1].r);
    CHECK(a.u.trace().real() == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("Campbell formula: homogeneous mean of tr Phi([0,pi]) is C_alpha/beta0") {
  Rng rng(223);
  const double beta0 = 1.0;
  const auto spec = uniform_gamma_process_spec(2, beta0);
  const int n_draws = 10000, L = 40;
  std::vector<double> traces(n_draws);
  for (int i = 0; i < n_draws; ++i) {
    const ProcessAtoms atoms = sample_process(spec, L, rng);
    traces[i] = increment(atoms, 0.0, std::numbers::pi + 1e-12, spec.d).trace().real();
  }
  const double want = spec.total_mass / beta0;
  const double se = std::sqrt(oracle::variance(traces) / n_draws);
  CHECK(std::abs(oracle::mean(traces) - want) < 3.0 * se);
}

TEST_CASE("increments add over a partition and respect windows") {
  Rng rng(227);
  const auto spec = uniform_gamma_process_spec(2, 0.5);
  const ProcessAtoms atoms = sample_process(spec, 30, rng);
  const double pi = std::numbers::pi;
  const Matrix total = increment(atoms, 0.0, pi + 1e-12, spec.d);
  const Matrix left = increment(atoms, 0.0, pi / 3, spec.d);
  const Matrix mid = increment(atoms, pi / 3, 2 * pi / 3, spec.d);
  const Matrix right = increment(atoms, 2 * pi / 3, pi + 1e-12, spec.d);
  CHECK((left + mid + right - total).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(is_hpsd(total));
  CHECK(increment(atoms, 0.4, 0.4, spec.d).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("AGamma total increment matches closed-form moments") {
  Rng rng(229);
  AGammaParams p;
  p.eta = 3.0;
  p.omega = 4.0;
  p.sigma = Matrix(2, 2);
  p.sigma << Complex(1.0, 0.0), Complex(0.3, 0.2), Complex(0.3, -0.2), Complex(2.0, 0.0);
  const auto spec = agamma_process_spec(p);
  const auto mom = agamma_moments(p);
  const int d = 2, n_draws = 10000, L = 60;

  // E X = (omega/d) Sigma.
  CHECK((mom.mean - (p.omega / d) * p.sigma).cwiseAbs().maxCoeff() < 1e-12);

  std::vector<std::vector<double>> comps(8, std::vector<double>(n_draws));
  for (int i = 0; i < n_draws; ++i) {
    const ProcessAtoms atoms = sample_process(spec, L, rng);
    const Matrix x = increment(atoms, 0.0, std::numbers::pi + 1e-12, d);
    int c = 0;
    for (int r = 0; r < d; ++r)
      for (int s = 0; s < d; ++s) {
        comps[c++][i] = x(r, s).real();
        comps[c++][i] = x(r, s).imag();
      }
  }
  int c = 0;
  for (int r = 0; r < d; ++r)
    for (int s = 0; s < d; ++s) {
      for (bool imag : {false, true}) {
        const double want = imag ? mom.mean(r, s).imag() : mom.mean(r, s).real();
        const auto& xs = comps[c++];
        const double se = std::sqrt(oracle::variance(xs) / n_draws);
        if (r == s && imag) {
          CHECK(std::abs(oracle::mean(xs)) < 1e-12);  // Hermitian: exactly zero
        } else {
          CHECK(std::abs(oracle::mean(xs) - want) < 4.0 * se);
        }
      }
    }

  // Diagonal of the covariance: Cov(X_rs, X_rs) from the Kronecker form.
  // Var of Re X_01 + Var of Im X_01 = Cov(X_01, X_01) (complex covariance).
  const int idx = 0 * d + 1;  // vec index of entry (0, 1), column-major (r=0, s=1) -> s * d + r = 2
  const int vec_idx = 1 * d + 0;
  const double complex_var = mom.cov(vec_idx, vec_idx).real();
  const double sim_var = oracle::variance(comps[2 * (0 * d + 1)]) + oracle::variance(comps[2 * (0 * d + 1) + 1]);
  CHECK(sim_var == doctest::Approx(complex_var).epsilon(0.1));
  (void)idx;
}

TEST_CASE("integrability smoke test is finite and positive") {
  Rng rng(233);
  const auto spec = uniform_gamma_process_spec(2, 0.7);
  const double v = integrability_smoke_test(spec, 2000, rng);
  CHECK(std::isfinite(v));
  CHECK(v > 0.0);
}

TEST_CASE("process atoms serialize losslessly") {
  Rng rng(239);
  const auto spec = uniform_gamma_process_spec(2, 1.0);
  const ProcessAtoms atoms = sample_process(spec, 5, rng);
  const ProcessAtoms back = ProcessAtoms::from_json(atoms.to_json());
  REQUIRE(back.size() == atoms.size());
  for (std::size_t l = 0; l < atoms.size(); ++l) {
    CHECK(back.atoms[l].x == atoms.atoms[l].x);
    CHECK(back.atoms[l].r == atoms.atoms[l].r);
    CHECK((back.atoms[l].u - atoms.atoms[l].u).cwiseAbs().maxCoeff() == 0.0);
  }
}
