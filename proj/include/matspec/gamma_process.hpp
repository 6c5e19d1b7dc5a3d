#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

#include <unsupported/Eigen/KroneckerProduct>

#include "matspec/expint.hpp"
#include "matspec/hpd.hpp"
#include "matspec/hypersphere.hpp"
#include "matspec/rng.hpp"

namespace matspec {

// Levy tail mass rho([r, inf) | a, b) = a * E1(b r).
inline double levy_tail(double r, double a, double b) {
  if (!(r > 0.0) || !(a > 0.0) || !(b > 0.0)) throw std::domain_error("levy_tail: inputs must be positive");
  return a * expint_e1(b * r);
}

// Same tail mass with t = log(b r); usable where b r underflows a double.
inline double levy_tail_log(double t, double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw std::domain_error("levy_tail_log: a, b must be positive");
  return a * expint_e1_of_log(t);
}

// Solves a * E1(b r) = w for t = log(b r). E1 is a strictly decreasing
// bijection (0,inf) -> (0,inf), so the root is unique. Bracketing + bisection,
// then Newton polish in t (d/dt a E1(e^t) = -a exp(-e^t)).
inline double inverse_levy_log(double w, double a, double b) {
  if (!(w > 0.0) || !(a > 0.0) || !(b > 0.0)) throw std::domain_error("inverse_levy: inputs must be positive");
  const double target = w / a;  // E1(e^t) = target
  // Asymptotics: E1(x) ~ -ln x - gamma for x -> 0, E1(x) ~ e^{-x}/x for large x.
  double lo = -target - kEulerGamma - 1.0;  // E1(e^lo) > target
  double hi = std::max(1.0, std::log(target > 1e-300 ? 1.0 / target : 1e300) + 5.0);
  while (expint_e1_of_log(hi) > target) hi += 5.0;
  while (expint_e1_of_log(lo) < target) lo -= 5.0;
  for (int it = 0; it < 80 && hi - lo > 1e-15 * (1.0 + std::abs(lo)); ++it) {
    const double mid = 0.5 * (lo + hi);
    (expint_e1_of_log(mid) > target ? lo : hi) = mid;
  }
  double t = 0.5 * (lo + hi);
  for (int it = 0; it < 4; ++it) {
    const double ex = std::exp(t);
    const double g = expint_e1_of_log(t) - target;
    const double dg = -std::exp(-ex);  // derivative w.r.t. t
    if (dg == 0.0) break;
    const double step = g / dg;
    if (!std::isfinite(step)) break;
    t -= std::clamp(step, -1.0, 1.0);
  }
  return t;
}

// r = rho^-(w | a, b). Clamped below at the smallest positive normal double
// so that extreme w never produces an exact zero.
inline double inverse_levy(double w, double a, double b) {
  const double t = inverse_levy_log(w, a, b);
  const double r = std::exp(t) / b;
  return std::max(r, std::numeric_limits<double>::min());
}

struct Atom {
  double x = 0.0;  // location in [0, pi]
  double r = 0.0;  // radial part, > 0
  Matrix u;        // unit-trace Hpsd spherical part
};

struct ProcessAtoms {
  std::vector<Atom> atoms;

  std::size_t size() const { return atoms.size(); }
  nlohmann::json to_json() const {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& a : atoms) arr.push_back({{"x", a.x}, {"r", a.r}, {"U", matrix_to_json(a.u)}});
    return arr;
  }
  static ProcessAtoms from_json(const nlohmann::json& j) {
    ProcessAtoms p;
    for (const auto& e : j) p.atoms.push_back({e.at("x").get<double>(), e.at("r").get<double>(), matrix_from_json(e.at("U"))});
    return p;
  }
};

// Parameters of GP_{dxd}(alpha, beta) on [0, pi]. The integrability condition
// on the mean measure is a caller obligation (see integrability_smoke_test).
struct GammaProcessSpec {
  int d = 1;
  double total_mass = 0.0;  // C_alpha = integral of the alpha density
  double beta0 = 0.0;       // lower bound on beta
  // log of the alpha density g(x, U) w.r.t. dx dU.
  std::function<double(double, const Matrix&)> log_alpha_density;
  std::function<double(double, const Matrix&)> beta;
  // iid draws from alpha* = alpha / C_alpha.
  std::function<std::pair<double, Matrix>(Rng&)> alpha_star_sampler;
  bool homogeneous = true;
};

// Default prior: alpha(x, dU) = 2 dU on [0,pi] x sphere and a
// constant rate beta0. C_alpha = 2 pi Vol(sphere).
inline GammaProcessSpec uniform_gamma_process_spec(int d, double beta0, double alpha_const = 2.0) {
  GammaProcessSpec s;
  s.d = d;
  s.total_mass = alpha_const * std::numbers::pi * unit_trace_hpsd_volume(d);
  s.beta0 = beta0;
  const double logg = std::log(alpha_const);
  s.log_alpha_density = [logg](double, const Matrix&) { return logg; };
  s.beta = [beta0](double, const Matrix&) { return beta0; };
  s.alpha_star_sampler = [d](Rng& rng) {
    return std::make_pair(rng.uniform(0.0, std::numbers::pi), uniform_unit_trace_hpd(d, rng));
  };
  return s;
}

// Lower-triangular complex Bartlett factor of Wishart_d(eta, I): T_ii^2 ~
// Gamma(eta - i, 1), off-diagonal entries standard complex normal.
inline Matrix complex_wishart_identity(int d, double eta, Rng& rng) {
  Matrix t = Matrix::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    t(i, i) = std::sqrt(rng.gamma(eta - i, 1.0));
    for (int j = 0; j < i; ++j) t(i, j) = std::sqrt(0.5) * Complex(rng.normal(), rng.normal());
  }
  return t * t.adjoint();
}

struct AGammaParams {
  double eta = 0.0;    // > d - 1
  double omega = 0.0;  // > 0
  Matrix sigma;        // Hpd
};

// Spec of the process whose total increment over [0, pi] is AGamma(eta, omega,
// Sigma): alpha = omega * alpha*_{eta,Sigma} spread uniformly over x, and
// beta(U) = tr(Sigma^{-1} U). alpha* is sampled as W/tr(W) with W ~ complex
// Wishart_d(eta, Sigma).
inline GammaProcessSpec agamma_process_spec(const AGammaParams& p) {
  const int d = static_cast<int>(p.sigma.rows());
  if (!(p.eta > d - 1) || !(p.omega > 0.0)) throw std::domain_error("agamma: parameter bounds violated");
  GammaProcessSpec s;
  s.d = d;
  s.total_mass = p.omega;
  Eigen::LLT<Matrix> llt(p.sigma);
  if (llt.info() != Eigen::Success) throw std::domain_error("agamma: Sigma not Hpd");
  const Matrix sig_chol = llt.matrixL();
  const Matrix sig_inv = Matrix(p.sigma).inverse();
  Eigen::SelfAdjointEigenSolver<Matrix> es(p.sigma, Eigen::EigenvaluesOnly);
  s.beta0 = 1.0 / es.eigenvalues().maxCoeff();
  s.homogeneous = false;
  s.beta = [sig_inv](double, const Matrix& u) { return (sig_inv * u).trace().real(); };
  const double eta = p.eta, omega = p.omega;
  // log alpha density w.r.t. dx dU, up to the exact normalization of
  // alpha*_{eta,Sigma}; only used where a density is required, with constants
  // consistent between sampler and density (d eta terms cached).
  const double log_det_sigma = std::log(Matrix(p.sigma).determinant().real());
  double log_cgamma_d = 0.25 * d * (d - 1) * std::log(std::numbers::pi);
  for (int k = 0; k < d; ++k) log_cgamma_d += std::lgamma(eta - k);
  const double log_norm = std::lgamma(d * eta) - log_cgamma_d;
  s.log_alpha_density = [=](double, const Matrix& u) {
    Eigen::SelfAdjointEigenSolver<Matrix> eu(u, Eigen::EigenvaluesOnly);
    double logdet_u = 0.0;
    for (int i = 0; i < d; ++i) logdet_u += std::log(std::max(eu.eigenvalues()(i), 1e-300));
    const double tr = (sig_inv * u).trace().real();
    return std::log(omega / std::numbers::pi) + log_norm - eta * log_det_sigma - d * eta * std::log(tr) +
           (eta - d) * logdet_u;
  };
  s.alpha_star_sampler = [d, eta, sig_chol](Rng& rng) {
    const Matrix w0 = complex_wishart_identity(d, eta, rng);
    Matrix w = sig_chol * w0 * sig_chol.adjoint();
    const double x = rng.uniform(0.0, std::numbers::pi);
    return std::make_pair(x, hermitian_part(w / w.trace().real()));
  };
  return s;
}

// Truncated inverse-Levy series draw: first L atoms in nonincreasing radial
// order (for homogeneous beta).
inline ProcessAtoms sample_process(const GammaProcessSpec& spec, int L, Rng& rng) {
  if (L < 1) throw std::domain_error("sample_process: L must be >= 1");
  ProcessAtoms out;
  out.atoms.reserve(L);
  double w = 0.0;
  for (int j = 0; j < L; ++j) {
    auto [x, u] = spec.alpha_star_sampler(rng);
    w += rng.exponential();
    const double r = inverse_levy(w, spec.total_mass, spec.beta(x, u));
    out.atoms.push_back({x, r, std::move(u)});
  }
  return out;
}

// Phi([lo, hi)) = sum of r U over atoms with x in [lo, hi).
inline Matrix increment(const ProcessAtoms& atoms, double lo, double hi, int d) {
  if (lo > hi) throw std::domain_error("increment: requires lo <= hi");
  Matrix sum = Matrix::Zero(d, d);
  for (const auto& a : atoms.atoms)
    if (a.x >= lo && a.x < hi) sum += a.r * a.u;
  return sum;
}

struct AGammaMoments {
  Matrix mean;  // (omega/d) Sigma
  Matrix cov;   // d^2 x d^2, omega/(d(eta d + 1)) (eta I + H)(Sigma (x) Sigma)
};

inline AGammaMoments agamma_moments(const AGammaParams& p) {
  const int d = static_cast<int>(p.sigma.rows());
  if (!(p.eta > d - 1) || !(p.omega > 0.0)) throw std::domain_error("agamma_moments: parameter bounds violated");
  AGammaMoments m;
  m.mean = (p.omega / d) * p.sigma;
  // Second Poisson cumulant of the series representation, with vec column-major:
  //   Cov(X_ij, X_kl) = omega / (d (eta d + 1)) * (eta Sigma_ij conj(Sigma_kl)
  //                                                + Sigma_ik conj(Sigma_jl)).
  Eigen::Map<const Eigen::VectorXcd> vec_sigma(p.sigma.data(), d * d);
  m.cov = p.omega / (d * (p.eta * d + 1.0)) *
          (p.eta * (vec_sigma * vec_sigma.adjoint()) +
           Eigen::kroneckerProduct(p.sigma.conjugate(), p.sigma).eval());
  return m;
}

// Finite Monte-Carlo estimate of int min(1, r) d nu for a spec; a smoke test
// for the integrability requirement, not a proof.
inline double integrability_smoke_test(const GammaProcessSpec& spec, int n_samples, Rng& rng) {
  // nu(dx,dU,dr) = exp(-beta r)/r dr alpha(dx,dU); integrate min(1,r) over r
  // analytically given (x,U): int_0^1 e^{-br} dr + int_1^inf e^{-br}/r dr
  // = (1-e^{-b})/b + E1(b).
  double acc = 0.0;
  for (int i = 0; i < n_samples; ++i) {
    auto [x, u] = spec.alpha_star_sampler(rng);
    const double b = spec.beta(x, u);
    acc += (1.0 - std::exp(-b)) / b + expint_e1(b);
  }
  return spec.total_mass * acc / n_samples;
}

}  // namespace matspec
