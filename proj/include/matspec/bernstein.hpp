#pragma once

#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "matspec/gamma_process.hpp"
#include "matspec/hpd.hpp"

namespace matspec {

struct BasisConfig {
  double xi_l = 0.1;   // truncation of the Beta basis; 0 < xi_l < xi_r < 1
  double xi_r = 0.9;
  int k_max = 500;
  double degree_prior_c = 0.01;  // p(k) proportional to exp(-c k log k)

  bool plain() const { return xi_l == 0.0 && xi_r == 1.0; }
};

// Truncated/dilated Beta(j, k-j+1) basis: b(xi_l + x (xi_r - xi_l) | j, k-j+1).
// Log-space evaluation so k up to 500 stays finite.
inline double beta_basis(double x, int j, int k, const BasisConfig& cfg) {
  if (j < 1 || j > k) throw std::domain_error("beta_basis: j out of range");
  const double y = cfg.xi_l + x * (cfg.xi_r - cfg.xi_l);
  const double lognorm = std::lgamma(k + 1.0) - std::lgamma(static_cast<double>(j)) - std::lgamma(k - j + 1.0);
  // Boundary conventions for the plain basis: 0^0 = 1.
  double logpow = 0.0;
  if (j > 1) {
    if (y <= 0.0) return 0.0;
    logpow += (j - 1) * std::log(y);
  }
  if (k - j > 0) {
    if (y >= 1.0) return 0.0;
    logpow += (k - j) * std::log1p(-y);
  }
  return std::exp(lognorm + logpow);
}

// Half-open-left intervals I_{j,k} = ((j-1) pi / k, j pi / k]; x = 0 goes to j = 1.
inline int bernstein_bin(double x, int k) {
  const int j = static_cast<int>(std::ceil(x * k / std::numbers::pi));
  return std::clamp(j, 1, k);
}

struct BernsteinState {
  int k = 1;
  ProcessAtoms atoms;

  nlohmann::json to_json() const { return {{"k", k}, {"atoms", atoms.to_json()}}; }
  static BernsteinState from_json(const nlohmann::json& j) {
    return {j.at("k").get<int>(), ProcessAtoms::from_json(j.at("atoms"))};
  }
};

// Normalized log p(k) on {1, ..., k_max}, computed once per config.
class DegreePrior {
public:
  explicit DegreePrior(const BasisConfig& cfg) : logp_(cfg.k_max) {
    double mx = -std::numeric_limits<double>::infinity();
    for (int k = 1; k <= cfg.k_max; ++k) {
      logp_[k - 1] = -cfg.degree_prior_c * k * std::log(static_cast<double>(k));
      mx = std::max(mx, logp_[k - 1]);
    }
    double z = 0.0;
    for (double& v : logp_) z += std::exp(v - mx);
    const double logz = mx + std::log(z);
    for (double& v : logp_) v -= logz;
  }
  double operator()(int k) const {
    if (k < 1 || k > static_cast<int>(logp_.size())) return -std::numeric_limits<double>::infinity();
    return logp_[k - 1];
  }

private:
  std::vector<double> logp_;
};

// Per-degree basis matrices on a fixed grid, built on first use. Owned by one
// chain; concurrent chains each hold their own cache.
class BasisCache {
public:
  BasisCache(std::vector<double> omegas, BasisConfig cfg) : omegas_(std::move(omegas)), cfg_(cfg) {}

  // k x G matrix of b(omega/pi | j, k-j+1).
  const RealMatrix& basis(int k) {
    auto it = cache_.find(k);
    if (it != cache_.end()) return it->second;
    RealMatrix b(k, omegas_.size());
    for (int j = 1; j <= k; ++j)
      for (std::size_t g = 0; g < omegas_.size(); ++g)
        b(j - 1, g) = beta_basis(omegas_[g] / std::numbers::pi, j, k, cfg_);
    return cache_.emplace(k, std::move(b)).first->second;
  }
  const std::vector<double>& grid() const { return omegas_; }
  const BasisConfig& config() const { return cfg_; }

private:
  std::vector<double> omegas_;
  BasisConfig cfg_;
  std::map<int, RealMatrix> cache_;
};

// f(omega_g) = sum_j Phi(I_{j,k}) b(omega_g/pi | j, k-j+1) for every grid point.
inline std::vector<Matrix> eval_spectral_density(const BernsteinState& state, BasisCache& cache) {
  const int d = state.atoms.atoms.empty() ? 1 : static_cast<int>(state.atoms.atoms.front().u.rows());
  const int k = state.k;
  const auto& b = cache.basis(k);
  const int g = static_cast<int>(cache.grid().size());
  // Weights flattened to (d^2) x k, separately for real and imaginary parts,
  // so the grid evaluation is two real GEMMs.
  RealMatrix wre = RealMatrix::Zero(d * d, k), wim = RealMatrix::Zero(d * d, k);
  for (const auto& a : state.atoms.atoms) {
    const int j = bernstein_bin(a.x, k) - 1;
    for (int c = 0; c < d; ++c)
      for (int r = 0; r < d; ++r) {
        wre(c * d + r, j) += a.r * a.u(r, c).real();
        wim(c * d + r, j) += a.r * a.u(r, c).imag();
      }
  }
  const RealMatrix fre = wre * b, fim = wim * b;
  std::vector<Matrix> out(g, Matrix(d, d));
  for (int i = 0; i < g; ++i)
    for (int c = 0; c < d; ++c)
      for (int r = 0; r < d; ++r) out[i](r, c) = Complex(fre(c * d + r, i), fim(c * d + r, i));
  return out;
}

inline std::vector<Matrix> eval_spectral_density(const BernsteinState& state, const BasisConfig& cfg,
                                                 const std::vector<double>& omegas) {
  BasisCache cache(omegas, cfg);
  return eval_spectral_density(state, cache);
}

// Log prior density of Theta_f under the truncated series representation.
// States outside the image of the transform (tail masses w_l not strictly
// increasing) get -inf so MH rejects them.
inline double log_prior(const BernsteinState& state, const GammaProcessSpec& spec, const DegreePrior& degree_prior) {
  double lp = degree_prior(state.k);
  if (!std::isfinite(lp)) return -std::numeric_limits<double>::infinity();
  const double ca = spec.total_mass;
  double w_prev = 0.0;
  for (const auto& a : state.atoms.atoms) {
    if (!(a.r > 0.0) || a.x < 0.0 || a.x > std::numbers::pi) return -std::numeric_limits<double>::infinity();
    const double beta = spec.beta(a.x, a.u);
    const double w = levy_tail(a.r, ca, beta);
    if (!(w > w_prev)) return -std::numeric_limits<double>::infinity();
    w_prev = w;
    lp += std::log(ca) - std::log(a.r) - beta * a.r + spec.log_alpha_density(a.x, a.u) - std::log(ca);
  }
  lp -= w_prev;  // sum of the v_l telescopes to w_L
  return lp;
}

// Bernstein approximation f_k of a known density: W_j = int_{I_{j,k}} f0, by
// adaptive Simpson per interval. Used as a test oracle for approximation
// quality.
namespace detail {
template <class F>
inline Matrix adaptive_simpson(const F& f, double a, double b, const Matrix& fa, const Matrix& fm, const Matrix& fb,
                               double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const Matrix flm = f(lm), frm = f(rm);
  const Matrix whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  const Matrix left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const Matrix right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const Matrix err = left + right - whole;
  if (depth <= 0 || err.cwiseAbs().maxCoeff() < 15.0 * tol) return left + right + err / 15.0;
  return adaptive_simpson(f, a, m, fa, flm, fm, 0.5 * tol, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, 0.5 * tol, depth - 1);
}
}  // namespace detail

template <class F>
inline std::vector<Matrix> bernstein_approximation_weights(const F& f0, int k, double tol = 1e-10) {
  std::vector<Matrix> w;
  w.reserve(k);
  for (int j = 1; j <= k; ++j) {
    const double a = (j - 1) * std::numbers::pi / k, b = j * std::numbers::pi / k;
    const Matrix fa = f0(a), fb = f0(b), fm = f0(0.5 * (a + b));
    w.push_back(detail::adaptive_simpson(f0, a, b, fa, fm, fb, tol, 30));
  }
  return w;
}

template <class F>
inline Matrix bernstein_approximation_eval(const F& f0, int k, double omega, const BasisConfig& cfg,
                                           const std::vector<Matrix>& weights) {
  Matrix out = Matrix::Zero(weights.front().rows(), weights.front().cols());
  for (int j = 1; j <= k; ++j) out += weights[j - 1] * beta_basis(omega / std::numbers::pi, j, k, cfg);
  return out;
}

}  // namespace matspec
