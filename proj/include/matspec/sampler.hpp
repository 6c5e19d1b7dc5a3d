#pragma once

#include <cmath>
#include <fstream>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <vector>

#include "matspec/bernstein.hpp"
#include "matspec/fourier.hpp"
#include "matspec/gamma_process.hpp"
#include "matspec/hypersphere.hpp"
#include "matspec/whittle.hpp"

namespace matspec {

struct SamplerConfig {
  int total_iterations = 80000;
  int burn_in = 30000;
  int thin = 5;
  int truncation = 0;  // L; 0 means max(20, ceil(n^{1/3}))
  double target_acceptance = 0.44;
  int adaptation_batch = 50;
  double cauchy_scale = 1.0;  // degree proposal
  std::uint64_t seed = 0;
  bool prior_only = false;  // likelihood stubbed to 1
  int checkpoint_every = 0;
  std::string checkpoint_path;

  void validate() const {
    if (burn_in >= total_iterations || thin < 1 || adaptation_batch < 1)
      throw std::domain_error("SamplerConfig: invalid chain lengths");
  }
};

struct AcceptanceReport {
  double degree = 0.0;
  double radial = 0.0;
  double location = 0.0;
  double weight = 0.0;
};

struct PosteriorDraws {
  std::vector<BernsteinState> states;
  std::vector<std::vector<Matrix>> spectra;  // per draw, per grid frequency
  std::vector<double> grid;
  std::vector<double> log_posterior;
  AcceptanceReport acceptance;
};

inline int default_truncation(int n) {
  return std::max(20, static_cast<int>(std::ceil(std::cbrt(static_cast<double>(n)))));
}

namespace detail {

struct BlockCounter {
  long accepted = 0, proposed = 0;
  double rate() const { return proposed > 0 ? static_cast<double>(accepted) / proposed : 0.0; }
};

struct BatchCounter {
  long accepted = 0, proposed = 0;
};

}  // namespace detail

// Metropolis-within-Gibbs sampler for Theta_f = (k, x_l, U_l, r_l) under the
// Bernstein-Hpd-Gamma prior and the Whittle likelihood. Update order within an
// iteration is fixed (k, then all r_l, then all x_l, then all U_l) for
// reproducibility.
class GibbsSampler {
public:
  GibbsSampler(const FourierCoefficients& fc, const GammaProcessSpec& spec, const BasisConfig& cfg,
               const SamplerConfig& scfg)
      : fc_(fc),
        spec_(spec),
        cfg_(cfg),
        scfg_(scfg),
        degree_prior_(cfg),
        cache_(make_grid(fc), cfg),
        truncation_(scfg.truncation > 0 ? scfg.truncation : default_truncation(fc.n)) {
    scfg_.validate();
  }

  PosteriorDraws run(Rng& rng) {
    init_state(rng);
    log_prior_cur_ = log_prior(state_, spec_, degree_prior_);
    log_lik_cur_ = log_likelihood(state_);
    if (!std::isfinite(log_prior_cur_ + log_lik_cur_))
      throw std::runtime_error("sampler: non-finite log posterior at the initial state");

    PosteriorDraws draws;
    draws.grid = cache_.grid();
    std::ofstream checkpoint;
    if (scfg_.checkpoint_every > 0 && !scfg_.checkpoint_path.empty()) checkpoint.open(scfg_.checkpoint_path);

    const int L = truncation_;
    sigma_log_r_.assign(L, 1.0);
    delta_angle_.assign(L, 0.1);
    radial_batch_.assign(L, {0, 0});
    weight_batch_.assign(L, {0, 0});

    for (int it = 0; it < scfg_.total_iterations; ++it) {
      update_degree(rng);
      for (int l = 0; l < L; ++l) update_radial(l, rng);
      for (int l = 0; l < L; ++l) update_location(l, rng);
      if (spec_.d > 1)
        for (int l = 0; l < L; ++l) update_weight_matrix(l, rng);

      const bool adapting = it < scfg_.burn_in;
      if (adapting && (it + 1) % scfg_.adaptation_batch == 0) adapt((it + 1) / scfg_.adaptation_batch);
      if (checkpoint.is_open() && (it + 1) % scfg_.checkpoint_every == 0)
        checkpoint << state_.to_json().dump() << "\n";
      if (it >= scfg_.burn_in && (it - scfg_.burn_in) % scfg_.thin == 0) {
        draws.states.push_back(state_);
        draws.spectra.push_back(eval_spectral_density(state_, cache_));
        draws.log_posterior.push_back(log_prior_cur_ + log_lik_cur_);
      }
    }
    draws.acceptance = {degree_ctr_.rate(), radial_ctr_.rate(), location_ctr_.rate(), weight_ctr_.rate()};
    return draws;
  }

  const std::vector<double>& grid() const { return cache_.grid(); }

private:
  static std::vector<double> make_grid(const FourierCoefficients& fc) {
    std::vector<double> g;
    for (int j = 1; j <= fc.n_interior(); ++j) g.push_back(fc.omega(j));
    return g;
  }

  void init_state(Rng& rng) {
    const int d = spec_.d, L = truncation_;
    state_.k = std::min(100, cfg_.k_max);
    state_.atoms.atoms.clear();
    phis_.clear();
    Vector mid(n_angles(d));
    for (int j = 0; j < mid.size(); ++j) mid[j] = 0.5 * angle_interval_length(d, j);
    double w = 0.0;
    for (int l = 0; l < L; ++l) {
      Atom a;
      a.x = rng.uniform(0.0, std::numbers::pi);
      a.u = angles_to_unit_hpd(mid, d);
      w += rng.exponential();
      a.r = inverse_levy(w, spec_.total_mass, spec_.beta(a.x, a.u));
      state_.atoms.atoms.push_back(std::move(a));
      phis_.push_back(mid);
    }
  }

  double log_likelihood(const BernsteinState& s) {
    if (scfg_.prior_only) return 0.0;
    return whittle_log_likelihood(fc_, eval_spectral_density(s, cache_));
  }

  // Generic accept/reject against log_prior + log_lik; extra_log_ratio holds
  // any proposal asymmetry correction.
  bool mh_accept(double extra_log_ratio, Rng& rng) {
    const double lp = log_prior(state_, spec_, degree_prior_);
    double ll = detail_neg_inf();
    if (std::isfinite(lp)) ll = log_likelihood(state_);
    const double log_ratio = lp + ll - log_prior_cur_ - log_lik_cur_ + extra_log_ratio;
    if (std::log(rng.uniform()) < log_ratio) {
      log_prior_cur_ = lp;
      log_lik_cur_ = ll;
      return true;
    }
    return false;
  }

  static double detail_neg_inf() { return -std::numeric_limits<double>::infinity(); }

  void update_degree(Rng& rng) {
    degree_ctr_.proposed++;
    const int k_old = state_.k;
    const int k_new = k_old + static_cast<int>(std::lround(rng.cauchy(scfg_.cauchy_scale)));
    if (k_new < 1 || k_new > cfg_.k_max) return;  // rejected outright
    state_.k = k_new;
    if (mh_accept(0.0, rng)) {
      degree_ctr_.accepted++;
    } else {
      state_.k = k_old;
    }
  }

  void update_radial(int l, Rng& rng) {
    radial_ctr_.proposed++;
    radial_batch_[l].proposed++;
    Atom& a = state_.atoms.atoms[l];
    const double r_old = a.r;
    a.r = std::exp(std::log(r_old) + sigma_log_r_[l] * rng.normal());
    // log-normal proposal asymmetry: q(r|r')/q(r'|r) = r'/r.
    if (mh_accept(std::log(a.r) - std::log(r_old), rng)) {
      radial_ctr_.accepted++;
      radial_batch_[l].accepted++;
    } else {
      a.r = r_old;
    }
  }

  void update_location(int l, Rng& rng) {
    location_ctr_.proposed++;
    Atom& a = state_.atoms.atoms[l];
    const double x_old = a.x;
    const double delta = std::numbers::pi * (l + 1) / ((l + 1) + 2.0 * std::sqrt(static_cast<double>(fc_.n)));
    double x = x_old + rng.uniform(-delta, delta);
    if (x < 0.0) x += std::numbers::pi;  // circular proposal
    if (x > std::numbers::pi) x -= std::numbers::pi;
    a.x = x;
    if (mh_accept(0.0, rng)) {
      location_ctr_.accepted++;
    } else {
      a.x = x_old;
    }
  }

  void update_weight_matrix(int l, Rng& rng) {
    weight_ctr_.proposed++;
    weight_batch_[l].proposed++;
    const int d = spec_.d;
    Vector phi = phis_[l];
    for (int j = 0; j < phi.size(); ++j) {
      const double aj = angle_interval_length(d, j);
      phi[j] += rng.uniform(-aj * delta_angle_[l], aj * delta_angle_[l]);
      if (!(phi[j] > 0.0 && phi[j] < aj)) return;  // outside the open box: reject
    }
    Atom& a = state_.atoms.atoms[l];
    const Matrix u_old = a.u;
    a.u = angles_to_unit_hpd(phi, d);
    // The prior density lives on U, the walk on phi: the ratio carries the
    // angle-space Jacobian.
    const double jac = log_jacobian_angles(phi, d) - log_jacobian_angles(phis_[l], d);
    if (mh_accept(jac, rng)) {
      weight_ctr_.accepted++;
      weight_batch_[l].accepted++;
      phis_[l] = phi;
    } else {
      a.u = u_old;
    }
  }

  void adapt(int batch_index) {
    const double step = std::min(0.01, 1.0 / std::sqrt(static_cast<double>(batch_index)));
    auto tune = [&](std::vector<detail::BatchCounter>& ctrs, std::vector<double>& scales, bool log_scale) {
      for (std::size_t l = 0; l < ctrs.size(); ++l) {
        if (ctrs[l].proposed == 0) continue;
        const double rate = static_cast<double>(ctrs[l].accepted) / ctrs[l].proposed;
        const double factor = std::exp(rate > scfg_.target_acceptance ? step : -step);
        scales[l] = log_scale ? scales[l] * factor : std::min(1.0, scales[l] * factor);
        ctrs[l] = {0, 0};
      }
    };
    tune(radial_batch_, sigma_log_r_, true);
    tune(weight_batch_, delta_angle_, false);
  }

  FourierCoefficients fc_;
  GammaProcessSpec spec_;
  BasisConfig cfg_;
  SamplerConfig scfg_;
  DegreePrior degree_prior_;
  BasisCache cache_;
  int truncation_;

  BernsteinState state_;
  std::vector<Vector> phis_;
  double log_prior_cur_ = 0.0, log_lik_cur_ = 0.0;
  std::vector<double> sigma_log_r_, delta_angle_;
  std::vector<detail::BatchCounter> radial_batch_, weight_batch_;
  detail::BlockCounter degree_ctr_, radial_ctr_, location_ctr_, weight_ctr_;
};

inline PosteriorDraws run_chain(const TimeSeries& ts, const GammaProcessSpec& spec, const BasisConfig& cfg,
                                const SamplerConfig& scfg, Rng& rng) {
  GibbsSampler sampler(fourier_coefficients(ts), spec, cfg, scfg);
  return sampler.run(rng);
}

}  // namespace matspec
