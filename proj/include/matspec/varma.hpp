#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "matspec/fourier.hpp"
#include "matspec/hpd.hpp"
#include "matspec/rng.hpp"

namespace matspec {

enum class Innovations { gaussian, student_t4, centered_exponential };

inline std::string innovations_name(Innovations f) {
  switch (f) {
    case Innovations::gaussian: return "gaussian";
    case Innovations::student_t4: return "student_t4";
    case Innovations::centered_exponential: return "centered_exponential";
  }
  throw std::logic_error("innovations_name");
}

inline Innovations innovations_from_name(const std::string& s) {
  if (s == "gaussian") return Innovations::gaussian;
  if (s == "student_t4") return Innovations::student_t4;
  if (s == "centered_exponential") return Innovations::centered_exponential;
  throw std::domain_error("unknown innovation family: " + s);
}

struct VarmaModel {
  std::vector<RealMatrix> ar;  // B_1..B_p
  std::vector<RealMatrix> ma;  // C_1..C_q
  RealMatrix sigma;            // innovation covariance, symmetric pd
  Innovations innovations = Innovations::gaussian;

  int d() const { return static_cast<int>(sigma.rows()); }
  int p() const { return static_cast<int>(ar.size()); }
  int q() const { return static_cast<int>(ma.size()); }

  nlohmann::json to_json() const {
    auto mats = [](const std::vector<RealMatrix>& v) {
      nlohmann::json arr = nlohmann::json::array();
      for (const auto& m : v) {
        nlohmann::json rows = nlohmann::json::array();
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
          nlohmann::json row = nlohmann::json::array();
          for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
          rows.push_back(row);
        }
        arr.push_back(rows);
      }
      return arr;
    };
    nlohmann::json sig = nlohmann::json::array();
    for (Eigen::Index i = 0; i < sigma.rows(); ++i) {
      nlohmann::json row = nlohmann::json::array();
      for (Eigen::Index j = 0; j < sigma.cols(); ++j) row.push_back(sigma(i, j));
      sig.push_back(row);
    }
    return {{"ar", mats(ar)}, {"ma", mats(ma)}, {"sigma", sig}, {"innovations", innovations_name(innovations)}};
  }

  static RealMatrix real_matrix_from_json(const nlohmann::json& j) {
    const int r = static_cast<int>(j.size()), c = r > 0 ? static_cast<int>(j.at(0).size()) : 0;
    RealMatrix m(r, c);
    for (int i = 0; i < r; ++i)
      for (int k = 0; k < c; ++k) m(i, k) = j.at(i).at(k).get<double>();
    return m;
  }

  static VarmaModel from_json(const nlohmann::json& j) {
    VarmaModel m;
    for (const auto& a : j.value("ar", nlohmann::json::array())) m.ar.push_back(real_matrix_from_json(a));
    for (const auto& a : j.value("ma", nlohmann::json::array())) m.ma.push_back(real_matrix_from_json(a));
    m.sigma = real_matrix_from_json(j.at("sigma"));
    m.innovations = innovations_from_name(j.value("innovations", "gaussian"));
    return m;
  }
};

inline double companion_spectral_radius(const std::vector<RealMatrix>& ar, int d) {
  const int p = static_cast<int>(ar.size());
  if (p == 0) return 0.0;
  RealMatrix comp = RealMatrix::Zero(p * d, p * d);
  for (int j = 0; j < p; ++j) comp.block(0, j * d, d, d) = ar[j];
  if (p > 1) comp.block(d, 0, (p - 1) * d, (p - 1) * d).setIdentity();
  return comp.eigenvalues().cwiseAbs().maxCoeff();
}

inline RealMatrix real_symmetric_sqrt(const RealMatrix& s) {
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(s);
  if (es.eigenvalues().minCoeff() < -1e-12) throw std::domain_error("matrix square root: not psd");
  return es.eigenvectors() * es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal() * es.eigenvectors().transpose();
}

// Simulates n observations after discarding a burn-in prefix. All three
// innovation families are standardized to unit variance before coloring by
// Sigma^{1/2} (Student-t4 scaled by sqrt(1/2), centered exponential is
// Exp(1) - 1).
inline TimeSeries simulate_varma(const VarmaModel& model, int n, Rng& rng, int burn = 1000) {
  const int d = model.d(), p = model.p(), q = model.q();
  if (p > 0 && companion_spectral_radius(model.ar, d) >= 1.0)
    throw std::domain_error("simulate_varma: unstable AR polynomial");
  const RealMatrix sqrt_sigma = real_symmetric_sqrt(model.sigma);
  const int total = n + burn;
  RealMatrix z = RealMatrix::Zero(total, d);
  std::vector<Eigen::VectorXd> e_hist(q + 1, Eigen::VectorXd::Zero(d));
  for (int t = 0; t < total; ++t) {
    Eigen::VectorXd raw(d);
    for (int i = 0; i < d; ++i) {
      switch (model.innovations) {
        case Innovations::gaussian: raw[i] = rng.normal(); break;
        case Innovations::student_t4: raw[i] = rng.student_t(4.0) * std::sqrt(0.5); break;
        case Innovations::centered_exponential: raw[i] = rng.exponential() - 1.0; break;
      }
    }
    Eigen::VectorXd e = sqrt_sigma * raw;
    Eigen::VectorXd zt = e;
    for (int j = 1; j <= q; ++j) zt += model.ma[j - 1] * e_hist[j - 1];
    for (int j = 1; j <= p && t - j >= 0; ++j) zt += model.ar[j - 1] * z.row(t - j).transpose();
    z.row(t) = zt.transpose();
    for (int j = q; j >= 1; --j) e_hist[j] = e_hist[j - 1];
    if (q > 0) e_hist[0] = e;
  }
  TimeSeries out;
  out.values = z.bottomRows(n);
  return out;
}

// f(w) = (1/2pi) A(e^{-iw})^{-1} C(e^{-iw}) Sigma C(e^{-iw})^* A(e^{-iw})^{-*},
// A(z) = I - sum B_j z^j, C(z) = I + sum C_j z^j.
inline Matrix varma_spectral_density(const VarmaModel& model, double omega) {
  const int d = model.d();
  Matrix a = Matrix::Identity(d, d), c = Matrix::Identity(d, d);
  for (int j = 1; j <= model.p(); ++j) a -= model.ar[j - 1].cast<Complex>() * std::exp(Complex(0.0, -j * omega));
  for (int j = 1; j <= model.q(); ++j) c += model.ma[j - 1].cast<Complex>() * std::exp(Complex(0.0, -j * omega));
  const Eigen::PartialPivLU<Matrix> lu(a);
  const Matrix ac = lu.solve(c);
  return hermitian_part(ac * model.sigma.cast<Complex>() * ac.adjoint() / (2.0 * std::numbers::pi));
}

inline std::vector<Matrix> true_spectral_density(const VarmaModel& model, const std::vector<double>& omegas) {
  if (model.p() > 0 && companion_spectral_radius(model.ar, model.d()) >= 1.0)
    throw std::domain_error("true_spectral_density: unstable AR polynomial");
  std::vector<Matrix> out;
  out.reserve(omegas.size());
  for (double w : omegas) out.push_back(varma_spectral_density(model, w));
  return out;
}

// Autocovariances Gamma(0..max_lag) of a stable VAR(p) from the companion-form
// Lyapunov equation (Yule-Walker).
inline std::vector<RealMatrix> var_autocovariances(const std::vector<RealMatrix>& ar, const RealMatrix& sigma,
                                                   int max_lag) {
  const int d = static_cast<int>(sigma.rows());
  const int p = std::max<int>(1, static_cast<int>(ar.size()));
  const int m = p * d;
  RealMatrix comp = RealMatrix::Zero(m, m);
  for (int j = 0; j < static_cast<int>(ar.size()); ++j) comp.block(0, j * d, d, d) = ar[j];
  if (p > 1) comp.block(d, 0, (p - 1) * d, (p - 1) * d).setIdentity();
  RealMatrix sig_c = RealMatrix::Zero(m, m);
  sig_c.topLeftCorner(d, d) = sigma;
  // vec(G) = (I - comp (x) comp)^{-1} vec(sig_c)
  Eigen::MatrixXd kron = Eigen::MatrixXd::Identity(m * m, m * m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k)
        for (int l = 0; l < m; ++l) kron(i + k * m, j + l * m) -= comp(k, l) * comp(i, j);
  Eigen::VectorXd vec_s(m * m);
  for (int j = 0; j < m; ++j) vec_s.segment(j * m, m) = sig_c.col(j);
  const Eigen::VectorXd vec_g = kron.partialPivLu().solve(vec_s);
  RealMatrix g(m, m);
  for (int j = 0; j < m; ++j) g.col(j) = vec_g.segment(j * m, m);
  std::vector<RealMatrix> out;
  out.reserve(max_lag + 1);
  for (int h = 0; h <= max_lag && h < p; ++h) out.push_back(g.block(0, h * d, d, d));
  for (int h = static_cast<int>(out.size()); h <= max_lag; ++h) {
    RealMatrix gh = RealMatrix::Zero(d, d);
    for (int j = 1; j <= static_cast<int>(ar.size()); ++j) gh += ar[j - 1] * out[h - j];
    out.push_back(gh);
  }
  return out;
}

// Conditional least squares for order p; returns residual covariance (MLE
// denominator) used by AIC.
inline RealMatrix var_least_squares(const TimeSeries& ts, int p, std::vector<RealMatrix>* coef_out = nullptr) {
  const int n = ts.n(), d = ts.d(), t_eff = n - p, m = p * d;
  if (t_eff <= m + d) throw std::domain_error("var_least_squares: series too short for order");
  RealMatrix x(t_eff, m), y(t_eff, d);
  for (int t = p; t < n; ++t) {
    y.row(t - p) = ts.values.row(t);
    for (int j = 1; j <= p; ++j) x.block(t - p, (j - 1) * d, 1, d) = ts.values.row(t - j);
  }
  const RealMatrix xtx = x.transpose() * x;
  const RealMatrix b = xtx.ldlt().solve(x.transpose() * y);  // m x d
  const RealMatrix resid = y - x * b;
  if (coef_out) {
    coef_out->clear();
    for (int j = 0; j < p; ++j) coef_out->push_back(b.block(j * d, 0, d, d).transpose());
  }
  return resid.transpose() * resid / t_eff;
}

// AIC = n log |Sigma_hat_p| + 2 p d^2 over p = 1..p_max; ties go to smaller p.
inline int select_order_aic(const TimeSeries& ts, int p_max) {
  if (p_max < 1) throw std::domain_error("select_order_aic: p_max must be >= 1");
  int best_p = 1;
  double best = std::numeric_limits<double>::infinity();
  for (int p = 1; p <= p_max; ++p) {
    const RealMatrix s = var_least_squares(ts, p);
    const double aic = ts.n() * std::log(s.determinant()) + 2.0 * p * ts.d() * ts.d();
    if (aic < best) {
      best = aic;
      best_p = p;
    }
  }
  return best_p;
}

struct VarPosterior {
  int p = 0;
  std::vector<std::vector<RealMatrix>> coef_draws;  // per draw: B_1..B_p
  std::vector<RealMatrix> sigma_draws;

  VarmaModel model_for_draw(std::size_t i) const {
    VarmaModel m;
    m.ar = coef_draws[i];
    m.sigma = sigma_draws[i];
    return m;
  }
};

struct VarFitConfig {
  int total_iterations = 80000;
  int burn_in = 30000;
  int thin = 5;
  double coef_prior_variance = 1e4;   // vec(B) ~ N(0, v I)
  double iw_prior_dof = 1e-4;         // Sigma ~ InvWishart(nu0, S0)
  double iw_prior_scale = 1e-4;       // S0 = s I_d
};

namespace detail {

// Real Wishart_d(nu, I) via Bartlett; nu need not be an integer.
inline RealMatrix wishart_identity(int d, double nu, Rng& rng) {
  RealMatrix t = RealMatrix::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    t(i, i) = std::sqrt(2.0 * rng.gamma(0.5 * (nu - i), 1.0));
    for (int j = 0; j < i; ++j) t(i, j) = rng.normal();
  }
  return t * t.transpose();
}

// InvWishart(nu, S): X = (W)^{-1} with W ~ Wishart(nu, S^{-1}); density
// kernel |X|^{-(nu+d+1)/2} etr(-S X^{-1} / 2).
inline RealMatrix inverse_wishart(double nu, const RealMatrix& scale, Rng& rng) {
  const int d = static_cast<int>(scale.rows());
  const Eigen::LLT<RealMatrix> llt(scale.inverse());
  const RealMatrix l = llt.matrixL();
  const RealMatrix w = l * wishart_identity(d, nu, rng) * l.transpose();
  return w.inverse();
}

}  // namespace detail

// Two-block Gibbs sampler for the Gaussian VAR(p) with N(0, v I) prior on
// vec(B) and inverse-Wishart prior on Sigma.
inline VarPosterior fit_var(const TimeSeries& ts, int p, const VarFitConfig& cfg, Rng& rng) {
  const int n = ts.n(), d = ts.d(), t_eff = n - p, m = p * d;
  if (n <= p * d + d) throw std::domain_error("fit_var: series too short");
  RealMatrix x(t_eff, m), y(t_eff, d);
  for (int t = p; t < n; ++t) {
    y.row(t - p) = ts.values.row(t);
    for (int j = 1; j <= p; ++j) x.block(t - p, (j - 1) * d, 1, d) = ts.values.row(t - j);
  }
  const RealMatrix xtx = x.transpose() * x;
  const RealMatrix xty = x.transpose() * y;
  if (Eigen::FullPivLU<RealMatrix>(xtx).rank() < m) throw std::domain_error("fit_var: rank-deficient regression");

  RealMatrix b = xtx.ldlt().solve(xty);  // m x d stacked regression coefficients
  RealMatrix sigma = (y - x * b).transpose() * (y - x * b) / t_eff;
  if (sigma.norm() == 0.0) sigma = RealMatrix::Identity(d, d);

  VarPosterior post;
  post.p = p;
  for (int it = 0; it < cfg.total_iterations; ++it) {
    // vec(B) | Sigma: precision v^{-1} I + Sigma^{-1} (x) X'X.
    const RealMatrix sigma_inv = sigma.inverse();
    Eigen::MatrixXd prec = Eigen::MatrixXd::Identity(m * d, m * d) / cfg.coef_prior_variance;
    for (int r = 0; r < d; ++r)
      for (int c = 0; c < d; ++c) prec.block(r * m, c * m, m, m) += sigma_inv(r, c) * xtx;
    Eigen::VectorXd rhs(m * d);
    const RealMatrix xty_si = xty * sigma_inv;
    for (int c = 0; c < d; ++c) rhs.segment(c * m, m) = xty_si.col(c);
    const Eigen::LLT<Eigen::MatrixXd> llt(prec);
    const Eigen::VectorXd mean = llt.solve(rhs);
    Eigen::VectorXd zn(m * d);
    for (int i = 0; i < m * d; ++i) zn[i] = rng.normal();
    const Eigen::VectorXd vb = mean + llt.matrixU().solve(zn);
    for (int c = 0; c < d; ++c) b.col(c) = vb.segment(c * m, m);

    // Sigma | B: inverse Wishart with updated dof and scale.
    const RealMatrix resid = y - x * b;
    sigma = detail::inverse_wishart(cfg.iw_prior_dof + t_eff,
                                    cfg.iw_prior_scale * RealMatrix::Identity(d, d) + resid.transpose() * resid, rng);

    if (it >= cfg.burn_in && (it - cfg.burn_in) % cfg.thin == 0) {
      std::vector<RealMatrix> coefs;
      for (int j = 0; j < p; ++j) coefs.push_back(b.block(j * d, 0, d, d).transpose());
      post.coef_draws.push_back(std::move(coefs));
      post.sigma_draws.push_back(sigma);
    }
  }
  return post;
}

}  // namespace matspec
