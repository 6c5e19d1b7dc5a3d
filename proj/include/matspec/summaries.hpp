#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "matspec/hpd.hpp"

namespace matspec {

// Type-7 (linear interpolation) sample quantile.
inline double quantile(std::vector<double> values, double p) {
  if (values.empty()) throw std::domain_error("quantile: empty sample");
  if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("quantile: p outside [0,1]");
  std::sort(values.begin(), values.end());
  const double h = p * (static_cast<double>(values.size()) - 1.0);
  const std::size_t lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= values.size()) return values.back();
  const double frac = h - static_cast<double>(lo);
  return values[lo] + frac * (values[lo + 1] - values[lo]);
}

inline double median_of(std::vector<double> values) { return quantile(std::move(values), 0.5); }

// One scalar coordinate of a spectral matrix: Re f_ij (i <= j) or Im f_ij (i < j).
struct ComponentId {
  int i = 0, j = 0;
  bool imag = false;

  std::string label() const { return "f" + std::to_string(i + 1) + std::to_string(j + 1); }
  double extract(const Matrix& f) const { return imag ? f(i, j).imag() : f(i, j).real(); }
};

inline std::vector<ComponentId> spectral_components(int d) {
  std::vector<ComponentId> out;
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j) {
      out.push_back({i, j, false});
      if (j > i) out.push_back({i, j, true});
    }
  return out;
}

struct SpectralSummary {
  std::vector<double> grid;
  std::vector<ComponentId> components;
  // All matrices are n_components x n_grid, on the raw (untransformed) scale.
  RealMatrix median, q05, q95, uniform_lo, uniform_hi;
  double c90 = 0.0;  // sup-statistic quantile defining the uniform region
};

namespace detail {

// Variance-stabilising transform used for the simultaneous region: log on the
// diagonal, identity on the off-diagonal real/imaginary parts.
inline double stabilise(const ComponentId& c, double v) {
  return (c.i == c.j && !c.imag) ? std::log(v) : v;
}
inline double unstabilise(const ComponentId& c, double v) {
  return (c.i == c.j && !c.imag) ? std::exp(v) : v;
}

}  // namespace detail

// Pointwise medians and 90% intervals plus a simultaneous 90% region computed
// from the sup over frequencies and components of the MAD-normalised deviation
// from the pointwise median (on the stabilised scale).
inline SpectralSummary summarize_draws(const std::vector<std::vector<Matrix>>& spectra,
                                       const std::vector<double>& grid, double level = 0.9) {
  if (spectra.empty() || spectra.front().size() != grid.size())
    throw std::domain_error("summarize_draws: draws do not match the grid");
  const int d = static_cast<int>(spectra.front().front().rows());
  const int n_draws = static_cast<int>(spectra.size());
  const int n_grid = static_cast<int>(grid.size());

  SpectralSummary s;
  s.grid = grid;
  s.components = spectral_components(d);
  const int n_comp = static_cast<int>(s.components.size());
  s.median.resize(n_comp, n_grid);
  s.q05.resize(n_comp, n_grid);
  s.q95.resize(n_comp, n_grid);
  s.uniform_lo.resize(n_comp, n_grid);
  s.uniform_hi.resize(n_comp, n_grid);

  // Stabilised draws, pointwise centres and scales.
  std::vector<RealMatrix> h(n_draws, RealMatrix(n_comp, n_grid));
  RealMatrix centre(n_comp, n_grid), scale(n_comp, n_grid);
  for (int m = 0; m < n_draws; ++m)
    for (int g = 0; g < n_grid; ++g)
      for (int c = 0; c < n_comp; ++c)
        h[m](c, g) = detail::stabilise(s.components[c], s.components[c].extract(spectra[m][g]));

  std::vector<double> buf(n_draws);
  const double alpha = 0.5 * (1.0 - level);
  for (int g = 0; g < n_grid; ++g)
    for (int c = 0; c < n_comp; ++c) {
      for (int m = 0; m < n_draws; ++m) buf[m] = h[m](c, g);
      const double med = median_of(buf);
      centre(c, g) = med;
      s.median(c, g) = detail::unstabilise(s.components[c], med);
      s.q05(c, g) = detail::unstabilise(s.components[c], quantile(buf, alpha));
      s.q95(c, g) = detail::unstabilise(s.components[c], quantile(buf, 1.0 - alpha));
      for (int m = 0; m < n_draws; ++m) buf[m] = std::abs(h[m](c, g) - med);
      scale(c, g) = std::max(median_of(buf), 1e-12);
    }

  std::vector<double> sup(n_draws, 0.0);
  for (int m = 0; m < n_draws; ++m)
    sup[m] = ((h[m] - centre).cwiseAbs().cwiseQuotient(scale)).maxCoeff();
  std::sort(sup.begin(), sup.end());
  const int rank = std::min(n_draws - 1, static_cast<int>(std::ceil(level * n_draws)) - 1);
  s.c90 = sup[std::max(0, rank)];

  for (int g = 0; g < n_grid; ++g)
    for (int c = 0; c < n_comp; ++c) {
      s.uniform_lo(c, g) = detail::unstabilise(s.components[c], centre(c, g) - s.c90 * scale(c, g));
      s.uniform_hi(c, g) = detail::unstabilise(s.components[c], centre(c, g) + s.c90 * scale(c, g));
    }
  return s;
}

struct ErrorMetrics {
  double l1 = 0.0;  // mean Frobenius error over the grid
  double l2 = 0.0;  // root mean squared Frobenius error
};

inline ErrorMetrics error_metrics(const std::vector<Matrix>& estimate, const std::vector<Matrix>& truth) {
  if (estimate.size() != truth.size() || estimate.empty())
    throw std::domain_error("error_metrics: size mismatch");
  ErrorMetrics em;
  for (std::size_t g = 0; g < estimate.size(); ++g) {
    const double fr = (estimate[g] - truth[g]).norm();
    em.l1 += fr;
    em.l2 += fr * fr;
  }
  em.l1 /= static_cast<double>(estimate.size());
  em.l2 = std::sqrt(em.l2 / static_cast<double>(estimate.size()));
  return em;
}

// Pointwise posterior median spectra as a vector over the grid.
inline std::vector<Matrix> median_spectrum(const std::vector<std::vector<Matrix>>& spectra) {
  if (spectra.empty()) throw std::domain_error("median_spectrum: no draws");
  const int n_grid = static_cast<int>(spectra.front().size());
  const int d = static_cast<int>(spectra.front().front().rows());
  std::vector<Matrix> out(n_grid, Matrix::Zero(d, d));
  std::vector<double> re(spectra.size()), im(spectra.size());
  for (int g = 0; g < n_grid; ++g)
    for (int i = 0; i < d; ++i)
      for (int j = i; j < d; ++j) {
        for (std::size_t m = 0; m < spectra.size(); ++m) {
          re[m] = spectra[m][g](i, j).real();
          im[m] = spectra[m][g](i, j).imag();
        }
        const Complex v(median_of(re), j > i ? median_of(im) : 0.0);
        out[g](i, j) = v;
        out[g](j, i) = std::conj(v);
      }
  return out;
}

}  // namespace matspec
