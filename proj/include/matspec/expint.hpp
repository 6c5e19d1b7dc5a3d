#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

namespace matspec {

inline constexpr double kEulerGamma = 0.57721566490153286060651209;

// Exponential integral E1(x) = int_x^inf exp(-s)/s ds for x > 0.
// Power series for x <= 1, modified Lentz continued fraction for x > 1;
// both accurate to ~1e-15 relative.
inline double expint_e1(double x) {
  if (!(x > 0.0)) throw std::domain_error("expint_e1: requires x > 0");
  if (x <= 1.0) {
    // E1(x) = -gamma - ln x + sum_{k>=1} (-1)^{k+1} x^k / (k k!)
    double sum = 0.0, term = 1.0;
    for (int k = 1; k <= 40; ++k) {
      term *= x / k;
      const double add = (k % 2 == 1 ? term : -term) / k;
      sum += add;
      if (std::abs(add) < 1e-18 * (std::abs(sum) + 1.0)) break;
    }
    return -kEulerGamma - std::log(x) + sum;
  }
  // E1(x) = e^{-x} / (x + 1 - 1/(x + 3 - 4/(x + 5 - 9/(...))))
  const double tiny = 1e-300;
  double b = x + 1.0, c = 1.0 / tiny, dd = 1.0 / b, h = dd;
  for (int k = 1; k <= 200; ++k) {
    const double a = -static_cast<double>(k) * k;
    b += 2.0;
    dd = 1.0 / (a * dd + b);
    c = b + a / c;
    if (c == 0.0) c = tiny;
    const double delta = c * dd;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return std::exp(-x) * h;
}

// E1(exp(t)), stable for arbitrarily negative t (where exp(t) underflows).
inline double expint_e1_of_log(double t) {
  if (t <= 0.0) {
    double sum = 0.0, term = 1.0;
    const double x = std::exp(t);  // may underflow to 0; series still correct
    for (int k = 1; k <= 40; ++k) {
      term *= x / k;
      const double add = (k % 2 == 1 ? term : -term) / k;
      sum += add;
      if (std::abs(add) < 1e-18 * (std::abs(sum) + 1.0)) break;
    }
    return -kEulerGamma - t + sum;
  }
  return expint_e1(std::exp(t));
}

}  // namespace matspec
