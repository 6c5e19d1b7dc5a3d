#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

// Independent numeric oracles used by the tests only.

namespace oracle {

inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double fa,
                               double fm, double fb, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double err = left + right - whole;
  if (depth <= 0 || std::abs(err) < 15.0 * tol) return left + right + err / 15.0;
  return adaptive_simpson(f, a, m, fa, flm, fm, 0.5 * tol, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, 0.5 * tol, depth - 1);
}

inline double integrate(const std::function<double(double)>& f, double a, double b, double tol = 1e-13) {
  return adaptive_simpson(f, a, b, f(a), f(0.5 * (a + b)), f(b), tol, 40);
}

// E1(x) = int_0^inf exp(-x e^s) ds, integrated by adaptive quadrature.
// Independent of the library's series/continued-fraction implementation.
inline double e1_quadrature(double x, double tol = 1e-13) {
  if (!(x > 0.0)) throw std::domain_error("e1_quadrature: x > 0");
  const double smax = std::max(1.0, std::log(800.0 / x));
  return integrate([x](double s) { return std::exp(-x * std::exp(s)); }, 0.0, smax, tol);
}

// Regularized lower incomplete gamma P(a, x) (series / continued fraction).
inline double gammap(double a, double x) {
  if (x < 0.0 || a <= 0.0) throw std::domain_error("gammap: bad arguments");
  if (x == 0.0) return 0.0;
  const double gln = std::lgamma(a);
  if (x < a + 1.0) {
    double ap = a, sum = 1.0 / a, del = sum;
    for (int i = 0; i < 500; ++i) {
      ap += 1.0;
      del *= x / ap;
      sum += del;
      if (std::abs(del) < std::abs(sum) * 1e-15) break;
    }
    return sum * std::exp(-x + a * std::log(x) - gln);
  }
  double b = x + 1.0 - a, c = 1e300, d = 1.0 / b, h = d;
  for (int i = 1; i <= 500; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < 1e-300) d = 1e-300;
    c = b + an / c;
    if (std::abs(c) < 1e-300) c = 1e-300;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-15) break;
  }
  return 1.0 - std::exp(-x + a * std::log(x) - gln) * h;
}

// Upper-tail p-value of a chi-squared statistic with dof degrees of freedom.
inline double chi2_pvalue(double stat, double dof) { return 1.0 - gammap(0.5 * dof, 0.5 * stat); }

// Monte-Carlo standard error of the mean via non-overlapping batch means.
inline double batch_means_se(const std::vector<double>& xs, int n_batches = 25) {
  const int n = static_cast<int>(xs.size());
  const int b = n / n_batches;
  if (b < 2) throw std::domain_error("batch_means_se: series too short");
  std::vector<double> means;
  for (int i = 0; i + b <= n; i += b) {
    double acc = 0.0;
    for (int j = i; j < i + b; ++j) acc += xs[j];
    means.push_back(acc / b);
  }
  double grand = 0.0;
  for (double m : means) grand += m;
  grand /= static_cast<double>(means.size());
  double var = 0.0;
  for (double m : means) var += (m - grand) * (m - grand);
  var /= static_cast<double>(means.size() - 1);
  return std::sqrt(var / static_cast<double>(means.size()));
}

inline double mean(const std::vector<double>& xs) {
  double acc = 0.0;
  for (double x : xs) acc += x;
  return acc / static_cast<double>(xs.size());
}

inline double variance(const std::vector<double>& xs) {
  const double m = mean(xs);
  double acc = 0.0;
  for (double x : xs) acc += (x - m) * (x - m);
  return acc / static_cast<double>(xs.size() - 1);
}

}  // namespace oracle
