#pragma once

#include <cstdint>
#include <random>

namespace matspec {

// Single per-chain random source. Chains never share one of these.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform() { return unif_(gen_); }
  double uniform(double lo, double hi) { return lo + (hi - lo) * unif_(gen_); }
  double normal() { return norm_(gen_); }
  double exponential() { return exp_(gen_); }
  double gamma(double shape, double scale = 1.0) {
    std::gamma_distribution<double> g(shape, scale);
    return g(gen_);
  }
  double cauchy(double scale) {
    std::cauchy_distribution<double> c(0.0, scale);
    return c(gen_);
  }
  double student_t(double nu) {
    std::student_t_distribution<double> t(nu);
    return t(gen_);
  }
  std::mt19937_64& engine() { return gen_; }

private:
  std::mt19937_64 gen_;
  std::uniform_real_distribution<double> unif_{0.0, 1.0};
  std::normal_distribution<double> norm_{0.0, 1.0};
  std::exponential_distribution<double> exp_{1.0};
};

}  // namespace matspec
