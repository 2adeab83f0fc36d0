#pragma once

// Log-space special functions for beta and beta-binomial calculus. Arguments
// of order 1e5..1e6 are routine (design plus oracle sample counts), so every
// ratio of gamma functions goes through Stirling-corrected log forms.

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

#include "rsd/errors.hpp"

namespace rsd {

/// A real number in [0, 1]. Construction validates; NaN is rejected.
class Probability {
 public:
  constexpr Probability() = default;
  explicit Probability(double value) : value_(value) {
    if (!(value >= 0.0 && value <= 1.0)) {
      throw DomainError("probability outside [0,1]: " + std::to_string(value));
    }
  }

  [[nodiscard]] constexpr double value() const noexcept { return value_; }
  constexpr operator double() const noexcept { return value_; }  // NOLINT(google-explicit-constructor)

 private:
  double value_ = 0.0;
};

/// Natural log of a nonnegative quantity; -inf encodes zero.
struct LogReal {
  double log_value = -std::numeric_limits<double>::infinity();

  [[nodiscard]] double value() const noexcept { return std::exp(log_value); }
  [[nodiscard]] bool is_zero() const noexcept { return std::isinf(log_value) && log_value < 0; }
};

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  [[nodiscard]] double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// ln Γ(x) for x > 0. Relative error ≲ 1e-15 for x ≥ 1.
LogReal log_gamma(double x);

/// δ(x) = ln Γ(x) − [(x − ½) ln x − x + ½ ln 2π], the Stirling remainder.
double stirling_correction(double x);

/// ln B(a, b) = ln Γ(a) + ln Γ(b) − ln Γ(a + b), evaluated without
/// cancellation for large arguments.
LogReal log_beta(double a, double b);

/// ln C(n, k) for real n ≥ k ≥ 0.
double log_binomial_coefficient(double n, double k);

/// Beta(a, b) density at t ∈ [0, 1].
double beta_pdf(double a, double b, Probability t);

/// Regularized incomplete beta I_t(a, b) = ∫₀ᵗ beta(a,b;ϑ) dϑ.
/// Continued fraction with the symmetry switch at t = (a+1)/(a+b+2).
Probability reg_inc_beta(double a, double b, Probability t);

/// 1 − I_t(a, b) = I_{1−t}(b, a), computed directly so that tiny upper
/// tails keep full relative precision.
Probability reg_inc_beta_upper(double a, double b, Probability t);

/// Σ_{i=n}^{N} C(N,i) ε^i (1−ε)^{N−i}; equals 1 for n = 0.
Probability binomial_tail_lower(std::int64_t N, std::int64_t n, Probability eps);

/// ln f_bb(d, α, β; i) = ln C(d,i) + ln B(i+α, d−i+β) − ln B(α, β).
LogReal beta_binom_log_pmf(std::int64_t d, double alpha, double beta, std::int64_t i);

/// Σ_{i=0}^{z} f_bb(d, α, β; i) with compensated accumulation.
Probability beta_binom_cdf(std::int64_t d, double alpha, double beta, std::int64_t z);

}  // namespace rsd
