#include "rsd/prob_kernel.hpp"

#include <algorithm>
#include <array>
#include <vector>

namespace rsd {

namespace {

constexpr double kLnSqrt2Pi = 0.91893853320467274178;  // ln √(2π)
constexpr double kStirlingCutoff = 10.0;

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw DomainError(std::string(what) + " must be positive and finite, got " + std::to_string(v));
  }
}

// Σ B_{2k} / (2k(2k−1) x^{2k−1}), k = 1..8; truncation error < 1e-18 for x ≥ 10.
double stirling_series(double x) {
  static constexpr std::array<double, 8> kCoef = {
      1.0 / 12.0,          -1.0 / 360.0,  1.0 / 1260.0,         -1.0 / 1680.0,
      1.0 / 1188.0,        -691.0 / 360360.0, 1.0 / 156.0,      -3617.0 / 122400.0,
  };
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  double acc = 0.0;
  for (auto it = kCoef.rbegin(); it != kCoef.rend(); ++it) {
    acc = acc * inv2 + *it;
  }
  return acc * inv;
}

double log_gamma_large(double x) {
  return (x - 0.5) * std::log(x) - x + kLnSqrt2Pi + stirling_series(x);
}

// ln[x^a y^b / B(a,b)] with y = 1 − x supplied by the caller.
double log_power_ratio(double a, double b, double x, double y) {
  if (std::min(a, b) >= 8.0) {
    const double s = a + b;
    // a ln(x/x0) + b ln(y/y0) with x0 = a/s, y0 = b/s; fma keeps x·s − a exact to one rounding.
    const double dx = std::fma(x, s, -a);
    const double dy = std::fma(y, s, -b);
    const double e1 = a * std::log1p(dx / a);
    const double e2 = b * std::log1p(dy / b);
    const double delta = stirling_correction(a) + stirling_correction(b) - stirling_correction(s);
    return e1 + e2 + 0.5 * std::log(a / s * b) - kLnSqrt2Pi - delta;
  }
  return a * std::log(x) + b * std::log(y) - log_beta(a, b).log_value;
}

// Modified Lentz evaluation of the incomplete-beta continued fraction.
double beta_continued_fraction(double a, double b, double x) {
  constexpr double kTiny = 1e-300;
  constexpr double kTol = 1e-15;
  const auto max_iter = static_cast<int>(20000 + 200 * std::sqrt(std::max(a, b)));

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= max_iter; ++m) {
    const double dm = m;
    const double m2 = 2.0 * dm;
    double aa = dm * (b - dm) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + dm) * (qab + dm) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kTol) return h;
  }
  throw NumericError("incomplete beta continued fraction did not converge (a=" + std::to_string(a) +
                     ", b=" + std::to_string(b) + ", x=" + std::to_string(x) + ")");
}

struct IncBeta {
  double lower;
  double upper;
};

IncBeta inc_beta(double a, double b, double x, double y) {
  require_positive(a, "incomplete beta shape a");
  require_positive(b, "incomplete beta shape b");
  if (x <= 0.0) return {0.0, 1.0};
  if (y <= 0.0) return {1.0, 0.0};
  if (x < (a + 1.0) / (a + b + 2.0)) {
    const double lower =
        std::clamp(std::exp(log_power_ratio(a, b, x, y)) * beta_continued_fraction(a, b, x) / a, 0.0, 1.0);
    return {lower, 1.0 - lower};
  }
  const double upper =
      std::clamp(std::exp(log_power_ratio(b, a, y, x)) * beta_continued_fraction(b, a, y) / b, 0.0, 1.0);
  return {1.0 - upper, upper};
}

}  // namespace

double stirling_correction(double x) {
  require_positive(x, "stirling_correction argument");
  if (x >= kStirlingCutoff) return stirling_series(x);
  return log_gamma(x).log_value - ((x - 0.5) * std::log(x) - x + kLnSqrt2Pi);
}

LogReal log_gamma(double x) {
  require_positive(x, "log_gamma argument");
  if (x == 1.0 || x == 2.0) return {0.0};
  if (x >= kStirlingCutoff) return {log_gamma_large(x)};
  // Γ(x) = Γ(x + k) / [x (x+1) … (x+k−1)]
  double shifted = x;
  double product = 1.0;
  while (shifted < kStirlingCutoff) {
    product *= shifted;
    shifted += 1.0;
  }
  return {log_gamma_large(shifted) - std::log(product)};
}

LogReal log_beta(double a, double b) {
  require_positive(a, "log_beta argument a");
  require_positive(b, "log_beta argument b");
  const double p = std::min(a, b);
  const double q = std::max(a, b);
  const double s = p + q;
  if (p >= kStirlingCutoff) {
    const double corr = stirling_correction(p) + stirling_correction(q) - stirling_correction(s);
    return {-0.5 * std::log(q) + kLnSqrt2Pi + corr + (p - 0.5) * std::log(p / s) + q * std::log1p(-p / s)};
  }
  if (q >= kStirlingCutoff) {
    const double corr = stirling_correction(q) - stirling_correction(s);
    return {log_gamma(p).log_value + corr + p - p * std::log(s) + (q - 0.5) * std::log1p(-p / s)};
  }
  return {log_gamma(p).log_value + log_gamma(q).log_value - log_gamma(s).log_value};
}

double log_binomial_coefficient(double n, double k) {
  if (!(k >= 0.0 && k <= n)) {
    throw DomainError("binomial coefficient requires 0 <= k <= n");
  }
  if (k == 0.0 || k == n) return 0.0;
  return -std::log1p(n) - log_beta(k + 1.0, n - k + 1.0).log_value;
}

double beta_pdf(double a, double b, Probability t) {
  require_positive(a, "beta_pdf shape a");
  require_positive(b, "beta_pdf shape b");
  const double x = t.value();
  const double y = 1.0 - x;
  if (x == 0.0 || y == 0.0) {
    const double edge_shape = x == 0.0 ? a : b;
    const double other = x == 0.0 ? b : a;
    if (edge_shape < 1.0) return std::numeric_limits<double>::infinity();
    if (edge_shape > 1.0) return 0.0;
    return other;  // 1 / B(1, other)
  }
  return std::exp(log_power_ratio(a, b, x, y) - std::log(x) - std::log(y));
}

Probability reg_inc_beta(double a, double b, Probability t) {
  return Probability{inc_beta(a, b, t.value(), 1.0 - t.value()).lower};
}

Probability reg_inc_beta_upper(double a, double b, Probability t) {
  return Probability{inc_beta(a, b, t.value(), 1.0 - t.value()).upper};
}

Probability binomial_tail_lower(std::int64_t N, std::int64_t n, Probability eps) {
  if (n < 0 || n > N) {
    throw DomainError("binomial_tail_lower requires 0 <= n <= N");
  }
  if (n == 0) return Probability{1.0};
  return reg_inc_beta(static_cast<double>(n), static_cast<double>(N + 1 - n), eps);
}

LogReal beta_binom_log_pmf(std::int64_t d, double alpha, double beta, std::int64_t i) {
  require_positive(alpha, "beta-binomial alpha");
  require_positive(beta, "beta-binomial beta");
  if (i < 0 || i > d) {
    throw DomainError("beta-binomial support index out of range");
  }
  const auto dd = static_cast<double>(d);
  const auto di = static_cast<double>(i);
  return {log_binomial_coefficient(dd, di) + log_beta(di + alpha, dd - di + beta).log_value -
          log_beta(alpha, beta).log_value};
}

Probability beta_binom_cdf(std::int64_t d, double alpha, double beta, std::int64_t z) {
  if (z < 0 || z > d) {
    throw DomainError("beta-binomial cdf argument out of range");
  }
  std::vector<double> logs(static_cast<std::size_t>(z + 1));
  for (std::int64_t i = 0; i <= z; ++i) {
    logs[static_cast<std::size_t>(i)] = beta_binom_log_pmf(d, alpha, beta, i).log_value;
  }
  const double shift = *std::max_element(logs.begin(), logs.end());
  CompensatedSum sum;
  for (double l : logs) sum.add(std::exp(l - shift));
  return Probability{std::min(1.0, std::exp(shift) * sum.value())};
}

}  // namespace rsd
