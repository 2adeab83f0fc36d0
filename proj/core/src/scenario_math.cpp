#include "rsd/scenario_math.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>

namespace rsd {

namespace {

constexpr double kThresholdSlack = 1e-9;

double as_real(std::int64_t v) { return static_cast<double>(v); }

// pmf of the oracle violation count under the beta posterior of V(θ*).
std::vector<double> oracle_count_pmf(const DesignDims& d, std::int64_t z) {
  std::vector<double> pmf(static_cast<std::size_t>(z + 1));
  const double alpha = as_real(d.n);
  const double beta = as_real(d.N + 1 - d.n);
  for (std::int64_t i = 0; i <= z; ++i) {
    pmf[static_cast<std::size_t>(i)] = beta_binom_log_pmf(d.N_o, alpha, beta, i).value();
  }
  return pmf;
}

// Smallest t with I_t(a, b) ≥ p, by bisection (only needs a coarse answer).
double beta_quantile(double a, double b, double p) {
  double lo = 0.0;
  double hi = 1.0;
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (reg_inc_beta(a, b, Probability{mid}).value() < p) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return hi;
}

// ∫_0^upper_limit g(t) · beta(n, N+1−n; t) dt. The beta density is negligible
// outside its [1e-17, 1 − 1e-17] quantile range; inside, a composite 30-point
// Gauss rule runs over pieces that are refined around the oracle step
// t ≈ z/N_o so each piece is smooth. Fixed cost, no adaptive blow-up on
// pieces of negligible mass.
template <class F>
double integrate_against_design_law(const DesignDims& d, double step_at, double upper_limit, F g) {
  constexpr double kTailMass = 1e-17;
  constexpr int kBulkPieces = 48;
  constexpr int kStepHalfPieces = 12;
  const double a = as_real(d.n);
  const double b = as_real(d.N + 1 - d.n);
  const double t_lo = beta_quantile(a, b, kTailMass);
  const double t_hi = std::min(upper_limit, 1.0 - beta_quantile(b, a, kTailMass));
  if (!(t_hi > t_lo)) return 0.0;
  const double step_w =
      std::sqrt(std::max(step_at * (1.0 - step_at), 1e-12) / as_real(d.N_o)) + 1.0 / as_real(d.N_o);

  std::vector<double> cuts{t_lo, t_hi};
  for (int k = 1; k < kBulkPieces; ++k) cuts.push_back(t_lo + (t_hi - t_lo) * k / kBulkPieces);
  for (int k = -kStepHalfPieces; k <= kStepHalfPieces; ++k) cuts.push_back(step_at + k * step_w);
  std::erase_if(cuts, [&](double c) { return !(c >= t_lo && c <= t_hi); });
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  auto integrand = [&](double t) {
    const Probability pt{std::clamp(t, 0.0, 1.0)};
    const double w = beta_pdf(a, b, pt);
    return w == 0.0 ? 0.0 : g(pt) * w;
  };
  CompensatedSum total;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    total.add(boost::math::quadrature::gauss<double, 30>::integrate(integrand, cuts[k], cuts[k + 1]));
  }
  return total.value();
}

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

// P(oracle accepts | V = t) with the real threshold z: 1 − I_t(z+1, N_o−z).
Probability accept_given_violation(double z, double N_o, Probability t) {
  return reg_inc_beta_upper(z + 1.0, N_o - z, t);
}

double continuous_accept_probability(const DesignDims& d, Probability eps_prime, double upper_limit) {
  const double z = eps_prime.value() * as_real(d.N_o);
  const double N_o = as_real(d.N_o);
  return integrate_against_design_law(d, z / N_o, upper_limit,
                                      [&](Probability t) { return accept_given_violation(z, N_o, t).value(); });
}

double continuous_reject_probability(const DesignDims& d, Probability eps_prime) {
  const double z = eps_prime.value() * as_real(d.N_o);
  const double N_o = as_real(d.N_o);
  return integrate_against_design_law(d, z / N_o, 1.0,
                                      [&](Probability t) { return reg_inc_beta(z + 1.0, N_o - z, t).value(); });
}

bool oracle_always_accepts(const DesignDims& d, Probability eps_prime, ThresholdConvention c) {
  if (c == ThresholdConvention::floor) return oracle_threshold(eps_prime, d.N_o) >= d.N_o;
  return eps_prime.value() * as_real(d.N_o) >= as_real(d.N_o);
}

}  // namespace

void DesignDims::validate() const {
  if (n < 1) throw DomainError("decision dimension n must be >= 1");
  if (N < n) throw DomainError("design sample count N must be >= n");
  if (N_o < 1) throw DomainError("oracle sample count N_o must be >= 1");
}

Levels Levels::make(double eps, double eps_prime, double beta_target) {
  Levels l{Probability{eps}, Probability{eps_prime}, Probability{beta_target}};
  l.validate();
  return l;
}

void Levels::validate() const {
  if (eps_prime.value() > eps.value()) throw DomainError("oracle level eps' must not exceed eps");
  if (!(beta_target.value() > 0.0 && beta_target.value() < 1.0)) {
    throw DomainError("confidence target beta must lie in (0,1)");
  }
}

std::int64_t oracle_threshold(Probability eps_prime, std::int64_t N_o) {
  if (N_o < 1) throw DomainError("oracle sample count N_o must be >= 1");
  const auto z = static_cast<std::int64_t>(std::floor(eps_prime.value() * as_real(N_o) + kThresholdSlack));
  return std::min(z, N_o);
}

Probability beta_eps(std::int64_t N, std::int64_t n, Probability eps) {
  if (n < 1 || N < n) throw DomainError("beta_eps requires N >= n >= 1");
  return reg_inc_beta_upper(as_real(n), as_real(N + 1 - n), eps);
}

Probability fv_lower_bound(std::int64_t N, std::int64_t n, Probability eps) {
  if (n < 1 || N < n) throw DomainError("fv_lower_bound requires N >= n >= 1");
  return binomial_tail_lower(N, n, eps);
}

Probability true_probability_lower_bound(const DesignDims& dims, Probability eps_prime,
                                         ThresholdConvention convention) {
  dims.validate();
  if (oracle_always_accepts(dims, eps_prime, convention)) return Probability{1.0};
  if (convention == ThresholdConvention::continuous) {
    return Probability{clamp01(continuous_accept_probability(dims, eps_prime, 1.0))};
  }
  const std::int64_t z = oracle_threshold(eps_prime, dims.N_o);
  return beta_binom_cdf(dims.N_o, as_real(dims.n), as_real(dims.N + 1 - dims.n), z);
}

Probability h_one(const DesignDims& dims, Probability eps_prime, ThresholdConvention convention) {
  dims.validate();
  if (oracle_always_accepts(dims, eps_prime, convention)) return Probability{0.0};
  if (convention == ThresholdConvention::continuous) {
    return Probability{clamp01(continuous_reject_probability(dims, eps_prime))};
  }
  return Probability{clamp01(1.0 - true_probability_lower_bound(dims, eps_prime).value())};
}

Probability h_eps(const DesignDims& dims, const Levels& levels, ThresholdConvention convention) {
  dims.validate();
  levels.validate();
  const Probability eps = levels.eps;
  if (eps.value() == 0.0) return Probability{1.0};
  if (convention == ThresholdConvention::continuous) {
    if (oracle_always_accepts(dims, levels.eps_prime, convention)) return Probability{beta_eps(dims.N, dims.n, eps)};
    return Probability{clamp01(1.0 - continuous_accept_probability(dims, levels.eps_prime, eps.value()))};
  }
  const std::int64_t z = oracle_threshold(levels.eps_prime, dims.N_o);
  const auto pmf = oracle_count_pmf(dims, z);
  CompensatedSum good_true;
  for (std::int64_t i = 0; i <= z; ++i) {
    const double w = pmf[static_cast<std::size_t>(i)];
    if (w == 0.0) continue;
    good_true.add(w * reg_inc_beta(as_real(dims.n + i), as_real(dims.N + dims.N_o - dims.n - i + 1), eps).value());
  }
  return Probability{clamp01(1.0 - good_true.value())};
}

Probability bar_beta(const DesignDims& dims, const Levels& levels) {
  dims.validate();
  levels.validate();
  const double No = as_real(dims.N_o);
  const double ep = levels.eps_prime.value();
  const double a = as_real(dims.N) + (1.0 - ep) * No - as_real(dims.n) + 1.0;
  const double b = as_real(dims.n) + ep * No;
  // I_{1−ε}(a, b) = 1 − I_ε(b, a)
  return reg_inc_beta_upper(b, a, levels.eps);
}

BoundReport bad_exit_bound_general(const DesignDims& dims, const Levels& levels) {
  dims.validate();
  levels.validate();
  const double No = as_real(dims.N_o);
  const double ep = levels.eps_prime.value();
  if (ep >= 1.0) throw DomainError("general BadExit bound requires eps' < 1");
  const Probability accept = true_probability_lower_bound(dims, levels.eps_prime);
  if (accept.value() == 0.0) {
    throw BoundUndefinedError("H_{1,eps'} = 1: the oracle never accepts, BadExit bound undefined");
  }
  const double lead = reg_inc_beta_upper(ep * No + 1.0, (1.0 - ep) * No, levels.eps).value();
  const double value = lead * beta_eps(dims.N, dims.n, levels.eps).value() / accept.value();
  if (value >= 1.0) return {1.0, true};
  return {value, false};
}

BoundReport bad_exit_bound_fs(const DesignDims& dims, const Levels& levels) {
  return {bar_beta(dims, levels).value(), false};
}

Probability bad_exit_probability_fs(const DesignDims& dims, const Levels& levels) {
  dims.validate();
  levels.validate();
  const Probability accept = true_probability_lower_bound(dims, levels.eps_prime);
  if (accept.value() == 0.0) {
    throw BoundUndefinedError("H_{1,eps'} = 1: the oracle never accepts, BadExit probability undefined");
  }
  const std::int64_t z = oracle_threshold(levels.eps_prime, dims.N_o);
  const auto pmf = oracle_count_pmf(dims, z);
  CompensatedSum bad;
  for (std::int64_t i = 0; i <= z; ++i) {
    const double w = pmf[static_cast<std::size_t>(i)];
    if (w == 0.0) continue;
    bad.add(w * reg_inc_beta_upper(as_real(dims.n + i), as_real(dims.N + dims.N_o - dims.n - i + 1), levels.eps)
                    .value());
  }
  return Probability{clamp01(bad.value() / accept.value())};
}

RuntimeBounds dvo_runtime_bounds(std::int64_t N, std::int64_t n, Probability eps, std::int64_t k) {
  if (k < 1) throw DomainError("runtime bound requires k >= 1");
  const double success = binomial_tail_lower(N, n, eps).value();
  if (success == 0.0) throw BoundUndefinedError("beta_eps(N) = 1: Algorithm 1 never terminates");
  const double fail = beta_eps(N, n, eps).value();
  return {1.0 / success, clamp01(-std::expm1(as_real(k) * std::log(fail)))};
}

RuntimeBounds rvo_runtime_bounds(const DesignDims& dims, Probability eps_prime, std::int64_t k,
                                 ThresholdConvention convention) {
  if (k < 1) throw DomainError("runtime bound requires k >= 1");
  const double accept = true_probability_lower_bound(dims, eps_prime, convention).value();
  if (accept == 0.0) throw BoundUndefinedError("H_{1,eps'} = 1: Algorithm 2 never terminates");
  const double reject = h_one(dims, eps_prime, convention).value();
  return {1.0 / accept, clamp01(-std::expm1(as_real(k) * std::log(reject)))};
}

Probability h_one_asymptotic(std::int64_t N, std::int64_t n, Probability eps_prime) {
  return beta_eps(N, n, eps_prime);
}

}  // namespace rsd
