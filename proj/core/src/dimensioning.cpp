#include "rsd/dimensioning.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace rsd {

namespace {

double as_real(std::int64_t v) { return static_cast<double>(v); }

// Least x in [lo, hi] with pred(x), given pred(hi) and monotone pred.
template <class Pred>
std::int64_t bisect_first_true(std::int64_t lo, std::int64_t hi, Pred pred) {
  while (lo < hi) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    if (pred(mid)) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return hi;
}

template <class Pred>
std::int64_t search_first_true(std::int64_t start, Pred pred, const char* what) {
  if (pred(start)) return start;
  std::int64_t lo = start;
  std::int64_t hi = std::max<std::int64_t>(2 * start, 1);
  while (!pred(hi)) {
    lo = hi;
    if (hi > std::numeric_limits<std::int64_t>::max() / 4) {
      throw DimensioningError(std::string(what) + ": search bracket overflow");
    }
    hi *= 2;
  }
  return bisect_first_true(lo + 1, hi, pred);
}

bool eq19_holds(std::int64_t N_o, std::int64_t N, std::int64_t n, double eps, double eps_p, double beta) {
  const double delta = eps - eps_p;
  const double lhs = as_real(N_o) * delta + as_real(N) * (delta / 2.0 + eps_p);
  const double rhs = (eps / delta) * std::log(1.0 / beta) + as_real(n) - 1.0;
  return lhs >= rhs;
}

}  // namespace

void ScenarioConfig::validate() const {
  dims.validate();
  levels.validate();
  if (iteration_cap < 1) throw DomainError("iteration cap must be >= 1");
}

std::int64_t n_plain_closed_form(std::int64_t n, Probability eps, Probability beta_target) {
  if (n < 1) throw DomainError("decision dimension n must be >= 1");
  if (eps.value() <= 0.0) throw DomainError("closed-form sample size requires eps > 0");
  if (beta_target.value() <= 0.0) throw DomainError("closed-form sample size requires beta > 0");
  const double v = (2.0 / eps.value()) * (std::log(1.0 / beta_target.value()) + as_real(n) - 1.0);
  return static_cast<std::int64_t>(std::ceil(v));
}

std::int64_t n_plain_exact(std::int64_t n, Probability eps, Probability beta_target) {
  if (n < 1) throw DomainError("decision dimension n must be >= 1");
  if (eps.value() <= 0.0) throw DomainError("exact sample size requires eps > 0");
  if (beta_target.value() <= 0.0) throw DomainError("exact sample size requires beta > 0");
  return search_first_true(
      n, [&](std::int64_t N) { return beta_eps(N, n, eps).value() <= beta_target.value(); }, "n_plain_exact");
}

std::int64_t min_no_eq19(std::int64_t N, std::int64_t n, const Levels& levels) {
  levels.validate();
  if (n < 1 || N < n) throw DomainError("min_no_eq19 requires N >= n >= 1");
  const double eps = levels.eps.value();
  const double eps_p = levels.eps_prime.value();
  const double beta = levels.beta_target.value();
  const double delta = eps - eps_p;
  if (!(delta > 0.0)) throw DomainError("min_no_eq19 requires eps' < eps");

  const double rhs = (eps / delta) * std::log(1.0 / beta) + as_real(n) - 1.0;
  const double need = (rhs - as_real(N) * (delta / 2.0 + eps_p)) / delta;
  auto N_o = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(need)));
  // Absorb rounding in `need`: step to the exact least integer.
  while (N_o > 1 && eq19_holds(N_o - 1, N, n, eps, eps_p, beta)) --N_o;
  while (!eq19_holds(N_o, N, n, eps, eps_p, beta)) ++N_o;
  return N_o;
}

std::vector<TradeoffPoint> tradeoff_curve(std::int64_t n, Probability eps_prime, std::int64_t N_lo,
                                          std::int64_t N_hi, int points) {
  if (N_lo < n) throw DomainError("tradeoff range must start at N >= n");
  if (N_hi < N_lo) throw DomainError("tradeoff range is empty");
  if (points < 1) throw DomainError("tradeoff curve needs at least one point");

  std::vector<std::int64_t> grid;
  const double l0 = std::log(as_real(N_lo));
  const double l1 = std::log(as_real(N_hi));
  for (int k = 0; k < points; ++k) {
    const double f = points == 1 ? 0.0 : static_cast<double>(k) / (points - 1);
    auto N = static_cast<std::int64_t>(std::llround(std::exp(l0 + f * (l1 - l0))));
    grid.push_back(std::clamp(N, N_lo, N_hi));
  }
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  std::vector<TradeoffPoint> curve;
  curve.reserve(grid.size());
  for (std::int64_t N : grid) {
    const double success = fv_lower_bound(N, n, eps_prime).value();
    if (success == 0.0) {
      curve.push_back({N, std::numeric_limits<double>::infinity(), true});
    } else {
      curve.push_back({N, 1.0 / success, false});
    }
  }
  return curve;
}

std::int64_t iteration_cap_for(Probability h, Probability beta_target) {
  if (!(beta_target.value() > 0.0 && beta_target.value() < 1.0)) {
    throw DomainError("confidence target beta must lie in (0,1)");
  }
  if (h.value() <= beta_target.value()) return 1;
  if (h.value() >= 1.0) throw DimensioningError("H_{1,eps'} = 1: no finite iteration cap");
  auto k = static_cast<std::int64_t>(std::ceil(std::log(beta_target.value()) / std::log(h.value())));
  k = std::max<std::int64_t>(k, 1);
  while (k > 1 && std::pow(h.value(), static_cast<double>(k - 1)) <= beta_target.value()) --k;
  while (std::pow(h.value(), static_cast<double>(k)) > beta_target.value()) ++k;
  return k;
}

namespace {

void check_route_args(std::int64_t n, Probability eps, double eps_prime_fraction) {
  if (n < 1) throw DomainError("decision dimension n must be >= 1");
  if (!(eps.value() > 0.0 && eps.value() < 1.0)) throw DomainError("dimensioning requires 0 < eps < 1");
  if (!(eps_prime_fraction > 0.0 && eps_prime_fraction < 1.0)) {
    throw DomainError("eps' fraction must lie in (0,1)");
  }
}

}  // namespace

DimensioningReport dimension_rsd_at(std::int64_t n, std::int64_t N, Probability eps, Probability beta_target,
                                    double eps_prime_fraction, std::uint64_t seed) {
  check_route_args(n, eps, eps_prime_fraction);
  if (N < n) throw DomainError("design sample count N must be >= n");
  const Levels levels{eps, Probability{eps_prime_fraction * eps.value()}, beta_target};
  levels.validate();

  DimensioningReport r;
  r.N_o_eq19 = min_no_eq19(N, n, levels);
  auto fs_ok = [&](std::int64_t N_o) {
    return bar_beta(DesignDims{n, N, N_o}, levels).value() <= beta_target.value();
  };
  r.bar_beta_at_eq19 = bar_beta(DesignDims{n, N, r.N_o_eq19}, levels).value();
  const std::int64_t N_o = search_first_true(r.N_o_eq19, fs_ok, "oracle sample size");
  r.raised_to_meet_target = N_o != r.N_o_eq19;

  const DesignDims dims{n, N, N_o};
  r.bad_exit_fs = bad_exit_bound_fs(dims, levels);
  r.bad_exit_general = bad_exit_bound_general(dims, levels);
  const Probability h = h_one(dims, levels.eps_prime);
  r.h_one = h.value();
  r.expected_reps_asymptotic = 1.0 / fv_lower_bound(N, n, levels.eps_prime).value();
  r.expected_reps_bound = 1.0 / true_probability_lower_bound(dims, levels.eps_prime).value();

  r.config = ScenarioConfig{dims, levels, iteration_cap_for(h, beta_target), seed};
  r.config.validate();
  return r;
}

DimensioningReport dimension_rsd(std::int64_t n, Probability eps, Probability beta_target, double eps_prime_fraction,
                                 double target_expected_reps, std::uint64_t seed) {
  check_route_args(n, eps, eps_prime_fraction);
  if (!(target_expected_reps > 1.0) || !std::isfinite(target_expected_reps)) {
    throw DimensioningError("target expected repetitions must be a finite value > 1");
  }
  // Asymptotic bound (1 − β_{ε'}(N))⁻¹ ≤ target ⇔ β_{ε'}(N) ≤ 1 − 1/target.
  const double reps_beta = 1.0 - 1.0 / target_expected_reps;
  if (!(reps_beta > 0.0)) throw DimensioningError("target expected repetitions too close to 1");
  const std::int64_t N = n_plain_exact(n, Probability{eps_prime_fraction * eps.value()}, Probability{reps_beta});
  return dimension_rsd_at(n, N, eps, beta_target, eps_prime_fraction, seed);
}

}  // namespace rsd
