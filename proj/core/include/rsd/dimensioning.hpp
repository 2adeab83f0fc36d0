#pragma once

#include <cstdint>
#include <vector>

#include "rsd/scenario_math.hpp"

namespace rsd {

/// Full dimensioning of one RSD deployment.
struct ScenarioConfig {
  DesignDims dims;
  Levels levels;
  std::int64_t iteration_cap = 1;
  std::uint64_t seed = 0;

  void validate() const;
};

struct TradeoffPoint {
  std::int64_t N = 0;
  double expected_repetitions_bound = 1.0;  ///< (1 − β_{ε'}(N))⁻¹
  bool infinite = false;                    ///< β_{ε'}(N) = 1 at this N
};

/// ⌈(2/ε)(ln β⁻¹ + n − 1)⌉, the explicit sufficient sample size.
std::int64_t n_plain_closed_form(std::int64_t n, Probability eps, Probability beta_target);

/// Least N ≥ n with β_ε(N) ≤ β (doubling bracket, then bisection).
std::int64_t n_plain_exact(std::int64_t n, Probability eps, Probability beta_target);

/// Least N_o ≥ 1 with N_o·δ + N(δ/2 + ε') ≥ (ε/δ) ln β⁻¹ + n − 1, δ = ε − ε'.
std::int64_t min_no_eq19(std::int64_t N, std::int64_t n, const Levels& levels);

/// Log-spaced N grid over [N_lo, N_hi] with the asymptotic repetition bound.
std::vector<TradeoffPoint> tradeoff_curve(std::int64_t n, Probability eps_prime, std::int64_t N_lo,
                                          std::int64_t N_hi, int points);

struct DimensioningReport {
  ScenarioConfig config;
  std::int64_t N_o_eq19 = 0;              ///< sufficient-condition value before ex-post check
  double bar_beta_at_eq19 = 0.0;          ///< bar-β at N_o_eq19
  bool raised_to_meet_target = false;     ///< N_o had to grow beyond N_o_eq19
  BoundReport bad_exit_fs;                ///< bar-β at the final N_o
  BoundReport bad_exit_general;           ///< general bound at the final N_o
  double h_one = 0.0;                     ///< H_{1,ε'}(N, N_o), floor threshold
  double expected_reps_asymptotic = 1.0;  ///< (1 − β_{ε'}(N))⁻¹
  double expected_reps_bound = 1.0;       ///< (1 − H_{1,ε'})⁻¹
};

/// Design route: ε' = fraction·ε; smallest N whose asymptotic repetition bound
/// is ≤ target; N_o from the sufficient condition, verified against bar-β and
/// raised to the least N_o with bar-β ≤ β when the condition falls short;
/// iteration cap = least k with H_{1,ε'}^k ≤ β.
DimensioningReport dimension_rsd(std::int64_t n, Probability eps, Probability beta_target,
                                 double eps_prime_fraction = 0.7, double target_expected_reps = 10.0,
                                 std::uint64_t seed = 0);

/// The same route with N fixed by the caller (ε' = fraction·ε).
DimensioningReport dimension_rsd_at(std::int64_t n, std::int64_t N, Probability eps, Probability beta_target,
                                    double eps_prime_fraction = 0.7, std::uint64_t seed = 0);

/// Least k ≥ 1 with h^k ≤ β.
std::int64_t iteration_cap_for(Probability h, Probability beta_target);

}  // namespace rsd
