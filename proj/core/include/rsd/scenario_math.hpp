#pragma once

#include <cstdint>

#include "rsd/prob_kernel.hpp"

namespace rsd {

/// Sample counts of one RSD deployment.
struct DesignDims {
  std::int64_t n = 1;    ///< decision dimension
  std::int64_t N = 1;    ///< design scenarios per iteration
  std::int64_t N_o = 1;  ///< oracle samples per iteration

  /// Throws DomainError unless n ≥ 1, N ≥ n, N_o ≥ 1.
  void validate() const;
};

/// Violation level ε, oracle level ε' and failure target β.
struct Levels {
  Probability eps;
  Probability eps_prime;
  Probability beta_target{1e-12};

  static Levels make(double eps, double eps_prime, double beta_target = 1e-12);

  /// Throws DomainError unless 0 ≤ ε' ≤ ε ≤ 1 and 0 < β < 1.
  void validate() const;
};

/// How the oracle threshold ε'N_o enters the H-functions.
///  - floor: ⌊ε'N_o⌋, the exact acceptance law of the randomized oracle.
///  - continuous: the real-valued relaxation 1 − I_t(z+1, N_o−z) with z = ε'N_o,
///    evaluated by quadrature of the compound integral. Never larger than the
///    floor value of H, so it is the optimistic one.
enum class ThresholdConvention { floor, continuous };

/// Largest admissible violation count ⌊ε'N_o⌋. A 1e-9 slack absorbs the
/// representation error of decimal ε' (0.3·200 must give 60, not 59).
std::int64_t oracle_threshold(Probability eps_prime, std::int64_t N_o);

/// β_ε(N) = 1 − Σ_{i=n}^{N} C(N,i) ε^i (1−ε)^{N−i}, evaluated as an upper
/// incomplete-beta tail so that values near 1e-12 keep relative precision.
Probability beta_eps(std::int64_t N, std::int64_t n, Probability eps);

/// Lower bound on P{V(θ*) ≤ ε} for the one-shot scenario solution, 1 − β_ε(N).
/// Holds with equality for fully supported problems.
Probability fv_lower_bound(std::int64_t N, std::int64_t n, Probability eps);

/// 1 − H_{1,ε'}(N, N_o): the probability the oracle accepts at one stage of
/// a fully supported problem (lower bound in general).
Probability true_probability_lower_bound(const DesignDims& dims, Probability eps_prime,
                                         ThresholdConvention convention = ThresholdConvention::floor);

Probability h_one(const DesignDims& dims, Probability eps_prime,
                  ThresholdConvention convention = ThresholdConvention::floor);

Probability h_eps(const DesignDims& dims, const Levels& levels,
                  ThresholdConvention convention = ThresholdConvention::floor);

/// bar-β_{ε,ε'}(N, N_o) = I_{1−ε}(N + (1−ε')N_o − n + 1, n + ε'N_o), real shapes.
Probability bar_beta(const DesignDims& dims, const Levels& levels);

/// A probability bound that may exceed one; reported as 1 and flagged.
struct BoundReport {
  double value = 0.0;
  bool vacuous = false;
};

/// General (not necessarily fully supported) BadExit bound:
/// I_{1−ε}((1−ε')N_o, ε'N_o+1) · β_ε(N) / (1 − H_{1,ε'}).
BoundReport bad_exit_bound_general(const DesignDims& dims, const Levels& levels);

/// Fully supported BadExit bound, bar-β.
BoundReport bad_exit_bound_fs(const DesignDims& dims, const Levels& levels);

/// Exact BadExit probability for a fully supported problem,
/// (H_{ε,ε'} − H_{1,ε'}) / (1 − H_{1,ε'}), with the numerator summed directly.
Probability bad_exit_probability_fs(const DesignDims& dims, const Levels& levels);

struct RuntimeBounds {
  double expected_bound = 1.0;  ///< bound on E[K]
  double cdf_bound_at_k = 1.0;  ///< lower bound on P(K ≤ k)
};

/// Exact-oracle loop: E[K] ≤ 1/(1 − β_ε(N)), P(K ≤ k) ≥ 1 − β_ε(N)^k.
RuntimeBounds dvo_runtime_bounds(std::int64_t N, std::int64_t n, Probability eps, std::int64_t k);

/// Randomized-oracle loop: E[K] ≤ 1/(1 − H_{1,ε'}), P(K ≤ k) ≥ 1 − H_{1,ε'}^k.
RuntimeBounds rvo_runtime_bounds(const DesignDims& dims, Probability eps_prime, std::int64_t k,
                                 ThresholdConvention convention = ThresholdConvention::floor);

/// Large-N_o limit of H_{1,ε'}(N, N_o), namely β_{ε'}(N).
Probability h_one_asymptotic(std::int64_t N, std::int64_t n, Probability eps_prime);

}  // namespace rsd
