#pragma once

// Embedded convex solvers: a dense two-phase tableau simplex (Bland's rule)
// and a Kelley cutting-plane loop for min_u max_i g_i(u) with convex
// quadratic g_i. Both are deterministic functions of their inputs.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace rsd {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

enum class RowSense { le, eq, ge };

/// min cᵀx  s.t.  A x (≤|=|≥) b,  lower_j ∈ {0, −∞},  x_j ≤ upper_j (optional).
struct LinearProgram {
  Vector objective;
  Matrix A;
  Vector rhs;
  std::vector<RowSense> sense;
  std::vector<double> lower;                 ///< 0 or -infinity per variable
  std::vector<std::optional<double>> upper;  ///< empty vector = no upper bounds

  /// A program over `vars` nonnegative variables with no rows.
  static LinearProgram with_variables(Eigen::Index vars);
  /// Append a row; `coeffs` must have one entry per variable.
  void add_row(const Vector& coeffs, RowSense s, double b);

  [[nodiscard]] Eigen::Index variables() const { return objective.size(); }
  [[nodiscard]] Eigen::Index rows() const { return A.rows(); }

  /// Throws DomainError on inconsistent shapes, non-finite entries or bad bounds.
  void validate() const;
};

enum class SolveStatus { optimal, infeasible, unbounded, iteration_limit };

const char* to_string(SolveStatus s);

struct SolveOutcome {
  SolveStatus status = SolveStatus::iteration_limit;
  Vector solution;  ///< empty unless optimal
  double objective = 0.0;
  std::int64_t iterations = 0;
};

struct LpTolerances {
  double feasibility = 1e-9;
  double optimality = 1e-9;
  double pivot = 1e-11;
  std::int64_t max_iterations = 200000;
  /// Solve the dual when rows exceed this multiple of the variable count.
  double dual_row_ratio = 2.0;
};

SolveOutcome lp_solve(const LinearProgram& lp, const LpTolerances& tol = {});

/// Max primal violation of rows and bounds at x (0 when feasible).
double lp_primal_residual(const LinearProgram& lp, const Vector& x);

/// JSON document: {"objective": [...], "rows": [[...], ...], "rhs": [...],
/// "sense": ["le"|"eq"|"ge", ...], "lower": [0|null, ...], "upper": [num|null, ...]}.
/// null lower means −∞; "lower"/"upper" may be omitted.
LinearProgram lp_from_json(const std::string& text);
std::string lp_to_json(const LinearProgram& lp);

/// g(u) = uᵀPu + bᵀu + c with P symmetric positive semidefinite.
struct QuadraticTerm {
  Matrix P;
  Vector b;
  double c = 0.0;

  [[nodiscard]] double value(const Vector& u) const;
  [[nodiscard]] Vector gradient(const Vector& u) const;
};

struct MinimaxTolerances {
  double relative_gap = 1e-6;
  double initial_box = 10.0;
  double box_growth = 10.0;
  double max_box = 1e6;
  std::int64_t max_iterations = 20000;
  LpTolerances lp{};
};

/// min_{u,γ} γ  s.t.  g_i(u) + λ‖u‖² ≤ γ.  Kelley cutting planes on the most
/// violated term; master LP over the box ‖u‖∞ ≤ H, H grown while the master
/// solution touches the box. Returns solution [u; γ] with γ = max_i g_i(u)
/// + λ‖u‖² at the best incumbent, so every term is satisfied exactly.
SolveOutcome minimax_quadratic_solve(const std::vector<QuadraticTerm>& terms, double lambda,
                                     const MinimaxTolerances& tol = {});

}  // namespace rsd
