#include "rsd/errors.hpp"
#include "rsd/solver.hpp"

#include <cmath>
#include <limits>

namespace rsd {

double QuadraticTerm::value(const Vector& u) const { return u.dot(P * u) + b.dot(u) + c; }

Vector QuadraticTerm::gradient(const Vector& u) const { return 2.0 * (P * u) + b; }

namespace {

struct Cut {
  Vector slope;      // ∇g_i(u_k) + 2λu_k
  double intercept;  // g_i(u_k) + λ‖u_k‖² − slopeᵀu_k
};

// min γ over (u, γ) s.t. slopeᵀu − γ ≤ −intercept for each cut, |u_j| ≤ H.
LinearProgram build_master(const std::vector<Cut>& cuts, Eigen::Index d, double H) {
  LinearProgram lp = LinearProgram::with_variables(d + 1);
  lp.objective(d) = 1.0;
  lp.lower.assign(static_cast<std::size_t>(d + 1), -std::numeric_limits<double>::infinity());
  Vector row(d + 1);
  for (const Cut& c : cuts) {
    row.head(d) = c.slope;
    row(d) = -1.0;
    lp.add_row(row, RowSense::le, -c.intercept);
  }
  for (Eigen::Index j = 0; j < d; ++j) {
    row.setZero();
    row(j) = 1.0;
    lp.add_row(row, RowSense::le, H);
    lp.add_row(row, RowSense::ge, -H);
  }
  return lp;
}

void validate_terms(const std::vector<QuadraticTerm>& terms, double lambda) {
  if (terms.empty()) throw DomainError("minimax solve needs at least one quadratic term");
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw DomainError("regularizer lambda must be finite and >= 0");
  const Eigen::Index d = terms.front().b.size();
  if (d < 1) throw DomainError("quadratic terms need at least one variable");
  for (const auto& t : terms) {
    if (t.P.rows() != d || t.P.cols() != d || t.b.size() != d) throw DomainError("quadratic term shape mismatch");
    if (!t.P.allFinite() || !t.b.allFinite() || !std::isfinite(t.c)) throw DomainError("quadratic term not finite");
  }
}

}  // namespace

SolveOutcome minimax_quadratic_solve(const std::vector<QuadraticTerm>& terms, double lambda,
                                     const MinimaxTolerances& tol) {
  validate_terms(terms, lambda);
  const Eigen::Index d = terms.front().b.size();

  Vector u = Vector::Zero(d);
  Vector best_u = u;
  double upper = std::numeric_limits<double>::infinity();
  double H = tol.initial_box;
  std::vector<Cut> cuts;

  SolveOutcome out;
  for (std::int64_t it = 1; it <= tol.max_iterations; ++it) {
    out.iterations = it;
    const double reg = lambda * u.squaredNorm();
    std::size_t worst = 0;
    double worst_val = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < terms.size(); ++i) {
      const double v = terms[i].value(u) + reg;
      if (v > worst_val) {
        worst_val = v;
        worst = i;
      }
    }
    if (worst_val < upper) {
      upper = worst_val;
      best_u = u;
    }
    const Vector slope = terms[worst].gradient(u) + 2.0 * lambda * u;
    cuts.push_back({slope, worst_val - slope.dot(u)});

    const SolveOutcome master = lp_solve(build_master(cuts, d, H), tol.lp);
    if (master.status != SolveStatus::optimal) {
      throw SolverError(std::string("cutting-plane master LP ended with status ") + to_string(master.status));
    }
    const double lower = master.objective;
    u = master.solution.head(d);
    if (upper - lower <= tol.relative_gap * (1.0 + std::abs(upper))) {
      if (best_u.lpNorm<Eigen::Infinity>() < H * (1.0 - 1e-9)) {
        out.status = SolveStatus::optimal;
        out.solution = Vector(d + 1);
        out.solution.head(d) = best_u;
        out.solution(d) = upper;
        out.objective = upper;
        return out;
      }
      // Converged against the box: the cuts stay valid, widen and go on.
      if (H >= tol.max_box) throw SolverError("cutting-plane master unbounded within the maximal box");
      H *= tol.box_growth;
    }
  }
  out.status = SolveStatus::iteration_limit;
  return out;
}

}  // namespace rsd
