#include "rsd/errors.hpp"
#include "rsd/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rsd {

namespace {

using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

constexpr double kInf = std::numeric_limits<double>::infinity();

// min cᵀz  s.t.  S z = b,  z ≥ 0,  b ≥ 0.  Columns [first_artificial, cols)
// are artificials; `basis` is an initial feasible basis of slacks/artificials.
struct StandardForm {
  RowMajor S;
  Vector b;
  Vector c;
  Eigen::Index first_artificial = 0;
  std::vector<Eigen::Index> basis;
  std::vector<double> row_sign;  // −1 where the user row was negated
};

struct EngineResult {
  SolveStatus status = SolveStatus::iteration_limit;
  Vector z;
  Vector duals;  // per standard-form row, in the user row orientation
  std::int64_t iterations = 0;
};

// Column bookkeeping from user variables to standard-form columns.
struct VariableMap {
  std::vector<Eigen::Index> plus;
  std::vector<Eigen::Index> minus;  // −1 when the variable is nonnegative
  Eigen::Index structural = 0;
};

VariableMap map_variables(const LinearProgram& lp) {
  VariableMap m;
  const auto n = lp.variables();
  m.plus.resize(static_cast<std::size_t>(n));
  m.minus.assign(static_cast<std::size_t>(n), -1);
  for (Eigen::Index j = 0; j < n; ++j) {
    m.plus[static_cast<std::size_t>(j)] = m.structural++;
    if (std::isinf(lp.lower[static_cast<std::size_t>(j)])) m.minus[static_cast<std::size_t>(j)] = m.structural++;
  }
  return m;
}

struct UserRow {
  Vector coeffs;  // over user variables
  RowSense sense;
  double rhs;
};

std::vector<UserRow> collect_rows(const LinearProgram& lp) {
  std::vector<UserRow> rows;
  rows.reserve(static_cast<std::size_t>(lp.rows()));
  for (Eigen::Index i = 0; i < lp.rows(); ++i) {
    rows.push_back({lp.A.row(i).transpose(), lp.sense[static_cast<std::size_t>(i)], lp.rhs(i)});
  }
  for (std::size_t j = 0; j < lp.upper.size(); ++j) {
    if (!lp.upper[j]) continue;
    Vector e = Vector::Zero(lp.variables());
    e(static_cast<Eigen::Index>(j)) = 1.0;
    rows.push_back({e, RowSense::le, *lp.upper[j]});
  }
  return rows;
}

StandardForm build_standard_form(const LinearProgram& lp, const VariableMap& vm, const std::vector<UserRow>& rows) {
  const auto m = static_cast<Eigen::Index>(rows.size());
  Eigen::Index slacks = 0;
  Eigen::Index artificials = 0;
  std::vector<RowSense> sense(rows.size());
  std::vector<double> sign(rows.size(), 1.0);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    RowSense s = rows[r].sense;
    if (rows[r].rhs < 0.0) {
      sign[r] = -1.0;
      if (s == RowSense::le) {
        s = RowSense::ge;
      } else if (s == RowSense::ge) {
        s = RowSense::le;
      }
    }
    sense[r] = s;
    if (s != RowSense::eq) ++slacks;
    if (s != RowSense::le) ++artificials;
  }

  StandardForm sf;
  const Eigen::Index cols = vm.structural + slacks + artificials;
  sf.S = RowMajor::Zero(m, cols);
  sf.b = Vector::Zero(m);
  sf.c = Vector::Zero(cols);
  sf.first_artificial = vm.structural + slacks;
  sf.basis.resize(rows.size());
  sf.row_sign = sign;

  for (Eigen::Index j = 0; j < lp.variables(); ++j) {
    const auto uj = static_cast<std::size_t>(j);
    sf.c(vm.plus[uj]) = lp.objective(j);
    if (vm.minus[uj] >= 0) sf.c(vm.minus[uj]) = -lp.objective(j);
  }

  Eigen::Index next_slack = vm.structural;
  Eigen::Index next_art = sf.first_artificial;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto ri = static_cast<Eigen::Index>(r);
    for (Eigen::Index j = 0; j < lp.variables(); ++j) {
      const auto uj = static_cast<std::size_t>(j);
      const double a = sign[r] * rows[r].coeffs(j);
      sf.S(ri, vm.plus[uj]) = a;
      if (vm.minus[uj] >= 0) sf.S(ri, vm.minus[uj]) = -a;
    }
    sf.b(ri) = sign[r] * rows[r].rhs;
    switch (sense[r]) {
      case RowSense::le:
        sf.S(ri, next_slack) = 1.0;
        sf.basis[r] = next_slack++;
        break;
      case RowSense::ge:
        sf.S(ri, next_slack++) = -1.0;
        sf.S(ri, next_art) = 1.0;
        sf.basis[r] = next_art++;
        break;
      case RowSense::eq:
        sf.S(ri, next_art) = 1.0;
        sf.basis[r] = next_art++;
        break;
    }
  }
  return sf;
}

class Tableau {
 public:
  Tableau(const StandardForm& sf, const LpTolerances& tol)
      : sf_(sf), tol_(tol), m_(sf.S.rows()), n_(sf.S.cols()), T_(m_ + 1, n_ + 1), basis_(sf.basis) {
    T_.topLeftCorner(m_, n_) = sf.S;
    T_.topRightCorner(m_, 1) = sf.b;
  }

  EngineResult run() {
    EngineResult res;
    if (sf_.first_artificial < n_) {
      load_phase_one_costs();
      const SolveStatus s1 = iterate(false, res.iterations);
      if (s1 == SolveStatus::iteration_limit) {
        res.status = s1;
        return res;
      }
      const double infeas = -T_(m_, n_);
      if (infeas > tol_.feasibility * (1.0 + sf_.b.lpNorm<Eigen::Infinity>())) {
        res.status = SolveStatus::infeasible;
        return res;
      }
      drive_out_artificials();
    }
    load_phase_two_costs();
    res.status = iterate(true, res.iterations);
    if (res.status != SolveStatus::optimal) return res;
    extract(res);
    return res;
  }

 private:
  bool artificial(Eigen::Index j) const { return j >= sf_.first_artificial; }

  void load_phase_one_costs() {
    T_.row(m_).setZero();
    for (Eigen::Index j = sf_.first_artificial; j < n_; ++j) T_(m_, j) = 1.0;
    for (Eigen::Index r = 0; r < m_; ++r) {
      if (artificial(basis_[static_cast<std::size_t>(r)])) T_.row(m_) -= T_.row(r);
    }
  }

  void load_phase_two_costs() {
    T_.row(m_).setZero();
    T_.row(m_).head(n_) = sf_.c.transpose();
    for (Eigen::Index r = 0; r < m_; ++r) {
      const double cb = sf_.c(basis_[static_cast<std::size_t>(r)]);
      if (cb != 0.0) T_.row(m_) -= cb * T_.row(r);
    }
  }

  void pivot(Eigen::Index p, Eigen::Index q) {
    T_.row(p) /= T_(p, q);
    T_(p, q) = 1.0;
    for (Eigen::Index r = 0; r <= m_; ++r) {
      if (r == p) continue;
      const double f = T_(r, q);
      if (f == 0.0) continue;
      T_.row(r) -= f * T_.row(p);
      T_(r, q) = 0.0;
    }
    basis_[static_cast<std::size_t>(p)] = q;
  }

  // Bland's rule: lowest-index improving column, then lowest-index basic
  // variable among minimum-ratio rows.
  SolveStatus iterate(bool bar_artificials, std::int64_t& iterations) {
    for (;;) {
      Eigen::Index q = -1;
      for (Eigen::Index j = 0; j < n_; ++j) {
        if (bar_artificials && artificial(j)) continue;
        if (T_(m_, j) < -tol_.optimality) {
          q = j;
          break;
        }
      }
      if (q < 0) return SolveStatus::optimal;
      if (iterations >= tol_.max_iterations) return SolveStatus::iteration_limit;

      Eigen::Index p = -1;
      double best = kInf;
      for (Eigen::Index r = 0; r < m_; ++r) {
        const double a = T_(r, q);
        if (a <= tol_.pivot) continue;
        const double ratio = std::max(T_(r, n_), 0.0) / a;
        const double slack = 1e-12 * (1.0 + std::abs(best));
        if (p < 0 || ratio < best - slack ||
            (ratio <= best + slack && basis_[static_cast<std::size_t>(r)] < basis_[static_cast<std::size_t>(p)])) {
          if (p < 0 || ratio < best - slack) best = ratio;
          p = r;
        }
      }
      if (p < 0) return SolveStatus::unbounded;
      pivot(p, q);
      ++iterations;
    }
  }

  void drive_out_artificials() {
    for (Eigen::Index r = 0; r < m_; ++r) {
      if (!artificial(basis_[static_cast<std::size_t>(r)])) continue;
      for (Eigen::Index j = 0; j < sf_.first_artificial; ++j) {
        if (std::abs(T_(r, j)) > tol_.pivot) {
          pivot(r, j);
          break;
        }
      }
      // No candidate: the row is redundant and its artificial stays basic at 0.
    }
  }

  // Basic values and row duals re-solved from the final basis on the
  // original data; the tableau is only trusted for the basis itself.
  void extract(EngineResult& res) const {
    res.z = Vector::Zero(n_);
    res.duals = Vector::Zero(m_);
    if (m_ == 0) return;
    Matrix B(m_, m_);
    Vector cB(m_);
    for (Eigen::Index r = 0; r < m_; ++r) {
      const Eigen::Index j = basis_[static_cast<std::size_t>(r)];
      B.col(r) = sf_.S.col(j);
      cB(r) = sf_.c(j);
    }
    const Eigen::PartialPivLU<Matrix> lu(B);
    Vector xB = lu.solve(sf_.b);
    Vector pi = lu.transpose().solve(cB);
    const double scale = 1.0 + sf_.b.lpNorm<Eigen::Infinity>();
    if (!xB.allFinite() || !pi.allFinite() || (B * xB - sf_.b).lpNorm<Eigen::Infinity>() > 1e-7 * scale) {
      xB = T_.topRightCorner(m_, 1);
      pi = Vector::Zero(m_);
      for (Eigen::Index r = 0; r < m_; ++r) pi(r) = sf_.c(basis_[static_cast<std::size_t>(r)]);
      pi = (B.transpose()).fullPivLu().solve(pi);
    }
    for (Eigen::Index r = 0; r < m_; ++r) {
      res.z(basis_[static_cast<std::size_t>(r)]) = std::max(xB(r), 0.0);
      res.duals(r) = sf_.row_sign[static_cast<std::size_t>(r)] * pi(r);
    }
  }

  const StandardForm& sf_;
  const LpTolerances& tol_;
  Eigen::Index m_;
  Eigen::Index n_;
  RowMajor T_;
  std::vector<Eigen::Index> basis_;
};

struct PrimalResult {
  SolveOutcome outcome;
  Vector row_duals;  // per user row (LP rows first, then upper-bound rows)
};

PrimalResult solve_primal(const LinearProgram& lp, const LpTolerances& tol) {
  const VariableMap vm = map_variables(lp);
  const auto rows = collect_rows(lp);
  const StandardForm sf = build_standard_form(lp, vm, rows);
  const EngineResult er = Tableau(sf, tol).run();

  PrimalResult pr;
  pr.outcome.status = er.status;
  pr.outcome.iterations = er.iterations;
  if (er.status != SolveStatus::optimal) return pr;
  Vector x(lp.variables());
  for (Eigen::Index j = 0; j < lp.variables(); ++j) {
    const auto uj = static_cast<std::size_t>(j);
    x(j) = er.z(vm.plus[uj]) - (vm.minus[uj] >= 0 ? er.z(vm.minus[uj]) : 0.0);
  }
  pr.outcome.solution = x;
  pr.outcome.objective = lp.objective.dot(x);
  pr.row_duals = er.duals;
  return pr;
}

// Tall programs: solve  max b̃ᵀy  s.t.  Ãᵀy (≤|=) c  with the same engine
// (rows ≥-oriented, y ≥ 0 on inequality rows, free on equalities) and read
// x off the multipliers of the dual's rows.
std::optional<SolveOutcome> solve_via_dual(const LinearProgram& lp, const LpTolerances& tol) {
  const auto rows = collect_rows(lp);
  const auto m = static_cast<Eigen::Index>(rows.size());
  const auto n = lp.variables();

  LinearProgram dual;
  dual.objective = Vector(m);
  dual.A = Matrix(n, m);
  dual.rhs = lp.objective;
  dual.lower.assign(static_cast<std::size_t>(m), 0.0);
  for (Eigen::Index i = 0; i < m; ++i) {
    const UserRow& row = rows[static_cast<std::size_t>(i)];
    const double s = row.sense == RowSense::le ? -1.0 : 1.0;
    dual.A.col(i) = s * row.coeffs;
    dual.objective(i) = -s * row.rhs;
    if (row.sense == RowSense::eq) dual.lower[static_cast<std::size_t>(i)] = -kInf;
  }
  dual.sense.resize(static_cast<std::size_t>(n));
  for (Eigen::Index j = 0; j < n; ++j) {
    dual.sense[static_cast<std::size_t>(j)] = std::isinf(lp.lower[static_cast<std::size_t>(j)]) ? RowSense::eq : RowSense::le;
  }

  const PrimalResult dr = solve_primal(dual, tol);
  SolveOutcome out;
  out.iterations = dr.outcome.iterations;
  switch (dr.outcome.status) {
    case SolveStatus::optimal: {
      out.status = SolveStatus::optimal;
      out.solution = -dr.row_duals;
      out.objective = lp.objective.dot(out.solution);
      return out;
    }
    case SolveStatus::unbounded:
      out.status = SolveStatus::infeasible;
      return out;
    case SolveStatus::iteration_limit:
      out.status = SolveStatus::iteration_limit;
      return out;
    case SolveStatus::infeasible:
      break;
  }
  return std::nullopt;  // primal unbounded or infeasible: decide on the primal side
}

}  // namespace

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::optimal:
      return "optimal";
    case SolveStatus::infeasible:
      return "infeasible";
    case SolveStatus::unbounded:
      return "unbounded";
    case SolveStatus::iteration_limit:
      return "iteration-limit";
  }
  return "unknown";
}

LinearProgram LinearProgram::with_variables(Eigen::Index vars) {
  LinearProgram lp;
  lp.objective = Vector::Zero(vars);
  lp.A = Matrix(0, vars);
  lp.rhs = Vector(0);
  lp.lower.assign(static_cast<std::size_t>(vars), 0.0);
  return lp;
}

void LinearProgram::add_row(const Vector& coeffs, RowSense s, double b) {
  if (coeffs.size() != variables()) throw DomainError("LP row length does not match variable count");
  A.conservativeResize(A.rows() + 1, variables());
  A.row(A.rows() - 1) = coeffs.transpose();
  rhs.conservativeResize(rhs.size() + 1);
  rhs(rhs.size() - 1) = b;
  sense.push_back(s);
}

void LinearProgram::validate() const {
  const auto n = variables();
  if (A.cols() != n) throw DomainError("LP matrix column count does not match objective length");
  if (rhs.size() != A.rows()) throw DomainError("LP rhs length does not match row count");
  if (static_cast<Eigen::Index>(sense.size()) != A.rows()) throw DomainError("LP sense count does not match rows");
  if (static_cast<Eigen::Index>(lower.size()) != n) throw DomainError("LP lower-bound count does not match variables");
  if (!upper.empty() && static_cast<Eigen::Index>(upper.size()) != n) {
    throw DomainError("LP upper-bound count does not match variables");
  }
  if (!objective.allFinite() || !A.allFinite() || !rhs.allFinite()) throw DomainError("LP data must be finite");
  for (double l : lower) {
    if (!(l == 0.0 || (std::isinf(l) && l < 0.0))) throw DomainError("LP lower bounds must be 0 or -infinity");
  }
  for (const auto& u : upper) {
    if (u && !std::isfinite(*u)) throw DomainError("LP upper bounds must be finite when present");
  }
}

double lp_primal_residual(const LinearProgram& lp, const Vector& x) {
  double worst = 0.0;
  const Vector ax = lp.A * x;
  for (Eigen::Index i = 0; i < lp.rows(); ++i) {
    const double d = ax(i) - lp.rhs(i);
    switch (lp.sense[static_cast<std::size_t>(i)]) {
      case RowSense::le:
        worst = std::max(worst, d);
        break;
      case RowSense::ge:
        worst = std::max(worst, -d);
        break;
      case RowSense::eq:
        worst = std::max(worst, std::abs(d));
        break;
    }
  }
  for (Eigen::Index j = 0; j < lp.variables(); ++j) {
    const auto uj = static_cast<std::size_t>(j);
    if (lp.lower[uj] == 0.0) worst = std::max(worst, -x(j));
    if (!lp.upper.empty() && lp.upper[uj]) worst = std::max(worst, x(j) - *lp.upper[uj]);
  }
  return worst;
}

SolveOutcome lp_solve(const LinearProgram& lp, const LpTolerances& tol) {
  lp.validate();
  std::int64_t total_rows = lp.rows();
  for (const auto& u : lp.upper) total_rows += u ? 1 : 0;
  if (lp.variables() > 0 && static_cast<double>(total_rows) > tol.dual_row_ratio * static_cast<double>(lp.variables())) {
    if (auto viadual = solve_via_dual(lp, tol)) return *viadual;
  }
  return solve_primal(lp, tol).outcome;
}

}  // namespace rsd
