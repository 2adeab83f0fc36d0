#include "rsd/problems.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "rsd/errors.hpp"

namespace rsd {

namespace {

using nlohmann::json;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open instance file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json parse_instance(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw DomainError(std::string("malformed instance JSON: ") + e.what());
  }
}

Vector json_vector(const json& arr) {
  Vector v(static_cast<Eigen::Index>(arr.size()));
  for (std::size_t i = 0; i < arr.size(); ++i) v(static_cast<Eigen::Index>(i)) = arr[i].get<double>();
  return v;
}

Matrix json_matrix(const json& rows) {
  if (!rows.is_array() || rows.empty()) throw DomainError("instance matrix must be a nonempty array of rows");
  const auto r = static_cast<Eigen::Index>(rows.size());
  const auto c = static_cast<Eigen::Index>(rows[0].size());
  Matrix m(r, c);
  for (Eigen::Index i = 0; i < r; ++i) {
    const json& row = rows[static_cast<std::size_t>(i)];
    if (static_cast<Eigen::Index>(row.size()) != c) throw DomainError("instance matrix rows differ in length");
    for (Eigen::Index j = 0; j < c; ++j) m(i, j) = row[static_cast<std::size_t>(j)].get<double>();
  }
  return m;
}

void require_samples(std::span<const Vector> samples, Eigen::Index size) {
  if (samples.empty()) throw DomainError("scenario solve needs at least one sample");
  for (const Vector& q : samples) {
    if (q.size() != size) throw DomainError("uncertainty sample has the wrong dimension");
  }
}

}  // namespace

// ---------------------------------------------------------------- synthetic

Vector SyntheticFS1D::sample(RandomStream& rng) const { return Vector::Constant(1, rng.uniform01()); }

SolveOutcome SyntheticFS1D::solve(std::span<const Vector> samples) const {
  require_samples(samples, 1);
  double theta = samples.front()(0);
  for (const Vector& q : samples) theta = std::max(theta, q(0));
  SolveOutcome out;
  out.status = SolveStatus::optimal;
  out.solution = Vector::Constant(1, theta);
  out.objective = theta;
  out.iterations = 0;
  return out;
}

double SyntheticFS1D::constraint_value(const Vector& theta, const Vector& q) const { return q(0) - theta(0); }

std::optional<double> SyntheticFS1D::analytic_violation(const Vector& theta) const {
  return std::clamp(1.0 - theta(0), 0.0, 1.0);
}

// ------------------------------------------------------------- input design

void InputDesignInstance::validate() const {
  if (T < 1) throw DomainError("horizon T must be >= 1");
  if (!(rho >= 0.0) || !std::isfinite(rho)) throw DomainError("perturbation radius rho must be finite and >= 0");
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw DomainError("lambda must be finite and >= 0");
  const auto na = A0.rows();
  if (na < 1 || A0.cols() != na) throw DomainError("A0 must be square and nonempty");
  if (B.size() != na || x_bar.size() != na) throw DomainError("B and x_bar must match the size of A0");
  if (!A0.allFinite() || !B.allFinite() || !x_bar.allFinite()) throw DomainError("instance data must be finite");
}

InputDesignInstance InputDesignInstance::reference() {
  InputDesignInstance in;
  in.A0.resize(6, 6);
  in.A0 << -0.7214, -0.0578, 0.2757, 0.7255, 0.2171, 0.3901,  //
      0.5704, 0.1762, 0.3684, -0.0971, 0.6822, -0.5604,        //
      -1.3983, -0.1795, 0.1511, 1.0531, -0.1601, 0.9031,       //
      -0.6308, -0.0058, 0.4422, 0.8169, 0.5120, 0.2105,        //
      0.7539, 0.1423, 0.2039, -0.3757, 0.5088, -0.6081,        //
      -1.3571, -0.1769, 0.1076, 1.0032, -0.1781, 0.9151;
  in.B.resize(6);
  in.B << 0, 1, 0, 1, 0, 1;
  in.x_bar.resize(6);
  in.x_bar << 1, -0.5, 2, 1, -1, 2;
  in.T = 10;
  in.rho = 0.001;
  in.lambda = 0.005;
  return in;
}

InputDesignInstance InputDesignInstance::from_json(const std::string& text) {
  const json doc = parse_instance(text);
  try {
    InputDesignInstance in = reference();
    if (doc.contains("A0")) in.A0 = json_matrix(doc["A0"]);
    if (doc.contains("B")) in.B = json_vector(doc["B"]);
    if (doc.contains("x_bar")) in.x_bar = json_vector(doc["x_bar"]);
    in.T = doc.value("T", in.T);
    in.rho = doc.value("rho", in.rho);
    in.lambda = doc.value("lambda", in.lambda);
    in.validate();
    return in;
  } catch (const json::exception& e) {
    throw DomainError(std::string("invalid input-design instance: ") + e.what());
  }
}

InputDesignProblem::InputDesignProblem(InputDesignInstance instance, MinimaxTolerances tol)
    : instance_(std::move(instance)), tol_(tol) {
  instance_.validate();
}

Vector InputDesignProblem::sample(RandomStream& rng) const {
  const auto na = instance_.A0.rows();
  Vector q(na * na);
  for (Eigen::Index k = 0; k < q.size(); ++k) q(k) = rng.uniform(-instance_.rho, instance_.rho);
  return q;
}

Matrix InputDesignProblem::reachability(const Vector& q) const {
  const auto na = instance_.A0.rows();
  if (q.size() != na * na) throw DomainError("input-design uncertainty must have n_a^2 entries");
  const Matrix A = instance_.A0 + Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
                                      q.data(), na, na);
  Matrix R(na, instance_.T);
  R.col(instance_.T - 1) = instance_.B;
  for (int t = instance_.T - 2; t >= 0; --t) R.col(t) = A * R.col(t + 1);
  return R;
}

QuadraticTerm InputDesignProblem::term(const Vector& q) const {
  const Matrix R = reachability(q);
  return {R.transpose() * R, -2.0 * R.transpose() * instance_.x_bar, instance_.x_bar.squaredNorm()};
}

double InputDesignProblem::cost(const Vector& u, const Vector& q) const {
  return (reachability(q) * u - instance_.x_bar).squaredNorm() + instance_.lambda * u.squaredNorm();
}

SolveOutcome InputDesignProblem::solve(std::span<const Vector> samples) const {
  const auto na = instance_.A0.rows();
  require_samples(samples, na * na);
  std::vector<QuadraticTerm> terms;
  terms.reserve(samples.size());
  for (const Vector& q : samples) terms.push_back(term(q));
  SolveOutcome out = minimax_quadratic_solve(terms, instance_.lambda, tol_);
  if (out.status != SolveStatus::optimal) return out;
  // γ re-evaluated with the same code path as constraint_value, so every
  // design sample satisfies f(θ*, q) ≤ 0 bit-for-bit.
  const Vector u = out.solution.head(instance_.T);
  double gamma = -std::numeric_limits<double>::infinity();
  for (const Vector& q : samples) gamma = std::max(gamma, cost(u, q));
  out.solution(instance_.T) = gamma;
  out.objective = gamma;
  return out;
}

double InputDesignProblem::constraint_value(const Vector& theta, const Vector& q) const {
  if (theta.size() != instance_.T + 1) throw DomainError("input-design decision must have T+1 entries");
  return cost(theta.head(instance_.T), q) - theta(instance_.T);
}

// ---------------------------------------------------------------- transport

void TransportNetworkInstance::validate() const {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw DomainError("transport sigma must be positive");
  if (!(bound > 0.0) || !std::isfinite(bound)) throw DomainError("transport truncation bound must be positive");
  if (!(tau >= 0.0) || !std::isfinite(tau)) throw DomainError("transport margin tau must be >= 0");
}

TransportNetworkInstance TransportNetworkInstance::from_json(const std::string& text) {
  const json doc = parse_instance(text);
  try {
    TransportNetworkInstance in;
    in.sigma = doc.value("sigma", in.sigma);
    in.bound = doc.value("bound", in.bound);
    in.tau = doc.value("tau", in.tau);
    in.validate();
    return in;
  } catch (const json::exception& e) {
    throw DomainError(std::string("invalid transport instance: ") + e.what());
  }
}

TransportNetworkProblem::TransportNetworkProblem(TransportNetworkInstance instance, LpTolerances tol)
    : instance_(instance), tol_(tol) {
  instance_.validate();
}

Vector TransportNetworkProblem::sample(RandomStream& rng) const {
  std::normal_distribution<double> normal(0.0, instance_.sigma);
  Vector q(3);
  do {
    for (Eigen::Index k = 0; k < 3; ++k) q(k) = normal(rng);
  } while (q.lpNorm<Eigen::Infinity>() > instance_.bound);
  return q;
}

// Variable order: ξ1 ξ2 ξ3 ξ4 μ12 μ32 μ23 γ.
LinearProgram TransportNetworkProblem::build(std::span<const Vector> samples) const {
  require_samples(samples, 3);
  const double tau = instance_.tau;
  const auto rows = static_cast<Eigen::Index>(3 * samples.size() + 5);
  LinearProgram lp = LinearProgram::with_variables(8);
  lp.objective(7) = 1.0;
  lp.lower[7] = -std::numeric_limits<double>::infinity();
  lp.A = Matrix::Zero(rows, 8);
  lp.rhs = Vector::Zero(rows);
  lp.sense.assign(static_cast<std::size_t>(rows), RowSense::le);

  Eigen::Index r = 0;
  auto put = [&](std::initializer_list<std::pair<int, double>> entries, double b) {
    for (const auto& [j, v] : entries) lp.A(r, j) = v;
    lp.rhs(r++) = b;
  };
  // Second block row does not depend on q: −μ12 − μ32 + μ23 + 1 < 0, once.
  put({{4, -1.0}, {5, -1.0}, {6, 1.0}}, -1.0 - tau);
  for (const Vector& q : samples) {
    if (q.lpNorm<Eigen::Infinity>() > instance_.bound) throw DomainError("transport sample outside the support");
    put({{0, -3.0 - q(0)}, {4, 1.0}}, -tau);
    put({{0, 2.0 + q(0)}, {2, -2.0 - q(2)}, {3, 1.0 + q(1)}, {5, 1.0}, {6, -1.0}}, -tau);
    put({{2, 2.0 + q(2)}, {3, -5.0 - q(1)}}, -tau);
  }
  put({{0, 1.0}, {1, 1.0}, {2, 1.0}, {3, 1.0}, {7, -1.0}}, -tau);
  put({{4, 1.0}, {1, -1.0}}, 0.0);
  put({{5, 1.0}, {1, -1.0}}, 0.0);
  put({{6, 1.0}, {2, -1.0}}, 0.0);
  return lp;
}

SolveOutcome TransportNetworkProblem::solve(std::span<const Vector> samples) const {
  return lp_solve(build(samples), tol_);
}

std::array<double, 4> TransportNetworkProblem::block_rows(const Vector& theta, const Vector& q) {
  if (theta.size() != 8) throw DomainError("transport decision must have 8 entries");
  if (q.size() != 3) throw DomainError("transport uncertainty must have 3 entries");
  const double x1 = theta(0), x3 = theta(2), x4 = theta(3);
  const double m12 = theta(4), m32 = theta(5), m23 = theta(6);
  return {(-3.0 - q(0)) * x1 + m12,                                                //
          -m12 - m32 + m23 + 1.0,                                                 //
          (2.0 + q(0)) * x1 - (2.0 + q(2)) * x3 + (1.0 + q(1)) * x4 + m32 - m23,  //
          (2.0 + q(2)) * x3 - (5.0 + q(1)) * x4};
}

double TransportNetworkProblem::constraint_value(const Vector& theta, const Vector& q) const {
  const auto r = block_rows(theta, q);
  return *std::max_element(r.begin(), r.end());
}

std::optional<std::array<double, 3>> TransportNetworkProblem::transfer_rates(const Vector& theta) {
  constexpr double kGuard = 1e-12;
  if (theta.size() != 8) throw DomainError("transport decision must have 8 entries");
  if (theta(1) < kGuard || theta(2) < kGuard) return std::nullopt;
  return std::array<double, 3>{theta(4) / theta(1), theta(6) / theta(2), theta(5) / theta(1)};
}

Matrix TransportNetworkProblem::system_matrix(const std::array<double, 3>& ell, const Vector& q) {
  const double l12 = ell[0], l23 = ell[1], l32 = ell[2];
  const double l31 = 2.0 + q(0), l34 = 1.0 + q(1), l43 = 2.0 + q(2);
  Matrix A(4, 4);
  A << -1.0 - l31, l12, 0.0, 0.0,  //
      0.0, -l12 - l32, l23, 0.0,   //
      l31, l32, -l23 - l43, l34,   //
      0.0, 0.0, l43, -4.0 - l34;
  return A;
}

// ------------------------------------------------------------------ factory

std::unique_ptr<ScenarioProblem> make_problem(const std::string& id, const std::string& instance_path) {
  if (id == "synthetic") return std::make_unique<SyntheticFS1D>();
  if (id == "input-design") {
    auto in = instance_path.empty() ? InputDesignInstance::reference()
                                    : InputDesignInstance::from_json(read_file(instance_path));
    return std::make_unique<InputDesignProblem>(std::move(in));
  }
  if (id == "transport") {
    auto in = instance_path.empty() ? TransportNetworkInstance{}
                                    : TransportNetworkInstance::from_json(read_file(instance_path));
    return std::make_unique<TransportNetworkProblem>(in);
  }
  throw DomainError("unknown problem '" + id + "' (expected synthetic, input-design or transport)");
}

}  // namespace rsd
