#pragma once

#include <array>
#include <memory>
#include <optional>
#include <span>
#include <string>

#include "rsd/random.hpp"
#include "rsd/solver.hpp"

namespace rsd {

/// A scenario program min cᵀθ s.t. f(θ, q⁽ⁱ⁾) ≤ 0 together with the law of q.
/// Uncertainty points are flat vectors (matrices row-major). Instances are
/// immutable; samplers draw from an explicit stream so concurrent callers
/// never share generator state.
class ScenarioProblem {
 public:
  virtual ~ScenarioProblem() = default;

  [[nodiscard]] virtual std::string name() const = 0;
  /// Decision dimension n (the number of support constraints of a f.s. instance).
  [[nodiscard]] virtual std::int64_t dimension() const = 0;
  [[nodiscard]] virtual Vector sample(RandomStream& rng) const = 0;
  /// Deterministic for a fixed sample list. `solution` is θ, `objective` cᵀθ.
  [[nodiscard]] virtual SolveOutcome solve(std::span<const Vector> samples) const = 0;
  /// f(θ, q); q violates θ iff the value is > 0.
  [[nodiscard]] virtual double constraint_value(const Vector& theta, const Vector& q) const = 0;
  /// Exact V(θ) when available.
  [[nodiscard]] virtual std::optional<double> analytic_violation(const Vector& /*theta*/) const {
    return std::nullopt;
  }
  [[nodiscard]] virtual bool has_analytic_violation() const { return false; }
};

/// min θ s.t. θ ≥ q⁽ⁱ⁾ with q ~ U[0,1]: θ* = max q⁽ⁱ⁾, V(θ) = 1 − θ.
/// Fully supported with n = 1.
class SyntheticFS1D final : public ScenarioProblem {
 public:
  [[nodiscard]] std::string name() const override { return "synthetic"; }
  [[nodiscard]] std::int64_t dimension() const override { return 1; }
  [[nodiscard]] Vector sample(RandomStream& rng) const override;
  [[nodiscard]] SolveOutcome solve(std::span<const Vector> samples) const override;
  [[nodiscard]] double constraint_value(const Vector& theta, const Vector& q) const override;
  [[nodiscard]] std::optional<double> analytic_violation(const Vector& theta) const override;
  [[nodiscard]] bool has_analytic_violation() const override { return true; }
};

/// x(t+1) = (A0 + q) x(t) + B u(t), x(0) = 0, |q_ij| ≤ ρ uniform. Decision
/// θ = (u(0..T−1), γ), f(θ,q) = ‖R(q)u − x̄‖² + λ‖u‖² − γ.
struct InputDesignInstance {
  Matrix A0;
  Vector B;
  Vector x_bar;
  int T = 10;
  double rho = 0.001;
  double lambda = 0.005;

  void validate() const;
  /// The 6-state example instance with T = 10, ρ = 0.001, λ = 0.005.
  static InputDesignInstance reference();
  static InputDesignInstance from_json(const std::string& text);
};

class InputDesignProblem final : public ScenarioProblem {
 public:
  explicit InputDesignProblem(InputDesignInstance instance, MinimaxTolerances tol = {});

  [[nodiscard]] std::string name() const override { return "input-design"; }
  [[nodiscard]] std::int64_t dimension() const override { return instance_.T + 1; }
  [[nodiscard]] Vector sample(RandomStream& rng) const override;
  [[nodiscard]] SolveOutcome solve(std::span<const Vector> samples) const override;
  [[nodiscard]] double constraint_value(const Vector& theta, const Vector& q) const override;

  /// T-reachability matrix: column t is A(q)^{T−1−t} B.
  [[nodiscard]] Matrix reachability(const Vector& q) const;
  /// The quadratic term of one scenario (without the λ part).
  [[nodiscard]] QuadraticTerm term(const Vector& q) const;
  [[nodiscard]] const InputDesignInstance& instance() const { return instance_; }

 private:
  [[nodiscard]] double cost(const Vector& u, const Vector& q) const;

  InputDesignInstance instance_;
  MinimaxTolerances tol_;
};

/// Four-buffer network with designed transfer rates; θ = (ξ₁..ξ₄, μ₁₂, μ₃₂,
/// μ₂₃, γ) and q ~ N(0, σ²I) truncated to ‖q‖∞ ≤ bound.
struct TransportNetworkInstance {
  double sigma = 0.2;
  double bound = 1.0;
  double tau = 1e-9;  ///< margin realizing the strict rows as ≤ −τ

  void validate() const;
  static TransportNetworkInstance from_json(const std::string& text);
};

class TransportNetworkProblem final : public ScenarioProblem {
 public:
  explicit TransportNetworkProblem(TransportNetworkInstance instance = {}, LpTolerances tol = {});

  [[nodiscard]] std::string name() const override { return "transport"; }
  [[nodiscard]] std::int64_t dimension() const override { return 8; }
  [[nodiscard]] Vector sample(RandomStream& rng) const override;
  [[nodiscard]] SolveOutcome solve(std::span<const Vector> samples) const override;
  /// Max of the four scenario-block rows (A(ℓ,q)ξ + B1)_k. The margin τ is a
  /// design-side device and is not added here.
  [[nodiscard]] double constraint_value(const Vector& theta, const Vector& q) const override;

  /// The scenario LP with rows ≤ −τ.
  [[nodiscard]] LinearProgram build(std::span<const Vector> samples) const;
  [[nodiscard]] const TransportNetworkInstance& instance() const { return instance_; }

  /// The four scenario-block rows at (θ, q).
  [[nodiscard]] static std::array<double, 4> block_rows(const Vector& theta, const Vector& q);
  /// ℓ = (ℓ₁₂, ℓ₂₃, ℓ₃₂) = (μ₁₂/ξ₂, μ₂₃/ξ₃, μ₃₂/ξ₂); nullopt when ξ₂ or ξ₃ < 1e-12.
  [[nodiscard]] static std::optional<std::array<double, 3>> transfer_rates(const Vector& theta);
  /// A(ℓ, q) of the network.
  [[nodiscard]] static Matrix system_matrix(const std::array<double, 3>& ell, const Vector& q);

 private:
  TransportNetworkInstance instance_;
  LpTolerances tol_;
};

/// "synthetic" | "input-design" | "transport"; `instance_path` optional.
std::unique_ptr<ScenarioProblem> make_problem(const std::string& id, const std::string& instance_path = {});

}  // namespace rsd
