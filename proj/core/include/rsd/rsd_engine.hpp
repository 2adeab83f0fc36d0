#pragma once

// The two repetitive scenario design loops: a fresh N-sample scenario solve
// per iteration, followed by either the exact violation test (ε-DVO) or the
// randomized ε'-RVO on N_o fresh samples.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rsd/dimensioning.hpp"
#include "rsd/problems.hpp"
#include "rsd/random.hpp"

namespace rsd {

struct OracleOutcome {
  bool flag = false;
  std::int64_t violation_count = 0;
  std::int64_t samples_used = 0;
  double empirical_violation = 0.0;  ///< violation_count / N_o
  /// Evaluation stopped once the count exceeded ⌊ε'N_o⌋; count and
  /// empirical_violation are then lower bounds (the flag is exact).
  bool short_circuited = false;
};

struct OracleOptions {
  int threads = 1;
  bool short_circuit = false;
};

/// ε'-RVO: N_o fresh samples from `streams` (sample i uses streams.stream(i)),
/// v_i = 1{f(θ, q_i) > 0}, accept iff Σv_i ≤ ε'N_o.
OracleOutcome rvo(const Vector& theta, const ScenarioProblem& problem, std::int64_t N_o, Probability eps_prime,
                  const StreamFamily& streams, const OracleOptions& options = {});

enum class RunStatus { returned, cap_exceeded };

const char* to_string(RunStatus s);

struct IterationRecord {
  std::int64_t iteration = 0;
  double objective = 0.0;
  OracleOutcome oracle;
  std::optional<double> exact_violation;  ///< V(θ*ₖ), exact-oracle runs only
  double solve_ms = 0.0;
  double oracle_ms = 0.0;
};

struct RunResult {
  Vector theta;
  double objective = 0.0;
  std::int64_t exit_iteration = 0;
  RunStatus status = RunStatus::cap_exceeded;
  std::vector<IterationRecord> iterations;
  double solve_ms = 0.0;
  double oracle_ms = 0.0;

  /// Violation level reported at exit: exact V for exact-oracle runs,
  /// the oracle's empirical frequency otherwise.
  [[nodiscard]] double exit_violation() const;
};

/// Algorithm with the exact oracle. Throws CapabilityError when the problem
/// has no analytic violation probability; SolverError when a scenario solve
/// fails (with the iteration in the message).
RunResult run_dvo(const ScenarioProblem& problem, std::int64_t N, Probability eps, std::int64_t cap,
                  std::uint64_t seed);

/// Algorithm with the randomized oracle under `config` (dims, levels, cap, seed).
RunResult run_rvo(const ScenarioProblem& problem, const ScenarioConfig& config, const OracleOptions& options = {});

/// Full trace as JSON.
std::string run_result_to_json(const RunResult& r);
/// CSV summary: "run_id,exit_iteration,status,objective,empirical_violation".
std::string run_result_csv_header();
std::string run_result_csv_row(std::int64_t run_id, const RunResult& r);

}  // namespace rsd
