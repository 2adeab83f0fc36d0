#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "rsd/rsd_engine.hpp"

namespace rsd {

enum class Algorithm { rvo, dvo };

struct ExperimentSpec {
  std::string problem = "synthetic";
  std::string instance_path;
  Algorithm algorithm = Algorithm::rvo;
  ScenarioConfig config;
  std::int64_t trials = 1;
  std::string output_path;  ///< CSV destination; empty = do not write
  int parallel_trials = 1;
  OracleOptions oracle;
  bool record_timing = true;  ///< false writes 0 into the timing columns

  void validate() const;
  /// {"problem", "instance", "algorithm": "rvo"|"dvo", "trials", "output",
  ///  "parallel", "oracle_threads", "short_circuit", "record_timing",
  ///  "config": {"N", "N_o", "eps", "eps_prime", "beta", "iteration_cap", "seed"}}.
  /// n is taken from the problem.
  static ExperimentSpec from_json(const std::string& text);
};

/// One trial's summary row.
struct TrialRow {
  std::int64_t trial = 0;
  std::int64_t exit_iteration = 0;
  RunStatus status = RunStatus::returned;
  double objective = 0.0;
  double empirical_violation = 0.0;
  double solve_ms = 0.0;
  double oracle_ms = 0.0;

  bool operator==(const TrialRow&) const = default;
};

struct ExperimentStats {
  std::vector<TrialRow> rows;  ///< sorted by trial index
  double mean_exit_iteration = 0.0;
  std::int64_t max_exit_iteration = 0;
  std::map<std::int64_t, std::int64_t> exit_histogram;
  double mean_exit_violation = 0.0;
  double max_exit_violation = 0.0;
  std::int64_t cap_exceeded = 0;
  /// Objective quantiles at 0, 0.25, 0.5, 0.75, 1 (linear interpolation).
  std::vector<double> objective_quantiles;
};

/// Per-trial seed: derive_key(config.seed, trial).
std::uint64_t trial_seed(std::uint64_t seed, std::int64_t trial);

/// Aggregates from per-trial rows (rows are sorted by trial first).
ExperimentStats aggregate(std::vector<TrialRow> rows);

/// Runs `trials` independent executions (cap-exceeded trials are recorded,
/// not fatal), aggregates, and writes the CSV when output_path is set.
ExperimentStats monte_carlo(const ExperimentSpec& spec);

constexpr const char* kTrialsCsvSchema = "# rsd-montecarlo-trials v1";

std::string trials_to_csv(const std::vector<TrialRow>& rows);
std::vector<TrialRow> trials_from_csv(const std::string& text);

std::string stats_to_json(const ExperimentStats& s);

}  // namespace rsd
