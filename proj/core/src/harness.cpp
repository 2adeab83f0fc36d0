#include "rsd/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "rsd/errors.hpp"

namespace rsd {

namespace {

using nlohmann::json;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double quantile(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) return 0.0;
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

TrialRow run_trial(const ScenarioProblem& problem, const ExperimentSpec& spec, std::int64_t trial) {
  ScenarioConfig cfg = spec.config;
  cfg.seed = trial_seed(spec.config.seed, trial);
  const RunResult r = spec.algorithm == Algorithm::dvo
                          ? run_dvo(problem, cfg.dims.N, cfg.levels.eps, cfg.iteration_cap, cfg.seed)
                          : run_rvo(problem, cfg, spec.oracle);
  TrialRow row;
  row.trial = trial;
  row.exit_iteration = r.exit_iteration;
  row.status = r.status;
  row.objective = r.objective;
  row.empirical_violation = r.exit_violation();
  if (spec.record_timing) {
    row.solve_ms = r.solve_ms;
    row.oracle_ms = r.oracle_ms;
  }
  return row;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream ss(line);
  while (std::getline(ss, cur, sep)) out.push_back(cur);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

}  // namespace

void ExperimentSpec::validate() const {
  if (trials < 1) throw DomainError("experiment needs trials >= 1");
  if (parallel_trials < 1) throw DomainError("parallel trial count must be >= 1");
  config.validate();
}

ExperimentSpec ExperimentSpec::from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw DomainError(std::string("malformed experiment spec: ") + e.what());
  }
  try {
    ExperimentSpec s;
    s.problem = doc.value("problem", s.problem);
    s.instance_path = doc.value("instance", std::string{});
    const std::string alg = doc.value("algorithm", std::string{"rvo"});
    if (alg == "rvo") {
      s.algorithm = Algorithm::rvo;
    } else if (alg == "dvo") {
      s.algorithm = Algorithm::dvo;
    } else {
      throw DomainError("algorithm must be 'rvo' or 'dvo'");
    }
    s.trials = doc.value("trials", s.trials);
    s.output_path = doc.value("output", std::string{});
    s.parallel_trials = doc.value("parallel", s.parallel_trials);
    s.oracle.threads = doc.value("oracle_threads", s.oracle.threads);
    s.oracle.short_circuit = doc.value("short_circuit", s.oracle.short_circuit);
    s.record_timing = doc.value("record_timing", s.record_timing);

    const json& c = doc.at("config");
    const auto problem = make_problem(s.problem, s.instance_path);
    s.config.dims = DesignDims{problem->dimension(), c.at("N").get<std::int64_t>(), c.value("N_o", std::int64_t{1})};
    s.config.levels = Levels::make(c.at("eps").get<double>(), c.value("eps_prime", 0.0), c.value("beta", 1e-12));
    s.config.iteration_cap = c.value("iteration_cap", std::int64_t{1000});
    s.config.seed = c.value("seed", std::uint64_t{0});
    s.validate();
    return s;
  } catch (const json::exception& e) {
    throw DomainError(std::string("invalid experiment spec: ") + e.what());
  }
}

std::uint64_t trial_seed(std::uint64_t seed, std::int64_t trial) { return derive_key(seed, trial); }

ExperimentStats aggregate(std::vector<TrialRow> rows) {
  std::sort(rows.begin(), rows.end(), [](const TrialRow& a, const TrialRow& b) { return a.trial < b.trial; });
  ExperimentStats s;
  if (rows.empty()) {
    s.rows = std::move(rows);
    return s;
  }
  double exit_sum = 0.0;
  double viol_sum = 0.0;
  std::vector<double> objectives;
  objectives.reserve(rows.size());
  for (const TrialRow& r : rows) {
    exit_sum += static_cast<double>(r.exit_iteration);
    viol_sum += r.empirical_violation;
    s.max_exit_iteration = std::max(s.max_exit_iteration, r.exit_iteration);
    s.max_exit_violation = std::max(s.max_exit_violation, r.empirical_violation);
    ++s.exit_histogram[r.exit_iteration];
    if (r.status == RunStatus::cap_exceeded) ++s.cap_exceeded;
    objectives.push_back(r.objective);
  }
  const auto n = static_cast<double>(rows.size());
  s.mean_exit_iteration = exit_sum / n;
  s.mean_exit_violation = viol_sum / n;
  std::sort(objectives.begin(), objectives.end());
  for (double p : {0.0, 0.25, 0.5, 0.75, 1.0}) s.objective_quantiles.push_back(quantile(objectives, p));
  s.rows = std::move(rows);
  return s;
}

ExperimentStats monte_carlo(const ExperimentSpec& spec) {
  spec.validate();
  const auto problem = make_problem(spec.problem, spec.instance_path);
  if (spec.config.dims.n != problem->dimension()) {
    throw DomainError("experiment config n does not match the problem dimension");
  }

  std::vector<TrialRow> rows(static_cast<std::size_t>(spec.trials));
  const int workers = static_cast<int>(std::min<std::int64_t>(spec.parallel_trials, spec.trials));
  std::atomic<std::int64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;

  auto work = [&] {
    for (std::int64_t t = next++; t < spec.trials; t = next++) {
      try {
        rows[static_cast<std::size_t>(t)] = run_trial(*problem, spec, t);
      } catch (...) {
        const std::lock_guard lock(failure_mu);
        if (!failure) failure = std::current_exception();
        next = spec.trials;
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);

  ExperimentStats stats = aggregate(std::move(rows));
  if (!spec.output_path.empty()) {
    std::ofstream out(spec.output_path, std::ios::binary);
    if (!out) throw DomainError("cannot write experiment output '" + spec.output_path + "'");
    out << trials_to_csv(stats.rows);
  }
  return stats;
}

std::string trials_to_csv(const std::vector<TrialRow>& rows) {
  std::string s = std::string(kTrialsCsvSchema) + "\n";
  s += "trial,exit_iteration,status,objective,empirical_violation,solve_ms,oracle_ms\n";
  for (const TrialRow& r : rows) {
    s += std::to_string(r.trial) + "," + std::to_string(r.exit_iteration) + "," + to_string(r.status) + "," +
         fmt(r.objective) + "," + fmt(r.empirical_violation) + "," + fmt(r.solve_ms) + "," + fmt(r.oracle_ms) + "\n";
  }
  return s;
}

std::vector<TrialRow> trials_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kTrialsCsvSchema) {
    throw DomainError("trial CSV lacks the schema header '" + std::string(kTrialsCsvSchema) + "'");
  }
  if (!std::getline(in, line)) throw DomainError("trial CSV lacks the column header");
  std::vector<TrialRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 7) throw DomainError("trial CSV row has " + std::to_string(f.size()) + " fields, expected 7");
    TrialRow r;
    try {
      r.trial = std::stoll(f[0]);
      r.exit_iteration = std::stoll(f[1]);
      if (f[2] == "returned") {
        r.status = RunStatus::returned;
      } else if (f[2] == "cap-exceeded") {
        r.status = RunStatus::cap_exceeded;
      } else {
        throw DomainError("unknown run status '" + f[2] + "'");
      }
      r.objective = std::stod(f[3]);
      r.empirical_violation = std::stod(f[4]);
      r.solve_ms = std::stod(f[5]);
      r.oracle_ms = std::stod(f[6]);
    } catch (const std::logic_error& e) {
      if (dynamic_cast<const DomainError*>(&e)) throw;
      throw DomainError("malformed trial CSV row: " + line);
    }
    rows.push_back(r);
  }
  return rows;
}

std::string stats_to_json(const ExperimentStats& s) {
  json doc;
  doc["trials"] = s.rows.size();
  doc["mean_exit_iteration"] = s.mean_exit_iteration;
  doc["max_exit_iteration"] = s.max_exit_iteration;
  json hist = json::object();
  for (const auto& [k, v] : s.exit_histogram) hist[std::to_string(k)] = v;
  doc["exit_histogram"] = hist;
  doc["mean_exit_violation"] = s.mean_exit_violation;
  doc["max_exit_violation"] = s.max_exit_violation;
  doc["cap_exceeded"] = s.cap_exceeded;
  doc["objective_quantiles"] = s.objective_quantiles;
  return doc.dump(2);
}

}  // namespace rsd
