#include "rsd/rsd_engine.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <thread>

#include <json.hpp>

#include "rsd/errors.hpp"

namespace rsd {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::vector<Vector> draw_design(const ScenarioProblem& problem, std::int64_t N, const StreamFamily& streams) {
  std::vector<Vector> samples;
  samples.reserve(static_cast<std::size_t>(N));
  for (std::int64_t i = 0; i < N; ++i) {
    RandomStream rng = streams.stream(i);
    samples.push_back(problem.sample(rng));
  }
  return samples;
}

SolveOutcome scenario_step(const ScenarioProblem& problem, std::int64_t N, std::uint64_t seed, std::int64_t k) {
  const auto samples = draw_design(problem, N, StreamFamily{seed, k, StreamRole::design});
  SolveOutcome s = problem.solve(samples);
  if (s.status != SolveStatus::optimal) {
    throw SolverError(problem.name() + " scenario solve failed at iteration " + std::to_string(k) + " with status " +
                      to_string(s.status));
  }
  return s;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

const char* to_string(RunStatus s) { return s == RunStatus::returned ? "returned" : "cap-exceeded"; }

double RunResult::exit_violation() const {
  if (iterations.empty()) return 0.0;
  const IterationRecord& last = iterations.back();
  return last.exact_violation ? *last.exact_violation : last.oracle.empirical_violation;
}

OracleOutcome rvo(const Vector& theta, const ScenarioProblem& problem, std::int64_t N_o, Probability eps_prime,
                  const StreamFamily& streams, const OracleOptions& options) {
  const std::int64_t z = oracle_threshold(eps_prime, N_o);
  const int threads = std::max(1, options.threads);
  std::atomic<std::int64_t> running_count{0};

  struct Partial {
    std::int64_t count = 0;
    std::int64_t used = 0;
  };
  std::vector<Partial> partial(static_cast<std::size_t>(threads));

  auto work = [&](int w) {
    const std::int64_t lo = N_o * w / threads;
    const std::int64_t hi = N_o * (w + 1) / threads;
    Partial& p = partial[static_cast<std::size_t>(w)];
    for (std::int64_t i = lo; i < hi; ++i) {
      if (options.short_circuit && running_count.load(std::memory_order_relaxed) > z) break;
      RandomStream rng = streams.stream(i);
      const Vector q = problem.sample(rng);
      ++p.used;
      if (problem.constraint_value(theta, q) > 0.0) {
        ++p.count;
        if (options.short_circuit) running_count.fetch_add(1, std::memory_order_relaxed);
      }
    }
  };

  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int w = 0; w < threads; ++w) pool.emplace_back(work, w);
  }

  OracleOutcome out;
  for (const Partial& p : partial) {
    out.violation_count += p.count;
    out.samples_used += p.used;
  }
  out.flag = out.violation_count <= z;
  out.short_circuited = out.samples_used < N_o;
  out.empirical_violation = static_cast<double>(out.violation_count) / static_cast<double>(N_o);
  return out;
}

RunResult run_dvo(const ScenarioProblem& problem, std::int64_t N, Probability eps, std::int64_t cap,
                  std::uint64_t seed) {
  if (!problem.has_analytic_violation()) {
    throw CapabilityError("exact violation oracle unavailable for problem '" + problem.name() + "'");
  }
  if (N < problem.dimension()) throw DomainError("design sample count N must be >= n");
  if (cap < 1) throw DomainError("iteration cap must be >= 1");

  RunResult r;
  for (std::int64_t k = 1; k <= cap; ++k) {
    IterationRecord rec;
    rec.iteration = k;
    auto t0 = Clock::now();
    const SolveOutcome s = scenario_step(problem, N, seed, k);
    rec.solve_ms = ms_since(t0);
    rec.objective = s.objective;

    t0 = Clock::now();
    const double v = problem.analytic_violation(s.solution).value();
    rec.oracle_ms = ms_since(t0);
    rec.exact_violation = v;
    rec.oracle.flag = v <= eps.value();
    rec.oracle.empirical_violation = v;

    r.solve_ms += rec.solve_ms;
    r.oracle_ms += rec.oracle_ms;
    r.theta = s.solution;
    r.objective = s.objective;
    r.exit_iteration = k;
    r.iterations.push_back(rec);
    if (rec.oracle.flag) {
      r.status = RunStatus::returned;
      return r;
    }
  }
  r.status = RunStatus::cap_exceeded;
  return r;
}

RunResult run_rvo(const ScenarioProblem& problem, const ScenarioConfig& config, const OracleOptions& options) {
  config.validate();
  if (config.dims.n != problem.dimension()) {
    throw DomainError("config dimension n = " + std::to_string(config.dims.n) + " does not match problem '" +
                      problem.name() + "' (n = " + std::to_string(problem.dimension()) + ")");
  }

  RunResult r;
  for (std::int64_t k = 1; k <= config.iteration_cap; ++k) {
    IterationRecord rec;
    rec.iteration = k;
    auto t0 = Clock::now();
    const SolveOutcome s = scenario_step(problem, config.dims.N, config.seed, k);
    rec.solve_ms = ms_since(t0);
    rec.objective = s.objective;

    t0 = Clock::now();
    rec.oracle = rvo(s.solution, problem, config.dims.N_o, config.levels.eps_prime,
                     StreamFamily{config.seed, k, StreamRole::oracle}, options);
    rec.oracle_ms = ms_since(t0);

    r.solve_ms += rec.solve_ms;
    r.oracle_ms += rec.oracle_ms;
    r.theta = s.solution;
    r.objective = s.objective;
    r.exit_iteration = k;
    r.iterations.push_back(rec);
    if (rec.oracle.flag) {
      r.status = RunStatus::returned;
      return r;
    }
  }
  r.status = RunStatus::cap_exceeded;
  return r;
}

std::string run_result_to_json(const RunResult& r) {
  nlohmann::json doc;
  doc["status"] = to_string(r.status);
  doc["exit_iteration"] = r.exit_iteration;
  doc["objective"] = r.objective;
  doc["theta"] = std::vector<double>(r.theta.data(), r.theta.data() + r.theta.size());
  doc["solve_ms"] = r.solve_ms;
  doc["oracle_ms"] = r.oracle_ms;
  nlohmann::json its = nlohmann::json::array();
  for (const IterationRecord& rec : r.iterations) {
    nlohmann::json j;
    j["iteration"] = rec.iteration;
    j["objective"] = rec.objective;
    j["flag"] = rec.oracle.flag;
    j["violation_count"] = rec.oracle.violation_count;
    j["samples_used"] = rec.oracle.samples_used;
    j["empirical_violation"] = rec.oracle.empirical_violation;
    j["short_circuited"] = rec.oracle.short_circuited;
    if (rec.exact_violation) j["exact_violation"] = *rec.exact_violation;
    j["solve_ms"] = rec.solve_ms;
    j["oracle_ms"] = rec.oracle_ms;
    its.push_back(j);
  }
  doc["iterations"] = its;
  return doc.dump(2);
}

std::string run_result_csv_header() { return "run_id,exit_iteration,status,objective,empirical_violation"; }

std::string run_result_csv_row(std::int64_t run_id, const RunResult& r) {
  return std::to_string(run_id) + "," + std::to_string(r.exit_iteration) + "," + to_string(r.status) + "," +
         fmt(r.objective) + "," + fmt(r.exit_violation());
}

}  // namespace rsd
