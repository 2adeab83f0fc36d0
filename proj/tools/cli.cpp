#include "cli.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "rsd/errors.hpp"
#include "rsd/harness.hpp"

namespace rsd {

namespace {

using nlohmann::json;

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Key/value report printed either as "key = value" lines or as one JSON object.
class Report {
 public:
  void add(const std::string& key, const json& value) { doc_[key] = value; keys_.push_back(key); }

  [[nodiscard]] std::string render(bool as_json) const {
    if (as_json) return doc_.dump(2) + "\n";
    std::string s;
    for (const auto& k : keys_) {
      const json& v = doc_.at(k);
      s += k + " = " + (v.is_number_float() ? num(v.get<double>()) : v.is_string() ? v.get<std::string>() : v.dump()) +
           "\n";
    }
    return s;
  }

 private:
  json doc_ = json::object();
  std::vector<std::string> keys_;
};

struct Globals {
  std::uint64_t seed = 0;
  bool json = false;
  std::string out_path;
};

void emit(const Globals& g, const std::string& text, std::ostream& out) {
  if (g.out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(g.out_path, std::ios::binary);
  if (!f) throw DomainError("cannot write '" + g.out_path + "'");
  f << text;
}

// ---------------------------------------------------------------- dimension

struct DimensionArgs {
  std::int64_t n = 0;
  double eps = 0.0;
  double beta = 1e-12;
  double fraction = 0.7;
  double target = 10.0;
  std::optional<std::int64_t> N;
};

int cmd_dimension(const DimensionArgs& a, const Globals& g, std::ostream& out) {
  const DimensioningReport r =
      a.N ? dimension_rsd_at(a.n, *a.N, Probability{a.eps}, Probability{a.beta}, a.fraction, g.seed)
          : dimension_rsd(a.n, Probability{a.eps}, Probability{a.beta}, a.fraction, a.target, g.seed);
  const ScenarioConfig& c = r.config;
  Report rep;
  rep.add("n", c.dims.n);
  rep.add("eps", c.levels.eps.value());
  rep.add("eps_prime", c.levels.eps_prime.value());
  rep.add("beta", c.levels.beta_target.value());
  rep.add("N", c.dims.N);
  rep.add("N_o", c.dims.N_o);
  rep.add("N_o_eq19", r.N_o_eq19);
  rep.add("bar_beta_at_N_o_eq19", r.bar_beta_at_eq19);
  rep.add("N_o_raised_to_meet_beta", r.raised_to_meet_target);
  rep.add("bad_exit_bound_fs", r.bad_exit_fs.value);
  rep.add("bad_exit_bound_general", r.bad_exit_general.value);
  rep.add("bad_exit_bound_general_vacuous", r.bad_exit_general.vacuous);
  rep.add("h_one", r.h_one);
  rep.add("expected_reps_bound", r.expected_reps_bound);
  rep.add("expected_reps_asymptotic", r.expected_reps_asymptotic);
  rep.add("iteration_cap", c.iteration_cap);
  rep.add("seed", c.seed);
  emit(g, rep.render(g.json), out);
  return kExitOk;
}

// ----------------------------------------------------------------- tradeoff

struct TradeoffArgs {
  std::int64_t n = 0;
  double eps_prime = 0.0;
  std::int64_t from = 0;
  std::int64_t to = 0;
  int points = 50;
};

int cmd_tradeoff(const TradeoffArgs& a, const Globals& g, std::ostream& out) {
  const auto curve = tradeoff_curve(a.n, Probability{a.eps_prime}, a.from, a.to, a.points);
  std::string text;
  if (g.json) {
    json arr = json::array();
    for (const auto& p : curve) {
      arr.push_back({{"N", p.N}, {"bound", p.infinite ? json("inf") : json(p.expected_repetitions_bound)}});
    }
    text = arr.dump(2) + "\n";
  } else {
    text = "N,bound\n";
    for (const auto& p : curve) {
      text += std::to_string(p.N) + "," + (p.infinite ? std::string("inf") : num(p.expected_repetitions_bound)) + "\n";
    }
  }
  emit(g, text, out);
  return kExitOk;
}

// ------------------------------------------------------------------- bounds

struct BoundsArgs {
  std::int64_t n = 0;
  std::int64_t N = 0;
  std::int64_t N_o = 0;
  double eps = 0.0;
  double eps_prime = 0.0;
  double beta = 1e-12;
  std::int64_t k = 1;
};

int cmd_bounds(const BoundsArgs& a, const Globals& g, std::ostream& out) {
  const DesignDims d{a.n, a.N, a.N_o};
  const Levels lv = Levels::make(a.eps, a.eps_prime, a.beta);
  const auto floor_c = ThresholdConvention::floor;
  const auto cont_c = ThresholdConvention::continuous;
  Report rep;
  rep.add("beta_eps", beta_eps(a.N, a.n, lv.eps).value());
  rep.add("h_one", h_one(d, lv.eps_prime, floor_c).value());
  rep.add("h_one_continuous", h_one(d, lv.eps_prime, cont_c).value());
  rep.add("K_hat", rvo_runtime_bounds(d, lv.eps_prime, a.k, floor_c).expected_bound);
  rep.add("K_hat_continuous", rvo_runtime_bounds(d, lv.eps_prime, a.k, cont_c).expected_bound);
  rep.add("rvo_cdf_bound_at_k", rvo_runtime_bounds(d, lv.eps_prime, a.k, floor_c).cdf_bound_at_k);
  rep.add("h_eps", h_eps(d, lv, floor_c).value());
  rep.add("bar_beta", bar_beta(d, lv).value());
  const BoundReport gen = bad_exit_bound_general(d, lv);
  rep.add("bad_exit_bound_general", gen.value);
  rep.add("bad_exit_bound_general_vacuous", gen.vacuous);
  rep.add("h_one_asymptotic", h_one_asymptotic(a.N, a.n, lv.eps_prime).value());
  if (lv.eps.value() < 1.0) {
    const RuntimeBounds dvo = dvo_runtime_bounds(a.N, a.n, lv.eps, a.k);
    rep.add("dvo_expected_bound", dvo.expected_bound);
    rep.add("dvo_cdf_bound_at_k", dvo.cdf_bound_at_k);
  }
  rep.add("k", a.k);
  emit(g, rep.render(g.json), out);
  return kExitOk;
}

// ---------------------------------------------------------------------- run

struct RunArgs {
  std::string problem;
  std::string instance;
  std::string algorithm = "rvo";
  std::int64_t N = 0;
  std::int64_t N_o = 1;
  double eps = 0.0;
  double eps_prime = 0.0;
  double beta = 1e-12;
  std::optional<std::int64_t> cap;
  int threads = 1;
  bool short_circuit = false;
};

int cmd_run_lp(const RunArgs& a, const Globals& g, std::ostream& out) {
  if (a.instance.empty()) throw CLI::ValidationError("--instance", "an LP JSON file is required for --problem lp");
  const LinearProgram lp = lp_from_json(read_text(a.instance));
  const SolveOutcome s = lp_solve(lp);
  Report rep;
  rep.add("status", to_string(s.status));
  rep.add("iterations", s.iterations);
  if (s.status == SolveStatus::optimal) {
    rep.add("objective", s.objective);
    rep.add("solution", std::vector<double>(s.solution.data(), s.solution.data() + s.solution.size()));
  }
  emit(g, rep.render(g.json), out);
  return s.status == SolveStatus::optimal ? kExitOk : kExitNumeric;
}

int cmd_run(const RunArgs& a, const Globals& g, std::ostream& out) {
  if (a.problem == "lp") return cmd_run_lp(a, g, out);
  const auto problem = make_problem(a.problem, a.instance);
  if (a.N < 1) throw CLI::ValidationError("--N", "design sample count is required");

  RunResult r;
  if (a.algorithm == "dvo") {
    const Probability eps{a.eps};
    const std::int64_t cap =
        a.cap ? *a.cap : iteration_cap_for(beta_eps(a.N, problem->dimension(), eps), Probability{a.beta});
    r = run_dvo(*problem, a.N, eps, cap, g.seed);
  } else {
    ScenarioConfig cfg;
    cfg.dims = DesignDims{problem->dimension(), a.N, a.N_o};
    cfg.levels = Levels::make(a.eps, a.eps_prime, a.beta);
    cfg.iteration_cap = a.cap ? *a.cap : iteration_cap_for(h_one(cfg.dims, cfg.levels.eps_prime), cfg.levels.beta_target);
    cfg.seed = g.seed;
    r = run_rvo(*problem, cfg, OracleOptions{a.threads, a.short_circuit});
  }

  if (g.json) {
    emit(g, run_result_to_json(r) + "\n", out);
  } else {
    Report rep;
    rep.add("problem", problem->name());
    rep.add("algorithm", a.algorithm);
    rep.add("status", to_string(r.status));
    rep.add("exit_iteration", r.exit_iteration);
    rep.add("objective", r.objective);
    rep.add("exit_violation", r.exit_violation());
    rep.add("theta", std::vector<double>(r.theta.data(), r.theta.data() + r.theta.size()));
    rep.add("solve_ms", r.solve_ms);
    rep.add("oracle_ms", r.oracle_ms);
    emit(g, rep.render(false), out);
  }
  return r.status == RunStatus::returned ? kExitOk : kExitCapExceeded;
}

// --------------------------------------------------------------- montecarlo

struct MonteCarloArgs {
  std::string spec_path;
  std::optional<std::int64_t> trials;
  std::optional<int> parallel;
  bool no_timing = false;
};

int cmd_montecarlo(const MonteCarloArgs& a, const Globals& g, std::ostream& out) {
  ExperimentSpec spec = ExperimentSpec::from_json(read_text(a.spec_path));
  if (a.trials) spec.trials = *a.trials;
  if (a.parallel) spec.parallel_trials = *a.parallel;
  if (a.no_timing) spec.record_timing = false;
  // --out names the CSV; the summary still goes to stdout.
  if (!g.out_path.empty()) spec.output_path = g.out_path;
  const ExperimentStats s = monte_carlo(spec);
  if (g.json) {
    out << stats_to_json(s) << "\n";
    return kExitOk;
  }
  Report rep;
  rep.add("trials", static_cast<std::int64_t>(s.rows.size()));
  rep.add("mean_exit_iteration", s.mean_exit_iteration);
  rep.add("max_exit_iteration", s.max_exit_iteration);
  rep.add("cap_exceeded", s.cap_exceeded);
  rep.add("mean_exit_violation", s.mean_exit_violation);
  rep.add("max_exit_violation", s.max_exit_violation);
  rep.add("objective_quantiles", s.objective_quantiles);
  if (!spec.output_path.empty()) rep.add("csv", spec.output_path);
  out << rep.render(false);
  return kExitOk;
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Repetitive scenario design: bounds, dimensioning, and randomized design runs", "rsd"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--seed", g.seed, "Seed for all random streams")->capture_default_str();
  app.add_flag("--json", g.json, "Print JSON instead of key = value lines");
  app.add_option("--out", g.out_path, "Write the primary output to this file");

  DimensionArgs dim;
  auto* c_dim = app.add_subcommand("dimension", "Size N, N_o and the iteration cap for given n, eps, beta");
  c_dim->add_option("--n", dim.n, "Decision dimension")->required();
  c_dim->add_option("--eps", dim.eps, "Violation level eps")->required();
  c_dim->add_option("--beta", dim.beta, "Failure probability target")->capture_default_str();
  c_dim->add_option("--fraction", dim.fraction, "eps' = fraction * eps")->capture_default_str();
  c_dim->add_option("--target", dim.target, "Target bound on expected repetitions")->capture_default_str();
  c_dim->add_option("--N", dim.N, "Use this N instead of choosing it from --target");

  TradeoffArgs tr;
  auto* c_tr = app.add_subcommand("tradeoff", "CSV of N vs (1 - beta_eps'(N))^-1");
  c_tr->add_option("--n", tr.n, "Decision dimension")->required();
  c_tr->add_option("--epsp", tr.eps_prime, "Oracle level eps'")->required();
  c_tr->add_option("--from", tr.from, "Smallest N")->required();
  c_tr->add_option("--to", tr.to, "Largest N")->required();
  c_tr->add_option("--points", tr.points, "Grid points (log-spaced)")->capture_default_str();

  BoundsArgs bd;
  auto* c_bd = app.add_subcommand("bounds", "Evaluate beta_eps, H-functions, BadExit and runtime bounds");
  c_bd->add_option("--n", bd.n, "Decision dimension")->required();
  c_bd->add_option("--N", bd.N, "Design samples")->required();
  c_bd->add_option("--No", bd.N_o, "Oracle samples")->required();
  c_bd->add_option("--eps", bd.eps, "Violation level eps")->required();
  c_bd->add_option("--epsp", bd.eps_prime, "Oracle level eps'")->required();
  c_bd->add_option("--beta", bd.beta, "Failure probability target")->capture_default_str();
  c_bd->add_option("--k", bd.k, "Iteration count for the cdf bounds")->capture_default_str();

  RunArgs ru;
  auto* c_ru = app.add_subcommand("run", "One RSD execution (or one LP solve with --problem lp)");
  c_ru->add_option("--problem", ru.problem, "Problem id")
      ->required()
      ->check(CLI::IsMember({"synthetic", "input-design", "transport", "lp"}));
  c_ru->add_option("--instance", ru.instance, "Instance JSON file");
  c_ru->add_option("--algorithm", ru.algorithm, "rvo (randomized oracle) or dvo (exact oracle)")
      ->check(CLI::IsMember({"rvo", "dvo"}))
      ->capture_default_str();
  c_ru->add_option("--N", ru.N, "Design samples per iteration");
  c_ru->add_option("--No", ru.N_o, "Oracle samples per iteration")->capture_default_str();
  c_ru->add_option("--eps", ru.eps, "Violation level eps");
  c_ru->add_option("--epsp", ru.eps_prime, "Oracle level eps'");
  c_ru->add_option("--beta", ru.beta, "Failure probability target (sets the default cap)")->capture_default_str();
  c_ru->add_option("--cap", ru.cap, "Iteration cap");
  c_ru->add_option("--threads", ru.threads, "Oracle worker threads")->capture_default_str();
  c_ru->add_flag("--short-circuit", ru.short_circuit, "Stop the oracle once the flag is decided false");

  MonteCarloArgs mc;
  auto* c_mc = app.add_subcommand("montecarlo", "Run an experiment spec and write the per-trial CSV");
  c_mc->add_option("--spec", mc.spec_path, "ExperimentSpec JSON file")->required();
  c_mc->add_option("--trials", mc.trials, "Override the trial count");
  c_mc->add_option("--parallel", mc.parallel, "Override the parallel trial count");
  c_mc->add_flag("--no-timing", mc.no_timing, "Write 0 into the timing columns (byte-reproducible CSV)");

  std::vector<std::string> argv_store{"rsd"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : argv_store) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (c_dim->parsed()) return cmd_dimension(dim, g, out);
    if (c_tr->parsed()) return cmd_tradeoff(tr, g, out);
    if (c_bd->parsed()) return cmd_bounds(bd, g, out);
    if (c_ru->parsed()) return cmd_run(ru, g, out);
    if (c_mc->parsed()) return cmd_montecarlo(mc, g, out);
  } catch (const CLI::ValidationError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const NumericError& e) {
    err << "numeric error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const DimensioningError& e) {
    err << "dimensioning error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const SolverError& e) {
    err << "solver error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const CapabilityError& e) {
    err << "capability error: " << e.what() << "\n";
    return kExitNumeric;
  }
  return kExitUsage;
}

}  // namespace rsd
