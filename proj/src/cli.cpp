#include "ageopt/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "ageopt/config.hpp"
#include "ageopt/numeric.hpp"
#include "ageopt/optimizer.hpp"
#include "ageopt/oracle.hpp"
#include "ageopt/simulator.hpp"

namespace ageopt::cli {

namespace {

constexpr const char* kVersion = "0.1.0";

using nlohmann::json;

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return config_from_json(j);
}

void write_output(const std::string& out_path, std::ostream& fallback,
                  const std::string& text) {
  if (out_path.empty()) {
    fallback << text;
    return;
  }
  std::ofstream f(out_path);
  if (!f) throw ConfigError("cannot open output file: " + out_path);
  f << text;
}

double uniform_period(const ExperimentConfig& cfg) {
  if (!std::isfinite(cfg.f_max))
    throw ConfigError("uniform policy needs a finite f_max");
  double per = 1.0 / cfg.f_max;
  if (cfg.mode == TimeMode::Discrete) {
    double r = std::round(per);
    per = std::abs(per - r) < 1e-9 * std::max(1.0, per) ? r : std::ceil(per);
  }
  return per;
}

SolveConfig solve_config(const ExperimentConfig& cfg) {
  SolveConfig sc;
  sc.f_max = cfg.f_max;
  sc.mode = cfg.mode;
  sc.eps = cfg.eps;
  sc.pool_size = cfg.pool_size;
  sc.seed = cfg.seed;
  return sc;
}

json solve_result_json(const SolveResult& r) {
  return json{{"beta", r.policy.beta},
              {"alpha", r.alpha},
              {"lambda", r.policy.lambda},
              {"water_min", r.policy.water_min},
              {"water_max", r.policy.water_max},
              {"p_opt", r.p_opt},
              {"expected_interval", r.expected_interval},
              {"constrained_active", r.constrained_active},
              {"iterations", r.iterations},
              {"residual", r.residual},
              {"objective_se", r.objective_se},
              {"seed", r.seed}};
}

struct PolicyRow {
  std::string name;
  double avg_penalty = 0.0;
  double avg_interval = 0.0;
  double se = 0.0;
  bool feasible = true;
};

// Uniform, zero-wait, and solved-optimal under one config. Uniform comes from
// a full trajectory (its samples queue); the renewing policies use the
// tighter cycle-by-cycle estimator. All share the config seed, so the
// comparison sees common random numbers.
std::vector<PolicyRow> evaluate_policies(const ExperimentConfig& cfg) {
  PenaltyFn p{cfg.penalty};
  ServiceDist dist{cfg.service};
  std::vector<PolicyRow> rows;

  if (std::isfinite(cfg.f_max)) {
    UniformPolicy uni{uniform_period(cfg)};
    SimResult sim = simulate(uni, dist, p, cfg.horizon, cfg.seed, cfg.mode, cfg.initial_age);
    rows.push_back({"uniform", sim.avg_penalty, sim.avg_interval, sim.se, true});
  }

  RenewalResult zw =
      renewal_average(ZeroWaitPolicy{}, dist, p, cfg.n_cycles, cfg.seed, cfg.mode);
  bool zw_ok =
      !std::isfinite(cfg.f_max) || 1.0 / dist.mean() <= cfg.f_max * (1.0 + 1e-12);
  rows.push_back({"zero_wait", zw.avg_penalty, zw.avg_interval, zw.se, zw_ok});

  SolveResult sol = solve(p, dist, solve_config(cfg));
  RenewalResult opt =
      renewal_average(sol.policy, dist, p, cfg.n_cycles, cfg.seed, cfg.mode);
  rows.push_back({"optimal", opt.avg_penalty, opt.avg_interval, opt.se, true});
  return rows;
}

std::string rows_to_csv(const std::vector<PolicyRow>& rows, const std::string& axis,
                        std::optional<double> axis_value) {
  std::ostringstream os;
  os << "# age-opt v" << kVersion << "\n";
  if (axis.empty())
    os << "policy,avg_penalty,avg_interval,se,feasible\n";
  else
    os << "axis,value,policy,avg_penalty,avg_interval,se,feasible\n";
  for (const auto& r : rows) {
    if (!axis.empty()) os << axis << "," << fmt(*axis_value) << ",";
    os << r.name << "," << fmt(r.avg_penalty) << "," << fmt(r.avg_interval) << ","
       << fmt(r.se) << "," << (r.feasible ? "true" : "false") << "\n";
  }
  return os.str();
}

json rows_to_json(const std::vector<PolicyRow>& rows, const std::string& axis,
                  std::optional<double> axis_value) {
  json arr = json::array();
  for (const auto& r : rows) {
    json o{{"policy", r.name},
           {"avg_penalty", r.avg_penalty},
           {"avg_interval", r.avg_interval},
           {"se", r.se},
           {"feasible", r.feasible}};
    if (!axis.empty()) {
      o["axis"] = axis;
      o["value"] = *axis_value;
    }
    arr.push_back(o);
  }
  return arr;
}

std::string cmd_solve(const ExperimentConfig& cfg, const std::string& format) {
  PenaltyFn p{cfg.penalty};
  ServiceDist dist{cfg.service};
  SolveResult r = solve(p, dist, solve_config(cfg));
  if (format == "csv") {
    std::ostringstream os;
    os << "# age-opt v" << kVersion << "\n"
       << "beta,alpha,lambda,water_min,water_max,p_opt,expected_interval,"
          "constrained_active,iterations,residual,objective_se,seed\n"
       << fmt(r.policy.beta) << "," << fmt(r.alpha) << "," << fmt(r.policy.lambda) << ","
       << fmt(r.policy.water_min) << "," << fmt(r.policy.water_max) << "," << fmt(r.p_opt)
       << "," << fmt(r.expected_interval) << "," << (r.constrained_active ? "true" : "false")
       << "," << r.iterations << "," << fmt(r.residual) << "," << fmt(r.objective_se) << ","
       << r.seed << "\n";
    return os.str();
  }
  json j = solve_result_json(r);
  j["version"] = kVersion;
  return j.dump(2) + "\n";
}

std::string cmd_simulate(const ExperimentConfig& cfg, const std::string& format,
                         std::ostream& err) {
  PenaltyFn p{cfg.penalty};
  ServiceDist dist{cfg.service};

  Policy pol = ZeroWaitPolicy{};
  if (cfg.policy == "optimal") {
    pol = solve(p, dist, solve_config(cfg)).policy;
  } else if (cfg.policy == "uniform") {
    pol = UniformPolicy{uniform_period(cfg)};
  } else if (cfg.policy == "threshold") {
    ExpectationEngine ev(dist, cfg.mode, cfg.pool_size, cfg.seed);
    pol = threshold_policy_at(p, ev, *cfg.beta);
  }

  SimResult sim = simulate(pol, dist, p, cfg.horizon, cfg.seed, cfg.mode, cfg.initial_age);
  if (sim.low_cycle_warning)
    err << "warning: only " << sim.cycles << " cycles measured; averages are noisy\n";

  if (format == "csv") {
    std::ostringstream os;
    os << "# age-opt v" << kVersion << "\n" << "i,S,Z,Y,D\n";
    for (const auto& rec : sim.trajectory.records)
      os << rec.i << "," << fmt(rec.S) << "," << fmt(rec.Z) << "," << fmt(rec.Y) << ","
         << fmt(rec.D) << "\n";
    return os.str();
  }
  json j{{"version", kVersion},
         {"policy", cfg.policy},
         {"avg_penalty", sim.avg_penalty},
         {"avg_interval", sim.avg_interval},
         {"se", sim.se},
         {"cycles", sim.cycles},
         {"low_cycle_warning", sim.low_cycle_warning},
         {"seed", sim.seed}};
  if (cfg.beta) j["beta"] = *cfg.beta;
  return j.dump(2) + "\n";
}

std::string cmd_compare(const ExperimentConfig& cfg, const std::string& format) {
  std::vector<PolicyRow> rows = evaluate_policies(cfg);
  if (format == "json") {
    json j{{"version", kVersion}, {"rows", rows_to_json(rows, "", std::nullopt)}};
    return j.dump(2) + "\n";
  }
  return rows_to_csv(rows, "", std::nullopt);
}

std::string cmd_sweep(const ExperimentConfig& cfg, const std::string& format) {
  if (cfg.sweep_axis.empty()) throw ConfigError("sweep needs a \"sweep\" block");

  // points are independent; fan out and join in order so output is stable
  std::vector<std::future<std::vector<PolicyRow>>> futures;
  for (std::size_t i = 0; i < cfg.sweep_values.size(); ++i) {
    futures.push_back(std::async(std::launch::async, [&, i]() {
      ExperimentConfig point = apply_sweep_value(cfg, cfg.sweep_axis, cfg.sweep_values[i]);
      point.seed = cfg.seed + 7919 * i;
      return evaluate_policies(point);
    }));
  }

  if (format == "json") {
    json arr = json::array();
    for (std::size_t i = 0; i < futures.size(); ++i) {
      json rows = rows_to_json(futures[i].get(), cfg.sweep_axis, cfg.sweep_values[i]);
      for (auto& r : rows) arr.push_back(std::move(r));
    }
    json j{{"version", kVersion}, {"rows", arr}};
    return j.dump(2) + "\n";
  }
  std::ostringstream os;
  os << "# age-opt v" << kVersion << "\n"
     << "axis,value,policy,avg_penalty,avg_interval,se,feasible\n";
  for (std::size_t i = 0; i < futures.size(); ++i) {
    for (const auto& r : futures[i].get()) {
      os << cfg.sweep_axis << "," << fmt(cfg.sweep_values[i]) << "," << r.name << ","
         << fmt(r.avg_penalty) << "," << fmt(r.avg_interval) << "," << fmt(r.se) << ","
         << (r.feasible ? "true" : "false") << "\n";
    }
  }
  return os.str();
}

std::string cmd_zero_wait_check(const ExperimentConfig& cfg, const std::string& format) {
  PenaltyFn p{cfg.penalty};
  ServiceDist dist{cfg.service};
  ExpectationEngine ev(dist, cfg.mode, cfg.pool_size, cfg.seed);
  ZeroWaitReport rep = zero_wait_check(p, dist, ev);
  if (format == "csv") {
    std::ostringstream os;
    os << "# age-opt v" << kVersion << "\n" << "optimal,lhs,rhs\n"
       << (rep.optimal ? "true" : "false") << "," << fmt(rep.lhs) << "," << fmt(rep.rhs)
       << "\n";
    return os.str();
  }
  json j{{"version", kVersion},
         {"optimal", rep.optimal},
         {"lhs", rep.lhs},
         {"rhs", rep.rhs}};
  return j.dump(2) + "\n";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"optimal sampling for age-of-information penalties"};
  app.set_version_flag("--version", std::string("age-opt v") + kVersion);

  std::string config_path, out_path;
  std::string solve_fmt, sim_fmt, cmp_fmt, sweep_fmt, zw_fmt;
  std::optional<std::uint64_t> seed_override;

  // each subcommand keeps its own format slot; a shared one would let the
  // default of the last-registered subcommand leak into the others
  auto add_common = [&](CLI::App* sub, std::string& format, const char* default_format) {
    sub->add_option("--config", config_path, "experiment config (JSON)")->required();
    sub->add_option("--out", out_path, "output file (default: stdout)");
    sub->add_option("--seed", seed_override, "override the config seed");
    sub->add_option("--format", format, "csv or json")
        ->default_val(default_format)
        ->check(CLI::IsMember({"csv", "json"}));
  };

  CLI::App* solve_cmd = app.add_subcommand("solve", "compute the optimal sampling policy");
  add_common(solve_cmd, solve_fmt, "json");
  CLI::App* sim_cmd = app.add_subcommand("simulate", "run one policy on a sample path");
  add_common(sim_cmd, sim_fmt, "json");
  CLI::App* cmp_cmd =
      app.add_subcommand("compare", "uniform vs zero-wait vs optimal on one config");
  add_common(cmp_cmd, cmp_fmt, "csv");
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "compare policies along one axis");
  add_common(sweep_cmd, sweep_fmt, "csv");
  CLI::App* zw_cmd =
      app.add_subcommand("zero-wait-check", "is sampling on delivery already optimal?");
  add_common(zw_cmd, zw_fmt, "json");
  app.require_subcommand(1);

  std::vector<const char*> argv;
  argv.push_back("age-opt");
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    try {
      app.parse(int(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
      return app.exit(e, out, err) == 0 ? 0 : 2;
    }

    ExperimentConfig cfg = load_config(config_path);
    if (seed_override) cfg.seed = *seed_override;

    std::string text;
    if (solve_cmd->parsed())
      text = cmd_solve(cfg, solve_fmt);
    else if (sim_cmd->parsed())
      text = cmd_simulate(cfg, sim_fmt, err);
    else if (cmp_cmd->parsed())
      text = cmd_compare(cfg, cmp_fmt);
    else if (sweep_cmd->parsed())
      text = cmd_sweep(cfg, sweep_fmt);
    else
      text = cmd_zero_wait_check(cfg, zw_fmt);
    write_output(out_path, out, text);
    return 0;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << "\n";
    return 2;
  } catch (const NumericError& e) {
    err << "numeric error: " << e.what() << "\n";
    return 3;
  } catch (const std::domain_error& e) {
    err << "numeric error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace ageopt::cli
