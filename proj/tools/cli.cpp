#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <variant>

#include <CLI11.hpp>
#include <json.hpp>

#include "dynasty/dp_solver.hpp"
#include "dynasty/errors.hpp"
#include "dynasty/scenario.hpp"
#include "dynasty/selfcheck.hpp"
#include "dynasty/static_solver.hpp"

namespace dynasty::cli {

namespace {

struct Options {
  std::optional<std::uint64_t> seed;
  std::string config_path;
  std::vector<std::string> sets;
  std::size_t draws = 100000;
  bool quiet = false;
  int jobs = 0;
  std::string out_dir = "runs";

  // scenario
  std::string scenario_id;
  std::string manifest_path;
  bool list = false;

  // solve / threshold / sweep
  double hc = 6.0;
  double budget = 200.0;
  std::string model = "M4b";
  std::string world;
  double sigma_low = 0.05;
  double sigma_high = 5.0;
  double sigma_step = 0.05;
  double resolution = 0.01;

  // check
  bool oracles = false;
  int points = 50;
  int dp_draws = 100;
};

std::string read_file(const std::string& path, const char* what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(std::string(what) + ": cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::uint64_t resolve_seed(const Options& o) {
  if (o.seed) return *o.seed;
  if (const char* env = std::getenv("DYNASTY_SEED"); env != nullptr && *env != '\0') {
    std::uint64_t v = 0;
    const char* end = env + std::char_traits<char>::length(env);
    const auto res = std::from_chars(env, end, v);
    if (res.ec != std::errc{} || res.ptr != end) {
      throw ConfigError(std::string("DYNASTY_SEED: expected an unsigned integer, got '") + env + "'");
    }
    return v;
  }
  return kDefaultMasterSeed;
}

std::vector<Override> user_overrides(const Options& o) {
  std::vector<Override> v;
  for (const auto& s : o.sets) v.push_back(parse_override(s));
  return v;
}

ParameterSet base_parameters(const Options& o) {
  ParameterSet p;
  if (!o.config_path.empty()) p.merge_json(read_file(o.config_path, "--config"));
  return p;
}

std::string fmt(double x, int precision = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", precision, x);
  return buf;
}

const Calibration& world_for(const ParameterSet& p, Model m, const std::string& world) {
  std::string w = world;
  if (w.empty()) {
    w = m == Model::M4b ? "belief" : m == Model::M4c ? "institutional" : "reality";
  }
  if (w == "reality") return p.reality;
  if (w == "belief") return p.belief;
  if (w == "institutional") return p.institutional;
  throw ConfigError("--world: unknown world '" + world + "' (expected reality, belief or institutional)");
}

void write_manifest(const std::filesystem::path& path, const std::string& command,
                    const ParameterSet& params, const Options& o, std::uint64_t seed,
                    nlohmann::json extra) {
  nlohmann::json j = std::move(extra);
  j["command"] = command;
  j["parameters"] = nlohmann::json::parse(params.to_json());
  j["user_overrides"] = o.sets;
  j["master_seed"] = seed;
  j["engine_version"] = std::string(kEngineVersion);
  write_text_file(path, j.dump(2) + "\n");
}

int cmd_scenario(const Options& o, std::ostream& out) {
  if (o.list) {
    for (const auto& id : scenario_ids()) {
      const auto cfg = make_scenario(id);
      out << id << "\t" << to_string(cfg.kind) << "\t" << cfg.title << "\n";
    }
    return kExitOk;
  }
  std::vector<ScenarioConfig> configs;
  if (!o.manifest_path.empty()) {
    configs.push_back(ScenarioConfig::from_manifest(read_file(o.manifest_path, "--manifest")));
  } else if (o.scenario_id.empty()) {
    throw ConfigError("scenario: pass --id <id>, --manifest <file> or --list");
  } else {
    const auto base = base_parameters(o);
    const auto overrides = user_overrides(o);
    const auto seed = resolve_seed(o);
    if (o.scenario_id == "all") {
      for (const auto& id : scenario_ids()) configs.push_back(make_scenario(id, base, overrides, seed));
    } else {
      configs.push_back(make_scenario(o.scenario_id, base, overrides, seed));
    }
  }
  for (const auto& cfg : configs) {
    const auto result = run_scenario(cfg, o.jobs);
    const auto written = write_scenario(result, o.out_dir);
    if (!o.quiet) {
      out << cfg.id << ": wrote " << written.csv.string() << " and " << written.manifest.string()
          << "\n";
    }
  }
  return kExitOk;
}

int cmd_solve(const Options& o, std::ostream& out, bool write_outputs) {
  const auto params = apply_overrides(base_parameters(o), user_overrides(o));
  const Model model = parse_model(o.model);
  const Calibration& world = world_for(params, model, o.world);
  const RegimeSpec regime = world.regime(model);
  const Household h{o.hc, o.budget};
  try {
    h.validate();
  } catch (const std::domain_error& e) {
    throw ConfigError(std::string("household: ") + e.what());
  }

  nlohmann::json result;
  if (model == Model::M4b || model == Model::M4c) {
    const auto table = solve_dp(h, regime);
    if (!o.quiet) {
      out << "household hc=" << format_number(h.hc_parent) << " B=" << format_number(h.budget)
          << "  model " << to_string(model) << "\n";
      out << "state  action  value      stop       grow       I_son      I_dtr\n";
      for (const auto& [s, r] : table.records()) {
        char line[160];
        std::snprintf(line, sizeof line, "%-6s %-7s %-10s %-10s %-10s %-10s %s\n", s.key().c_str(),
                      std::string(to_string(r.action)).c_str(), fmt(r.value, 4).c_str(),
                      fmt(r.stop.value, 4).c_str(),
                      r.grow_value ? fmt(*r.grow_value, 4).c_str() : "-",
                      fmt(r.stop.invest_son, 2).c_str(), fmt(r.stop.invest_dtr, 2).c_str());
        out << line;
      }
      out << "root value " << fmt(table.root_value()) << "\n";
    }
    result = nlohmann::json::parse(table.to_json());
  } else {
    const auto sol = solve_static(h, regime);
    if (!o.quiet) {
      out << "household hc=" << format_number(h.hc_parent) << " B=" << format_number(h.budget)
          << "  model " << to_string(model) << "\n";
      for (const auto& [n, u] : sol.per_n_values) out << "  N=" << n << "  U=" << fmt(u) << "\n";
      out << "n_star " << sol.n_star << "  invest " << fmt(sol.invest_star, 4) << "  utility "
          << fmt(sol.utility_star) << "\n";
    }
    result["n_star"] = sol.n_star;
    result["invest_star"] = sol.invest_star;
    result["utility_star"] = sol.utility_star;
    nlohmann::json per_n = nlohmann::json::object();
    for (const auto& [n, u] : sol.per_n_values) per_n[std::to_string(n)] = u;
    result["per_n_values"] = per_n;
  }

  if (write_outputs) {
    const std::filesystem::path dir = o.out_dir;
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create output directory '" + dir.string() + "'");
    write_text_file(dir / "solve.json", result.dump(2) + "\n");
    write_manifest(dir / "solve.manifest.json", "solve", params, o, resolve_seed(o),
                   {{"household", {{"hc_parent", h.hc_parent}, {"budget", h.budget}}},
                    {"model", std::string(to_string(model))}});
    if (!o.quiet) out << "wrote " << (dir / "solve.json").string() << "\n";
  }
  return kExitOk;
}

int cmd_threshold(const Options& o, std::ostream& out) {
  const auto params = apply_overrides(base_parameters(o), user_overrides(o));
  const Household h{o.hc, o.budget};
  const auto outcome = rational_threshold(h, params.reality.regime(Model::M1),
                                          {o.sigma_low, o.sigma_high}, o.resolution);
  if (const auto* t = std::get_if<ThresholdResult>(&outcome)) {
    out << "sigma* = " << fmt(t->sigma_star, 4) << "  bracket [" << fmt(t->bracket_low, 4) << ", "
        << fmt(t->bracket_high, 4) << "]\n";
  } else {
    out << "no switch from N=1 to N>=2 for sigma in [" << fmt(o.sigma_low, 4) << ", "
        << fmt(o.sigma_high, 4) << "]\n";
  }
  return kExitOk;
}

int cmd_sweep(const Options& o, std::ostream& out) {
  ScenarioConfig cfg;
  cfg.id = "sweep";
  cfg.title = "Static strategies versus uncertainty";
  cfg.kind = ScenarioKind::StaticSweep;
  cfg.rows = Axis::range("sigma", o.sigma_low, o.sigma_high, o.sigma_step);
  cfg.household = {o.hc, o.budget};
  cfg.user_overrides = user_overrides(o);
  cfg.params = apply_overrides(base_parameters(o), cfg.user_overrides);
  cfg.master_seed = resolve_seed(o);
  cfg.notes = {"M1, M2 and M3 under the reality world"};
  const auto written = write_scenario(run_scenario(cfg, o.jobs), o.out_dir);
  if (!o.quiet) out << "wrote " << written.csv.string() << " and " << written.manifest.string() << "\n";
  return kExitOk;
}

int cmd_check(const Options& o, std::ostream& out) {
  const auto seed = resolve_seed(o);
  std::vector<CheckReport> reports;
  for (Model m : {Model::M1, Model::M2, Model::M3, Model::M4b, Model::M4c}) {
    reports.push_back(check_analytic_vs_mc(m, seed, o.points, o.draws));
  }
  reports.push_back(check_dp_vs_enumeration(seed, o.dp_draws));
  bool ok = true;
  for (const auto& r : reports) {
    ok = ok && r.passed();
    out << (r.passed() ? "PASS " : "FAIL ") << r.name << "  cases=" << r.cases
        << "  worst=" << r.worst << "\n";
    if (!o.quiet) {
      for (const auto& f : r.failures) out << "    " << f.what << "\n";
    }
  }
  return ok ? kExitOk : kExitCheckFailed;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Dynastic fertility/investment solver"};
  app.require_subcommand(1);
  app.fallthrough();

  std::uint64_t seed_value = 0;
  auto* seed_opt = app.add_option("--seed", seed_value, "Master seed (falls back to DYNASTY_SEED)");
  app.add_option("--config", o.config_path, "JSON parameter file")->check(CLI::ExistingFile);
  app.add_option("--set", o.sets, "Override a parameter: key=value, dot paths (belief.alpha=0.55)")
      ->allow_extra_args(false);
  app.add_option("--draws", o.draws, "Monte Carlo draws")->check(CLI::Range(1000, 100000000));
  app.add_flag("--quiet", o.quiet, "Suppress progress output");
  app.add_option("--jobs", o.jobs, "Worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);
  auto* out_opt = app.add_option("--out", o.out_dir, "Output directory");

  auto* scenario = app.add_subcommand("scenario", "Run a registered scenario and write CSV + manifest");
  scenario->add_option("--id", o.scenario_id, "Scenario id, or 'all'");
  scenario->add_option("--manifest", o.manifest_path, "Rerun from a manifest file");
  scenario->add_flag("--list", o.list, "List registered scenarios");

  auto* solve = app.add_subcommand("solve", "Solve a single household");
  solve->add_option("--hc", o.hc, "Parental human capital")->required();
  solve->add_option("--b", o.budget, "Household budget")->required();
  solve->add_option("--model", o.model, "M1, M2, M3, M4b or M4c");
  solve->add_option("--world", o.world, "reality, belief or institutional");

  auto* threshold = app.add_subcommand("threshold", "Rational risk threshold of static M1");
  threshold->add_option("--hc", o.hc, "Parental human capital")->required();
  threshold->add_option("--b", o.budget, "Household budget")->required();
  threshold->add_option("--low", o.sigma_low, "Bottom of the sigma range");
  threshold->add_option("--high", o.sigma_high, "Top of the sigma range");
  threshold->add_option("--resolution", o.resolution, "Bracket width");

  auto* sweep = app.add_subcommand("sweep", "Static M1/M2/M3 sweep over sigma");
  sweep->add_option("--hc", o.hc, "Parental human capital");
  sweep->add_option("--b", o.budget, "Household budget");
  sweep->add_option("--sigma-min", o.sigma_low, "First sigma");
  sweep->add_option("--sigma-max", o.sigma_high, "Last sigma");
  sweep->add_option("--sigma-step", o.sigma_step, "Sigma step");

  auto* check = app.add_subcommand("check", "Oracle self-checks");
  check->add_flag("--oracles", o.oracles, "Analytic-vs-MC and DP-vs-enumeration suites");
  check->add_option("--points", o.points, "Random points per model")->check(CLI::PositiveNumber);
  check->add_option("--dp-draws", o.dp_draws, "Random DP instances")->check(CLI::PositiveNumber);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfigError;
  }
  if (seed_opt->count() > 0) o.seed = seed_value;

  try {
    if (scenario->parsed()) return cmd_scenario(o, out);
    if (solve->parsed()) return cmd_solve(o, out, out_opt->count() > 0);
    if (threshold->parsed()) return cmd_threshold(o, out);
    if (sweep->parsed()) return cmd_sweep(o, out);
    if (check->parsed()) return cmd_check(o, out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const InfeasibleError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfigError;
  }
  return kExitConfigError;
}

}  // namespace dynasty::cli
