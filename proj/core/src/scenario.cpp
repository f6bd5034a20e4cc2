#include "dynasty/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <system_error>
#include <thread>

#include <json.hpp>

#include "dynasty/errors.hpp"

namespace dynasty {

using nlohmann::json;

std::string format_number(double x) {
  if (!std::isfinite(x)) return {};
  if (x == 0.0) return "0";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

void write_text_file(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  out.flush();
  if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

// ---------------------------------------------------------------------------
// Parameters

namespace {

double parse_double(std::string_view path, std::string_view text) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, v);
  if (res.ec != std::errc{} || res.ptr != end || !std::isfinite(v)) {
    throw ConfigError(std::string(path) + ": expected a number, got '" + std::string(text) + "'");
  }
  return v;
}

Calibration* world(ParameterSet& p, std::string_view name) {
  if (name == "reality") return &p.reality;
  if (name == "belief") return &p.belief;
  if (name == "institutional") return &p.institutional;
  return nullptr;
}

}  // namespace

void ParameterSet::set(std::string_view dot_path, std::string_view value) {
  if (dot_path == "b_crit") {
    b_crit = parse_double(dot_path, value);
    return;
  }
  const auto dot = dot_path.find('.');
  Calibration* c = dot == std::string_view::npos ? nullptr : world(*this, dot_path.substr(0, dot));
  if (c == nullptr) throw ConfigError("unknown parameter '" + std::string(dot_path) + "'");
  const auto key = dot_path.substr(dot + 1);
  std::string doc;
  if (key == "n_max") {
    int n = 0;
    const auto* end = value.data() + value.size();
    const auto res = std::from_chars(value.data(), end, n);
    if (res.ec != std::errc{} || res.ptr != end) {
      throw ConfigError(std::string(dot_path) + ": expected an integer, got '" + std::string(value) + "'");
    }
    doc = json{{std::string(key), n}}.dump();
  } else {
    doc = json{{std::string(key), parse_double(dot_path, value)}}.dump();
  }
  try {
    *c = parse_calibration(doc, *c);
  } catch (const ConfigError& e) {
    throw ConfigError(std::string(dot_path) + ": " + e.what());
  }
}

void ParameterSet::merge_json(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed config JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config JSON must be an object");
  for (const auto& [key, value] : doc.items()) {
    if (key == "b_crit") {
      if (!value.is_number()) throw ConfigError("b_crit: expected a number");
      b_crit = value.get<double>();
      continue;
    }
    Calibration* c = world(*this, key);
    if (c == nullptr) throw ConfigError("unknown config key '" + key + "'");
    try {
      *c = parse_calibration(value.dump(), *c);
    } catch (const ConfigError& e) {
      throw ConfigError(key + ": " + e.what());
    }
  }
}

std::string ParameterSet::to_json() const {
  json j;
  j["reality"] = json::parse(calibration_to_json(reality));
  j["belief"] = json::parse(calibration_to_json(belief));
  j["institutional"] = json::parse(calibration_to_json(institutional));
  j["b_crit"] = b_crit;
  return j.dump();
}

ParameterSet ParameterSet::from_json(std::string_view json_text) {
  ParameterSet p;
  p.merge_json(json_text);
  return p;
}

Override parse_override(std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    throw ConfigError("override '" + std::string(assignment) + "' is not key=value");
  }
  return {std::string(assignment.substr(0, eq)), std::string(assignment.substr(eq + 1))};
}

ParameterSet apply_overrides(ParameterSet base, const std::vector<Override>& overrides) {
  for (const auto& [path, value] : overrides) base.set(path, value);
  return base;
}

// ---------------------------------------------------------------------------
// Regime rules and cells

std::string_view to_string(RuleKind k) {
  switch (k) {
    case RuleKind::Hybrid: return "hybrid";
    case RuleKind::HybridInstitutional: return "hybrid_institutional";
    case RuleKind::UniformBelief: return "uniform_belief";
    case RuleKind::UniformReality: return "uniform_reality";
  }
  return "?";
}

RuleKind parse_rule_kind(std::string_view s) {
  for (auto k : {RuleKind::Hybrid, RuleKind::HybridInstitutional, RuleKind::UniformBelief,
                 RuleKind::UniformReality}) {
    if (s == to_string(k)) return k;
  }
  throw ConfigError("unknown regime rule '" + std::string(s) + "'");
}

RegimeRule RegimeRule::from(RuleKind kind, const ParameterSet& params) {
  RegimeRule r;
  r.below = params.reality.regime(Model::M1);
  switch (kind) {
    case RuleKind::Hybrid:
      r.b_threshold = params.b_crit;
      r.above = params.belief.regime(Model::M4b);
      break;
    case RuleKind::HybridInstitutional:
      r.b_threshold = params.b_crit;
      r.above = params.institutional.regime(Model::M4c);
      break;
    case RuleKind::UniformBelief:
      r.b_threshold = -std::numeric_limits<double>::infinity();
      r.above = params.belief.regime(Model::M4b);
      break;
    case RuleKind::UniformReality:
      r.b_threshold = -std::numeric_limits<double>::infinity();
      r.above = params.reality.regime(Model::M4b);
      break;
  }
  return r;
}

std::string_view to_string(CellLabel l) {
  switch (l) {
    case CellLabel::Stop: return "Stop";
    case CellLabel::Grow: return "Grow";
    case CellLabel::Conditional: return "Conditional";
    case CellLabel::Infeasible: return "Infeasible";
  }
  return "?";
}

CellRecord classify_dp_root(const Household& h, const RegimeSpec& regime) {
  CellRecord cell;
  PolicyTable table;
  try {
    table = solve_dp(h, regime);
  } catch (const InfeasibleError&) {
    return cell;
  }
  const Action son = table.at({1, 0}).action;
  const Action dtr = table.at({0, 1}).action;
  cell.son_first = son;
  cell.dtr_first = dtr;
  cell.value_root = table.root_value();
  if (son == dtr) {
    cell.label = son == Action::Stop ? CellLabel::Stop : CellLabel::Grow;
  } else {
    cell.label = CellLabel::Conditional;
  }
  return cell;
}

CellRecord classify_cell(const Household& h, const RegimeRule& rule) {
  if (!(h.budget < rule.b_threshold)) return classify_dp_root(h, rule.above);

  CellRecord cell;
  if (max_feasible_children(h, rule.below.costs) == 0) return cell;
  try {
    const auto sol = solve_static(h, rule.below);
    cell.label = sol.n_star >= 2 ? CellLabel::Grow : CellLabel::Stop;
    cell.n_star_static = sol.n_star;
    cell.value_root = sol.utility_star;
  } catch (const InfeasibleError&) {
    cell.label = CellLabel::Infeasible;
  }
  return cell;
}

// ---------------------------------------------------------------------------
// Grids

Axis Axis::range(std::string name, double start, double stop, double step) {
  if (!(step > 0.0) || stop < start) throw std::invalid_argument("bad axis range for " + name);
  const auto n = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
  Axis a{std::move(name), {}};
  a.values.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    a.values.push_back(std::round((start + static_cast<double>(i) * step) * 1e9) / 1e9);
  }
  return a;
}

namespace {

std::string action_field(const std::optional<Action>& a) {
  return a ? std::string(to_string(*a)) : std::string();
}

void require_axis(const Axis& a, const std::string& id) {
  if (a.values.empty()) throw ConfigError(id + ": axis '" + a.name + "' is empty");
  for (std::size_t i = 1; i < a.values.size(); ++i) {
    if (!(a.values[i] > a.values[i - 1])) {
      throw ConfigError(id + ": axis '" + a.name + "' is not strictly increasing");
    }
  }
}

template <class Fn>
void parallel_for(std::size_t n, int jobs, Fn&& fn) {
  if (n == 0) return;
  std::size_t workers = jobs > 0 ? static_cast<std::size_t>(jobs)
                                 : std::max(1U, std::thread::hardware_concurrency());
  workers = std::min(workers, n);
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) {
          try {
            fn(i);
          } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error) error = std::current_exception();
            next = n;
          }
        }
      });
    }
  }
  if (error) std::rethrow_exception(error);
}

template <class Fn>
DecisionGrid fill_grid(std::string scenario, const Axis& rows, const Axis& cols, int jobs,
                       Fn&& cell_at) {
  DecisionGrid grid{std::move(scenario), rows, cols, {}};
  const std::size_t nc = cols.values.size();
  grid.cells.resize(rows.values.size() * nc);
  parallel_for(grid.cells.size(), jobs, [&](std::size_t i) {
    const double r = rows.values[i / nc];
    const double c = cols.values[i % nc];
    try {
      grid.cells[i] = cell_at(r, c);
    } catch (const ConfigError& e) {
      throw ConfigError("cell (" + rows.name + "=" + format_number(r) + ", " + cols.name + "=" +
                        format_number(c) + "): " + e.what());
    } catch (const std::exception& e) {
      throw std::runtime_error("cell (" + rows.name + "=" + format_number(r) + ", " + cols.name +
                               "=" + format_number(c) + "): " + e.what());
    }
  });
  return grid;
}

}  // namespace

std::string DecisionGrid::to_csv() const {
  std::ostringstream out;
  out << "scenario," << rows.name << ',' << cols.name
      << ",label,action_son_first,action_dtr_first,n_star_static,value_root\n";
  for (std::size_t r = 0; r < rows.values.size(); ++r) {
    for (std::size_t c = 0; c < cols.values.size(); ++c) {
      const auto& cell = at(r, c);
      out << scenario << ',' << format_number(rows.values[r]) << ','
          << format_number(cols.values[c]) << ',' << to_string(cell.label) << ','
          << action_field(cell.son_first) << ',' << action_field(cell.dtr_first) << ','
          << (cell.n_star_static ? std::to_string(*cell.n_star_static) : std::string()) << ','
          << (cell.value_root ? format_number(*cell.value_root) : std::string()) << '\n';
    }
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Scenario configs

std::string_view to_string(ScenarioKind k) {
  switch (k) {
    case ScenarioKind::Heatmap: return "heatmap";
    case ScenarioKind::Sensitivity: return "sensitivity";
    case ScenarioKind::StaticSweep: return "static_sweep";
    case ScenarioKind::ThresholdCurve: return "threshold_curve";
    case ScenarioKind::DecisionCases: return "decision_cases";
  }
  return "?";
}

ScenarioKind parse_scenario_kind(std::string_view s) {
  for (auto k : {ScenarioKind::Heatmap, ScenarioKind::Sensitivity, ScenarioKind::StaticSweep,
                 ScenarioKind::ThresholdCurve, ScenarioKind::DecisionCases}) {
    if (s == to_string(k)) return k;
  }
  throw ConfigError("unknown scenario kind '" + std::string(s) + "'");
}

void ScenarioConfig::validate() const {
  if (id.empty()) throw ConfigError("scenario id is empty");
  switch (kind) {
    case ScenarioKind::Heatmap:
    case ScenarioKind::Sensitivity:
      require_axis(rows, id);
      require_axis(cols, id);
      break;
    case ScenarioKind::StaticSweep:
    case ScenarioKind::ThresholdCurve:
      require_axis(rows, id);
      break;
    case ScenarioKind::DecisionCases:
      break;
  }
  try {
    household.validate();
    params.reality.validate();
    params.belief.validate();
    params.institutional.validate();
  } catch (const std::domain_error& e) {
    throw ConfigError(id + ": " + e.what());
  }
}

namespace {

json axis_json(const Axis& a) { return {{"name", a.name}, {"values", a.values}}; }

Axis axis_from(const json& j) {
  return {j.at("name").get<std::string>(), j.at("values").get<std::vector<double>>()};
}

json overrides_json(const std::vector<Override>& o) {
  json arr = json::array();
  for (const auto& [k, v] : o) arr.push_back({k, v});
  return arr;
}

std::vector<Override> overrides_from(const json& j) {
  std::vector<Override> out;
  for (const auto& e : j) out.emplace_back(e.at(0).get<std::string>(), e.at(1).get<std::string>());
  return out;
}

}  // namespace

std::string ScenarioConfig::manifest_json() const {
  json j;
  j["scenario"] = id;
  j["title"] = title;
  j["kind"] = std::string(to_string(kind));
  j["rule"] = std::string(to_string(rule));
  j["axes"] = {{"rows", axis_json(rows)}, {"cols", axis_json(cols)}};
  j["household"] = {{"hc_parent", household.hc_parent}, {"budget", household.budget}};
  j["parameters"] = json::parse(params.to_json());
  j["scenario_patch"] = overrides_json(scenario_patch);
  j["user_overrides"] = overrides_json(user_overrides);
  j["master_seed"] = master_seed;
  j["engine_version"] = std::string(kEngineVersion);
  j["notes"] = notes;
  return j.dump(2) + "\n";
}

ScenarioConfig ScenarioConfig::from_manifest(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed manifest: ") + e.what());
  }
  ScenarioConfig c;
  try {
    c.id = j.at("scenario").get<std::string>();
    c.title = j.value("title", std::string());
    c.kind = parse_scenario_kind(j.at("kind").get<std::string>());
    c.rule = parse_rule_kind(j.at("rule").get<std::string>());
    c.rows = axis_from(j.at("axes").at("rows"));
    c.cols = axis_from(j.at("axes").at("cols"));
    c.household = {j.at("household").at("hc_parent").get<double>(),
                   j.at("household").at("budget").get<double>()};
    c.params = ParameterSet::from_json(j.at("parameters").dump());
    c.scenario_patch = overrides_from(j.value("scenario_patch", json::array()));
    c.user_overrides = overrides_from(j.value("user_overrides", json::array()));
    c.master_seed = j.at("master_seed").get<std::uint64_t>();
    c.notes = j.value("notes", std::vector<std::string>{});
  } catch (const json::exception& e) {
    throw ConfigError(std::string("manifest: ") + e.what());
  }
  c.validate();
  return c;
}

// ---------------------------------------------------------------------------
// Registry

namespace {

struct ScenarioTemplate {
  const char* id;
  const char* title;
  ScenarioKind kind;
  RuleKind rule;
  std::vector<Override> patch;
  std::vector<std::string> notes;
};

const std::vector<ScenarioTemplate>& templates() {
  static const std::vector<ScenarioTemplate> t = {
      {"fig1", "Static strategies versus uncertainty", ScenarioKind::StaticSweep,
       RuleKind::Hybrid, {},
       {"M1, M2 and M3 under the reality world; sigma grid 0.05..5.00 step 0.05",
        "M2 is static M4b with uniform investment and R = HC_parent"}},
      {"fig2", "Rational threshold versus parental HC", ScenarioKind::ThresholdCurve,
       RuleKind::Hybrid, {},
       {"static M1 under the reality world; coarse step 0.05, bisection to 0.01"}},
      {"fig3", "Hybrid regime decision map", ScenarioKind::Heatmap, RuleKind::Hybrid, {},
       {"B < b_crit: static M1/reality; B >= b_crit: M4b dynamic program/belief"}},
      {"fig4", "Dynamic decision cases", ScenarioKind::DecisionCases, RuleKind::UniformBelief, {},
       {"M4b/belief at (HC=2,B=200), (HC=12,B=200), (HC=10,B=350)"}},
      {"A1", "Pure M4b counterfactual", ScenarioKind::Heatmap, RuleKind::UniformBelief, {},
       {"M4b with belief parameters at every budget"}},
      {"A2", "Belief-parameter sensitivity scan", ScenarioKind::Sensitivity,
       RuleKind::UniformBelief, {},
       {"M4b root decision at HC=6, B=200 over alpha x sigma"}},
      {"A3", "Hybrid with high belief risk", ScenarioKind::Heatmap, RuleKind::Hybrid,
       {{"belief.sigma", "1.0"}}, {"belief sigma raised to 1.0, belief alpha unchanged"}},
      {"A4", "Uniform M4b with reality parameters", ScenarioKind::Heatmap,
       RuleKind::UniformReality, {{"reality.sigma", "4.922"}},
       {"M4b everywhere with alpha=0.665 and sigma=4.922"}},
      {"A5", "Cognitive boundary shift", ScenarioKind::Heatmap, RuleKind::Hybrid,
       {{"b_crit", "250"}}, {"regime threshold moved from 200 to 250"}},
      {"B1", "Hybrid institutional model, high penalty", ScenarioKind::Heatmap,
       RuleKind::HybridInstitutional, {{"institutional.alpha2", "0.05"}},
       {"M4c above b_crit: alpha1=0.665, alpha2=0.05",
        "assumption: M4c keeps sigma=0.4 and lambda=2.5; only production curvature changes"}},
      {"B2", "Hybrid institutional model, low penalty", ScenarioKind::Heatmap,
       RuleKind::HybridInstitutional, {{"institutional.alpha2", "0.02"}},
       {"M4c above b_crit: alpha1=0.665, alpha2=0.02",
        "assumption: M4c keeps sigma=0.4 and lambda=2.5; only production curvature changes"}},
  };
  return t;
}

}  // namespace

const std::vector<std::string>& scenario_ids() {
  static const std::vector<std::string> ids = [] {
    std::vector<std::string> v;
    for (const auto& t : templates()) v.emplace_back(t.id);
    return v;
  }();
  return ids;
}

ScenarioConfig make_scenario(std::string_view id, const ParameterSet& base,
                             const std::vector<Override>& user_overrides,
                             std::uint64_t master_seed) {
  const auto it = std::find_if(templates().begin(), templates().end(),
                               [&](const ScenarioTemplate& t) { return id == t.id; });
  if (it == templates().end()) {
    std::string known;
    for (const auto& s : scenario_ids()) known += (known.empty() ? "" : ", ") + s;
    throw ConfigError("unknown scenario id '" + std::string(id) + "' (known: " + known + ")");
  }
  ScenarioConfig c;
  c.id = it->id;
  c.title = it->title;
  c.kind = it->kind;
  c.rule = it->rule;
  c.scenario_patch = it->patch;
  c.user_overrides = user_overrides;
  c.params = apply_overrides(apply_overrides(base, it->patch), user_overrides);
  c.master_seed = master_seed;
  c.notes = it->notes;
  switch (c.kind) {
    case ScenarioKind::Heatmap:
      c.rows = Axis::range("b", 50, 500, 25);
      c.cols = Axis::range("hc", 1, 14, 1);
      break;
    case ScenarioKind::Sensitivity:
      c.rows = Axis::range("alpha", 0.3, 0.8, 0.025);
      c.cols = Axis::range("sigma", 0.1, 1.5, 0.05);
      c.household = {6.0, 200.0};
      break;
    case ScenarioKind::StaticSweep:
      c.rows = Axis::range("sigma", 0.05, 5.0, 0.05);
      c.cols = Axis{"", {}};
      c.household = {6.0, 200.0};
      break;
    case ScenarioKind::ThresholdCurve:
      c.rows = Axis::range("hc", 1, 14, 1);
      c.cols = Axis{"", {}};
      c.household = {6.0, 200.0};
      break;
    case ScenarioKind::DecisionCases:
      c.rows = Axis{"", {}};
      c.cols = Axis{"", {}};
      break;
  }
  c.validate();
  return c;
}

// ---------------------------------------------------------------------------
// Running

DecisionGrid run_heatmap(const ScenarioConfig& cfg, int jobs) {
  const RegimeRule rule = RegimeRule::from(cfg.rule, cfg.params);
  return fill_grid(cfg.id, cfg.rows, cfg.cols, jobs, [&](double b, double hc) {
    return classify_cell(Household{hc, b}, rule);
  });
}

DecisionGrid run_sensitivity_scan(const Axis& alpha_axis, const Axis& sigma_axis,
                                  const Household& h, const RegimeSpec& base,
                                  std::string scenario, int jobs) {
  for (double a : alpha_axis.values) {
    if (!(a > 0.0 && a <= 1.0)) throw ConfigError("sensitivity alpha outside (0, 1]");
  }
  for (double s : sigma_axis.values) {
    if (!(s > 0.0)) throw ConfigError("sensitivity sigma must be positive");
  }
  return fill_grid(std::move(scenario), alpha_axis, sigma_axis, jobs, [&](double a, double s) {
    RegimeSpec r = base;
    r.production.alpha = a;
    r.production.sigma = s;
    return classify_dp_root(h, r);
  });
}

std::vector<DecisionCase> run_decision_cases(const RegimeSpec& regime) {
  const std::pair<const char*, Household> cases[] = {
      {"low_status", {2.0, 200.0}},
      {"elite_trap", {12.0, 200.0}},
      {"conditional_escape", {10.0, 350.0}},
  };
  std::vector<DecisionCase> out;
  for (const auto& [name, h] : cases) out.push_back({name, h, solve_dp(h, regime)});
  return out;
}

ScenarioResult run_scenario(const ScenarioConfig& cfg, int jobs) {
  cfg.validate();
  ScenarioResult res{cfg, std::nullopt, {}, {}, {}};
  switch (cfg.kind) {
    case ScenarioKind::Heatmap:
      res.grid = run_heatmap(cfg, jobs);
      break;
    case ScenarioKind::Sensitivity:
      res.grid = run_sensitivity_scan(cfg.rows, cfg.cols, cfg.household,
                                      cfg.params.belief.regime(Model::M4b), cfg.id, jobs);
      break;
    case ScenarioKind::StaticSweep: {
      const Model models[] = {Model::M1, Model::M2, Model::M3};
      res.sweep = static_sweep(models, cfg.household, cfg.params.reality.regime(Model::M1),
                               cfg.rows.values);
      break;
    }
    case ScenarioKind::ThresholdCurve:
      res.curve = threshold_curve(cfg.rows.values, cfg.household.budget,
                                  cfg.params.reality.regime(Model::M1));
      break;
    case ScenarioKind::DecisionCases:
      res.cases = run_decision_cases(cfg.params.belief.regime(Model::M4b));
      break;
  }
  return res;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << "model,sigma,hc,budget,n_star,invest_star,utility\n";
  for (const auto& r : rows) {
    out << to_string(r.model) << ',' << format_number(r.sigma) << ',' << format_number(r.hc) << ','
        << format_number(r.budget) << ',' << r.n_star << ',' << format_number(r.invest_star) << ','
        << format_number(r.utility) << '\n';
  }
  return out.str();
}

std::string threshold_csv(const std::vector<ThresholdPoint>& curve, double budget) {
  std::ostringstream out;
  out << "hc,budget,sigma_star,bracket_low,bracket_high,status\n";
  for (const auto& p : curve) {
    out << format_number(p.hc) << ',' << format_number(budget) << ',';
    if (const auto* t = std::get_if<ThresholdResult>(&p.outcome)) {
      out << format_number(t->sigma_star) << ',' << format_number(t->bracket_low) << ','
          << format_number(t->bracket_high) << ",found\n";
    } else {
      const auto& nf = std::get<ThresholdNotFound>(p.outcome);
      out << ',' << format_number(nf.scanned.low) << ',' << format_number(nf.scanned.high)
          << ",not_found\n";
    }
  }
  return out.str();
}

namespace {

std::string cases_csv(const std::string& scenario, const std::vector<DecisionCase>& cases) {
  std::ostringstream out;
  out << "scenario,case,hc,b,state,value,action,stop_value,grow_value,invest_son,invest_dtr\n";
  for (const auto& c : cases) {
    for (const auto& [s, r] : c.table.records()) {
      out << scenario << ',' << c.name << ',' << format_number(c.household.hc_parent) << ','
          << format_number(c.household.budget) << ",\"" << s.key() << "\","
          << format_number(r.value) << ',' << to_string(r.action) << ','
          << format_number(r.stop.value) << ','
          << (r.grow_value ? format_number(*r.grow_value) : std::string()) << ','
          << format_number(r.stop.invest_son) << ',' << format_number(r.stop.invest_dtr) << '\n';
    }
  }
  return out.str();
}

}  // namespace

std::string ScenarioResult::to_csv() const {
  switch (config.kind) {
    case ScenarioKind::Heatmap:
    case ScenarioKind::Sensitivity:
      return grid ? grid->to_csv() : std::string();
    case ScenarioKind::StaticSweep:
      return sweep_csv(sweep);
    case ScenarioKind::ThresholdCurve:
      return threshold_csv(curve, config.household.budget);
    case ScenarioKind::DecisionCases:
      return cases_csv(config.id, cases);
  }
  return {};
}

WrittenArtifacts write_scenario(const ScenarioResult& result, const std::filesystem::path& out) {
  std::error_code ec;
  std::filesystem::create_directories(out, ec);
  if (ec) throw std::runtime_error("cannot create output directory '" + out.string() + "': " + ec.message());
  WrittenArtifacts w{out / (result.config.id + ".csv"), out / (result.config.id + ".manifest.json")};
  write_text_file(w.csv, result.to_csv());
  write_text_file(w.manifest, result.config.manifest_json());
  return w;
}

}  // namespace dynasty
