#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dynasty/dp_solver.hpp"
#include "dynasty/model.hpp"
#include "dynasty/static_solver.hpp"

namespace dynasty {

inline constexpr std::string_view kEngineVersion = "dynasty-engine 1.0.0";
inline constexpr std::uint64_t kDefaultMasterSeed = 20240917ULL;

// Every tunable number a scenario depends on. Dot paths address it:
// "reality.alpha", "belief.sigma", "institutional.alpha2", "b_crit".
struct ParameterSet {
  Calibration reality = Calibration::reality();
  Calibration belief = Calibration::belief();
  Calibration institutional = Calibration::institutional(0.05);
  double b_crit = calib::kBudgetThreshold;

  // Throws ConfigError naming the path when it is unknown or the value is
  // not a number.
  void set(std::string_view dot_path, std::string_view value);
  // Merges a JSON document {"reality": {...}, "belief": {...},
  // "institutional": {...}, "b_crit": x}; every key optional.
  void merge_json(std::string_view json_text);
  std::string to_json() const;
  static ParameterSet from_json(std::string_view json_text);

  friend bool operator==(const ParameterSet&, const ParameterSet&) = default;
};

using Override = std::pair<std::string, std::string>;

ParameterSet apply_overrides(ParameterSet base, const std::vector<Override>& overrides);

// Parses "key=value"; throws ConfigError when '=' is missing.
Override parse_override(std::string_view assignment);

enum class RuleKind {
  Hybrid,               // B < b_crit: M1/reality; else M4b/belief
  HybridInstitutional,  // B < b_crit: M1/reality; else M4c/institutional
  UniformBelief,        // M4b/belief everywhere
  UniformReality,       // M4b/reality everywhere
};

std::string_view to_string(RuleKind k);
RuleKind parse_rule_kind(std::string_view s);

struct RegimeRule {
  double b_threshold = calib::kBudgetThreshold;  // -inf: always `above`
  RegimeSpec below{};                            // static regime
  RegimeSpec above{};                            // DP regime

  static RegimeRule from(RuleKind kind, const ParameterSet& params);
};

enum class CellLabel { Stop, Grow, Conditional, Infeasible };

std::string_view to_string(CellLabel l);

struct CellRecord {
  CellLabel label = CellLabel::Infeasible;
  std::optional<Action> son_first;
  std::optional<Action> dtr_first;
  std::optional<int> n_star_static;
  std::optional<double> value_root;
};

// Static-M1 cells are Grow iff n_star >= 2. DP cells are Stop or Grow when
// both first-child genders agree, Conditional otherwise.
CellRecord classify_cell(const Household& h, const RegimeRule& rule);
CellRecord classify_dp_root(const Household& h, const RegimeSpec& regime);

struct Axis {
  std::string name;
  std::vector<double> values;

  // start, start+step, ... up to stop inclusive; values rounded to 1e-9.
  static Axis range(std::string name, double start, double stop, double step);
};

struct DecisionGrid {
  std::string scenario;
  Axis rows;
  Axis cols;
  std::vector<CellRecord> cells;  // row-major

  const CellRecord& at(std::size_t row, std::size_t col) const {
    return cells.at(row * cols.values.size() + col);
  }
  // scenario,<row>,<col>,label,action_son_first,action_dtr_first,n_star_static,value_root
  std::string to_csv() const;
};

enum class ScenarioKind { Heatmap, Sensitivity, StaticSweep, ThresholdCurve, DecisionCases };

std::string_view to_string(ScenarioKind k);
ScenarioKind parse_scenario_kind(std::string_view s);

struct ScenarioConfig {
  std::string id;
  std::string title;
  ScenarioKind kind = ScenarioKind::Heatmap;
  RuleKind rule = RuleKind::Hybrid;
  Axis rows;  // Heatmap: b; Sensitivity: alpha; StaticSweep: sigma; ThresholdCurve: hc
  Axis cols;  // Heatmap: hc; Sensitivity: sigma; otherwise empty
  Household household{};                  // fixed household for non-heatmap kinds
  std::vector<Override> scenario_patch;   // counterfactual, already applied to params
  std::vector<Override> user_overrides;   // --set, already applied to params
  ParameterSet params;
  std::uint64_t master_seed = kDefaultMasterSeed;
  std::vector<std::string> notes;

  void validate() const;
  std::string manifest_json() const;
  // Rebuilds the exact config a manifest was written from.
  static ScenarioConfig from_manifest(std::string_view json_text);
};

// Registered scenario ids in a fixed order.
const std::vector<std::string>& scenario_ids();

// Builds a registered scenario: base params, then the scenario's patch, then
// user overrides. Throws ConfigError for an unknown id.
ScenarioConfig make_scenario(std::string_view id, const ParameterSet& base = {},
                             const std::vector<Override>& user_overrides = {},
                             std::uint64_t master_seed = kDefaultMasterSeed);

struct DecisionCase {
  std::string name;
  Household household;
  PolicyTable table;
};

struct ScenarioResult {
  ScenarioConfig config;
  std::optional<DecisionGrid> grid;
  std::vector<SweepRow> sweep;
  std::vector<ThresholdPoint> curve;
  std::vector<DecisionCase> cases;

  std::string to_csv() const;
};

// jobs <= 0 means one worker per hardware thread. Output does not depend on jobs.
DecisionGrid run_heatmap(const ScenarioConfig& cfg, int jobs = 0);
DecisionGrid run_sensitivity_scan(const Axis& alpha_axis, const Axis& sigma_axis,
                                  const Household& h, const RegimeSpec& base,
                                  std::string scenario = "A2", int jobs = 0);
std::vector<DecisionCase> run_decision_cases(const RegimeSpec& regime);
ScenarioResult run_scenario(const ScenarioConfig& cfg, int jobs = 0);

struct WrittenArtifacts {
  std::filesystem::path csv;
  std::filesystem::path manifest;
};

// Writes <out>/<id>.csv and <out>/<id>.manifest.json, creating <out>.
// Throws std::runtime_error naming the path on I/O failure.
WrittenArtifacts write_scenario(const ScenarioResult& result, const std::filesystem::path& out);

// CSV for static_sweep rows: model,sigma,hc,budget,n_star,invest_star,utility
std::string sweep_csv(const std::vector<SweepRow>& rows);
// hc,budget,sigma_star,bracket_low,bracket_high,status
std::string threshold_csv(const std::vector<ThresholdPoint>& curve, double budget);

// Shortest round-trip decimal form; empty for non-finite values.
std::string format_number(double x);

void write_text_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace dynasty
