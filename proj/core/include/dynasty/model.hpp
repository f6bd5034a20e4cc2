#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dynasty {

// Calibrated constants. Two perceived worlds share one technology form
// HC = A * I^alpha * eps, ln eps ~ N(0, sigma^2).
namespace calib {
inline constexpr double kTfpA = 1.0;
inline constexpr double kAlphaReality = 0.665;
inline constexpr double kSigmaReality = 4.9;
inline constexpr double kAlphaBelief = 0.5;
inline constexpr double kSigmaBelief = 0.4;
inline constexpr double kLossAversion = 2.5;
inline constexpr double kFixedCost = 32.0;
inline constexpr double kHcAverage = 5.0;
inline constexpr int kMaxChildren = 3;
inline constexpr double kBudgetThreshold = 200.0;
// Structural-model estimate used by the uniform-M4b "real world" counterfactual.
inline constexpr double kSigmaRealityStructural = 4.922;
}  // namespace calib

struct ProductionParams {
  double tfp_A = calib::kTfpA;
  double alpha = calib::kAlphaReality;
  double alpha2 = 0.0;  // quadratic-in-logs penalty; 0 is the linear technology
  double sigma = calib::kSigmaReality;

  void validate() const;
  friend bool operator==(const ProductionParams&, const ProductionParams&) = default;
};

struct Household {
  double hc_parent = 6.0;
  double budget = 200.0;

  void validate() const;
};

struct CostParams {
  double k_son = calib::kFixedCost;
  double k_dtr = calib::kFixedCost;

  void validate() const;
  double min_cost() const { return k_son < k_dtr ? k_son : k_dtr; }
  double mean_cost() const { return 0.5 * (k_son + k_dtr); }
};

enum class ReferenceKind { ParentHC, PopulationAverage, Fixed };

struct ReferenceRule {
  ReferenceKind kind = ReferenceKind::ParentHC;
  double value = 0.0;  // only read for Fixed

  static ReferenceRule parent_hc() { return {ReferenceKind::ParentHC, 0.0}; }
  static ReferenceRule population_average() { return {ReferenceKind::PopulationAverage, 0.0}; }
  static ReferenceRule fixed(double v) { return {ReferenceKind::Fixed, v}; }
};

struct ResolvedRefs {
  double r_son;
  double r_dtr;
};

// Aspiration references. Sons benchmark against the parent, daughters against
// the population average. The survival threshold of M1 follows r_son.
struct ReferenceSpec {
  ReferenceRule r_son = ReferenceRule::parent_hc();
  ReferenceRule r_dtr = ReferenceRule::population_average();
  double hc_average = calib::kHcAverage;

  ResolvedRefs resolve(const Household& h) const;
  double survival_threshold(const Household& h) const { return resolve(h).r_son; }
};

enum class Model { M1, M2, M3, M4b, M4c };

std::string_view to_string(Model m);
Model parse_model(std::string_view s);

struct RegimeSpec {
  Model model = Model::M4b;
  ProductionParams production{};
  double loss_aversion = calib::kLossAversion;
  ReferenceSpec refs{};
  CostParams costs{};
  int n_max = calib::kMaxChildren;

  void validate() const;
};

struct FamilyState {
  int n_sons = 0;
  int n_dtrs = 0;

  int size() const { return n_sons + n_dtrs; }
  FamilyState with_son() const { return {n_sons + 1, n_dtrs}; }
  FamilyState with_dtr() const { return {n_sons, n_dtrs + 1}; }
  std::string key() const;  // "Nm,Nf"

  friend auto operator<=>(const FamilyState&, const FamilyState&) = default;
};

// Budget left for investment after the family's fixed costs.
double remaining_budget(const FamilyState& s, const Household& h, const CostParams& c);

// Mean of ln HC before the shock: ln A + alpha ln I - alpha2 (ln I)^2.
// Throws std::domain_error for invest <= 0.
double log_mean_hc(const ProductionParams& p, double invest);

// count draws of ln eps ~ N(0, sigma^2). Bit-reproducible for a given seed.
std::vector<double> sample_log_shocks(std::uint64_t seed, std::size_t count, double sigma);

// Largest N with N * min(k_son, k_dtr) <= budget, optionally capped.
int max_feasible_children(const Household& h, const CostParams& c,
                          std::optional<int> cap = std::nullopt);

// A single perceived world, as loaded from a calibration document with keys
// tfp_A, alpha, alpha2, sigma, lambda, k_son, k_dtr, hc_average, n_max.
struct Calibration {
  double tfp_A = calib::kTfpA;
  double alpha = calib::kAlphaReality;
  double alpha2 = 0.0;
  double sigma = calib::kSigmaReality;
  double lambda = calib::kLossAversion;
  double k_son = calib::kFixedCost;
  double k_dtr = calib::kFixedCost;
  double hc_average = calib::kHcAverage;
  int n_max = calib::kMaxChildren;

  static Calibration reality();
  static Calibration belief();
  // M4c: reality elasticity with a log-quadratic penalty, belief risk.
  static Calibration institutional(double alpha2);

  ProductionParams production() const { return {tfp_A, alpha, alpha2, sigma}; }
  // M4b-style regime: gendered references, loss aversion from this world.
  RegimeSpec regime(Model m) const;

  void validate() const;
  friend bool operator==(const Calibration&, const Calibration&) = default;
};

// Parses a flat calibration JSON object. Missing keys keep `base` values;
// unknown keys and non-numeric values raise ConfigError naming the key.
Calibration parse_calibration(std::string_view json_text, const Calibration& base = {});
std::string calibration_to_json(const Calibration& c);

}  // namespace dynasty
