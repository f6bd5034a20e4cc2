#include "dynasty/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "dynasty/errors.hpp"
#include "dynasty/rng.hpp"

namespace dynasty {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::domain_error(what);
}

}  // namespace

void ProductionParams::validate() const {
  require(tfp_A > 0.0 && std::isfinite(tfp_A), "tfp_A must be positive");
  require(alpha > 0.0 && alpha <= 1.0, "alpha must lie in (0, 1]");
  require(alpha2 >= 0.0 && std::isfinite(alpha2), "alpha2 must be nonnegative");
  require(sigma >= 0.0 && std::isfinite(sigma), "sigma must be nonnegative");
}

void Household::validate() const {
  require(hc_parent > 0.0 && std::isfinite(hc_parent), "hc_parent must be positive");
  require(budget > 0.0 && std::isfinite(budget), "budget must be positive");
}

void CostParams::validate() const {
  require(k_son > 0.0 && k_dtr > 0.0, "fixed costs must be positive");
}

ResolvedRefs ReferenceSpec::resolve(const Household& h) const {
  auto one = [&](const ReferenceRule& r) {
    switch (r.kind) {
      case ReferenceKind::ParentHC: return h.hc_parent;
      case ReferenceKind::PopulationAverage: return hc_average;
      case ReferenceKind::Fixed: return r.value;
    }
    return 0.0;
  };
  ResolvedRefs out{one(r_son), one(r_dtr)};
  require(out.r_son > 0.0 && out.r_dtr > 0.0, "resolved references must be positive");
  return out;
}

std::string_view to_string(Model m) {
  switch (m) {
    case Model::M1: return "M1";
    case Model::M2: return "M2";
    case Model::M3: return "M3";
    case Model::M4b: return "M4b";
    case Model::M4c: return "M4c";
  }
  return "?";
}

Model parse_model(std::string_view s) {
  for (Model m : {Model::M1, Model::M2, Model::M3, Model::M4b, Model::M4c}) {
    if (s == to_string(m)) return m;
  }
  throw ConfigError("unknown model '" + std::string(s) + "' (expected M1, M2, M3, M4b or M4c)");
}

void RegimeSpec::validate() const {
  production.validate();
  costs.validate();
  require(loss_aversion >= 1.0, "loss_aversion must be >= 1");
  require(n_max >= 1, "n_max must be >= 1");
}

std::string FamilyState::key() const {
  return std::to_string(n_sons) + "," + std::to_string(n_dtrs);
}

double remaining_budget(const FamilyState& s, const Household& h, const CostParams& c) {
  return h.budget - (s.n_sons * c.k_son + s.n_dtrs * c.k_dtr);
}

double log_mean_hc(const ProductionParams& p, double invest) {
  if (!(invest > 0.0)) throw std::domain_error("investment must be positive");
  const double li = std::log(invest);
  return std::log(p.tfp_A) + p.alpha * li - p.alpha2 * li * li;
}

std::vector<double> sample_log_shocks(std::uint64_t seed, std::size_t count, double sigma) {
  if (count == 0) throw std::invalid_argument("shock count must be >= 1");
  require(sigma >= 0.0, "sigma must be nonnegative");
  std::vector<double> out(count, 0.0);
  if (sigma == 0.0) return out;
  NormalStream z(seed);
  for (auto& x : out) x = sigma * z.next();
  return out;
}

int max_feasible_children(const Household& h, const CostParams& c, std::optional<int> cap) {
  const double k = c.min_cost();
  int n = h.budget >= k ? static_cast<int>(std::floor(h.budget / k)) : 0;
  // floor can land one above when budget/k is a hair over an integer
  while (n > 0 && n * k > h.budget) --n;
  if (cap && n > *cap) n = *cap;
  return n;
}

Calibration Calibration::reality() { return {}; }

Calibration Calibration::belief() {
  Calibration c;
  c.alpha = calib::kAlphaBelief;
  c.sigma = calib::kSigmaBelief;
  return c;
}

Calibration Calibration::institutional(double alpha2) {
  Calibration c;
  c.alpha = calib::kAlphaReality;
  c.alpha2 = alpha2;
  c.sigma = calib::kSigmaBelief;
  return c;
}

RegimeSpec Calibration::regime(Model m) const {
  RegimeSpec r;
  r.model = m;
  r.production = production();
  r.loss_aversion = lambda;
  r.refs.hc_average = hc_average;
  r.costs = {k_son, k_dtr};
  r.n_max = n_max;
  return r;
}

void Calibration::validate() const { regime(Model::M4b).validate(); }

namespace {

const char* const kCalibrationKeys[] = {"tfp_A", "alpha",  "alpha2",     "sigma", "lambda",
                                        "k_son", "k_dtr", "hc_average", "n_max"};

double* field(Calibration& c, std::string_view key) {
  if (key == "tfp_A") return &c.tfp_A;
  if (key == "alpha") return &c.alpha;
  if (key == "alpha2") return &c.alpha2;
  if (key == "sigma") return &c.sigma;
  if (key == "lambda") return &c.lambda;
  if (key == "k_son") return &c.k_son;
  if (key == "k_dtr") return &c.k_dtr;
  if (key == "hc_average") return &c.hc_average;
  return nullptr;
}

}  // namespace

Calibration parse_calibration(std::string_view json_text, const Calibration& base) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("malformed calibration JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("calibration JSON must be an object");
  Calibration c = base;
  for (const auto& [key, value] : doc.items()) {
    if (key == "n_max") {
      if (!value.is_number_integer()) throw ConfigError("n_max: expected an integer");
      c.n_max = value.get<int>();
      continue;
    }
    double* slot = field(c, key);
    if (slot == nullptr) throw ConfigError("unknown calibration key '" + key + "'");
    if (!value.is_number()) throw ConfigError(key + ": expected a number");
    *slot = value.get<double>();
  }
  try {
    c.validate();
  } catch (const std::domain_error& e) {
    throw ConfigError(std::string("invalid calibration: ") + e.what());
  }
  return c;
}

std::string calibration_to_json(const Calibration& c) {
  nlohmann::json j;
  Calibration copy = c;
  for (const char* key : kCalibrationKeys) {
    if (std::string_view(key) == "n_max") {
      j[key] = c.n_max;
    } else {
      j[key] = *field(copy, key);
    }
  }
  return j.dump();
}

}  // namespace dynasty
