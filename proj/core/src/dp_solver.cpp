#include "dynasty/dp_solver.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "dynasty/errors.hpp"
#include "dynasty/utility.hpp"

namespace dynasty {

std::string_view to_string(Action a) { return a == Action::Stop ? "Stop" : "Grow"; }

const PolicyRecord& PolicyTable::at(FamilyState s) const {
  auto it = records_.find(s);
  if (it == records_.end()) throw std::out_of_range("no policy record for state " + s.key());
  return it->second;
}

double PolicyTable::root_value() const {
  return 0.5 * at({1, 0}).value + 0.5 * at({0, 1}).value;
}

std::string PolicyTable::to_json() const {
  nlohmann::json states = nlohmann::json::object();
  for (const auto& [s, r] : records_) {
    nlohmann::json j;
    j["value"] = r.value;
    j["action"] = std::string(to_string(r.action));
    j["stop_value"] = r.stop.value;
    j["invest_son"] = r.stop.invest_son;
    j["invest_dtr"] = r.stop.invest_dtr;
    j["grow_value"] = r.grow_value ? nlohmann::json(*r.grow_value) : nlohmann::json(nullptr);
    states[s.key()] = std::move(j);
  }
  nlohmann::json doc;
  doc["states"] = std::move(states);
  if (contains({1, 0}) && contains({0, 1})) doc["root_value"] = root_value();
  return doc.dump(2) + "\n";
}

namespace {

void require_dp_model(const RegimeSpec& regime) {
  if (regime.model != Model::M4b && regime.model != Model::M4c) {
    throw ConfigError("the dynamic solver needs M4b or M4c, got " +
                      std::string(to_string(regime.model)));
  }
}

}  // namespace

StopValue optimal_stop_value(FamilyState state, const Household& h, const RegimeSpec& regime) {
  if (state.n_sons < 0 || state.n_dtrs < 0 || state.size() == 0) {
    throw std::invalid_argument("stop value needs at least one child");
  }
  const double budget = remaining_budget(state, h, regime.costs);
  if (!(budget > 0.0)) {
    throw InfeasibleError("state " + state.key() + " leaves no budget for investment");
  }
  const auto refs = regime.refs.resolve(h);
  const auto& p = regime.production;
  const double lambda = regime.loss_aversion;
  const int sons = state.n_sons;
  const int dtrs = state.n_dtrs;

  auto plan_at = [&](double share) {
    return ChildPlan{sons > 0 ? share * budget / sons : 0.0,
                     dtrs > 0 ? (1.0 - share) * budget / dtrs : 0.0, state};
  };
  auto finish = [&](double share) {
    const auto plan = plan_at(share);
    return StopValue{m4b_family_utility(plan, refs, p, lambda), plan.invest_son, plan.invest_dtr};
  };

  if (dtrs == 0) return finish(1.0);
  if (sons == 0) return finish(0.0);

  auto objective = [&](double share) { return m4b_family_utility(plan_at(share), refs, p, lambda); };

  // Interior grid: the value diverges to -inf as either gender's share -> 0.
  std::size_t best_i = 0;
  double best_v = -std::numeric_limits<double>::infinity();
  std::vector<double> grid(kStopCoarseGrid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    grid[i] = (static_cast<double>(i) + 0.5) / static_cast<double>(grid.size());
    const double v = objective(grid[i]);
    if (v > best_v) {
      best_v = v;
      best_i = i;
    }
  }

  constexpr double kEdge = 1e-12;
  double a = best_i == 0 ? kEdge : grid[best_i - 1];
  double b = best_i + 1 == grid.size() ? 1.0 - kEdge : grid[best_i + 1];
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = objective(c);
  double fd = objective(d);
  while (b - a > kStopShareTolerance) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = objective(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = objective(d);
    }
  }
  const double refined = 0.5 * (a + b);
  return objective(refined) >= best_v ? finish(refined) : finish(grid[best_i]);
}

PolicyTable solve_dp(const Household& h, const RegimeSpec& regime) {
  require_dp_model(regime);
  h.validate();
  regime.validate();

  PolicyTable table;
  for (int n = regime.n_max; n >= 1; --n) {
    for (int sons = n; sons >= 0; --sons) {
      const FamilyState s{sons, n - sons};
      if (!(remaining_budget(s, h, regime.costs) > 0.0)) continue;
      PolicyRecord rec;
      rec.stop = optimal_stop_value(s, h, regime);
      rec.value = rec.stop.value;
      if (n < regime.n_max && table.contains(s.with_son()) && table.contains(s.with_dtr())) {
        const double grow = 0.5 * table.at(s.with_son()).value + 0.5 * table.at(s.with_dtr()).value;
        rec.grow_value = grow;
        if (grow > rec.stop.value) {
          rec.action = Action::Grow;
          rec.value = grow;
        }
      }
      table.insert(s, rec);
    }
  }
  if (!table.contains({1, 0}) || !table.contains({0, 1})) {
    throw InfeasibleError("budget " + std::to_string(h.budget) +
                          " cannot support a first child with positive investment");
  }
  return table;
}

Action decision_at(FamilyState state, const PolicyTable& table) { return table.at(state).action; }

namespace {

struct BirthTree {
  const Household& h;
  const RegimeSpec& regime;
  std::vector<std::string> nodes;  // histories where a Stop/Grow choice is made
  std::map<FamilyState, double> stop_cache;

  double stop_value(FamilyState s) {
    auto it = stop_cache.find(s);
    if (it != stop_cache.end()) return it->second;
    const double v = remaining_budget(s, h, regime.costs) > 0.0
                         ? optimal_stop_value(s, h, regime).value
                         : -std::numeric_limits<double>::infinity();
    return stop_cache.emplace(s, v).first->second;
  }

  static FamilyState state_of(const std::string& history) {
    FamilyState s;
    for (char c : history) (c == 's' ? s.n_sons : s.n_dtrs) += 1;
    return s;
  }

  int node_index(const std::string& history) const {
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      if (nodes[i] == history) return static_cast<int>(i);
    }
    return -1;
  }

  double evaluate(const std::string& history, std::uint32_t policy) {
    const FamilyState s = state_of(history);
    if (!(remaining_budget(s, h, regime.costs) > 0.0)) {
      return -std::numeric_limits<double>::infinity();
    }
    const int idx = node_index(history);
    if (idx >= 0 && ((policy >> idx) & 1U)) {
      return 0.5 * evaluate(history + 's', policy) + 0.5 * evaluate(history + 'd', policy);
    }
    return stop_value(s);
  }

  void describe(const std::string& history, std::uint32_t policy, std::string& out) const {
    const int idx = node_index(history);
    if (idx < 0) return;
    const bool grow = (policy >> idx) & 1U;
    if (!out.empty()) out += ' ';
    out += history + (grow ? ":G" : ":S");
    if (grow) {
      describe(history + 's', policy, out);
      describe(history + 'd', policy, out);
    }
  }
};

}  // namespace

OracleResult enumerate_policies_oracle(const Household& h, const RegimeSpec& regime) {
  require_dp_model(regime);
  regime.validate();
  if (regime.n_max > 4) throw std::invalid_argument("policy enumeration supports n_max <= 4");

  BirthTree tree{h, regime, {}, {}};
  std::vector<std::string> frontier{"s", "d"};
  for (int len = 1; len < regime.n_max; ++len) {
    std::vector<std::string> next;
    for (const auto& hist : frontier) {
      tree.nodes.push_back(hist);
      next.push_back(hist + 's');
      next.push_back(hist + 'd');
    }
    frontier = std::move(next);
  }

  const std::uint32_t count = 1U << tree.nodes.size();
  OracleResult best;
  best.best_value = -std::numeric_limits<double>::infinity();
  std::uint32_t best_policy = 0;
  for (std::uint32_t policy = 0; policy < count; ++policy) {
    const double v = 0.5 * tree.evaluate("s", policy) + 0.5 * tree.evaluate("d", policy);
    if (v > best.best_value) {
      best.best_value = v;
      best_policy = policy;
    }
  }
  best.policies_evaluated = static_cast<int>(count);
  if (!std::isfinite(best.best_value)) {
    throw InfeasibleError("no policy gives every first child positive investment");
  }
  tree.describe("s", best_policy, best.best_policy);
  tree.describe("d", best_policy, best.best_policy);
  if (best.best_policy.empty()) best.best_policy = "stop";
  return best;
}

}  // namespace dynasty
