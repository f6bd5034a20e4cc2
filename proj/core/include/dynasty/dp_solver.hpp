#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "dynasty/model.hpp"

namespace dynasty {

struct StopValue {
  double value = 0.0;
  double invest_son = 0.0;  // per son
  double invest_dtr = 0.0;  // per daughter
};

enum class Action { Stop, Grow };

std::string_view to_string(Action a);

struct PolicyRecord {
  double value = 0.0;
  Action action = Action::Stop;
  StopValue stop{};
  std::optional<double> grow_value;  // absent at n_max or when the next child is unaffordable
};

class PolicyTable {
 public:
  void insert(FamilyState s, PolicyRecord r) { records_[s] = r; }
  bool contains(FamilyState s) const { return records_.count(s) != 0; }
  // Throws std::out_of_range for a state that was never solved.
  const PolicyRecord& at(FamilyState s) const;

  const std::map<FamilyState, PolicyRecord>& records() const { return records_; }

  // Expected value before the first child's gender is known.
  double root_value() const;

  std::string to_json() const;

 private:
  std::map<FamilyState, PolicyRecord> records_;
};

inline constexpr int kStopCoarseGrid = 201;
inline constexpr double kStopShareTolerance = 1e-5;

// Best split of B_rem between sons and daughters under M4b/M4c utility. The
// budget binds, so the search is over the son share s of B_rem: a coarse grid
// then golden-section refinement. Throws InfeasibleError when B_rem <= 0 and
// std::invalid_argument for an empty family.
StopValue optimal_stop_value(FamilyState state, const Household& h, const RegimeSpec& regime);

// Backward induction over every family with 1..n_max children. Grow is
// excluded where either possible next child would leave B_rem <= 0; ties go
// to Stop. Requires regime.model in {M4b, M4c}.
PolicyTable solve_dp(const Household& h, const RegimeSpec& regime);

Action decision_at(FamilyState state, const PolicyTable& table);

struct OracleResult {
  double best_value = 0.0;
  std::string best_policy;  // e.g. "s:G ss:S sd:S d:S"
  int policies_evaluated = 0;
};

// Exhaustive search over history-dependent stop rules on the birth tree,
// evaluated with optimal_stop_value. Independent of the Markov recursion in
// solve_dp. Requires n_max <= 4.
OracleResult enumerate_policies_oracle(const Household& h, const RegimeSpec& regime);

}  // namespace dynasty
