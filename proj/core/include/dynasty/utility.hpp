#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "dynasty/model.hpp"

namespace dynasty {

struct ChildPlan {
  double invest_son = 0.0;
  double invest_dtr = 0.0;
  FamilyState state{};

  static ChildPlan uniform(int n_children, double invest) {
    return {invest, invest, FamilyState{n_children, 0}};
  }
  bool is_uniform() const;
  void validate(double remaining_budget) const;
};

// Gain g = ln HC - ln R is Normal(mu_g, sigma^2).
struct GainValue {
  double mu_g = 0.0;
  double sigma = 0.0;
};

// E[v(g)] for the loss-averse value v(g) = g (g >= 0), lambda g (g < 0):
//   mu + (lambda - 1) (mu Phi(-mu/sigma) - sigma phi(mu/sigma))
double expected_gain_loss(GainValue g, double lambda);

// M1: probability that the best of n equally-invested children reaches R.
double m1_success_prob(int n, double invest, double threshold_R, const ProductionParams& p);

// log of 1 - m1_success_prob. Orders plans the same way but keeps resolving
// them after the success probability has rounded to 1.
double m1_log_failure_prob(int n, double invest, double threshold_R, const ProductionParams& p);

// M3: E[sum ln HC] = n * log_mean_hc.
double m3_expected_utility(int n, double invest, const ProductionParams& p);

// M4b/M4c per-child expected value against reference ref_R.
double m4b_child_value(double invest, double ref_R, const ProductionParams& p, double lambda);

double m4b_family_utility(const ChildPlan& plan, const ResolvedRefs& refs,
                          const ProductionParams& p, double lambda);

// Closed-form expected utility of `plan` under regime.model. Static models
// (M1, M2, M3) require uniform investment; M2 benchmarks every child against
// HC_parent.
double analytic_expected_utility(const ChildPlan& plan, const RegimeSpec& regime,
                                 const Household& h);

struct McEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
};

// Standard-normal draws laid out draw-major: row d holds one z per child.
// Reusing one panel across candidate plans gives common random numbers.
class ShockPanel {
 public:
  ShockPanel(std::uint64_t seed, std::size_t draws, int children);

  std::size_t draws() const { return draws_; }
  int children() const { return children_; }
  std::span<const double> row(std::size_t d) const {
    return {z_.data() + d * static_cast<std::size_t>(children_),
            static_cast<std::size_t>(children_)};
  }

 private:
  std::size_t draws_;
  int children_;
  std::vector<double> z_;
};

// Sample-mean estimate of the same quantity as analytic_expected_utility.
// Throws ConfigError for unsupported model/plan combinations and
// std::invalid_argument for draws < 1000.
McEstimate mc_expected_utility(const ChildPlan& plan, const RegimeSpec& regime,
                               const Household& h, std::size_t draws, std::uint64_t seed);
McEstimate mc_expected_utility(const ChildPlan& plan, const RegimeSpec& regime,
                               const Household& h, const ShockPanel& panel);

}  // namespace dynasty
