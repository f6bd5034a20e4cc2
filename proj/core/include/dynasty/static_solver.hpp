#pragma once

#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "dynasty/model.hpp"

namespace dynasty {

struct StaticSolution {
  int n_star = 0;
  double invest_star = 0.0;
  double utility_star = 0.0;
  std::vector<std::pair<int, double>> per_n_values;  // (N, utility at uniform I)
};

// One-shot choice of N with I = (B - N K) / N for M1, M2 or M3, taken from
// regime.model. N runs over every count that leaves positive investment; the
// regime's n_max does not apply. Ties go to the smaller N.
// Throws InfeasibleError when the budget cannot cover one child.
StaticSolution solve_static(const Household& h, const RegimeSpec& regime);

inline constexpr double kThresholdScanStep = 0.05;

struct SigmaRange {
  double low = 0.05;
  double high = 5.0;
};

struct ThresholdResult {
  double sigma_star = 0.0;
  double bracket_low = 0.0;   // n_star == 1 here
  double bracket_high = 0.0;  // n_star >= 2 here
};

struct ThresholdNotFound {
  SigmaRange scanned;
};

using ThresholdOutcome = std::variant<ThresholdResult, ThresholdNotFound>;

// Smallest sigma at which static M1 stops relying on one child. Forward scan
// at kThresholdScanStep, then bisection until the bracket is <= resolution.
// regime.production.sigma is ignored. Throws std::domain_error when
// n_star(range.low) != 1.
ThresholdOutcome rational_threshold(const Household& h, const RegimeSpec& regime,
                                    SigmaRange range = {}, double resolution = 0.01);

struct SweepRow {
  Model model;
  double sigma;
  double hc;
  double budget;
  int n_star;
  double invest_star;
  double utility;
};

// Static solutions for each model over sigma_grid; `base` supplies everything
// except model and sigma.
std::vector<SweepRow> static_sweep(std::span<const Model> models, const Household& h,
                                   const RegimeSpec& base, std::span<const double> sigma_grid);

struct ThresholdPoint {
  double hc;
  ThresholdOutcome outcome;
};

std::vector<ThresholdPoint> threshold_curve(std::span<const double> hc_grid, double budget,
                                            const RegimeSpec& regime, SigmaRange range = {},
                                            double resolution = 0.01);

}  // namespace dynasty
