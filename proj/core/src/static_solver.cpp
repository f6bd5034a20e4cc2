#include "dynasty/static_solver.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "dynasty/errors.hpp"
#include "dynasty/utility.hpp"

namespace dynasty {

StaticSolution solve_static(const Household& h, const RegimeSpec& regime) {
  if (regime.model != Model::M1 && regime.model != Model::M2 && regime.model != Model::M3) {
    throw ConfigError("solve_static handles M1, M2 and M3 only, got " +
                      std::string(to_string(regime.model)));
  }
  h.validate();
  regime.validate();
  const double k = regime.costs.mean_cost();
  if (h.budget < k) {
    throw InfeasibleError("budget " + std::to_string(h.budget) + " is below the fixed cost " +
                          std::to_string(k));
  }

  // Utilities are compared as computed. Once M1 success rounds to 1 a larger
  // family no longer wins, and the tie keeps the smaller N.
  StaticSolution best;
  for (int n = 1;; ++n) {
    const double invest = (h.budget - n * k) / n;
    if (!(invest > 0.0)) break;
    const double u = analytic_expected_utility(ChildPlan::uniform(n, invest), regime, h);
    best.per_n_values.emplace_back(n, u);
    if (best.n_star == 0 || u > best.utility_star) {
      best.n_star = n;
      best.invest_star = invest;
      best.utility_star = u;
    }
  }
  if (best.n_star == 0) {
    throw InfeasibleError("budget leaves no positive investment for a single child");
  }
  return best;
}

namespace {

int m1_n_star(const Household& h, RegimeSpec regime, double sigma) {
  regime.production.sigma = sigma;
  return solve_static(h, regime).n_star;
}

}  // namespace

ThresholdOutcome rational_threshold(const Household& h, const RegimeSpec& regime,
                                    SigmaRange range, double resolution) {
  if (!(resolution > 0.0)) throw std::invalid_argument("resolution must be positive");
  if (!(range.low >= 0.0 && range.high > range.low)) {
    throw std::invalid_argument("sigma range must satisfy 0 <= low < high");
  }
  RegimeSpec m1 = regime;
  m1.model = Model::M1;
  if (m1_n_star(h, m1, range.low) != 1) {
    throw std::domain_error("optimal N at the bottom of the sigma range is not 1");
  }

  double lo = range.low;
  double hi = range.low;
  bool switched = false;
  for (int step = 1;; ++step) {
    const double s = range.low + step * kThresholdScanStep;
    if (s > range.high + 1e-12) break;
    if (m1_n_star(h, m1, s) >= 2) {
      hi = s;
      switched = true;
      break;
    }
    lo = s;
  }
  if (!switched) return ThresholdNotFound{range};

  while (hi - lo > resolution) {
    const double mid = 0.5 * (lo + hi);
    (m1_n_star(h, m1, mid) >= 2 ? hi : lo) = mid;
  }
  return ThresholdResult{0.5 * (lo + hi), lo, hi};
}

std::vector<SweepRow> static_sweep(std::span<const Model> models, const Household& h,
                                   const RegimeSpec& base, std::span<const double> sigma_grid) {
  if (sigma_grid.empty()) throw std::invalid_argument("sigma grid is empty");
  std::vector<SweepRow> rows;
  rows.reserve(models.size() * sigma_grid.size());
  for (Model m : models) {
    RegimeSpec r = base;
    r.model = m;
    for (double s : sigma_grid) {
      r.production.sigma = s;
      const auto sol = solve_static(h, r);
      rows.push_back({m, s, h.hc_parent, h.budget, sol.n_star, sol.invest_star, sol.utility_star});
    }
  }
  return rows;
}

std::vector<ThresholdPoint> threshold_curve(std::span<const double> hc_grid, double budget,
                                            const RegimeSpec& regime, SigmaRange range,
                                            double resolution) {
  if (hc_grid.empty()) throw std::invalid_argument("HC grid is empty");
  std::vector<ThresholdPoint> out;
  out.reserve(hc_grid.size());
  for (double hc : hc_grid) {
    const Household h{hc, budget};
    try {
      out.push_back({hc, rational_threshold(h, regime, range, resolution)});
    } catch (const std::domain_error&) {
      // already diversifying at range.low: nothing to bracket
      out.push_back({hc, ThresholdNotFound{range}});
    }
  }
  return out;
}

}  // namespace dynasty
