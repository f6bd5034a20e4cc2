#include "dynasty/selfcheck.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "dynasty/dp_solver.hpp"
#include "dynasty/rng.hpp"
#include "dynasty/utility.hpp"

namespace dynasty {

namespace {

class Draw {
 public:
  explicit Draw(std::uint64_t seed) : engine_(seed) {}
  double uniform(double lo, double hi) {
    return lo + (hi - lo) * static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }
  int integer(int lo, int hi) {  // inclusive
    return lo + static_cast<int>(engine_() % static_cast<std::uint64_t>(hi - lo + 1));
  }

 private:
  std::mt19937_64 engine_;
};

std::string describe(const RegimeSpec& r, const Household& h) {
  std::ostringstream os;
  os << to_string(r.model) << " hc=" << h.hc_parent << " B=" << h.budget
     << " alpha=" << r.production.alpha << " alpha2=" << r.production.alpha2
     << " sigma=" << r.production.sigma << " lambda=" << r.loss_aversion
     << " k=" << r.costs.k_son << "/" << r.costs.k_dtr << " n_max=" << r.n_max;
  return os.str();
}

}  // namespace

CheckReport check_analytic_vs_mc(Model model, std::uint64_t seed, int points, std::size_t draws,
                                 double z_bound) {
  CheckReport report;
  report.name = "analytic-vs-mc/" + std::string(to_string(model));
  const auto model_id = static_cast<std::uint64_t>(model);
  for (int i = 0; i < points; ++i) {
    Draw rnd(cell_seed(seed, "check-mc-params", model_id, static_cast<std::uint64_t>(i)));
    Household h{rnd.uniform(1.0, 14.0), rnd.uniform(80.0, 500.0)};
    RegimeSpec r;
    r.model = model;
    r.production.alpha = rnd.uniform(0.3, 0.9);
    r.production.sigma = rnd.uniform(0.1, 2.5);
    r.production.alpha2 = model == Model::M4c ? rnd.uniform(0.01, 0.06) : 0.0;
    r.loss_aversion = rnd.uniform(1.0, 3.0);

    ChildPlan plan;
    if (model == Model::M1 || model == Model::M2 || model == Model::M3) {
      const int max_n = std::min(6, static_cast<int>(std::floor((h.budget - 1.0) / r.costs.k_son)));
      const int n = rnd.integer(1, max_n);
      plan = ChildPlan::uniform(n, (h.budget - n * r.costs.k_son) / n);
    } else {
      FamilyState s;
      do {
        s = {rnd.integer(0, 3), rnd.integer(0, 3)};
      } while (s.size() < 1 || s.size() > 3 || remaining_budget(s, h, r.costs) <= 0.0);
      const double budget = remaining_budget(s, h, r.costs);
      const double share = s.n_dtrs == 0 ? 1.0 : s.n_sons == 0 ? 0.0 : rnd.uniform(0.1, 0.9);
      plan = {s.n_sons > 0 ? share * budget / s.n_sons : 0.0,
              s.n_dtrs > 0 ? (1.0 - share) * budget / s.n_dtrs : 0.0, s};
    }

    const double exact = analytic_expected_utility(plan, r, h);
    const auto mc = mc_expected_utility(
        plan, r, h, draws, cell_seed(seed, "check-mc-shocks", model_id, static_cast<std::uint64_t>(i)));
    const double diff = std::abs(exact - mc.estimate);
    // all-success or all-failure panels have s.e. 0; allow the unseen tail mass
    const double bound = mc.std_error > 0.0 ? z_bound * mc.std_error : 3.0 / static_cast<double>(draws);
    const double z = mc.std_error > 0.0 ? diff / mc.std_error : 0.0;
    report.worst = std::max(report.worst, z);
    ++report.cases;
    if (diff > bound) {
      std::ostringstream os;
      os << describe(r, h) << " plan=" << plan.state.key() << " I=" << plan.invest_son << "/"
         << plan.invest_dtr << ": analytic " << exact << " vs mc " << mc.estimate << " (se "
         << mc.std_error << ")";
      report.failures.push_back({os.str()});
    }
  }
  return report;
}

CheckReport check_dp_vs_enumeration(std::uint64_t seed, int draws, double rel_tol) {
  CheckReport report;
  report.name = "dp-vs-enumeration";
  for (int i = 0; i < draws; ++i) {
    Draw rnd(cell_seed(seed, "check-dp", 0, static_cast<std::uint64_t>(i)));
    Household h{rnd.uniform(1.0, 14.0), rnd.uniform(100.0, 500.0)};
    RegimeSpec r;
    r.model = rnd.integer(0, 3) == 0 ? Model::M4c : Model::M4b;
    r.production.alpha = rnd.uniform(0.3, 0.8);
    r.production.sigma = rnd.uniform(0.1, 1.5);
    r.production.alpha2 = r.model == Model::M4c ? rnd.uniform(0.01, 0.05) : 0.0;
    r.loss_aversion = rnd.uniform(1.0, 3.0);
    r.costs = {rnd.uniform(20.0, 45.0), rnd.uniform(20.0, 45.0)};
    r.n_max = rnd.integer(1, 4);

    const double dp = solve_dp(h, r).root_value();
    const double oracle = enumerate_policies_oracle(h, r).best_value;
    const double scale = std::max(std::abs(dp), std::abs(oracle));
    const double rel = scale > 0.0 ? std::abs(dp - oracle) / scale : 0.0;
    report.worst = std::max(report.worst, rel);
    ++report.cases;
    if (!(rel <= rel_tol)) {
      std::ostringstream os;
      os.precision(17);
      os << describe(r, h) << ": dp " << dp << " vs enumeration " << oracle;
      report.failures.push_back({os.str()});
    }
  }
  return report;
}

}  // namespace dynasty
