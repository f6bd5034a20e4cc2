// One PASS/FAIL line per acceptance criterion. Exit status is the number of
// failing criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "dynasty/dp_solver.hpp"
#include "dynasty/scenario.hpp"
#include "dynasty/selfcheck.hpp"
#include "dynasty/static_solver.hpp"
#include "dynasty/utility.hpp"

using namespace dynasty;

namespace {

struct Outcome {
  bool pass = true;
  std::vector<std::string> details;

  void require(bool ok, std::string what) {
    pass = pass && ok;
    details.push_back((ok ? "ok   " : "MISS ") + std::move(what));
  }
};

struct Criterion {
  std::string name;
  double time_limit_s;  // <= 0: no limit
  std::function<Outcome()> body;
};

std::string num(double x, int prec = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", prec, x);
  return buf;
}

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", x);
  return buf;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RegimeSpec reality_m1() { return Calibration::reality().regime(Model::M1); }

std::string cell_list(const std::vector<std::pair<double, double>>& cells) {
  std::string s;
  for (const auto& [b, hc] : cells) {
    s += (s.empty() ? "" : " ") + std::string("(B=") + num(b, 0) + ",HC=" + num(hc, 0) + ")";
  }
  return s;
}

Outcome threshold_reproduction() {
  Outcome o;
  const auto out = rational_threshold({6.0, 200.0}, reality_m1());
  const auto* t = std::get_if<ThresholdResult>(&out);
  o.require(t != nullptr, "threshold found at HC=6, B=200");
  if (t) o.require(t->sigma_star >= 0.40 && t->sigma_star <= 0.50, "sigma* = " + num(t->sigma_star) + " in [0.40, 0.50]");
  return o;
}

Outcome threshold_curve_shape() {
  Outcome o;
  std::vector<double> grid;
  for (int hc = 1; hc <= 14; ++hc) grid.push_back(hc);
  const auto curve = threshold_curve(grid, 200.0, reality_m1());
  std::vector<double> s;
  for (const auto& p : curve) {
    const auto* t = std::get_if<ThresholdResult>(&p.outcome);
    o.require(t != nullptr, "threshold found at HC=" + num(p.hc, 0));
    if (!t) return o;
    s.push_back(t->sigma_star);
  }
  const auto it = std::min_element(s.begin(), s.end());
  const int hc_min = static_cast<int>(it - s.begin()) + 1;
  o.require(hc_min > 1 && hc_min < 14 && hc_min >= 3 && hc_min <= 5,
            "interior minimum at HC=" + std::to_string(hc_min) + " in [3, 5]");
  o.require(*it >= 0.20 && *it <= 0.30, "minimum sigma* = " + num(*it) + " in [0.20, 0.30]");
  o.require(s.back() >= 0.8 && s.back() <= 1.0, "sigma*(HC=14) = " + num(s.back()) + " in [0.8, 1.0]");
  return o;
}

Outcome fig1_monotonicity() {
  Outcome o;
  const auto result = run_scenario(make_scenario("fig1"));
  for (Model m : {Model::M1, Model::M2, Model::M3}) {
    std::vector<int> n;
    for (const auto& r : result.sweep) {
      if (r.model == m) n.push_back(r.n_star);
    }
    bool ok = !n.empty();
    for (std::size_t i = 1; i < n.size(); ++i) {
      if (m == Model::M1) ok = ok && n[i] >= n[i - 1];
      if (m == Model::M2) ok = ok && n[i] <= n[i - 1];
      if (m == Model::M3) ok = ok && n[i] == n[0];
    }
    const char* what = m == Model::M1 ? "nondecreasing" : m == Model::M2 ? "nonincreasing" : "constant";
    o.require(ok, std::string(to_string(m)) + " n_star " + what + " over " + std::to_string(n.size()) +
                      " sigma points (" + std::to_string(n.front()) + " -> " + std::to_string(n.back()) + ")");
  }
  return o;
}

Outcome fig3_zones() {
  Outcome o;
  const auto grid = run_scenario(make_scenario("fig3")).grid.value();
  std::vector<std::pair<double, double>> a_bad, b_bad, e_bad;
  std::optional<CellLabel> c, d;
  for (std::size_t i = 0; i < grid.rows.values.size(); ++i) {
    const double b = grid.rows.values[i];
    for (std::size_t j = 0; j < grid.cols.values.size(); ++j) {
      const double hc = grid.cols.values[j];
      const auto label = grid.at(i, j).label;
      if (b >= 100 && b < 200 && label != CellLabel::Grow) a_bad.emplace_back(b, hc);
      if (b == 50 && label == CellLabel::Grow) b_bad.emplace_back(b, hc);
      if (b >= 400 && label != CellLabel::Grow && label != CellLabel::Conditional) e_bad.emplace_back(b, hc);
      if (b == 200 && hc == 12) c = label;
      if (b == 200 && hc == 2) d = label;
    }
  }
  o.require(a_bad.empty(), "(a) 100 <= B < 200 all Grow" + (a_bad.empty() ? "" : ": " + cell_list(a_bad)));
  o.require(b_bad.empty(), "(b) B = 50 never Grow" + (b_bad.empty() ? "" : ": " + cell_list(b_bad)));
  o.require(c == CellLabel::Stop, "(c) (B=200, HC=12) is " + std::string(c ? to_string(*c) : "missing"));
  o.require(d == CellLabel::Grow, "(d) (B=200, HC=2) is " + std::string(d ? to_string(*d) : "missing"));
  o.require(e_bad.empty(), "(e) B >= 400 all Grow/Conditional" + (e_bad.empty() ? "" : ", Stop at " + cell_list(e_bad)));
  return o;
}

Outcome case3_gender_split() {
  Outcome o;
  const auto t = solve_dp({10.0, 350.0}, Calibration::belief().regime(Model::M4b));
  o.require(decision_at({1, 0}, t) == Action::Stop, "first son: " + std::string(to_string(decision_at({1, 0}, t))));
  o.require(decision_at({0, 1}, t) == Action::Grow, "first daughter: " + std::string(to_string(decision_at({0, 1}, t))));
  return o;
}

Outcome counterfactual_signatures() {
  Outcome o;
  auto grid = [](const char* id) { return run_scenario(make_scenario(id)).grid.value(); };
  const auto fig3 = grid("fig3"), a1 = grid("A1"), a4 = grid("A4"), a5 = grid("A5"), b1 = grid("B1"),
             b2 = grid("B2");
  int a1_low = 0, a1_stop = 0, b2_high = 0, b2_stop = 0;
  std::vector<std::pair<double, double>> a4_bad, a5_bad, b1_bad;
  for (std::size_t i = 0; i < fig3.rows.values.size(); ++i) {
    const double b = fig3.rows.values[i];
    for (std::size_t j = 0; j < fig3.cols.values.size(); ++j) {
      const double hc = fig3.cols.values[j];
      if (b < 200) {
        ++a1_low;
        const auto l = a1.at(i, j).label;
        a1_stop += l == CellLabel::Stop || l == CellLabel::Infeasible;
      } else {
        if (a4.at(i, j).label != CellLabel::Stop) a4_bad.emplace_back(b, hc);
        ++b2_high;
        b2_stop += b2.at(i, j).label == CellLabel::Stop;
        if (hc >= 10 && b1.at(i, j).label != CellLabel::Stop) b1_bad.emplace_back(b, hc);
      }
      if ((b < 200 || b >= 250) && fig3.at(i, j).label != a5.at(i, j).label) a5_bad.emplace_back(b, hc);
    }
  }
  o.require(2 * a1_stop >= a1_low, "A1: " + std::to_string(a1_stop) + "/" + std::to_string(a1_low) +
                                       " B<200 cells Stop/Infeasible (>= 50%)");
  o.require(a4_bad.empty(), "A4: " + std::to_string(a4_bad.size()) + " B>=200 cells not Stop" +
                                (a4_bad.empty() ? "" : ": " + cell_list(a4_bad)));
  o.require(a5_bad.empty(), "A5: " + std::to_string(a5_bad.size()) + " differences outside 200 <= B < 250");
  o.require(b1_bad.empty(), "B1: " + std::to_string(b1_bad.size()) + " (HC>=10, B>=200) cells not Stop");
  o.require(10 * b2_stop < b2_high, "B2: " + std::to_string(b2_stop) + "/" + std::to_string(b2_high) +
                                        " B>=200 cells Stop (< 10%)");
  return o;
}

Outcome oracle_equivalence() {
  Outcome o;
  const auto dp = check_dp_vs_enumeration(kDefaultMasterSeed, 100, 1e-9);
  o.require(dp.passed() && dp.cases == 100,
            "DP vs enumeration: " + std::to_string(dp.cases) + " draws, worst rel " + sci(dp.worst));
  for (Model m : {Model::M1, Model::M2, Model::M3, Model::M4b, Model::M4c}) {
    const auto r = check_analytic_vs_mc(m, kDefaultMasterSeed, 20, 100000, 4.0);
    o.require(r.passed(), std::string(to_string(m)) + " analytic vs MC: " + std::to_string(r.cases) +
                              " points, worst |z| " + num(r.worst, 2));
  }
  return o;
}

Outcome closed_form_spot_values() {
  Outcome o;
  constexpr double kOracle = 0.764017592910770712;  // 30-digit quadrature
  const double v = m4b_child_value(168.0, 6.0, {1.0, 0.5, 0.0, 0.4}, 2.5);
  o.require(std::abs(v - kOracle) <= 1e-4, "m4b_child_value = " + num(v, 7) + " vs oracle " + num(kOracle, 7));
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> inv(1.0, 300.0), ref(1.0, 14.0), sig(0.2, 5.0);
  double worst = 0.0;
  for (int i = 0; i < 2000; ++i) {
    const ProductionParams p{1.0, 0.665, 0.0, sig(rng)};
    const double I = inv(rng), R = ref(rng);
    const double q1 = 1.0 - m1_success_prob(1, I, R, p);
    for (int n = 2; n <= 6; ++n) worst = std::max(worst, std::abs(1.0 - m1_success_prob(n, I, R, p) - std::pow(q1, n)));
  }
  o.require(worst <= 1e-12, "m1 independence identity, worst " + sci(worst));
  return o;
}

Outcome determinism() {
  Outcome o;
  const auto dir = std::filesystem::temp_directory_path() / "dynasty-acceptance";
  std::filesystem::remove_all(dir);
  int identical = 0;
  for (const auto& id : scenario_ids()) {
    const auto written = write_scenario(run_scenario(make_scenario(id)), dir / "first");
    const auto cfg = ScenarioConfig::from_manifest(slurp(written.manifest));
    const auto again = write_scenario(run_scenario(cfg, 2), dir / "rerun");
    identical += slurp(written.csv) == slurp(again.csv);
  }
  std::filesystem::remove_all(dir);
  o.require(identical == static_cast<int>(scenario_ids().size()),
            std::to_string(identical) + "/" + std::to_string(scenario_ids().size()) +
                " manifest reruns byte-identical");
  return o;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {"threshold reproduction", 5.0, threshold_reproduction},
      {"threshold curve shape", 60.0, threshold_curve_shape},
      {"fig1 monotonicity", 0.0, fig1_monotonicity},
      {"fig3 zone structure", 120.0, fig3_zones},
      {"case 3 gender split", 0.0, case3_gender_split},
      {"counterfactual signatures", 0.0, counterfactual_signatures},
      {"oracle equivalence", 0.0, oracle_equivalence},
      {"closed-form spot values", 0.0, closed_form_spot_values},
      {"determinism", 0.0, determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.body();
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.time_limit_s > 0.0) {
      o.require(secs < c.time_limit_s, "runtime " + num(secs, 3) + " s < " + num(c.time_limit_s, 0) + " s");
    }
    failed += !o.pass;
    std::printf("%s  %-28s %8.3f s\n", o.pass ? "PASS" : "FAIL", c.name.c_str(), secs);
    for (const auto& d : o.details) std::printf("        %s\n", d.c_str());
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed;
}
