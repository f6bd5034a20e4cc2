#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "dynasty/errors.hpp"
#include "dynasty/normal.hpp"
#include "dynasty/utility.hpp"

using namespace dynasty;

namespace {

const ProductionParams kBelief{1.0, 0.5, 0.0, 0.4};
const ProductionParams kReality{1.0, 0.665, 0.0, 4.9};

double simpson(const auto& f, double a, double b, int n) {
  const double h = (b - a) / n;
  double sum = f(a) + f(b);
  for (int i = 1; i < n; ++i) sum += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return sum * h / 3.0;
}

// E[v(g)] by composite Simpson over mu +- 12 sigma, split at the kink g = 0.
// Independent of the closed form.
double gain_loss_quadrature(double mu, double sigma, double lambda) {
  const auto density = [&](double g) {
    const double z = (g - mu) / sigma;
    return std::exp(-0.5 * z * z) / (sigma * std::sqrt(2.0 * std::numbers::pi));
  };
  const double lo = mu - 12.0 * sigma;
  const double hi = mu + 12.0 * sigma;
  double total = 0.0;
  if (lo < 0.0) total += lambda * simpson([&](double g) { return g * density(g); }, lo, std::min(hi, 0.0), 4000);
  if (hi > 0.0) total += simpson([&](double g) { return g * density(g); }, std::max(lo, 0.0), hi, 4000);
  return total;
}

}  // namespace

TEST_SUITE("utility") {

TEST_CASE("frozen high-precision values") {
  CHECK(m4b_child_value(168.0, 6.0, kBelief, 2.5) ==
        doctest::Approx(0.764017592910770712).epsilon(1e-12));
  // penalty relative to the risk-neutral mean
  const double mu = 0.5 * std::log(168.0) - std::log(6.0);
  CHECK(mu == doctest::Approx(0.770222520473574462).epsilon(1e-14));
  CHECK(m4b_child_value(168.0, 6.0, kBelief, 2.5) - mu ==
        doctest::Approx(-0.006204927562803749).epsilon(1e-10));
  CHECK(expected_gain_loss({0.0, 0.4}, 2.5) == doctest::Approx(-0.239365368240859607).epsilon(1e-13));
  CHECK(m3_expected_utility(2, 68.0, kReality) == doctest::Approx(5.61194524788422191).epsilon(1e-14));
  CHECK(m1_success_prob(1, 168.0, 6.0, kReality) ==
        doctest::Approx(0.629197975603384066).epsilon(1e-13));
  ProductionParams tight = kReality;
  tight.sigma = 0.4;
  CHECK(m1_success_prob(1, 168.0, 6.0, tight) ==
        doctest::Approx(0.999973182112405632).epsilon(1e-13));

  const ChildPlan plan{100.0, 36.0, FamilyState{1, 1}};
  CHECK(m4b_family_utility(plan, {6.0, 5.0}, kBelief, 2.5) ==
        doctest::Approx(0.537403532817622691).epsilon(1e-12));
}

TEST_CASE("m4b spot value is close to the quoted 0.7638") {
  // 0.7638 sits about 2e-4 below the exact integral
  CHECK(std::abs(m4b_child_value(168.0, 6.0, kBelief, 2.5) - 0.7638) < 1e-3);
}

TEST_CASE("gain-loss closed form matches quadrature") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> mu_d(-2.0, 2.0), sig_d(0.05, 3.0), lam_d(1.0, 4.0);
  for (int i = 0; i < 200; ++i) {
    const double mu = mu_d(rng), sigma = sig_d(rng), lambda = lam_d(rng);
    CHECK(expected_gain_loss({mu, sigma}, lambda) ==
          doctest::Approx(gain_loss_quadrature(mu, sigma, lambda)).epsilon(1e-9));
  }
}

TEST_CASE("degenerate risk") {
  CHECK(expected_gain_loss({0.3, 0.0}, 2.5) == 0.3);
  CHECK(expected_gain_loss({-0.3, 0.0}, 2.5) == doctest::Approx(-0.75));
  CHECK(expected_gain_loss({0.0, 0.0}, 2.5) == 0.0);
  // lambda = 1 is risk neutral
  CHECK(expected_gain_loss({-0.4, 1.3}, 1.0) == doctest::Approx(-0.4).epsilon(1e-14));
  ProductionParams sure = kReality;
  sure.sigma = 0.0;
  CHECK(m1_success_prob(1, 168.0, 6.0, sure) == 1.0);
  CHECK(m1_success_prob(1, 1.0, 6.0, sure) == 0.0);
}

TEST_CASE("M1 independence identity") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> inv(1.0, 300.0), r(1.0, 14.0), s(0.2, 5.0);
  for (int i = 0; i < 500; ++i) {
    ProductionParams p = kReality;
    p.sigma = s(rng);
    const double I = inv(rng), R = r(rng);
    const double q1 = 1.0 - m1_success_prob(1, I, R, p);
    for (int n = 2; n <= 6; ++n) {
      CHECK(std::abs((1.0 - m1_success_prob(n, I, R, p)) - std::pow(q1, n)) <= 1e-12);
    }
  }
}

TEST_CASE("M1 monotonicity properties") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> inv(1.0, 300.0), r(1.0, 14.0), s(0.05, 5.0);
  for (int i = 0; i < 500; ++i) {
    ProductionParams p = kReality;
    p.sigma = s(rng);
    const double I = inv(rng), R = r(rng);
    const double u = m1_success_prob(2, I, R, p);
    CHECK(u >= 0.0);
    CHECK(u <= 1.0);
    CHECK(m1_success_prob(2, I * 1.1, R, p) >= u);
    CHECK(m1_success_prob(3, I, R, p) >= u);
    CHECK(m1_success_prob(2, I, R * 1.1, p) <= u);
  }
  CHECK_THROWS_AS(m1_success_prob(1, 10.0, 0.0, kReality), std::domain_error);
}

TEST_CASE("log normal cdf on both sides of the asymptotic branch") {
  // 30-digit values
  CHECK(log_normal_cdf(-29.999) == doctest::Approx(-454.291211196123865).epsilon(1e-14));
  CHECK(log_normal_cdf(-30.0) == doctest::Approx(-454.321243956343197).epsilon(1e-14));
  CHECK(log_normal_cdf(-30.001) == doctest::Approx(-454.351277715458757).epsilon(1e-14));
  CHECK(log_normal_cdf(-40.0) == doctest::Approx(-804.608442013753788).epsilon(1e-14));
  CHECK(log_normal_cdf(10.0) == doctest::Approx(-7.61985301648650307e-24).epsilon(1e-12));
  CHECK(log_normal_cdf(0.0) == doctest::Approx(std::log(0.5)).epsilon(1e-15));
}

TEST_CASE("log failure resolves saturated success probabilities") {
  ProductionParams p = kReality;
  p.sigma = 0.3;
  // both succeed with probability 1 in double, yet two children fail less often
  CHECK(m1_success_prob(1, 168.0, 1.0, p) == 1.0);
  CHECK(m1_success_prob(2, 68.0, 1.0, p) == 1.0);
  CHECK(m1_log_failure_prob(2, 68.0, 1.0, p) < m1_log_failure_prob(1, 168.0, 1.0, p));
  p.sigma = 2.0;
  CHECK(std::exp(m1_log_failure_prob(3, 40.0, 6.0, p)) ==
        doctest::Approx(1.0 - m1_success_prob(3, 40.0, 6.0, p)).epsilon(1e-12));
}

TEST_CASE("M4b value is increasing in investment and decreasing in the reference") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> inv(1.0, 400.0), r(1.0, 14.0), lam(1.0, 4.0);
  for (int i = 0; i < 300; ++i) {
    const double I = inv(rng), R = r(rng), l = lam(rng);
    const double v = m4b_child_value(I, R, kBelief, l);
    CHECK(m4b_child_value(I * 1.05, R, kBelief, l) > v);
    CHECK(m4b_child_value(I, R * 1.05, kBelief, l) < v);
    CHECK(m4b_child_value(I, R, kBelief, l + 0.5) <= v);
  }
}

TEST_CASE("M2 uses the parent as every child's reference") {
  RegimeSpec r = Calibration::reality().regime(Model::M2);
  const Household h{6.0, 200.0};
  const auto plan = ChildPlan::uniform(2, 68.0);
  CHECK(analytic_expected_utility(plan, r, h) ==
        doctest::Approx(2.0 * m4b_child_value(68.0, 6.0, r.production, r.loss_aversion)));
}

TEST_CASE("unsupported combinations are rejected") {
  const Household h{6.0, 200.0};
  RegimeSpec r = Calibration::reality().regime(Model::M1);
  const ChildPlan mixed{60.0, 40.0, FamilyState{1, 1}};
  CHECK_THROWS_AS(analytic_expected_utility(mixed, r, h), ConfigError);
  r.model = Model::M4c;
  CHECK_THROWS_AS(analytic_expected_utility(mixed, r, h), ConfigError);
  r.model = Model::M4b;
  r.production.alpha2 = 0.05;
  CHECK_THROWS_AS(analytic_expected_utility(mixed, r, h), ConfigError);
  r.production.alpha2 = 0.0;
  CHECK_THROWS_AS(mc_expected_utility(ChildPlan{}, r, h, 5000, 1), ConfigError);
  CHECK_THROWS_AS(mc_expected_utility(mixed, r, h, 10, 1), std::invalid_argument);
}

TEST_CASE("Monte Carlo agrees with closed forms for every model") {
  const Household h{6.0, 200.0};
  struct Case {
    Model model;
    ChildPlan plan;
    ProductionParams p;
  };
  const Case cases[] = {
      {Model::M1, ChildPlan::uniform(2, 68.0), {1.0, 0.665, 0.0, 1.2}},
      {Model::M2, ChildPlan::uniform(3, 34.0), {1.0, 0.665, 0.0, 0.8}},
      {Model::M3, ChildPlan::uniform(4, 18.0), {1.0, 0.665, 0.0, 4.9}},
      {Model::M4b, ChildPlan{90.0, 46.0, FamilyState{1, 1}}, kBelief},
      {Model::M4c, ChildPlan{60.0, 50.0, FamilyState{1, 2}}, {1.0, 0.665, 0.05, 0.4}},
  };
  for (const auto& c : cases) {
    RegimeSpec r;
    r.model = c.model;
    r.production = c.p;
    const double exact = analytic_expected_utility(c.plan, r, h);
    const auto mc = mc_expected_utility(c.plan, r, h, 100000, 99);
    CAPTURE(to_string(c.model));
    CHECK(std::abs(mc.estimate - exact) <= 4.0 * mc.std_error);
    // same seed, same bits
    CHECK(mc_expected_utility(c.plan, r, h, 100000, 99).estimate == mc.estimate);
  }
}

TEST_CASE("shared shock panel gives common random numbers") {
  const Household h{6.0, 200.0};
  RegimeSpec r = Calibration::belief().regime(Model::M4b);
  const ShockPanel panel(17, 20000, 2);
  CHECK(panel.row(3).size() == 2);
  const auto a = mc_expected_utility(ChildPlan{70.0, 66.0, {1, 1}}, r, h, panel);
  const auto b = mc_expected_utility(ChildPlan{70.0, 66.0, {1, 1}}, r, h, panel);
  CHECK(a.estimate == b.estimate);
}

}
