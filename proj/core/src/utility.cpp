#include "dynasty/utility.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "dynasty/errors.hpp"
#include "dynasty/normal.hpp"
#include "dynasty/rng.hpp"

namespace dynasty {

bool ChildPlan::is_uniform() const {
  return state.n_sons == 0 || state.n_dtrs == 0 || invest_son == invest_dtr;
}

void ChildPlan::validate(double remaining) const {
  if (state.n_sons < 0 || state.n_dtrs < 0) throw std::domain_error("negative child count");
  if (state.n_sons > 0 && !(invest_son > 0.0)) throw std::domain_error("son investment must be positive");
  if (state.n_dtrs > 0 && !(invest_dtr > 0.0)) throw std::domain_error("daughter investment must be positive");
  const double spent = state.n_sons * invest_son + state.n_dtrs * invest_dtr;
  if (spent > remaining * (1.0 + 1e-12)) throw std::domain_error("plan exceeds remaining budget");
}

double expected_gain_loss(GainValue g, double lambda) {
  const double mu = g.mu_g;
  if (g.sigma == 0.0) return mu >= 0.0 ? mu : lambda * mu;
  const double s = g.sigma;
  return mu + (lambda - 1.0) * (mu * normal_cdf(-mu / s) - s * normal_pdf(mu / s));
}

double m1_success_prob(int n, double invest, double threshold_R, const ProductionParams& p) {
  if (!(threshold_R > 0.0)) throw std::domain_error("survival threshold must be positive");
  if (n < 1) throw std::domain_error("M1 needs at least one child");
  const double gap = std::log(threshold_R) - log_mean_hc(p, invest);
  if (p.sigma == 0.0) return gap <= 0.0 ? 1.0 : 0.0;
  // 1 - Phi^n, computed without cancellation when Phi is close to 1
  const double fail_one = normal_cdf(gap / p.sigma);
  if (fail_one <= 0.0) return 1.0;
  return -std::expm1(n * std::log(fail_one));
}

double m1_log_failure_prob(int n, double invest, double threshold_R, const ProductionParams& p) {
  if (!(threshold_R > 0.0)) throw std::domain_error("survival threshold must be positive");
  if (n < 1) throw std::domain_error("M1 needs at least one child");
  const double gap = std::log(threshold_R) - log_mean_hc(p, invest);
  if (p.sigma == 0.0) return gap <= 0.0 ? -std::numeric_limits<double>::infinity() : 0.0;
  return n * log_normal_cdf(gap / p.sigma);
}

double m3_expected_utility(int n, double invest, const ProductionParams& p) {
  return n * log_mean_hc(p, invest);
}

double m4b_child_value(double invest, double ref_R, const ProductionParams& p, double lambda) {
  if (!(ref_R > 0.0)) throw std::domain_error("reference must be positive");
  return expected_gain_loss({log_mean_hc(p, invest) - std::log(ref_R), p.sigma}, lambda);
}

double m4b_family_utility(const ChildPlan& plan, const ResolvedRefs& refs,
                          const ProductionParams& p, double lambda) {
  double total = 0.0;
  if (plan.state.n_sons > 0) {
    total += plan.state.n_sons * m4b_child_value(plan.invest_son, refs.r_son, p, lambda);
  }
  if (plan.state.n_dtrs > 0) {
    total += plan.state.n_dtrs * m4b_child_value(plan.invest_dtr, refs.r_dtr, p, lambda);
  }
  return total;
}

namespace {

void check_supported(const ChildPlan& plan, const RegimeSpec& regime) {
  switch (regime.model) {
    case Model::M1:
    case Model::M2:
    case Model::M3:
      if (!plan.is_uniform()) {
        throw ConfigError(std::string(to_string(regime.model)) +
                          " is a static model and needs uniform investment");
      }
      break;
    case Model::M4b:
      if (regime.production.alpha2 != 0.0) {
        throw ConfigError("M4b uses the log-linear technology; alpha2 must be 0 (use M4c)");
      }
      break;
    case Model::M4c:
      if (!(regime.production.alpha2 > 0.0)) {
        throw ConfigError("M4c needs alpha2 > 0");
      }
      break;
  }
}

// Uniform investment of a static plan: whichever gender is present.
double static_invest(const ChildPlan& plan) {
  return plan.state.n_sons > 0 ? plan.invest_son : plan.invest_dtr;
}

}  // namespace

double analytic_expected_utility(const ChildPlan& plan, const RegimeSpec& regime,
                                 const Household& h) {
  check_supported(plan, regime);
  const int n = plan.state.size();
  const auto& p = regime.production;
  switch (regime.model) {
    case Model::M1:
      return n == 0 ? 0.0
                    : m1_success_prob(n, static_invest(plan), regime.refs.survival_threshold(h), p);
    case Model::M2:
      return n == 0 ? 0.0
                    : n * m4b_child_value(static_invest(plan), h.hc_parent, p, regime.loss_aversion);
    case Model::M3:
      return n == 0 ? 0.0 : m3_expected_utility(n, static_invest(plan), p);
    case Model::M4b:
    case Model::M4c:
      return m4b_family_utility(plan, regime.refs.resolve(h), p, regime.loss_aversion);
  }
  return 0.0;
}

ShockPanel::ShockPanel(std::uint64_t seed, std::size_t draws, int children)
    : draws_(draws), children_(children) {
  if (children < 1) throw std::invalid_argument("shock panel needs at least one child");
  z_.resize(draws * static_cast<std::size_t>(children));
  NormalStream stream(seed);
  for (auto& z : z_) z = stream.next();
}

McEstimate mc_expected_utility(const ChildPlan& plan, const RegimeSpec& regime,
                               const Household& h, std::size_t draws, std::uint64_t seed) {
  if (draws < 1000) throw std::invalid_argument("Monte Carlo needs at least 1000 draws");
  if (plan.state.size() < 1) throw ConfigError("Monte Carlo plan has no children");
  return mc_expected_utility(plan, regime, h, ShockPanel(seed, draws, plan.state.size()));
}

McEstimate mc_expected_utility(const ChildPlan& plan, const RegimeSpec& regime,
                               const Household& h, const ShockPanel& panel) {
  check_supported(plan, regime);
  const int n = plan.state.size();
  if (n < 1) throw ConfigError("Monte Carlo plan has no children");
  if (panel.children() < n) throw std::invalid_argument("shock panel has too few children");

  const auto& p = regime.production;
  const double lambda = regime.loss_aversion;
  const double sigma = p.sigma;
  const int sons = plan.state.n_sons;
  const double mean_son = sons > 0 ? log_mean_hc(p, plan.invest_son) : 0.0;
  const double mean_dtr = plan.state.n_dtrs > 0 ? log_mean_hc(p, plan.invest_dtr) : 0.0;

  double log_ref_son = 0.0;
  double log_ref_dtr = 0.0;
  switch (regime.model) {
    case Model::M1:
      log_ref_son = log_ref_dtr = std::log(regime.refs.survival_threshold(h));
      break;
    case Model::M2:
      log_ref_son = log_ref_dtr = std::log(h.hc_parent);
      break;
    case Model::M3:
      break;
    case Model::M4b:
    case Model::M4c: {
      const auto refs = regime.refs.resolve(h);
      log_ref_son = std::log(refs.r_son);
      log_ref_dtr = std::log(refs.r_dtr);
      break;
    }
  }

  auto value = [lambda](double g) { return g >= 0.0 ? g : lambda * g; };

  // Welford running mean / variance
  double mean = 0.0;
  double m2 = 0.0;
  for (std::size_t d = 0; d < panel.draws(); ++d) {
    const auto z = panel.row(d);
    double sample = 0.0;
    if (regime.model == Model::M1) {
      bool survived = false;
      for (int i = 0; i < n && !survived; ++i) {
        const double ln_hc = (i < sons ? mean_son : mean_dtr) + sigma * z[i];
        survived = ln_hc >= (i < sons ? log_ref_son : log_ref_dtr);
      }
      sample = survived ? 1.0 : 0.0;
    } else {
      double son_sum = 0.0;
      double dtr_sum = 0.0;
      for (int i = 0; i < n; ++i) {
        const bool is_son = i < sons;
        const double ln_hc = (is_son ? mean_son : mean_dtr) + sigma * z[i];
        const double u = regime.model == Model::M3
                             ? ln_hc
                             : value(ln_hc - (is_son ? log_ref_son : log_ref_dtr));
        (is_son ? son_sum : dtr_sum) += u;
      }
      sample = son_sum + dtr_sum;
    }
    const double delta = sample - mean;
    mean += delta / static_cast<double>(d + 1);
    m2 += delta * (sample - mean);
  }
  const auto count = static_cast<double>(panel.draws());
  const double variance = panel.draws() > 1 ? m2 / (count - 1.0) : 0.0;
  return {mean, std::sqrt(variance / count)};
}

}  // namespace dynasty
