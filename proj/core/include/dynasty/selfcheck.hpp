#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "dynasty/model.hpp"

namespace dynasty {

struct CheckFailure {
  std::string what;
};

struct CheckReport {
  std::string name;
  int cases = 0;
  double worst = 0.0;  // largest error in the suite's own units
  std::vector<CheckFailure> failures;

  bool passed() const { return failures.empty() && cases > 0; }
};

// Closed form vs Monte Carlo for one model at `points` random parameter
// points; a point passes when |analytic - mc| <= z_bound * s.e. `worst` is
// the largest |analytic - mc| / s.e.
CheckReport check_analytic_vs_mc(Model model, std::uint64_t seed, int points, std::size_t draws,
                                 double z_bound = 4.0);

// solve_dp root value vs enumerate_policies_oracle at `draws` random
// households and regimes (n_max 1..4, possibly unequal costs). `worst` is the
// largest relative difference.
CheckReport check_dp_vs_enumeration(std::uint64_t seed, int draws, double rel_tol = 1e-9);

}  // namespace dynasty
