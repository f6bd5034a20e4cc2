#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace dynasty {

std::uint64_t splitmix64(std::uint64_t x);

std::uint64_t fnv1a64(std::string_view s);

// Seed for one grid cell: splitmix64 chained over (master, fnv1a64(id), row, col).
// Depends only on its arguments, so cells can be evaluated in any order.
std::uint64_t cell_seed(std::uint64_t master, std::string_view scenario_id,
                        std::uint64_t row, std::uint64_t col);

// Standard normal variates from mt19937_64 via Box-Muller. Unlike
// std::normal_distribution the output sequence is fixed by the algorithm here,
// not by the standard library vendor.
class NormalStream {
 public:
  explicit NormalStream(std::uint64_t seed) : engine_(seed) {}

  double next();

 private:
  double uniform_open();  // (0, 1]

  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace dynasty
