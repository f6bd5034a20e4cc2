#include "dynasty/rng.hpp"

#include <cmath>
#include <numbers>

namespace dynasty {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

std::uint64_t cell_seed(std::uint64_t master, std::string_view scenario_id, std::uint64_t row,
                        std::uint64_t col) {
  std::uint64_t h = splitmix64(master);
  h = splitmix64(h ^ fnv1a64(scenario_id));
  h = splitmix64(h ^ row);
  return splitmix64(h ^ (col + 0x632BE59BD9B4E019ULL));
}

double NormalStream::uniform_open() {
  // 53 random mantissa bits mapped to (0, 1]
  return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
}

double NormalStream::next() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double r = std::sqrt(-2.0 * std::log(uniform_open()));
  const double theta = 2.0 * std::numbers::pi * uniform_open();
  spare_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

}  // namespace dynasty
