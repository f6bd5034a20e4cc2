#pragma once

#include <stdexcept>
#include <string>

namespace dynasty {

// Bad user-supplied configuration: unknown key, malformed value, unsupported
// model/plan combination. The CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The household cannot afford the requested family state.
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace dynasty
