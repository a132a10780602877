#pragma once

#include <stdexcept>

namespace clusterbandit {

// Bad experiment, policy or instance configuration. The message names the field.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace clusterbandit
