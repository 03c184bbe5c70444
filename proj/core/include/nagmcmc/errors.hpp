#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace nagmcmc {

// Shape/size violations: empty matrix, mismatched vector lengths, ...
struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Numeric failures: Cholesky pivot breakdown, power-iteration stall, ...
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NotPositiveDefinite : NumericError {
  using NumericError::NumericError;
};

// Raised by precompute() when the channel Gram matrix cannot be factorized.
struct SingularChannel : NumericError {
  using NumericError::NumericError;
};

struct UnsupportedModulation : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct NotAConstellationPoint : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct SearchSpaceTooLarge : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct EmptySampleList : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct UnknownAlgorithm : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Config validation failure; carries every violated constraint.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> violations)
      : std::runtime_error(join(violations)), violations_(std::move(violations)) {}
  explicit ConfigError(const std::string& violation)
      : ConfigError(std::vector<std::string>{violation}) {}

  const std::vector<std::string>& violations() const { return violations_; }

 private:
  static std::string join(const std::vector<std::string>& v) {
    std::string out = "invalid configuration:";
    for (const auto& s : v) {
      out += "\n  - ";
      out += s;
    }
    return out;
  }
  std::vector<std::string> violations_;
};

}  // namespace nagmcmc
