#ifndef SENSESHIFT_ERRORS_H_
#define SENSESHIFT_ERRORS_H_

#include <stdexcept>
#include <string>

namespace senseshift {

// Bad flags, infeasible settings, missing files.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Malformed input data (bad encoding, layout mismatch).
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

// Internal bookkeeping went wrong. Never expected on valid input.
class InvariantViolation : public std::logic_error {
 public:
  explicit InvariantViolation(const std::string& what)
      : std::logic_error(what) {}
};

}  // namespace senseshift

#endif  // SENSESHIFT_ERRORS_H_
