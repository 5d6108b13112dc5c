#ifndef TNB_ERROR_HPP_
#define TNB_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace tnb {

// Invalid configuration: bad dimensions, unknown keys, out-of-range values.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A persisted artifact whose dimensions disagree with what the caller expects.
class DimensionError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

// API misuse, e.g. stepping an environment whose episode already ended.
class UsageError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Numerical failure during optimization (non-finite gradients or parameters).
class TrainingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Unreadable, corrupt or version-mismatched file.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace tnb

#endif  // TNB_ERROR_HPP_
