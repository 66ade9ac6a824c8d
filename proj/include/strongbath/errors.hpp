#pragma once

#include <stdexcept>
#include <string>

namespace strongbath {

struct NotHermitian : std::runtime_error {
  explicit NotHermitian(const std::string& what) : std::runtime_error(what) {}
};

struct DimensionMismatch : std::runtime_error {
  explicit DimensionMismatch(const std::string& what) : std::runtime_error(what) {}
};

struct NegativeFrequency : std::runtime_error {
  explicit NegativeFrequency(const std::string& what) : std::runtime_error(what) {}
};

struct QuadratureNotConverged : std::runtime_error {
  explicit QuadratureNotConverged(const std::string& what) : std::runtime_error(what) {}
};

struct DiscretizationNotConverged : std::runtime_error {
  explicit DiscretizationNotConverged(const std::string& what) : std::runtime_error(what) {}
};

struct TruncationTooSmall : std::runtime_error {
  explicit TruncationTooSmall(const std::string& what) : std::runtime_error(what) {}
};

struct StepRejected : std::runtime_error {
  explicit StepRejected(const std::string& what) : std::runtime_error(what) {}
};

struct NoConvergence : std::runtime_error {
  explicit NoConvergence(const std::string& what) : std::runtime_error(what) {}
};

struct NoPeak : std::runtime_error {
  explicit NoPeak(const std::string& what) : std::runtime_error(what) {}
};

struct IndexOutOfRange : std::out_of_range {
  explicit IndexOutOfRange(const std::string& what) : std::out_of_range(what) {}
};

struct ConfigInvalid : std::runtime_error {
  explicit ConfigInvalid(const std::string& what) : std::runtime_error(what) {}
};

struct ColumnMissing : std::runtime_error {
  explicit ColumnMissing(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace strongbath
