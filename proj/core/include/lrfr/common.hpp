#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace lrfr {

inline constexpr const char* kVersion = "0.1.0";

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Bad inputs or inconsistent dimensions; the caller can fix and retry.
class validation_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Numerical failure inside a solver or generator.
class numeric_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Filesystem or parsing failure.
class io_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Derives an independent generator seed for a named substream of `seed`.
/// Substream ids are fixed small counters (0 = covariates, 1 = errors,
/// 2 = folds, ...); the mix is splitmix64 applied to seed + id so streams
/// with adjacent base seeds do not collide.
std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t component);

}  // namespace lrfr
