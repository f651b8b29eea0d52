#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace nbody {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Two series of different truncation order were combined.
class OrderMismatchError : public Error {
 public:
  OrderMismatchError(std::size_t lhs, std::size_t rhs);
};

/// Reciprocal or square root of a series whose leading coefficient is
/// (relatively) zero.
class NearSingularSeriesError : public Error {
 public:
  using Error::Error;
};

/// Two bodies of an unsoftened model came closer than the collision floor.
/// Body indices are zero-based.
class CollisionError : public NearSingularSeriesError {
 public:
  CollisionError(std::size_t body_a, std::size_t body_b, double distance,
                 std::optional<double> time = std::nullopt);

  std::size_t body_a() const noexcept { return body_a_; }
  std::size_t body_b() const noexcept { return body_b_; }
  double distance() const noexcept { return distance_; }
  const std::optional<double>& time() const noexcept { return time_; }

  /// Same collision, stamped with the time at which it was detected.
  CollisionError at_time(double t) const;

 private:
  std::size_t body_a_;
  std::size_t body_b_;
  double distance_;
  std::optional<double> time_;
};

class InvalidRadiusParameterError : public Error {
 public:
  using Error::Error;
};

class OutOfRangeError : public Error {
 public:
  using Error::Error;
};

/// The operation is not defined for the model kind it was given.
class InvalidModelError : public Error {
 public:
  using Error::Error;
};

/// A probed function returned a non-finite value.
class EvaluationError : public Error {
 public:
  using Error::Error;
};

class InvalidArgumentError : public Error {
 public:
  using Error::Error;
};

}  // namespace nbody
