#include "nbody/errors.hpp"

#include <sstream>

namespace nbody {

namespace {

std::string collision_message(std::size_t a, std::size_t b, double distance,
                              const std::optional<double>& time) {
  std::ostringstream os;
  os.precision(17);
  os << "collision between bodies " << a + 1 << " and " << b + 1
     << " (distance " << distance << ")";
  if (time) os << " at t=" << *time;
  return os.str();
}

}  // namespace

OrderMismatchError::OrderMismatchError(std::size_t lhs, std::size_t rhs)
    : Error("truncation order mismatch: " + std::to_string(lhs) + " vs " +
            std::to_string(rhs)) {}

CollisionError::CollisionError(std::size_t body_a, std::size_t body_b,
                               double distance, std::optional<double> time)
    : NearSingularSeriesError(
          collision_message(body_a, body_b, distance, time)),
      body_a_(body_a),
      body_b_(body_b),
      distance_(distance),
      time_(time) {}

CollisionError CollisionError::at_time(double t) const {
  return CollisionError(body_a_, body_b_, distance_, t);
}

}  // namespace nbody
