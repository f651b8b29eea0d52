#pragma once

// Taylor-series integration of y'' = f(y).
//
// taylor_coefficients builds, for every coordinate, the series
//   y_i(t0 + dt) = sum_k c_{i,k} dt^k,  c_{i,k} = y_i^(k)(t0) / k!
// by evaluating f on truncated series one order at a time. integrate
// chains such expansions into a piecewise-analytic Trajectory.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "nbody/forces.hpp"
#include "nbody/series.hpp"

namespace nbody {

/// Taylor expansion of the solution about t0.
struct SeriesState {
  double t0 = 0.0;
  /// Side of t0 the expansion is valid on. It only matters for a softened
  /// model with coincident bodies at t0, where the pair distance behaves
  /// like |t - t0| and the two one-sided expansions differ.
  int direction = +1;
  std::vector<PowerSeries> coords;

  std::size_t order() const { return coords.front().order(); }
  std::size_t dimension() const noexcept { return coords.size(); }
};

/// Throws CollisionError (newtonian kind, a pair closer than the collision
/// floor) and InvalidArgumentError for order < 2 or mismatched sizes.
SeriesState taylor_coefficients(const ForceModel& model,
                                std::span<const double> y0,
                                std::span<const double> v0, std::size_t order,
                                int direction = +1, double t0 = 0.0);

struct RadiusEstimate {
  double b = 0.0;
  /// Bound on |f| over the ball of radius b about y0.
  double M = 0.0;
  /// sqrt(2b/M); +infinity when M = 0.
  double radius = 0.0;
};

/// Guaranteed existence radius of the analytic solution about y0.
/// Throws InvalidRadiusParameterError for b <= 0, and for the newtonian kind
/// when b >= half the smallest pairwise distance.
RadiusEstimate radius_estimate(const ForceModel& model,
                               std::span<const double> y0, double b);

/// b used when none is configured: a quarter of the smallest pairwise
/// distance (newtonian), the characteristic length (softened, falling back
/// to 1 for coincident bodies), or 1 (pendulum).
double default_radius_parameter(const ForceModel& model,
                                std::span<const double> y0);

inline constexpr double kStepSafety = 0.8;

/// min(0.8 * radius_cap, (tol / A)^(1/K)) where A is the largest of the two
/// top coefficients over all coordinates.
double step_size(const SeriesState& series, double tol, double radius_cap);

struct TrajectorySegment {
  SeriesState series;
  /// Step length, >= 0. The segment covers t0 .. t0 + direction * h.
  double h = 0.0;
  /// t0 + direction * h, stored so the last segment ends exactly on the
  /// requested time.
  double t_stop = 0.0;

  int direction() const noexcept { return series.direction; }
  double t_begin() const noexcept { return series.t0; }
  double t_end() const noexcept { return t_stop; }
};

class Trajectory {
 public:
  Trajectory(ForceModel model, std::vector<TrajectorySegment> segments);

  const ForceModel& model() const noexcept { return model_; }
  const std::vector<TrajectorySegment>& segments() const noexcept {
    return segments_;
  }
  double t_start() const noexcept { return segments_.front().t_begin(); }
  double t_end() const noexcept { return segments_.back().t_end(); }
  int direction() const noexcept { return segments_.front().direction(); }

  /// Index of the segment covering t (the later one at a joint).
  std::size_t locate(double t) const;

 private:
  ForceModel model_;
  std::vector<TrajectorySegment> segments_;
};

struct IntegrationOptions {
  double tol = 1e-10;
  std::size_t order = 20;
  /// Radius parameter; when absent or invalid at a step, the default for
  /// that step is used.
  std::optional<double> b;
  std::size_t max_steps = 2'000'000;
};

/// Integrates from initial.t to t_end (either direction). Each step is
/// step_size(), further limited so the velocity series' own tail term stays
/// under tol and, for gravity, to half the time any pair needs to close its
/// separation at the current relative speed. For the newtonian
/// kind a CollisionError carrying the detection time is thrown when a pair
/// distance falls under the collision floor at an expansion point, step
/// midpoint or step end.
Trajectory integrate(const ForceModel& model, const State& initial,
                     double t_end, const IntegrationOptions& options = {});

/// Positions and velocities at t. Throws OutOfRangeError outside the span.
State dense_eval(const Trajectory& traj, double t);

/// Evaluates one expansion at offset dt = t - t0.
State eval_series(const SeriesState& series, double dt);

}  // namespace nbody
