#pragma once

// Classical fourth-order Runge-Kutta with one Richardson step-halving
// correction. Test-only oracle for the Taylor integrator.

#include <cmath>
#include <cstddef>
#include <vector>

#include "nbody/forces.hpp"

namespace nbody::testing {

struct Phase {
  std::vector<double> y;
  std::vector<double> v;
};

inline Phase rk4_fixed(const ForceModel& model, Phase s, double t_span,
                       std::size_t steps) {
  const double h = t_span / static_cast<double>(steps);
  const std::size_t n = s.y.size();
  std::vector<double> tmp(n);
  for (std::size_t step = 0; step < steps; ++step) {
    const std::vector<double> a1 = model.accel(s.y);
    const std::vector<double>& v1 = s.v;

    for (std::size_t i = 0; i < n; ++i) tmp[i] = s.y[i] + 0.5 * h * v1[i];
    std::vector<double> v2(n);
    for (std::size_t i = 0; i < n; ++i) v2[i] = s.v[i] + 0.5 * h * a1[i];
    const std::vector<double> a2 = model.accel(tmp);

    for (std::size_t i = 0; i < n; ++i) tmp[i] = s.y[i] + 0.5 * h * v2[i];
    std::vector<double> v3(n);
    for (std::size_t i = 0; i < n; ++i) v3[i] = s.v[i] + 0.5 * h * a2[i];
    const std::vector<double> a3 = model.accel(tmp);

    for (std::size_t i = 0; i < n; ++i) tmp[i] = s.y[i] + h * v3[i];
    std::vector<double> v4(n);
    for (std::size_t i = 0; i < n; ++i) v4[i] = s.v[i] + h * a3[i];
    const std::vector<double> a4 = model.accel(tmp);

    for (std::size_t i = 0; i < n; ++i) {
      s.y[i] += h / 6.0 * (v1[i] + 2.0 * v2[i] + 2.0 * v3[i] + v4[i]);
      s.v[i] += h / 6.0 * (a1[i] + 2.0 * a2[i] + 2.0 * a3[i] + a4[i]);
    }
  }
  return s;
}

/// (16 y_{h/2} - y_h) / 15 with `steps` coarse steps.
inline Phase rk4_richardson(const ForceModel& model, const Phase& s,
                            double t_span, std::size_t steps) {
  const Phase coarse = rk4_fixed(model, s, t_span, steps);
  const Phase fine = rk4_fixed(model, s, t_span, 2 * steps);
  Phase out = fine;
  for (std::size_t i = 0; i < s.y.size(); ++i) {
    out.y[i] = (16.0 * fine.y[i] - coarse.y[i]) / 15.0;
    out.v[i] = (16.0 * fine.v[i] - coarse.v[i]) / 15.0;
  }
  return out;
}

/// Radial free fall of two bodies from rest at separation r0 with
/// mu = G (m1 + m2): r = r0 cos^2(beta), t = sqrt(r0^3 / (2 mu)) (beta +
/// sin(beta) cos(beta)). Solved for r by bisection on beta.
inline double free_fall_separation(double r0, double mu, double t) {
  const double scale = std::sqrt(r0 * r0 * r0 / (2.0 * mu));
  double lo = 0.0, hi = 0.5 * M_PI;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double tm = scale * (mid + std::sin(mid) * std::cos(mid));
    (tm < t ? lo : hi) = mid;
  }
  const double beta = 0.5 * (lo + hi);
  return r0 * std::cos(beta) * std::cos(beta);
}

inline double free_fall_time(double r0, double mu) {
  return 0.5 * M_PI * std::sqrt(r0 * r0 * r0 / (2.0 * mu));
}

}  // namespace nbody::testing
