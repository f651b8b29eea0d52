#pragma once

// Numerical checks of time-reversal symmetry of solutions and of parity of
// multivariate functions.
//
// Even solutions: zero initial velocity gives y(t0 + tau) = y(t0 - tau) and
// vanishing odd Taylor coefficients. Odd solutions: zero initial position
// with an odd force gives y(t0 + tau) = -y(t0 - tau) and vanishing even
// coefficients.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>

#include "nbody/forces.hpp"
#include "nbody/taylor.hpp"

namespace nbody {

enum class SymmetryKind { even, odd };
const char* to_string(SymmetryKind kind) noexcept;

struct SymmetryReport {
  SymmetryKind kind = SymmetryKind::even;
  /// Largest normalized coefficient that should vanish.
  double coeff_defect = 0.0;
  /// Largest normalized position mirror residual over the sample grid.
  double mirror_defect = 0.0;
  /// Same residual for velocities (mirror sign flipped w.r.t. positions).
  double velocity_defect = 0.0;
  /// Same residual for accelerations f(y).
  double accel_defect = 0.0;
  std::size_t samples = 0;
  double span = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

inline constexpr std::size_t kMirrorSamples = 32;

/// max over odd m (SymmetryKind::even) or even m (SymmetryKind::odd) of
/// |c_{i,m}| / (1 + max |c|).
double coefficient_defect(const SeriesState& series, SymmetryKind kind);

/// Samples tau = span * i / samples, i = 1..samples, and compares
/// `forward` at t0 + tau with `backward` at t0 - tau. Positions, velocities
/// and accelerations go into the matching report fields; coeff_defect,
/// tolerance and passed are left for the caller.
SymmetryReport mirror_residuals(const Trajectory& forward,
                                const Trajectory& backward, SymmetryKind kind,
                                double span,
                                std::size_t samples = kMirrorSamples);

struct VerifyOptions {
  /// Integrator tolerance; the pass threshold is the `tol` argument.
  double step_tol = 1e-12;
  std::size_t samples = kMirrorSamples;
};

/// Expands and integrates from `initial` to t0 + T and t0 - T and fills a
/// report for the given mirror kind. The start state is used as is, so a
/// state outside the mirror relation simply fails.
SymmetryReport verify_symmetry(const ForceModel& model, const State& initial,
                               SymmetryKind kind, double T, double tol,
                               std::size_t order,
                               const VerifyOptions& options = {});

/// Zero-velocity run from y0 over [-T, T]. Propagates CollisionError.
SymmetryReport verify_even(const ForceModel& model, std::span<const double> y0,
                           double T, double tol, std::size_t order,
                           const VerifyOptions& options = {});

/// Zero-position run with velocities eta over [-T, T]. Softened model only;
/// InvalidModelError otherwise.
SymmetryReport verify_odd(const ForceModel& model, std::span<const double> eta,
                          double T, double tol, std::size_t order,
                          const VerifyOptions& options = {});

enum class Parity { even, odd, neither };
const char* to_string(Parity parity) noexcept;

struct ParityVerdict {
  Parity vector_sense = Parity::neither;
  Parity strict_sense = Parity::neither;
  double vector_even_defect = 0.0;  // max |H(-y) - H(y)|
  double vector_odd_defect = 0.0;   // max |H(-y) + H(y)|
  double strict_even_defect = 0.0;  // max over j |H(flip_j y) - H(y)|
  double strict_odd_defect = 0.0;   // max over j |H(flip_j y) + H(y)|
  double threshold = 0.0;
};

using ScalarField = std::function<double(std::span<const double>)>;

inline constexpr double kParityThresholdScale = 1e-10;

/// Classifies H by sampling y uniformly in [-box, box]^dim. A zero function
/// is reported as even. Throws EvaluationError on a non-finite value.
ParityVerdict parity_probe(const ScalarField& H, std::size_t dim,
                           std::size_t samples, double box,
                           std::uint64_t seed = 0);

/// max over samples of max_jk |J(y) - J(-y)| / (1 + |J(y)|_inf), J from
/// jacobian_fd. Samples where f throws CollisionError are redrawn.
double jacobian_parity_check(const VectorField& f, std::size_t dim, std::size_t samples,
                    double box, std::uint64_t seed = 0);
double jacobian_parity_check(const ForceModel& model, std::size_t samples, double box,
                    std::uint64_t seed = 0);

}  // namespace nbody
