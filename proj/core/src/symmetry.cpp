#include "nbody/symmetry.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "nbody/errors.hpp"

namespace nbody {

namespace {

double inf_norm(std::span<const double> x) {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  return m;
}

// |a - sign * b|_inf / (1 + |a|_inf)
double residual(std::span<const double> a, std::span<const double> b,
                double sign) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    m = std::max(m, std::abs(a[i] - sign * b[i]));
  return m / (1.0 + inf_norm(a));
}

}  // namespace

const char* to_string(SymmetryKind kind) noexcept {
  return kind == SymmetryKind::even ? "even" : "odd";
}

const char* to_string(Parity parity) noexcept {
  switch (parity) {
    case Parity::even:
      return "even";
    case Parity::odd:
      return "odd";
    case Parity::neither:
      return "neither";
  }
  return "neither";
}

double coefficient_defect(const SeriesState& series, SymmetryKind kind) {
  double scale = 0.0;
  for (const PowerSeries& c : series.coords) scale = std::max(scale, c.max_abs());
  const std::size_t first = kind == SymmetryKind::even ? 1 : 0;
  double worst = 0.0;
  for (const PowerSeries& c : series.coords)
    for (std::size_t m = first; m <= c.order(); m += 2)
      worst = std::max(worst, std::abs(c[m]));
  return worst / (1.0 + scale);
}

SymmetryReport mirror_residuals(const Trajectory& forward,
                                const Trajectory& backward, SymmetryKind kind,
                                double span, std::size_t samples) {
  if (samples == 0) throw InvalidArgumentError("need at least one sample");
  const double t0 = forward.t_start();
  // even: y(+) = y(-), y'(+) = -y'(-), f(+) = f(-)
  // odd:  y(+) = -y(-), y'(+) = y'(-), f(+) = -f(-)
  const double pos_sign = kind == SymmetryKind::even ? 1.0 : -1.0;
  const ForceModel& model = forward.model();

  SymmetryReport report;
  report.kind = kind;
  report.samples = samples;
  report.span = span;
  for (std::size_t i = 1; i <= samples; ++i) {
    const double tau = span * static_cast<double>(i) / static_cast<double>(samples);
    const State plus = dense_eval(forward, t0 + tau);
    const State minus = dense_eval(backward, t0 - tau);
    report.mirror_defect =
        std::max(report.mirror_defect, residual(plus.y, minus.y, pos_sign));
    report.velocity_defect =
        std::max(report.velocity_defect, residual(plus.v, minus.v, -pos_sign));
    report.accel_defect =
        std::max(report.accel_defect, residual(model.accel(plus.y),
                                               model.accel(minus.y), pos_sign));
  }
  return report;
}

SymmetryReport verify_symmetry(const ForceModel& model, const State& initial,
                               SymmetryKind kind, double T, double tol,
                               std::size_t order, const VerifyOptions& options) {
  if (!(T > 0.0)) throw InvalidArgumentError("mirror span must be positive");
  if (!(tol > 0.0)) throw InvalidArgumentError("tolerance must be positive");

  const SeriesState series =
      taylor_coefficients(model, initial.y, initial.v, order, +1, initial.t);

  IntegrationOptions io;
  io.tol = options.step_tol;
  io.order = order;
  const Trajectory forward = integrate(model, initial, initial.t + T, io);
  const Trajectory backward = integrate(model, initial, initial.t - T, io);

  SymmetryReport report =
      mirror_residuals(forward, backward, kind, T, options.samples);
  report.coeff_defect = coefficient_defect(series, kind);
  report.tolerance = tol;
  report.passed = report.coeff_defect <= tol && report.mirror_defect <= tol;
  return report;
}

SymmetryReport verify_even(const ForceModel& model, std::span<const double> y0,
                           double T, double tol, std::size_t order,
                           const VerifyOptions& options) {
  State initial{0.0, std::vector<double>(y0.begin(), y0.end()),
                std::vector<double>(y0.size(), 0.0)};
  return verify_symmetry(model, initial, SymmetryKind::even, T, tol, order, options);
}

SymmetryReport verify_odd(const ForceModel& model, std::span<const double> eta,
                          double T, double tol, std::size_t order,
                          const VerifyOptions& options) {
  if (model.kind() != ModelKind::softened)
    throw InvalidModelError(
        "odd solutions start with every body at the origin; only the "
        "softened model is defined there");
  State initial{0.0, std::vector<double>(eta.size(), 0.0),
                std::vector<double>(eta.begin(), eta.end())};
  return verify_symmetry(model, initial, SymmetryKind::odd, T, tol, order, options);
}

ParityVerdict parity_probe(const ScalarField& H, std::size_t dim,
                           std::size_t samples, double box,
                           std::uint64_t seed) {
  if (dim == 0 || samples == 0)
    throw InvalidArgumentError("parity probe needs dim > 0 and samples > 0");
  if (!(box > 0.0)) throw InvalidArgumentError("sampling box must be positive");

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-box, box);
  auto eval = [&](std::span<const double> y) {
    const double v = H(y);
    if (!std::isfinite(v)) throw EvaluationError("probed function is not finite");
    return v;
  };

  ParityVerdict verdict;
  double max_h = 0.0;
  std::vector<double> y(dim), flipped(dim);
  for (std::size_t s = 0; s < samples; ++s) {
    for (double& x : y) x = uni(rng);
    const double h = eval(y);
    for (std::size_t i = 0; i < dim; ++i) flipped[i] = -y[i];
    const double h_neg = eval(flipped);
    max_h = std::max({max_h, std::abs(h), std::abs(h_neg)});
    verdict.vector_even_defect =
        std::max(verdict.vector_even_defect, std::abs(h_neg - h));
    verdict.vector_odd_defect =
        std::max(verdict.vector_odd_defect, std::abs(h_neg + h));
    for (std::size_t j = 0; j < dim; ++j) {
      std::copy(y.begin(), y.end(), flipped.begin());
      flipped[j] = -flipped[j];
      const double h_j = eval(flipped);
      max_h = std::max(max_h, std::abs(h_j));
      verdict.strict_even_defect =
          std::max(verdict.strict_even_defect, std::abs(h_j - h));
      verdict.strict_odd_defect =
          std::max(verdict.strict_odd_defect, std::abs(h_j + h));
    }
  }

  verdict.threshold = kParityThresholdScale * (1.0 + max_h);
  auto classify = [&](double even_defect, double odd_defect) {
    if (even_defect <= verdict.threshold) return Parity::even;
    if (odd_defect <= verdict.threshold) return Parity::odd;
    return Parity::neither;
  };
  verdict.vector_sense =
      classify(verdict.vector_even_defect, verdict.vector_odd_defect);
  verdict.strict_sense =
      classify(verdict.strict_even_defect, verdict.strict_odd_defect);
  return verdict;
}

double jacobian_parity_check(const VectorField& f, std::size_t dim, std::size_t samples,
                    double box, std::uint64_t seed) {
  if (dim == 0 || samples == 0)
    throw InvalidArgumentError("parity check needs dim > 0 and samples > 0");
  if (!(box > 0.0)) throw InvalidArgumentError("sampling box must be positive");

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-box, box);
  std::vector<double> y(dim), neg(dim);
  const std::size_t max_draws = 1000 * samples;

  double worst = 0.0;
  std::size_t accepted = 0;
  for (std::size_t draws = 0; accepted < samples; ++draws) {
    if (draws >= max_draws)
      throw Error("parity check could not draw collision-free samples");
    for (double& x : y) x = uni(rng);
    for (std::size_t i = 0; i < dim; ++i) neg[i] = -y[i];
    const double h = default_fd_step(y);
    Matrix jp, jm;
    try {
      jp = jacobian_fd(f, y, h);
      jm = jacobian_fd(f, neg, h);
    } catch (const CollisionError&) {
      continue;
    }
    double diff = 0.0;
    for (std::size_t i = 0; i < jp.data.size(); ++i)
      diff = std::max(diff, std::abs(jp.data[i] - jm.data[i]));
    worst = std::max(worst, diff / (1.0 + jp.max_abs()));
    ++accepted;
  }
  return worst;
}

double jacobian_parity_check(const ForceModel& model, std::size_t samples, double box,
                    std::uint64_t seed) {
  return jacobian_parity_check(as_field(model), model.dimension(), samples, box, seed);
}

}  // namespace nbody
