#include "nbody/forces.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "nbody/errors.hpp"

namespace nbody {

namespace {

double distance3(std::span<const double> y, std::size_t a, std::size_t b) {
  const double dx = y[3 * a] - y[3 * b];
  const double dy = y[3 * a + 1] - y[3 * b + 1];
  const double dz = y[3 * a + 2] - y[3 * b + 2];
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

void check_layout(const ForceModel& model, std::span<const double> y) {
  if (y.size() != model.dimension())
    throw InvalidArgumentError("coordinate vector has size " +
                               std::to_string(y.size()) + ", model needs " +
                               std::to_string(model.dimension()));
}

// Pairwise accumulation shared by both gravitational kinds. The summation
// order is fixed (k ascending, then j > k) so results are reproducible.
template <typename Denominator>
std::vector<double> pair_forces(const BodySystem& sys,
                                std::span<const double> y, Denominator denom) {
  const std::size_t n = sys.size();
  std::vector<double> acc(3 * n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t j = k + 1; j < n; ++j) {
      const double d[3] = {y[3 * j] - y[3 * k], y[3 * j + 1] - y[3 * k + 1],
                           y[3 * j + 2] - y[3 * k + 2]};
      const double r = std::sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2]);
      const double w = sys.G() / denom(k, j, r);
      for (int c = 0; c < 3; ++c) {
        acc[3 * k + c] += sys.mass(j) * w * d[c];
        acc[3 * j + c] -= sys.mass(k) * w * d[c];
      }
    }
  }
  return acc;
}

std::vector<double> newtonian_flat(const ForceModel& model,
                                   std::span<const double> y) {
  const double floor = collision_floor(model, y);
  return pair_forces(model.system(), y,
                     [&](std::size_t k, std::size_t j, double r) {
                       if (r == 0.0 || r < floor) throw CollisionError(k, j, r);
                       return r * r * r;
                     });
}

std::vector<double> softened_flat(const ForceModel& model,
                                  std::span<const double> y) {
  const BodySystem& sys = model.system();
  return pair_forces(sys, y, [&](std::size_t k, std::size_t j, double r) {
    const double w = r + sys.epsilon(j, k);
    return w * w * w;
  });
}

}  // namespace

const char* to_string(ModelKind kind) noexcept {
  switch (kind) {
    case ModelKind::newtonian:
      return "newtonian";
    case ModelKind::softened:
      return "softened";
    case ModelKind::pendulum:
      return "pendulum";
  }
  return "unknown";
}

// --- BodySystem ---

BodySystem::BodySystem(std::vector<double> masses, double G)
    : masses_(std::move(masses)), G_(G) {
  if (masses_.empty()) throw InvalidArgumentError("body system has no bodies");
  if (!(G_ > 0.0) || !std::isfinite(G_))
    throw InvalidArgumentError("gravitational constant must be positive");
  for (double m : masses_)
    if (!(m > 0.0) || !std::isfinite(m))
      throw InvalidArgumentError("masses must be positive");
}

BodySystem::BodySystem(std::vector<double> masses, double G,
                       std::vector<double> softening)
    : BodySystem(std::move(masses), G) {
  const std::size_t n = masses_.size();
  if (softening.size() != n * n)
    throw InvalidArgumentError("softening matrix must be N x N");
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < n; ++k) {
      if (j == k) continue;
      const double e = softening[j * n + k];
      if (!(e > 0.0) || !std::isfinite(e))
        throw InvalidArgumentError("softening must be positive off the diagonal");
      if (e != softening[k * n + j])
        throw InvalidArgumentError("softening matrix must be symmetric");
    }
  }
  softening_ = std::move(softening);
}

BodySystem BodySystem::uniform(std::vector<double> masses, double G,
                               double epsilon) {
  const std::size_t n = masses.size();
  std::vector<double> eps(n * n, epsilon);
  for (std::size_t k = 0; k < n; ++k) eps[k * n + k] = 0.0;
  return BodySystem(std::move(masses), G, std::move(eps));
}

double BodySystem::epsilon(std::size_t j, std::size_t k) const {
  if (!softening_) return 0.0;
  return (*softening_)[j * size() + k];
}

double BodySystem::max_mass() const noexcept {
  return *std::max_element(masses_.begin(), masses_.end());
}

double BodySystem::max_inverse_epsilon_squared() const {
  if (!softening_)
    throw InvalidModelError("body system has no softening");
  double best = 0.0;
  for (std::size_t j = 0; j < size(); ++j)
    for (std::size_t k = 0; k < size(); ++k)
      if (j != k) {
        const double e = epsilon(j, k);
        best = std::max(best, 1.0 / (e * e));
      }
  return best;
}

// --- ForceModel ---

ForceModel::ForceModel(ModelKind kind, std::optional<BodySystem> system)
    : kind_(kind), system_(std::move(system)) {}

ForceModel ForceModel::newtonian(BodySystem system) {
  return ForceModel(ModelKind::newtonian, std::move(system));
}

ForceModel ForceModel::softened(BodySystem system) {
  if (!system.has_softening())
    throw InvalidModelError("softened model requires a softening matrix");
  return ForceModel(ModelKind::softened, std::move(system));
}

ForceModel ForceModel::pendulum() {
  return ForceModel(ModelKind::pendulum, std::nullopt);
}

const BodySystem& ForceModel::system() const {
  if (!system_) throw InvalidModelError("pendulum model has no body system");
  return *system_;
}

std::size_t ForceModel::bodies() const noexcept {
  return system_ ? system_->size() : 1;
}

std::size_t ForceModel::dimension() const noexcept {
  return system_ ? 3 * system_->size() : 1;
}

ForceModel ForceModel::with_length_scale(double length) const {
  ForceModel copy = *this;
  copy.length_scale_ = length;
  return copy;
}

std::vector<double> ForceModel::accel(std::span<const double> y) const {
  check_layout(*this, y);
  switch (kind_) {
    case ModelKind::newtonian:
      return newtonian_flat(*this, y);
    case ModelKind::softened:
      return softened_flat(*this, y);
    case ModelKind::pendulum:
      return {pendulum_accel(y[0])};
  }
  return {};
}

// --- State helpers ---

Vec3 State::position(std::size_t body) const {
  return {y[3 * body], y[3 * body + 1], y[3 * body + 2]};
}

Vec3 State::velocity(std::size_t body) const {
  return {v[3 * body], v[3 * body + 1], v[3 * body + 2]};
}

std::vector<double> flatten(std::span<const Vec3> v) {
  std::vector<double> out;
  out.reserve(3 * v.size());
  for (const Vec3& p : v) out.insert(out.end(), p.begin(), p.end());
  return out;
}

std::vector<Vec3> unflatten(std::span<const double> y) {
  std::vector<Vec3> out(y.size() / 3);
  for (std::size_t k = 0; k < out.size(); ++k)
    out[k] = {y[3 * k], y[3 * k + 1], y[3 * k + 2]};
  return out;
}

State make_state(double t, std::span<const Vec3> positions,
                 std::span<const Vec3> velocities) {
  if (positions.size() != velocities.size())
    throw InvalidArgumentError("positions and velocities differ in length");
  return State{t, flatten(positions), flatten(velocities)};
}

VectorField as_field(const ForceModel& model) {
  return [model](std::span<const double> y) { return model.accel(y); };
}

// --- Operations ---

std::vector<Vec3> newtonian_accel(const ForceModel& model,
                                  std::span<const Vec3> positions) {
  if (model.kind() != ModelKind::newtonian)
    throw InvalidModelError("newtonian_accel needs a newtonian model");
  return unflatten(model.accel(flatten(positions)));
}

std::vector<Vec3> softened_accel(const ForceModel& model,
                                 std::span<const Vec3> positions) {
  if (model.kind() != ModelKind::softened)
    throw InvalidModelError("softened_accel needs a softened model");
  return unflatten(model.accel(flatten(positions)));
}

double accel_bound(const ForceModel& model) {
  if (model.kind() != ModelKind::softened)
    throw InvalidModelError("accel_bound needs a softened model");
  const BodySystem& sys = model.system();
  return static_cast<double>(sys.size()) * sys.G() * sys.max_mass() *
         sys.max_inverse_epsilon_squared();
}

double pendulum_accel(double angle) noexcept { return -std::sin(angle); }

double softened_pair_potential(double G, double mj, double mk, double r,
                               double eps) noexcept {
  const double w = r + eps;
  return -G * mj * mk * (1.0 / w - eps / (2.0 * w * w));
}

double total_energy(const ForceModel& model, const State& state) {
  check_layout(model, state.y);
  if (model.kind() == ModelKind::pendulum)
    return 0.5 * state.v[0] * state.v[0] - std::cos(state.y[0]);

  const BodySystem& sys = model.system();
  const std::size_t n = sys.size();
  double kinetic = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    double v2 = 0.0;
    for (int c = 0; c < 3; ++c) v2 += state.v[3 * k + c] * state.v[3 * k + c];
    kinetic += 0.5 * sys.mass(k) * v2;
  }
  const double floor = collision_floor(model, state.y);
  double potential = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t j = k + 1; j < n; ++j) {
      const double r = distance3(state.y, j, k);
      if (model.kind() == ModelKind::newtonian) {
        if (r == 0.0 || r < floor) throw CollisionError(k, j, r);
        potential -= sys.G() * sys.mass(j) * sys.mass(k) / r;
      } else {
        potential += softened_pair_potential(sys.G(), sys.mass(j), sys.mass(k),
                                             r, sys.epsilon(j, k));
      }
    }
  }
  return kinetic + potential;
}

double max_pairwise_distance(std::span<const double> y) {
  const std::size_t n = y.size() / 3;
  double best = 0.0;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t j = k + 1; j < n; ++j)
      best = std::max(best, distance3(y, j, k));
  return best;
}

double min_pairwise_distance(std::span<const double> y) {
  const std::size_t n = y.size() / 3;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t j = k + 1; j < n; ++j)
      best = std::min(best, distance3(y, j, k));
  return best;
}

double collision_floor(const ForceModel& model, std::span<const double> y) {
  const double length = model.length_scale() > 0.0 ? model.length_scale()
                                                   : max_pairwise_distance(y);
  return kCollisionFloorScale * length;
}

double Matrix::max_abs() const noexcept {
  double m = 0.0;
  for (double x : data) m = std::max(m, std::abs(x));
  return m;
}

double default_fd_step(std::span<const double> y) noexcept {
  double norm = 0.0;
  for (double x : y) norm = std::max(norm, std::abs(x));
  return 1e-5 * (1.0 + norm);
}

Matrix jacobian_fd(const VectorField& f, std::span<const double> y, double h) {
  if (!(h > 0.0)) throw InvalidArgumentError("finite-difference step must be positive");
  const std::size_t n = y.size();
  std::vector<double> probe(y.begin(), y.end());
  Matrix jac;
  for (std::size_t k = 0; k < n; ++k) {
    probe[k] = y[k] + h;
    const std::vector<double> plus = f(probe);
    probe[k] = y[k] - h;
    const std::vector<double> minus = f(probe);
    probe[k] = y[k];
    if (k == 0) jac = Matrix(plus.size(), n);
    for (std::size_t j = 0; j < plus.size(); ++j)
      jac(j, k) = (plus[j] - minus[j]) / (2.0 * h);
  }
  return jac;
}

Matrix jacobian_fd(const ForceModel& model, std::span<const double> y,
                   std::optional<double> h) {
  check_layout(model, y);
  return jacobian_fd(as_field(model), y, h.value_or(default_fd_step(y)));
}

}  // namespace nbody
