#pragma once

// Force models for y'' = f(y).
//
// Gravitational models use a flat coordinate layout: y[3k + c] is
// coordinate c of body k, so the model dimension is n = 3N. The pendulum
// has n = 1.

#include <array>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace nbody {

using Vec3 = std::array<double, 3>;

enum class ModelKind { newtonian, softened, pendulum };

const char* to_string(ModelKind kind) noexcept;

/// Masses, gravitational constant and optional pair softening.
class BodySystem {
 public:
  /// Throws InvalidArgumentError unless every mass and G are positive.
  BodySystem(std::vector<double> masses, double G);
  /// Softening as a row-major N*N matrix; the diagonal is ignored and the
  /// off-diagonal must be symmetric and positive.
  BodySystem(std::vector<double> masses, double G,
             std::vector<double> softening);
  /// Same epsilon for every pair.
  static BodySystem uniform(std::vector<double> masses, double G,
                            double epsilon);

  std::size_t size() const noexcept { return masses_.size(); }
  double G() const noexcept { return G_; }
  std::span<const double> masses() const noexcept { return masses_; }
  double mass(std::size_t k) const { return masses_[k]; }
  bool has_softening() const noexcept { return softening_.has_value(); }
  double epsilon(std::size_t j, std::size_t k) const;
  double max_mass() const noexcept;
  /// max over pairs j != k of 1/eps(j,k)^2; 0 for a single body.
  double max_inverse_epsilon_squared() const;

 private:
  std::vector<double> masses_;
  double G_;
  std::optional<std::vector<double>> softening_;
};

class ForceModel {
 public:
  static ForceModel newtonian(BodySystem system);
  /// Requires `system` to carry softening.
  static ForceModel softened(BodySystem system);
  static ForceModel pendulum();

  ModelKind kind() const noexcept { return kind_; }
  bool is_gravitational() const noexcept {
    return kind_ != ModelKind::pendulum;
  }
  /// Throws InvalidModelError for the pendulum.
  const BodySystem& system() const;
  std::size_t bodies() const noexcept;
  std::size_t dimension() const noexcept;

  /// Length used to scale the collision floor. Zero means "use the largest
  /// pairwise distance of the configuration being evaluated".
  double length_scale() const noexcept { return length_scale_; }
  ForceModel with_length_scale(double length) const;

  /// f(y) on the flat layout.
  std::vector<double> accel(std::span<const double> y) const;

 private:
  ForceModel(ModelKind kind, std::optional<BodySystem> system);

  ModelKind kind_;
  std::optional<BodySystem> system_;
  double length_scale_ = 0.0;
};

/// Phase point (y, y') at time t, flat layout.
struct State {
  double t = 0.0;
  std::vector<double> y;
  std::vector<double> v;

  Vec3 position(std::size_t body) const;
  Vec3 velocity(std::size_t body) const;
};

State make_state(double t, std::span<const Vec3> positions,
                 std::span<const Vec3> velocities);

std::vector<double> flatten(std::span<const Vec3> v);
std::vector<Vec3> unflatten(std::span<const double> y);

/// Generic vector field y -> f(y), used by the finite-difference probes.
using VectorField = std::function<std::vector<double>(std::span<const double>)>;

VectorField as_field(const ForceModel& model);

/// sum_{j != k} G m_j (y_j - y_k) / |y_k - y_j|^3. Throws CollisionError when
/// a pair is closer than collision_floor.
std::vector<Vec3> newtonian_accel(const ForceModel& model,
                                  std::span<const Vec3> positions);

/// sum_{j != k} G m_j (y_j - y_k) / (|y_k - y_j| + eps(j,k))^3. Finite for
/// every input.
std::vector<Vec3> softened_accel(const ForceModel& model,
                                 std::span<const Vec3> positions);

/// N G max(m) max(1/eps^2), the uniform bound on every body's softened
/// acceleration. The factor N (rather than N-1) is deliberate.
double accel_bound(const ForceModel& model);

double pendulum_accel(double angle) noexcept;

/// Kinetic plus pair potential energy. Pendulum: v^2/2 - cos(y).
double total_energy(const ForceModel& model, const State& state);

/// Softened pair potential -G m_j m_k [1/(r+eps) - eps/(2 (r+eps)^2)].
double softened_pair_potential(double G, double mj, double mk, double r,
                               double eps) noexcept;

double max_pairwise_distance(std::span<const double> y);
/// +infinity for fewer than two bodies.
double min_pairwise_distance(std::span<const double> y);

inline constexpr double kCollisionFloorScale = 1e-9;

/// 1e-9 times the characteristic length of the model (or of `y` when the
/// model carries none).
double collision_floor(const ForceModel& model, std::span<const double> y);

/// Row-major dense matrix.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}
  double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  double operator()(std::size_t i, std::size_t j) const {
    return data[i * cols + j];
  }
  double max_abs() const noexcept;
};

/// 1e-5 * (1 + |y|_inf)
double default_fd_step(std::span<const double> y) noexcept;

/// Central-difference Jacobian, entry (j,k) = d f_j / d y_k.
Matrix jacobian_fd(const VectorField& f, std::span<const double> y, double h);
Matrix jacobian_fd(const ForceModel& model, std::span<const double> y,
                   std::optional<double> h = std::nullopt);

}  // namespace nbody
