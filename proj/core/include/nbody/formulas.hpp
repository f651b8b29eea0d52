#pragma once

// Closed-form third to sixth time derivatives of a solution of y'' = f(y),
// written as contractions of the partial-derivative tensors of f with the
// lower derivatives of y. The tensors come from nested central finite
// differences, so this module is independent of the series recursion in
// taylor.hpp and serves as its low-order cross-check.

#include <cstddef>
#include <span>
#include <vector>

#include "nbody/forces.hpp"

namespace nbody {

/// Dense l-th partial derivatives of an n-vector field:
///   entry(j, {k1..kl}) = d^l f_j / d y_kl ... d y_k1.
class DerivativeTensor {
 public:
  DerivativeTensor(std::size_t dimension, std::size_t order);

  std::size_t dimension() const noexcept { return n_; }
  std::size_t order() const noexcept { return order_; }

  double& at(std::size_t j, std::span<const std::size_t> k);
  double at(std::size_t j, std::span<const std::size_t> k) const;
  std::span<const double> data() const noexcept { return data_; }

  double max_abs() const noexcept;

 private:
  std::size_t flat(std::size_t j, std::span<const std::size_t> k) const;

  std::size_t n_;
  std::size_t order_;
  std::vector<double> data_;
};

inline constexpr std::size_t kMaxTensorOrder = 4;
/// Largest dimension accepted for tensors of order >= 3.
inline constexpr std::size_t kMaxDenseDimension = 12;

/// (1e-16)^(1/(l+2)) * (1 + |y|_inf)
double tensor_fd_step(std::size_t order, std::span<const double> y) noexcept;

/// l-fold nested central differences of f at y (1 <= l <= 4) with step
/// tensor_fd_step, Richardson-extrapolated from steps h and h/2.
DerivativeTensor derivative_tensor(const VectorField& f,
                                   std::span<const double> y,
                                   std::size_t order);
DerivativeTensor derivative_tensor(const ForceModel& model,
                                   std::span<const double> y,
                                   std::size_t order);

/// y''' = df.y'
std::vector<double> third_derivative(const ForceModel& model,
                                     std::span<const double> y,
                                     std::span<const double> v);

/// y'''' = df.y'' + d2f[y', y']
std::vector<double> fourth_derivative(const ForceModel& model,
                                      std::span<const double> y,
                                      std::span<const double> v,
                                      std::span<const double> a);

/// y^(5) = df.y''' + d2f[2 y' y'' + y'' y'] + d3f[y', y', y']
std::vector<double> fifth_derivative(const ForceModel& model,
                                     std::span<const double> y,
                                     std::span<const double> v,
                                     std::span<const double> a,
                                     std::span<const double> y3);

/// y^(6) = df.y'''' + d2f[3 y''' y' + y' y''' + 3 y'' y'']
///       + d3f[3 y'' y' y' + 2 y' y'' y' + y' y' y''] + d4f[y', y', y', y']
/// with the bracketed factors listed in index order k1, k2, ...
std::vector<double> sixth_derivative(const ForceModel& model,
                                     std::span<const double> y,
                                     std::span<const double> v,
                                     std::span<const double> a,
                                     std::span<const double> y3,
                                     std::span<const double> y4);

}  // namespace nbody
