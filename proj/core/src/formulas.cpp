#include "nbody/formulas.hpp"

#include <algorithm>
#include <cmath>

#include "nbody/errors.hpp"

namespace nbody {

DerivativeTensor::DerivativeTensor(std::size_t dimension, std::size_t order)
    : n_(dimension), order_(order) {
  std::size_t size = n_;
  for (std::size_t l = 0; l < order_; ++l) size *= n_;
  data_.assign(size, 0.0);
}

std::size_t DerivativeTensor::flat(std::size_t j,
                                   std::span<const std::size_t> k) const {
  std::size_t idx = j;
  for (std::size_t l = 0; l < order_; ++l) idx = idx * n_ + k[l];
  return idx;
}

double& DerivativeTensor::at(std::size_t j, std::span<const std::size_t> k) {
  return data_[flat(j, k)];
}

double DerivativeTensor::at(std::size_t j,
                            std::span<const std::size_t> k) const {
  return data_[flat(j, k)];
}

double DerivativeTensor::max_abs() const noexcept {
  double m = 0.0;
  for (double x : data_) m = std::max(m, std::abs(x));
  return m;
}

double tensor_fd_step(std::size_t order, std::span<const double> y) noexcept {
  double norm = 0.0;
  for (double x : y) norm = std::max(norm, std::abs(x));
  return std::pow(1e-16, 1.0 / static_cast<double>(order + 2)) * (1.0 + norm);
}

DerivativeTensor derivative_tensor(const VectorField& f,
                                   std::span<const double> y,
                                   std::size_t order) {
  const std::size_t n = y.size();
  if (order < 1 || order > kMaxTensorOrder)
    throw InvalidArgumentError("derivative tensor order must be 1..4");
  if (order >= 3 && n > kMaxDenseDimension)
    throw InvalidArgumentError("dense tensors of order >= 3 limited to n <= 12");

  const double h = tensor_fd_step(order, y);
  DerivativeTensor tensor(n, order);

  std::vector<std::size_t> k(order, 0);
  std::vector<double> probe(y.begin(), y.end());
  const std::size_t patterns = std::size_t{1} << order;
  auto eval = [&](std::size_t bits, double step, double& sign) {
    std::copy(y.begin(), y.end(), probe.begin());
    sign = 1.0;
    for (std::size_t l = 0; l < order; ++l) {
      const bool minus = (bits >> l) & 1U;
      probe[k[l]] += minus ? -step : step;
      if (minus) sign = -sign;
    }
    std::vector<double> fv = f(probe);
    for (double x : fv)
      if (!std::isfinite(x))
        throw EvaluationError("vector field returned a non-finite value");
    return fv;
  };
  // Nested central difference at multi-index k with the given step.
  auto stencil = [&](double step) {
    std::vector<double> sum(n, 0.0);
    // Each sign pattern is paired with its mirror image and the pair summed
    // first: at y = 0 an odd field then gives exact zeros for even l.
    for (std::size_t bits = 0; bits < patterns / 2; ++bits) {
      double s1 = 0.0, s2 = 0.0;
      const std::vector<double> f1 = eval(bits, step, s1);
      const std::vector<double> f2 = eval(bits ^ (patterns - 1), step, s2);
      for (std::size_t j = 0; j < n; ++j) sum[j] += s1 * f1[j] + s2 * f2[j];
    }
    const double scale = 1.0 / std::pow(2.0 * step, static_cast<double>(order));
    for (double& x : sum) x *= scale;
    return sum;
  };
  for (;;) {
    // The stencil error is even in the step, so one halving removes the h^2
    // term: (4 D(h/2) - D(h)) / 3.
    const std::vector<double> coarse = stencil(h);
    const std::vector<double> fine = stencil(0.5 * h);
    for (std::size_t j = 0; j < n; ++j) tensor.at(j, k) = (4.0 * fine[j] - coarse[j]) / 3.0;

    // Advance the multi-index, k[order-1] fastest.
    std::size_t l = order;
    while (l > 0 && ++k[l - 1] == n) k[--l] = 0;
    if (l == 0) break;
  }
  return tensor;
}

DerivativeTensor derivative_tensor(const ForceModel& model,
                                   std::span<const double> y,
                                   std::size_t order) {
  if (y.size() != model.dimension())
    throw InvalidArgumentError("coordinate vector does not match model");
  return derivative_tensor(as_field(model), y, order);
}

namespace {

// sum_k T(j, k1..kl) u1[k1] ... ul[kl]
std::vector<double> contract(const DerivativeTensor& t,
                             std::initializer_list<std::span<const double>> u) {
  const std::size_t n = t.dimension();
  const std::size_t order = t.order();
  const std::vector<std::span<const double>> factors(u);
  std::vector<double> out(n, 0.0);
  const auto data = t.data();
  std::size_t stride = 1;
  for (std::size_t l = 0; l < order; ++l) stride *= n;

  std::vector<std::size_t> k(order, 0);
  for (std::size_t idx = 0; idx < stride; ++idx) {
    std::size_t rem = idx;
    for (std::size_t l = order; l-- > 0;) {
      k[l] = rem % n;
      rem /= n;
    }
    double w = 1.0;
    for (std::size_t l = 0; l < order; ++l) w *= factors[l][k[l]];
    if (w == 0.0) continue;
    for (std::size_t j = 0; j < n; ++j) out[j] += data[j * stride + idx] * w;
  }
  return out;
}

void axpy(std::vector<double>& acc, double a, const std::vector<double>& x) {
  for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += a * x[i];
}

void check_inputs(const ForceModel& model, std::span<const double> y,
                  std::initializer_list<std::span<const double>> rest) {
  if (y.size() != model.dimension())
    throw InvalidArgumentError("coordinate vector does not match model");
  for (auto r : rest)
    if (r.size() != model.dimension())
      throw InvalidArgumentError("derivative vector does not match model");
}

}  // namespace

std::vector<double> third_derivative(const ForceModel& model,
                                     std::span<const double> y,
                                     std::span<const double> v) {
  check_inputs(model, y, {v});
  const DerivativeTensor d1 = derivative_tensor(model, y, 1);
  return contract(d1, {v});
}

std::vector<double> fourth_derivative(const ForceModel& model,
                                      std::span<const double> y,
                                      std::span<const double> v,
                                      std::span<const double> a) {
  check_inputs(model, y, {v, a});
  const DerivativeTensor d1 = derivative_tensor(model, y, 1);
  const DerivativeTensor d2 = derivative_tensor(model, y, 2);
  std::vector<double> out = contract(d1, {a});
  axpy(out, 1.0, contract(d2, {v, v}));
  return out;
}

std::vector<double> fifth_derivative(const ForceModel& model,
                                     std::span<const double> y,
                                     std::span<const double> v,
                                     std::span<const double> a,
                                     std::span<const double> y3) {
  check_inputs(model, y, {v, a, y3});
  const DerivativeTensor d1 = derivative_tensor(model, y, 1);
  const DerivativeTensor d2 = derivative_tensor(model, y, 2);
  const DerivativeTensor d3 = derivative_tensor(model, y, 3);
  std::vector<double> out = contract(d1, {y3});
  // factors in (k1, k2) order: 2 y''_{k1} y'_{k2} + y'_{k1} y''_{k2}
  axpy(out, 2.0, contract(d2, {a, v}));
  axpy(out, 1.0, contract(d2, {v, a}));
  axpy(out, 1.0, contract(d3, {v, v, v}));
  return out;
}

std::vector<double> sixth_derivative(const ForceModel& model,
                                     std::span<const double> y,
                                     std::span<const double> v,
                                     std::span<const double> a,
                                     std::span<const double> y3,
                                     std::span<const double> y4) {
  check_inputs(model, y, {v, a, y3, y4});
  const DerivativeTensor d1 = derivative_tensor(model, y, 1);
  const DerivativeTensor d2 = derivative_tensor(model, y, 2);
  const DerivativeTensor d3 = derivative_tensor(model, y, 3);
  const DerivativeTensor d4 = derivative_tensor(model, y, 4);
  std::vector<double> out = contract(d1, {y4});
  axpy(out, 3.0, contract(d2, {y3, v}));
  axpy(out, 1.0, contract(d2, {v, y3}));
  axpy(out, 3.0, contract(d2, {a, a}));
  axpy(out, 3.0, contract(d3, {a, v, v}));
  axpy(out, 2.0, contract(d3, {v, a, v}));
  axpy(out, 1.0, contract(d3, {v, v, a}));
  axpy(out, 1.0, contract(d4, {v, v, v, v}));
  return out;
}

}  // namespace nbody
