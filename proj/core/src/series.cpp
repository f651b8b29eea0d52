#include "nbody/series.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

#include "nbody/errors.hpp"

namespace nbody {

namespace {

void require_same_order(const PowerSeries& a, const PowerSeries& b) {
  if (a.order() != b.order()) throw OrderMismatchError(a.order(), b.order());
}

std::string singular_message(const char* op, double a0, double floor) {
  std::ostringstream os;
  os.precision(17);
  os << op << ": leading coefficient " << a0 << " below floor " << floor;
  return os.str();
}

}  // namespace

PowerSeries::PowerSeries(std::size_t order) : coeffs_(order + 1, 0.0) {}

PowerSeries::PowerSeries(std::vector<double> coeffs)
    : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty())
    throw InvalidArgumentError("power series needs at least one coefficient");
  for (double c : coeffs_)
    if (!std::isfinite(c))
      throw InvalidArgumentError("power series coefficient is not finite");
}

PowerSeries::PowerSeries(std::initializer_list<double> coeffs)
    : PowerSeries(std::vector<double>(coeffs)) {}

PowerSeries PowerSeries::constant(double value, std::size_t order) {
  std::vector<double> c(order + 1, 0.0);
  c[0] = value;
  return PowerSeries(std::move(c));
}

PowerSeries PowerSeries::variable(std::size_t order) {
  std::vector<double> c(order + 1, 0.0);
  if (order >= 1) c[1] = 1.0;
  return PowerSeries(std::move(c));
}

double PowerSeries::max_abs() const noexcept {
  double m = 0.0;
  for (double c : coeffs_) m = std::max(m, std::abs(c));
  return m;
}

PowerSeries series_add(const PowerSeries& a, const PowerSeries& b) {
  require_same_order(a, b);
  std::vector<double> c(a.order() + 1);
  for (std::size_t k = 0; k < c.size(); ++k) c[k] = a[k] + b[k];
  return PowerSeries(std::move(c));
}

PowerSeries series_sub(const PowerSeries& a, const PowerSeries& b) {
  require_same_order(a, b);
  std::vector<double> c(a.order() + 1);
  for (std::size_t k = 0; k < c.size(); ++k) c[k] = a[k] - b[k];
  return PowerSeries(std::move(c));
}

PowerSeries series_scale(const PowerSeries& a, double factor) {
  std::vector<double> c(a.coeffs().begin(), a.coeffs().end());
  for (double& x : c) x *= factor;
  return PowerSeries(std::move(c));
}

PowerSeries series_add_scalar(const PowerSeries& a, double value) {
  std::vector<double> c(a.coeffs().begin(), a.coeffs().end());
  c[0] += value;
  return PowerSeries(std::move(c));
}

double mul_coeff(std::span<const double> a, std::span<const double> b,
                 std::size_t k) noexcept {
  double sum = 0.0;
  for (std::size_t i = 0; i <= k; ++i) sum += a[i] * b[k - i];
  return sum;
}

double recip_coeff(std::span<const double> a, std::span<const double> out,
                   std::size_t k) noexcept {
  if (k == 0) return 1.0 / a[0];
  double sum = 0.0;
  for (std::size_t i = 1; i <= k; ++i) sum += a[i] * out[k - i];
  return -sum * out[0];
}

double sqrt_coeff(std::span<const double> a, std::span<const double> out,
                  std::size_t k) noexcept {
  if (k == 0) return std::sqrt(a[0]);
  double sum = 0.0;
  for (std::size_t i = 1; i < k; ++i) sum += out[i] * out[k - i];
  return (a[k] - sum) / (2.0 * out[0]);
}

PowerSeries series_mul(const PowerSeries& a, const PowerSeries& b) {
  require_same_order(a, b);
  std::vector<double> c(a.order() + 1);
  for (std::size_t k = 0; k < c.size(); ++k)
    c[k] = mul_coeff(a.coeffs(), b.coeffs(), k);
  return PowerSeries(std::move(c));
}

double recip_floor(const PowerSeries& a) noexcept {
  return kRecipFloorScale * a.max_abs();
}

PowerSeries series_recip(const PowerSeries& a) {
  const double floor = recip_floor(a);
  if (a[0] == 0.0 || std::abs(a[0]) < floor)
    throw NearSingularSeriesError(singular_message("series_recip", a[0], floor));
  std::vector<double> r(a.order() + 1);
  for (std::size_t k = 0; k < r.size(); ++k)
    r[k] = recip_coeff(a.coeffs(), r, k);
  return PowerSeries(std::move(r));
}

PowerSeries series_sqrt(const PowerSeries& a) {
  const double floor = recip_floor(a);
  if (a[0] <= 0.0 || a[0] < floor)
    throw NearSingularSeriesError(singular_message("series_sqrt", a[0], floor));
  std::vector<double> s(a.order() + 1);
  for (std::size_t k = 0; k < s.size(); ++k)
    s[k] = sqrt_coeff(a.coeffs(), s, k);
  return PowerSeries(std::move(s));
}

double series_eval(const PowerSeries& a, double dt) {
  const auto c = a.coeffs();
  double acc = c.back();
  for (std::size_t k = c.size() - 1; k-- > 0;) acc = acc * dt + c[k];
  return acc;
}

double series_eval_derivative(const PowerSeries& a, double dt) {
  const auto c = a.coeffs();
  const std::size_t top = c.size() - 1;
  if (top == 0) return 0.0;
  double acc = static_cast<double>(top) * c[top];
  for (std::size_t k = top - 1; k >= 1; --k)
    acc = acc * dt + static_cast<double>(k) * c[k];
  return acc;
}

PowerSeries series_derivative(const PowerSeries& a) {
  std::vector<double> d(a.order() + 1, 0.0);
  for (std::size_t k = 1; k <= a.order(); ++k)
    d[k - 1] = static_cast<double>(k) * a[k];
  return PowerSeries(std::move(d));
}

SinCos sin_cos_coeff(std::span<const double> x, std::span<const double> sin_out,
                     std::span<const double> cos_out, std::size_t k) noexcept {
  if (k == 0) return {std::sin(x[0]), std::cos(x[0])};
  double s = 0.0;
  double c = 0.0;
  for (std::size_t i = 1; i <= k; ++i) {
    const double ix = static_cast<double>(i) * x[i];
    s += ix * cos_out[k - i];
    c += ix * sin_out[k - i];
  }
  const double inv_k = 1.0 / static_cast<double>(k);
  return {s * inv_k, -c * inv_k};
}

std::pair<PowerSeries, PowerSeries> series_sin_cos(const PowerSeries& x) {
  std::vector<double> s(x.order() + 1);
  std::vector<double> c(x.order() + 1);
  for (std::size_t k = 0; k < s.size(); ++k) {
    const SinCos sc = sin_cos_coeff(x.coeffs(), s, c, k);
    s[k] = sc.sin;
    c[k] = sc.cos;
  }
  return {PowerSeries(std::move(s)), PowerSeries(std::move(c))};
}

}  // namespace nbody
