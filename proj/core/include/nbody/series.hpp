#pragma once

// Truncated power series in one variable.
//
// A PowerSeries of truncation order K stores c_0..c_K of
//   c_0 + c_1 dt + ... + c_K dt^K
// and every operation on two series of order K returns order K again,
// discarding the higher terms. The free functions at the bottom
// (mul_coeff, recip_coeff, sqrt_coeff) expose the single-coefficient
// recurrences so that callers building a series order by order can reuse
// them without recomputing the lower coefficients.

#include <cstddef>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

namespace nbody {

class PowerSeries {
 public:
  /// Zero series of the given truncation order.
  explicit PowerSeries(std::size_t order);
  /// Takes ownership of c_0..c_K; throws InvalidArgumentError on an empty
  /// list or a non-finite coefficient.
  explicit PowerSeries(std::vector<double> coeffs);
  PowerSeries(std::initializer_list<double> coeffs);

  static PowerSeries constant(double value, std::size_t order);
  /// The series of dt itself.
  static PowerSeries variable(std::size_t order);

  std::size_t order() const noexcept { return coeffs_.size() - 1; }
  std::span<const double> coeffs() const noexcept { return coeffs_; }
  double operator[](std::size_t k) const { return coeffs_[k]; }

  /// max_k |c_k|
  double max_abs() const noexcept;

  friend bool operator==(const PowerSeries&, const PowerSeries&) = default;

 private:
  std::vector<double> coeffs_;
};

PowerSeries series_add(const PowerSeries& a, const PowerSeries& b);
PowerSeries series_sub(const PowerSeries& a, const PowerSeries& b);
PowerSeries series_scale(const PowerSeries& a, double factor);
PowerSeries series_add_scalar(const PowerSeries& a, double value);

/// Cauchy product truncated at the common order.
PowerSeries series_mul(const PowerSeries& a, const PowerSeries& b);

/// 1/a. Throws NearSingularSeriesError when |a_0| < recip_floor(a).
PowerSeries series_recip(const PowerSeries& a);

/// Principal square root (s_0 = +sqrt(a_0)). Throws NearSingularSeriesError
/// when a_0 <= 0 or a_0 < recip_floor(a).
PowerSeries series_sqrt(const PowerSeries& a);

/// Horner evaluation of sum c_k dt^k.
double series_eval(const PowerSeries& a, double dt);

/// Value of the derivative series at dt, without building it.
double series_eval_derivative(const PowerSeries& a, double dt);

/// Term-by-term derivative. The result keeps the truncation order of `a`
/// with a zero top coefficient.
PowerSeries series_derivative(const PowerSeries& a);

/// Relative guard used by series_recip and series_sqrt: 1e-12 * max_k |a_k|.
double recip_floor(const PowerSeries& a) noexcept;

inline constexpr double kRecipFloorScale = 1e-12;

// Single-coefficient recurrences. Each returns coefficient k of the result
// given the first k coefficients of that result (already stored in `out`)
// and coefficients 0..k of the operands.

/// sum_{i=0..k} a_i b_{k-i}
double mul_coeff(std::span<const double> a, std::span<const double> b,
                 std::size_t k) noexcept;

/// Coefficient k of r = 1/a; `out` holds r_0..r_{k-1}. For k = 0 returns
/// 1/a_0.
double recip_coeff(std::span<const double> a, std::span<const double> out,
                   std::size_t k) noexcept;

/// Coefficient k of s = sqrt(a); `out` holds s_0..s_{k-1}. For k = 0
/// returns +sqrt(a_0).
double sqrt_coeff(std::span<const double> a, std::span<const double> out,
                  std::size_t k) noexcept;

/// Coefficient k of sin(x) and cos(x) from x_0..x_k and the first k
/// coefficients of both results (coupled recurrence s' = c x', c' = -s x').
struct SinCos {
  double sin;
  double cos;
};
SinCos sin_cos_coeff(std::span<const double> x, std::span<const double> sin_out,
                     std::span<const double> cos_out, std::size_t k) noexcept;

/// sin and cos of a series.
std::pair<PowerSeries, PowerSeries> series_sin_cos(const PowerSeries& x);

}  // namespace nbody
