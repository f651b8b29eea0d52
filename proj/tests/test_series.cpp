#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "nbody/errors.hpp"
#include "nbody/series.hpp"
#include "support/random_config.hpp"

using namespace nbody;
using nbody::testing::Sampler;

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

PowerSeries random_series(Sampler& s, std::size_t order, double lo, double hi) {
  return PowerSeries(s.vector(order + 1, lo, hi));
}

// Full polynomial product, truncated afterwards.
std::vector<double> brute_force_product(std::span<const double> a,
                                        std::span<const double> b) {
  std::vector<double> full(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) full[i + j] += a[i] * b[j];
  full.resize(a.size());
  return full;
}

// Polynomial long division of 1 by a, quotient truncated at `order`.
std::vector<double> long_division_recip(std::span<const double> a,
                                        std::size_t order) {
  std::vector<double> rem(order + 1, 0.0);
  rem[0] = 1.0;
  std::vector<double> q(order + 1, 0.0);
  for (std::size_t k = 0; k <= order; ++k) {
    q[k] = rem[k] / a[0];
    for (std::size_t i = 0; i < a.size() && k + i <= order; ++i)
      rem[k + i] -= q[k] * a[i];
  }
  return q;
}

double ulp_distance(double a, double b) {
  if (a == b) return 0.0;
  const double scale = std::max(std::abs(a), std::abs(b));
  return std::abs(a - b) / (scale * kEps);
}

double max_abs_diff(const PowerSeries& a, const PowerSeries& b) {
  double m = 0.0;
  for (std::size_t k = 0; k <= a.order(); ++k)
    m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}

}  // namespace

TEST_CASE("series_add examples") {
  CHECK(series_add(PowerSeries{1, 2}, PowerSeries{3, 4}) == PowerSeries{4, 6});

  Sampler s(1);
  const PowerSeries a = random_series(s, 6, -3, 3);
  CHECK(series_add(a, PowerSeries(6)) == a);
  const PowerSeries zero = series_add(a, series_scale(a, -1.0));
  CHECK(zero.max_abs() == 0.0);
}

TEST_CASE("series_mul examples") {
  const PowerSeries one_plus_t{1, 1, 0};
  CHECK(series_mul(one_plus_t, one_plus_t) == PowerSeries{1, 2, 1});

  Sampler s(2);
  const PowerSeries a = random_series(s, 5, -2, 2);
  CHECK(series_mul(a, PowerSeries::constant(1.0, 5)) == a);

  const PowerSeries t = PowerSeries::variable(3);
  CHECK(series_mul(t, t) == PowerSeries{0, 0, 1, 0});
}

TEST_CASE("order mismatch is rejected") {
  CHECK_THROWS_AS(series_add(PowerSeries{1, 2}, PowerSeries{1, 2, 3}),
                  OrderMismatchError);
  CHECK_THROWS_AS(series_mul(PowerSeries{1}, PowerSeries{1, 2}),
                  OrderMismatchError);
  CHECK_THROWS_AS(series_sub(PowerSeries{1}, PowerSeries{1, 2}),
                  OrderMismatchError);
}

TEST_CASE("series_recip examples") {
  CHECK(series_recip(PowerSeries{2}) == PowerSeries{0.5});

  const PowerSeries r = series_recip(PowerSeries{1, 1, 0, 0});
  const std::vector<double> oracle = long_division_recip(std::vector<double>{1, 1}, 3);
  REQUIRE(oracle == std::vector<double>{1, -1, 1, -1});
  for (std::size_t k = 0; k <= 3; ++k) CHECK(r[k] == oracle[k]);

  Sampler s(3);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> c = s.vector(13, -1, 1);
    c[0] = 1.0;
    const PowerSeries a(c);
    CHECK(max_abs_diff(series_recip(series_recip(a)), a) < 1e-9 * (1.0 + a.max_abs()));
  }
}

TEST_CASE("series_recip matches long division on random input") {
  Sampler s(4);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t order = static_cast<std::size_t>(s.integer(0, 20));
    std::vector<double> c = s.vector(order + 1, -1, 1);
    c[0] = s.uniform(1.0, 3.0);
    const PowerSeries r = series_recip(PowerSeries(c));
    const std::vector<double> oracle = long_division_recip(c, order);
    for (std::size_t k = 0; k <= order; ++k)
      CHECK(std::abs(r[k] - oracle[k]) <= 1e-12 * (1.0 + std::abs(oracle[k])));
  }
}

TEST_CASE("near-singular leading coefficients are rejected") {
  CHECK_THROWS_AS(series_recip(PowerSeries{0.0, 1.0}), NearSingularSeriesError);
  CHECK_THROWS_AS(series_recip(PowerSeries{1e-14, 1.0}), NearSingularSeriesError);
  CHECK_NOTHROW(series_recip(PowerSeries{1e-11, 1.0}));
  CHECK_THROWS_AS(series_sqrt(PowerSeries{0.0, 0.0, 1.0}), NearSingularSeriesError);
  CHECK_THROWS_AS(series_sqrt(PowerSeries{-1.0, 0.0}), NearSingularSeriesError);
  CHECK_THROWS_AS(series_sqrt(PowerSeries{1e-13, 0.0, 1.0}),
                  NearSingularSeriesError);
}

TEST_CASE("series_sqrt examples") {
  CHECK(series_sqrt(PowerSeries{4}) == PowerSeries{2});
  CHECK(series_sqrt(PowerSeries{1, 2, 1}) == PowerSeries{1, 1, 0});

  Sampler s(5);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> c = s.vector(11, -1, 1);
    c[0] = s.uniform(0.5, 4.0);
    const PowerSeries a(c);
    const PowerSeries root = series_sqrt(a);
    CHECK(root[0] > 0.0);
    CHECK(max_abs_diff(series_mul(root, root), a) < 1e-12 * a.max_abs());
  }
}

TEST_CASE("series_eval examples") {
  CHECK(series_eval(PowerSeries{1, 2, 3}, 0.0) == 1.0);
  CHECK(series_eval(PowerSeries{1, 1}, 0.5) == 1.5);
  CHECK(series_eval(PowerSeries{0, 0, 0.125}, 2.0) == 0.5);
  CHECK(series_eval_derivative(PowerSeries{1, 2, 3}, 2.0) == 14.0);
  CHECK(series_eval_derivative(PowerSeries{7}, 2.0) == 0.0);
  CHECK(series_derivative(PowerSeries{1, 2, 3}) == PowerSeries{2, 6, 0});
}

TEST_CASE("ring axioms at fixed order") {
  Sampler s(6);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t order = static_cast<std::size_t>(s.integer(0, 8));
    const PowerSeries a = random_series(s, order, 0, 1);
    const PowerSeries b = random_series(s, order, 0, 1);
    const PowerSeries c = random_series(s, order, 0, 1);

    CHECK(series_add(a, b) == series_add(b, a));
    const PowerSeries ab = series_mul(a, b);
    CHECK(max_abs_diff(ab, series_mul(b, a)) <= 4 * kEps * ab.max_abs());

    const PowerSeries left = series_mul(series_mul(a, b), c);
    const PowerSeries right = series_mul(a, series_mul(b, c));
    CHECK(max_abs_diff(left, right) <= 4 * kEps * left.max_abs());

    const PowerSeries dist_l = series_mul(a, series_add(b, c));
    const PowerSeries dist_r = series_add(series_mul(a, b), series_mul(a, c));
    CHECK(max_abs_diff(dist_l, dist_r) <= 4 * kEps * dist_l.max_abs());
  }
}

TEST_CASE("series_mul agrees with the brute-force product") {
  Sampler s(7);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t order = static_cast<std::size_t>(s.integer(0, 16));
    const PowerSeries a = random_series(s, order, -1, 1);
    const PowerSeries b = random_series(s, order, -1, 1);
    const PowerSeries p = series_mul(a, b);
    const std::vector<double> oracle = brute_force_product(a.coeffs(), b.coeffs());
    for (std::size_t k = 0; k <= order; ++k)
      worst = std::max(worst, ulp_distance(p[k], oracle[k]));
  }
  CHECK(worst <= 2.0);
}

TEST_CASE("recip and sqrt defining residuals up to order 30") {
  Sampler s(8);
  double worst_recip = 0.0;
  double worst_sqrt = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t order = static_cast<std::size_t>(s.integer(0, 30));
    // |a_k| <= 2^-k: radius of convergence of 1/a and sqrt(a) at least 1,
    // so the exact results stay O(1) and the residual measures the kernels
    std::vector<double> c = s.vector(order + 1, -1, 1);
    for (std::size_t k = 1; k <= order; ++k) c[k] = std::ldexp(c[k], -static_cast<int>(k));
    c[0] = s.uniform(1.0, 4.0);
    const PowerSeries a(c);

    const PowerSeries one = series_mul(a, series_recip(a));
    worst_recip = std::max(
        worst_recip, max_abs_diff(one, PowerSeries::constant(1.0, order)));

    const PowerSeries root = series_sqrt(a);
    worst_sqrt = std::max(worst_sqrt,
                          max_abs_diff(series_mul(root, root), a) / a.max_abs());
  }
  CHECK(worst_recip <= 1e-12);
  CHECK(worst_sqrt <= 1e-12);
}

TEST_CASE("sin and cos of a series") {
  // sin(t), cos(t)
  const auto [s, c] = series_sin_cos(PowerSeries::variable(7));
  CHECK(s[1] == doctest::Approx(1.0));
  CHECK(s[3] == doctest::Approx(-1.0 / 6.0));
  CHECK(s[5] == doctest::Approx(1.0 / 120.0));
  CHECK(c[0] == 1.0);
  CHECK(c[2] == doctest::Approx(-0.5));
  CHECK(c[4] == doctest::Approx(1.0 / 24.0));
  for (std::size_t k = 0; k <= 7; k += 2) CHECK(s[k] == 0.0);

  // sin^2 + cos^2 = 1 on a random argument
  Sampler rng(9);
  const PowerSeries x = random_series(rng, 12, -1, 1);
  const auto [sx, cx] = series_sin_cos(x);
  const PowerSeries sum = series_add(series_mul(sx, sx), series_mul(cx, cx));
  CHECK(max_abs_diff(sum, PowerSeries::constant(1.0, 12)) < 1e-12);
}

TEST_CASE("construction rejects bad coefficient lists") {
  CHECK_THROWS_AS(PowerSeries(std::vector<double>{}), InvalidArgumentError);
  CHECK_THROWS_AS(PowerSeries({1.0, std::nan("")}), InvalidArgumentError);
  CHECK(PowerSeries(4).order() == 4);
}
