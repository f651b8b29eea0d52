#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "nbody/errors.hpp"
#include "nbody/formulas.hpp"
#include "nbody/taylor.hpp"
#include "support/random_config.hpp"

using namespace nbody;
using nbody::testing::inf_diff;
using nbody::testing::inf_norm;
using nbody::testing::Sampler;

namespace {

std::vector<double> negated(std::span<const double> y) {
  std::vector<double> out(y.begin(), y.end());
  for (double& x : out) x = -x;
  return out;
}

double factorial(std::size_t m) {
  double f = 1.0;
  for (std::size_t i = 2; i <= m; ++i) f *= static_cast<double>(i);
  return f;
}

std::vector<double> scaled_coefficient(const SeriesState& s, std::size_t m) {
  std::vector<double> out;
  for (const PowerSeries& c : s.coords) out.push_back(factorial(m) * c[m]);
  return out;
}

// Visits every index tuple in [0, n)^order.
template <class F>
void for_each_index(std::size_t n, std::size_t order, F&& visit) {
  std::vector<std::size_t> k(order, 0);
  for (;;) {
    visit(k);
    std::size_t l = 0;
    while (l < order && ++k[l] == n) k[l++] = 0;
    if (l == order) return;
  }
}

}  // namespace

TEST_CASE("pendulum tensors at the origin") {
  const ForceModel p = ForceModel::pendulum();
  const std::vector<double> zero{0.0};
  const std::size_t i0[] = {0};
  const std::size_t i00[] = {0, 0};
  const std::size_t i000[] = {0, 0, 0};
  CHECK(derivative_tensor(p, zero, 1).at(0, i0) == doctest::Approx(-1.0).epsilon(1e-9));
  CHECK(std::abs(derivative_tensor(p, zero, 2).at(0, i00)) < 1e-12);
  CHECK(derivative_tensor(p, zero, 3).at(0, i000) == doctest::Approx(1.0).epsilon(1e-4));

  // away from the origin: d^l(-sin)/dy^l
  const std::vector<double> y{0.7};
  CHECK(derivative_tensor(p, y, 1).at(0, i0) == doctest::Approx(-std::cos(0.7)).epsilon(1e-8));
  CHECK(derivative_tensor(p, y, 2).at(0, i00) == doctest::Approx(std::sin(0.7)).epsilon(1e-5));
}

TEST_CASE("tensors of an odd field alternate parity") {
  // f odd => d^l f is even for odd l and odd for even l
  Sampler rng(31);
  for (int trial = 0; trial < 5; ++trial) {
    const ForceModel m = ForceModel::softened(
        BodySystem(rng.masses(3), 1.0, rng.softening(3, 0.3, 1.0)));
    const std::vector<double> y = rng.positions(3, 1.5, 0.5);
    const std::vector<double> ny = negated(y);
    for (std::size_t l = 1; l <= 3; ++l) {
      const DerivativeTensor a = derivative_tensor(m, y, l);
      const DerivativeTensor b = derivative_tensor(m, ny, l);
      const double sign = l % 2 == 1 ? 1.0 : -1.0;
      double worst = 0.0;
      for (std::size_t i = 0; i < a.data().size(); ++i)
        worst = std::max(worst, std::abs(a.data()[i] - sign * b.data()[i]));
      CHECK(worst <= 1e-6 * (1.0 + a.max_abs()));
    }
  }
}

TEST_CASE("mixed partials are symmetric") {
  Sampler rng(32);
  const ForceModel m = ForceModel::softened(BodySystem::uniform(rng.masses(2), 1.0, 0.5));
  const std::vector<double> y = rng.positions(2, 1.0, 0.5);
  const DerivativeTensor t = derivative_tensor(m, y, 3);
  double worst = 0.0;
  for (std::size_t j = 0; j < 6; ++j) {
    for_each_index(6, 3, [&](const std::vector<std::size_t>& k) {
      std::vector<std::size_t> p = k;
      std::sort(p.begin(), p.end());
      worst = std::max(worst, std::abs(t.at(j, k) - t.at(j, p)));
    });
  }
  CHECK(worst <= 1e-4 * (1.0 + t.max_abs()));
}

TEST_CASE("zero field gives zero tensors and derivatives") {
  const ForceModel single = ForceModel::softened(BodySystem::uniform({2.0}, 1.0, 0.5));
  const std::vector<double> y{0.3, -0.1, 0.2}, v{1, 2, 3}, zero3(3, 0.0);
  for (std::size_t l = 1; l <= 4; ++l) CHECK(derivative_tensor(single, y, l).max_abs() == 0.0);
  CHECK(inf_norm(third_derivative(single, y, v)) == 0.0);
  CHECK(inf_norm(sixth_derivative(single, y, v, zero3, zero3, zero3)) == 0.0);
}

TEST_CASE("argument validation") {
  const ForceModel big = ForceModel::softened(BodySystem::uniform({1, 1, 1, 1, 1}, 1.0, 0.5));
  Sampler rng(33);
  const std::vector<double> y = rng.vector(15, -1, 1);
  CHECK_NOTHROW(derivative_tensor(big, y, 2));
  CHECK_THROWS_AS(derivative_tensor(big, y, 3), InvalidArgumentError);
  CHECK_THROWS_AS(derivative_tensor(big, y, 5), InvalidArgumentError);
  CHECK_THROWS_AS(derivative_tensor(big, y, 0), InvalidArgumentError);

  const VectorField blowup = [](std::span<const double> x) {
    return std::vector<double>{1.0 / (x[0] - x[0])};
  };
  CHECK_THROWS_AS(derivative_tensor(blowup, std::vector<double>{1.0}, 1), EvaluationError);
}

TEST_CASE("softened model at the origin: the sixth derivative vanishes") {
  // even-order central differences of an odd field cancel exactly at 0
  Sampler rng(35);
  for (int trial = 0; trial < 5; ++trial) {
    const ForceModel m = ForceModel::softened(
        BodySystem(rng.masses(3), 1.0, rng.softening(3, 0.25, 1.0)));
    const std::vector<double> y(9, 0.0);
    const std::vector<double> v = rng.vector(9, -1, 1);
    const std::vector<double> a = m.accel(y);
    const std::vector<double> y3 = third_derivative(m, y, v);
    const std::vector<double> y4 = fourth_derivative(m, y, v, a);
    const std::vector<double> y6 = sixth_derivative(m, y, v, a, y3, y4);
    CHECK(inf_norm(a) == 0.0);
    CHECK(inf_norm(y4) <= 1e-12 * (1.0 + inf_norm(y3)));
    CHECK(inf_norm(y6) <= 1e-9 * (1.0 + inf_norm(y3)));
  }
}

TEST_CASE("pendulum through the origin: even derivatives vanish") {
  const ForceModel p = ForceModel::pendulum();
  const std::vector<double> y{0.0}, v{0.8};
  const std::vector<double> a = p.accel(y);
  const std::vector<double> y3 = third_derivative(p, y, v);
  const std::vector<double> y4 = fourth_derivative(p, y, v, a);
  const std::vector<double> y5 = fifth_derivative(p, y, v, a, y3);
  const std::vector<double> y6 = sixth_derivative(p, y, v, a, y3, y4);
  CHECK(a[0] == 0.0);
  CHECK(std::abs(y4[0]) < 1e-10);
  CHECK(std::abs(y6[0]) < 1e-6);
  // y''' = -cos(0) v, y^(5) = v^3 + v (from -sin)
  CHECK(y3[0] == doctest::Approx(-0.8).epsilon(1e-9));
  CHECK(y5[0] == doctest::Approx(0.8 * 0.8 * 0.8 + 0.8).epsilon(1e-5));
}

TEST_CASE("closed-form derivatives match the series recursion") {
  Sampler rng(34);
  const double tols[] = {1e-6, 1e-5, 1e-4, 1e-3};
  double worst[4] = {0, 0, 0, 0};
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = static_cast<std::size_t>(rng.integer(2, 3));
    const ForceModel m = ForceModel::softened(
        BodySystem(rng.masses(n), rng.uniform(0.5, 1.5), rng.softening(n, 0.3, 1.0)));
    // the difference steps grow with 1 + |y|, and f only sees differences,
    // so sample in the centroid frame
    const std::vector<double> y = rng.centered_positions(n, 1.5, 0.3);
    const std::vector<double> v = rng.vector(3 * n, -0.5, 0.5);
    const SeriesState s = taylor_coefficients(m, y, v, 8);

    const std::vector<double> a = m.accel(y);
    const std::vector<double> y3 = third_derivative(m, y, v);
    const std::vector<double> y4 = fourth_derivative(m, y, v, a);
    const std::vector<double> y5 = fifth_derivative(m, y, v, a, y3);
    const std::vector<double> y6 = sixth_derivative(m, y, v, a, y3, y4);
    const std::vector<double>* got[] = {&y3, &y4, &y5, &y6};
    for (std::size_t i = 0; i < 4; ++i) {
      const std::vector<double> want = scaled_coefficient(s, i + 3);
      worst[i] = std::max(worst[i], inf_diff(*got[i], want) / inf_norm(want));
    }
  }
  for (std::size_t i = 0; i < 4; ++i) {
    INFO("order " << i + 3 << " worst relative error " << worst[i]);
    CHECK(worst[i] <= tols[i]);
  }
}
