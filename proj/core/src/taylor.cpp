#include "nbody/taylor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "nbody/errors.hpp"

namespace nbody {

namespace {

using Coeffs = std::vector<double>;

constexpr double kEncounterSafety = 0.5;
// Pass-through thresholds: a softened pair closer than this fraction of its
// softening length, or this close in time to a straight-line crossing, is
// expanded as if coincident.
constexpr double kPassThroughDistance = 1e-6;
constexpr double kPassThroughExponent = -200.0;

// Expanding such a pair honestly would need ever shorter steps as the branch
// point of |d| closes in on the real axis, with sqrt coefficients of size
// |d0| (|d'|/|d0|)^k; the time bound 10^(-200/K) keeps those finite. The
// stand-in for |d| is |d - d0| plus its first-order correction in d0, off by
// O(|d0|^2 / |d - d0|) away from the crossing and O(|d0|) for the O(|d0|/|d'|)
// time around it.
bool passes_through(double dd, double vv, double eps, std::size_t order) {
  if (dd == 0.0) return true;
  const double dist = std::sqrt(dd);
  if (dist <= kPassThroughDistance * eps) return true;
  const double horizon =
      std::pow(10.0, kPassThroughExponent / static_cast<double>(order));
  return dist <= std::sqrt(vv) * horizon;
}

// Series of one pair interaction, filled one order at a time:
//   d = y_j - y_k, q = d.d, s = sqrt(q), w = s + eps,
//   r = 1/(w*w*w), g = d * r.
struct PairJet {
  std::size_t k = 0;
  std::size_t j = 0;
  double eps = 0.0;
  Coeffs d[3];
  Coeffs q, s, w, w2, w3, r, g[3];
  // Coincident start (softened only): d - d_0 = dt^shift * e with e_0 != 0,
  // so s = sigma^shift * dt^shift * sqrt(e.e). p = e.e and u = sqrt(p).
  // d_0 is zero, or small enough for passes_through. When d_0 != 0 and
  // d'(t0) != 0 (shift 1), s also carries the first-order correction
  // sigma * (d_0.e)/u, so the remaining error is O(|d_0|^2 / |d - d_0|).
  bool coincident = false;
  bool corrected = false;
  double d0[3] = {0.0, 0.0, 0.0};
  std::optional<std::size_t> shift;
  Coeffs p, u, c;

  PairJet(std::size_t k_, std::size_t j_, double eps_, std::size_t order)
      : k(k_), j(j_), eps(eps_) {
    for (auto& c : d) c.assign(order + 1, 0.0);
    for (auto& c : g) c.assign(order + 1, 0.0);
    for (Coeffs* x : {&q, &s, &w, &w2, &w3, &r, &p, &u, &c})
      x->assign(order + 1, 0.0);
  }
};

class GravityRecursion {
 public:
  GravityRecursion(const ForceModel& model, std::span<const double> y0,
                   std::span<const double> v0, std::size_t order, int direction)
      : sys_(model.system()), direction_(direction) {
    const std::size_t n = sys_.size();
    const bool softened = model.kind() == ModelKind::softened;
    const double floor = collision_floor(model, y0);
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t j = k + 1; j < n; ++j) {
        PairJet pair(k, j, softened ? sys_.epsilon(j, k) : 0.0, order);
        double q0 = 0.0, vv = 0.0;
        for (int c = 0; c < 3; ++c) {
          const double dc = y0[3 * j + c] - y0[3 * k + c];
          const double wc = v0[3 * j + c] - v0[3 * k + c];
          q0 += dc * dc;
          vv += wc * wc;
        }
        const double dist = std::sqrt(q0);
        if (!softened && (dist == 0.0 || dist < floor))
          throw CollisionError(k, j, dist);
        pair.coincident = softened && passes_through(q0, vv, pair.eps, order);
        if (pair.coincident && q0 > 0.0 && vv > 0.0) {
          pair.corrected = true;
          pair.shift = 1;
          for (int c = 0; c < 3; ++c) pair.d0[c] = y0[3 * j + c] - y0[3 * k + c];
        }
        pairs_.push_back(std::move(pair));
      }
    }
  }

  // Adds coefficient m of f(y(t)) into acc, given coords up to order m.
  void accumulate(const std::vector<Coeffs>& x, std::size_t m,
                  std::vector<Coeffs>& acc) {
    for (PairJet& pj : pairs_) {
      for (int c = 0; c < 3; ++c)
        pj.d[c][m] = x[3 * pj.j + c][m] - x[3 * pj.k + c][m];
      double qm = 0.0;
      for (int c = 0; c < 3; ++c) qm += mul_coeff(pj.d[c], pj.d[c], m);
      pj.q[m] = qm;

      if (pj.corrected)
        pj.s[m] = corrected_distance(pj, x, m);
      else if (pj.coincident)
        pj.s[m] = coincident_distance(pj, m);
      else
        pj.s[m] = sqrt_coeff(pj.q, pj.s, m);
      pj.w[m] = (m == 0) ? pj.s[0] + pj.eps : pj.s[m];
      pj.w2[m] = mul_coeff(pj.w, pj.w, m);
      pj.w3[m] = mul_coeff(pj.w2, pj.w, m);
      if (m == 0 && pj.w3[0] == 0.0)
        throw NearSingularSeriesError("zero pair denominator");
      pj.r[m] = recip_coeff(pj.w3, pj.r, m);

      const double gk = sys_.G() * sys_.mass(pj.j);
      const double gj = sys_.G() * sys_.mass(pj.k);
      for (int c = 0; c < 3; ++c) {
        pj.g[c][m] = mul_coeff(pj.d[c], pj.r, m);
        acc[3 * pj.k + c][m] += gk * pj.g[c][m];
        acc[3 * pj.j + c][m] -= gj * pj.g[c][m];
      }
    }
  }

 private:
  // Coefficient m of |d(t) - d(t0)| on the `direction_` side of t0.
  double coincident_distance(PairJet& pj, std::size_t m) {
    if (!pj.shift) {
      const bool nonzero =
          m > 0 && (pj.d[0][m] != 0.0 || pj.d[1][m] != 0.0 || pj.d[2][m] != 0.0);
      if (!nonzero) return 0.0;
      pj.shift = m;
    }
    const std::size_t shift = *pj.shift;
    const std::size_t i = m - shift;
    // p_i = sum_c sum_l d_c[l + shift] d_c[i - l + shift]
    double pi = 0.0;
    for (int c = 0; c < 3; ++c) {
      const Coeffs& dc = pj.d[c];
      for (std::size_t l = 0; l <= i; ++l)
        pi += dc[l + shift] * dc[i - l + shift];
    }
    pj.p[i] = pi;
    pj.u[i] = sqrt_coeff(pj.p, pj.u, i);
    const double sign = (shift % 2 == 1 && direction_ < 0) ? -1.0 : 1.0;
    return sign * pj.u[i];
  }

  // Coefficient m of sigma * (dt * u + (d_0.e)/u) with e = (d - d_0)/dt.
  // c_m needs u_m and so e_m = d_{m+1}, which the caller has already fixed.
  double corrected_distance(PairJet& pj, const std::vector<Coeffs>& x,
                            std::size_t m) {
    auto e = [&](int c, std::size_t l) {
      return x[3 * pj.j + c][l + 1] - x[3 * pj.k + c][l + 1];
    };
    double pm = 0.0, nm = 0.0;
    for (int c = 0; c < 3; ++c) {
      for (std::size_t l = 0; l <= m; ++l) pm += e(c, l) * e(c, m - l);
      nm += pj.d0[c] * e(c, m);
    }
    pj.p[m] = pm;
    pj.u[m] = sqrt_coeff(pj.p, pj.u, m);
    double cm = nm;
    for (std::size_t l = 0; l < m; ++l) cm -= pj.c[l] * pj.u[m - l];
    pj.c[m] = cm / pj.u[0];
    const double tail = m >= 1 ? pj.u[m - 1] : 0.0;
    return static_cast<double>(direction_) * (tail + pj.c[m]);
  }

  const BodySystem& sys_;
  int direction_;
  std::vector<PairJet> pairs_;
};

// Largest h with K |c_K| h^(K-1) <= tol and (K-1) |c_{K-1}| h^(K-1) <= tol:
// the joint velocity comes from the derivative series, whose truncation
// term is one power of h larger than the position's.
double velocity_tail_step(const SeriesState& series, double tol) {
  const std::size_t K = series.order();
  double tail = 0.0;
  for (const PowerSeries& c : series.coords)
    tail = std::max({tail, static_cast<double>(K - 1) * std::abs(c[K - 1]),
                     static_cast<double>(K) * std::abs(c[K])});
  if (tail == 0.0) return std::numeric_limits<double>::infinity();
  return std::pow(tol / tail, 1.0 / static_cast<double>(K - 1));
}

// Pair distances are square roots, with branch points where d(t).d(t)
// vanishes for complex t. For straight-line relative motion these lie at
// |t - t0| = |d|/|d'|; a close encounter puts them near the real axis long
// before the low-order coefficients show it, so steps stay well inside.
double encounter_step(const ForceModel& model, std::span<const double> y,
                      std::span<const double> v, std::size_t order) {
  double h = std::numeric_limits<double>::infinity();
  if (!model.is_gravitational()) return h;
  const std::size_t n = model.bodies();
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t j = k + 1; j < n; ++j) {
      double dd = 0.0, vv = 0.0;
      for (int c = 0; c < 3; ++c) {
        const double d = y[3 * j + c] - y[3 * k + c];
        const double w = v[3 * j + c] - v[3 * k + c];
        dd += d * d;
        vv += w * w;
      }
      // a coincident pair is expanded in powers of |t - t0| exactly
      if (dd == 0.0 || vv == 0.0) continue;
      if (model.kind() == ModelKind::softened &&
          passes_through(dd, vv, model.system().epsilon(j, k), order))
        continue;
      h = std::min(h, kEncounterSafety * std::sqrt(dd / vv));
    }
  }
  return h;
}

void check_sizes(const ForceModel& model, std::span<const double> y0,
                 std::span<const double> v0) {
  if (y0.size() != model.dimension() || v0.size() != model.dimension())
    throw InvalidArgumentError("state size does not match model dimension");
}

}  // namespace

SeriesState taylor_coefficients(const ForceModel& model,
                                std::span<const double> y0,
                                std::span<const double> v0, std::size_t order,
                                int direction, double t0) {
  check_sizes(model, y0, v0);
  if (order < 2) throw InvalidArgumentError("Taylor order must be at least 2");
  if (direction != 1 && direction != -1)
    throw InvalidArgumentError("direction must be +1 or -1");

  const std::size_t n = model.dimension();
  std::vector<Coeffs> x(n, Coeffs(order + 1, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    x[i][0] = y0[i];
    x[i][1] = v0[i];
  }

  if (model.kind() == ModelKind::pendulum) {
    Coeffs sin_c(order + 1, 0.0), cos_c(order + 1, 0.0);
    for (std::size_t m = 0; m + 2 <= order; ++m) {
      const SinCos sc = sin_cos_coeff(x[0], sin_c, cos_c, m);
      sin_c[m] = sc.sin;
      cos_c[m] = sc.cos;
      x[0][m + 2] = -sin_c[m] / static_cast<double>((m + 1) * (m + 2));
    }
  } else {
    GravityRecursion rec(model, y0, v0, order, direction);
    std::vector<Coeffs> acc(n, Coeffs(order + 1, 0.0));
    for (std::size_t m = 0; m + 2 <= order; ++m) {
      rec.accumulate(x, m, acc);
      const double denom = static_cast<double>((m + 1) * (m + 2));
      for (std::size_t i = 0; i < n; ++i) x[i][m + 2] = acc[i][m] / denom;
    }
  }

  SeriesState out;
  out.t0 = t0;
  out.direction = direction;
  out.coords.reserve(n);
  for (auto& c : x) out.coords.emplace_back(std::move(c));
  return out;
}

double default_radius_parameter(const ForceModel& model,
                                std::span<const double> y0) {
  switch (model.kind()) {
    case ModelKind::newtonian: {
      const double dmin = min_pairwise_distance(y0);
      return std::isfinite(dmin) ? 0.25 * dmin : 1.0;
    }
    case ModelKind::softened: {
      const double length = model.length_scale() > 0.0
                                ? model.length_scale()
                                : max_pairwise_distance(y0);
      return length > 0.0 ? length : 1.0;
    }
    case ModelKind::pendulum:
      return 1.0;
  }
  return 1.0;
}

RadiusEstimate radius_estimate(const ForceModel& model,
                               std::span<const double> y0, double b) {
  if (!(b > 0.0) || !std::isfinite(b))
    throw InvalidRadiusParameterError("radius parameter b must be positive");

  double M = 0.0;
  switch (model.kind()) {
    case ModelKind::softened:
      M = accel_bound(model);
      break;
    case ModelKind::pendulum:
      M = 1.0;
      break;
    case ModelKind::newtonian: {
      const double dmin = min_pairwise_distance(y0);
      if (std::isfinite(dmin) && !(b < 0.5 * dmin))
        throw InvalidRadiusParameterError(
            "radius parameter b must be below half the smallest pairwise "
            "distance");
      const BodySystem& sys = model.system();
      const std::size_t n = sys.size();
      for (std::size_t k = 0; k < n; ++k) {
        double row = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
          if (j == k) continue;
          double d2 = 0.0;
          for (int c = 0; c < 3; ++c) {
            const double dc = y0[3 * j + c] - y0[3 * k + c];
            d2 += dc * dc;
          }
          const double worst = std::sqrt(d2) - 2.0 * b;
          row += sys.G() * sys.mass(j) / (worst * worst);
        }
        M = std::max(M, row);
      }
      break;
    }
  }
  const double radius = M > 0.0 ? std::sqrt(2.0 * b / M)
                                : std::numeric_limits<double>::infinity();
  return {b, M, radius};
}

double step_size(const SeriesState& series, double tol, double radius_cap) {
  const std::size_t K = series.order();
  if (K < 8) throw InvalidArgumentError("step control needs order >= 8");
  if (!(tol > 0.0)) throw InvalidArgumentError("tolerance must be positive");
  if (!(radius_cap > 0.0))
    throw InvalidArgumentError("radius cap must be positive");

  double tail = 0.0;
  for (const PowerSeries& c : series.coords)
    tail = std::max({tail, std::abs(c[K - 1]), std::abs(c[K])});
  const double h_cap = kStepSafety * radius_cap;
  if (tail == 0.0) return h_cap;
  const double h_tail =
      std::pow(tol / std::max(tail, 1e-300), 1.0 / static_cast<double>(K));
  return std::min(h_cap, h_tail);
}

// --- Trajectory ---

Trajectory::Trajectory(ForceModel model, std::vector<TrajectorySegment> segments)
    : model_(std::move(model)), segments_(std::move(segments)) {
  if (segments_.empty())
    throw InvalidArgumentError("trajectory needs at least one segment");
}

std::size_t Trajectory::locate(double t) const {
  const int dir = direction();
  const double lo = std::min(t_start(), t_end());
  const double hi = std::max(t_start(), t_end());
  if (!(t >= lo && t <= hi))
    throw OutOfRangeError("time outside trajectory span");
  // Segments are ordered along `dir`; find the last one starting at or
  // before t in that direction.
  const double offset = dir * (t - t_start());
  auto it = std::upper_bound(
      segments_.begin(), segments_.end(), offset,
      [&](double off, const TrajectorySegment& seg) {
        return off < dir * (seg.t_begin() - t_start());
      });
  if (it == segments_.begin()) return 0;
  return static_cast<std::size_t>(std::distance(segments_.begin(), it)) - 1;
}

State eval_series(const SeriesState& series, double dt) {
  State s;
  s.t = series.t0 + dt;
  s.y.reserve(series.dimension());
  s.v.reserve(series.dimension());
  for (const PowerSeries& c : series.coords) {
    s.y.push_back(series_eval(c, dt));
    s.v.push_back(series_eval_derivative(c, dt));
  }
  return s;
}

State dense_eval(const Trajectory& traj, double t) {
  const TrajectorySegment& seg = traj.segments()[traj.locate(t)];
  State s = eval_series(seg.series, t - seg.t_begin());
  s.t = t;
  return s;
}

namespace {

void screen_collision(const ForceModel& model, const SeriesState& series,
                      double dt) {
  const State probe = eval_series(series, dt);
  const double floor = collision_floor(model, probe.y);
  const std::size_t n = model.bodies();
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t j = k + 1; j < n; ++j) {
      double d2 = 0.0;
      for (int c = 0; c < 3; ++c) {
        const double dc = probe.y[3 * j + c] - probe.y[3 * k + c];
        d2 += dc * dc;
      }
      const double dist = std::sqrt(d2);
      if (dist == 0.0 || dist < floor)
        throw CollisionError(k, j, dist, probe.t);
    }
  }
}

}  // namespace

Trajectory integrate(const ForceModel& model_in, const State& initial,
                     double t_end, const IntegrationOptions& options) {
  check_sizes(model_in, initial.y, initial.v);
  if (!std::isfinite(t_end)) throw InvalidArgumentError("t_end is not finite");

  ForceModel model = model_in;
  if (model.is_gravitational() && model.length_scale() <= 0.0) {
    const double length = max_pairwise_distance(initial.y);
    model = model.with_length_scale(length > 0.0 ? length : 1.0);
  }

  const int dir = t_end >= initial.t ? 1 : -1;
  double t = initial.t;
  std::vector<double> y = initial.y;
  std::vector<double> v = initial.v;
  std::vector<TrajectorySegment> segments;

  auto expand = [&]() {
    try {
      return taylor_coefficients(model, y, v, options.order, dir, t);
    } catch (const CollisionError& e) {
      throw e.at_time(t);
    }
  };

  if (t_end == t) {
    segments.push_back({expand(), 0.0, t});
    return Trajectory(std::move(model), std::move(segments));
  }

  while (dir * (t_end - t) > 0.0) {
    if (segments.size() >= options.max_steps)
      throw Error("integration exceeded the maximum number of steps");
    SeriesState series = expand();

    double b = default_radius_parameter(model, y);
    if (options.b) {
      try {
        (void)radius_estimate(model, y, *options.b);
        b = *options.b;
      } catch (const InvalidRadiusParameterError&) {
      }
    }
    const double cap = radius_estimate(model, y, b).radius;
    double h = std::min({step_size(series, options.tol, cap),
                         velocity_tail_step(series, options.tol),
                         encounter_step(model, y, v, options.order)});
    const double remaining = std::abs(t_end - t);
    const bool last = h >= remaining;
    if (last) h = remaining;
    if (!(h > 0.0)) throw Error("step size underflow");

    if (model.kind() == ModelKind::newtonian) {
      screen_collision(model, series, 0.5 * dir * h);
      screen_collision(model, series, dir * h);
    }

    State next = eval_series(series, dir * h);
    const double t_next = last ? t_end : t + dir * h;
    segments.push_back({std::move(series), h, t_next});
    y = std::move(next.y);
    v = std::move(next.v);
    t = t_next;
  }
  return Trajectory(std::move(model), std::move(segments));
}

}  // namespace nbody
