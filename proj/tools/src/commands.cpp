#include "nbody_cli/commands.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <ostream>
#include <random>
#include <sstream>

#include "nbody/errors.hpp"
#include "nbody/taylor.hpp"
#include "nbody_cli/output.hpp"

namespace nbody::cli {

namespace {

void emit(const CommandContext& ctx, const std::string& content) {
  if (ctx.out)
    write_atomically(*ctx.out, content);
  else
    *ctx.stdout_stream << content << std::flush;
}

std::string header(const ForceModel& model) {
  std::string h = "t";
  if (model.kind() == ModelKind::pendulum) return h + ", x1, vx1, energy";
  const std::size_t n = model.bodies();
  for (std::size_t k = 1; k <= n; ++k)
    for (const char* axis : {"x", "y", "z"}) h += ", " + std::string(axis) + std::to_string(k);
  for (std::size_t k = 1; k <= n; ++k)
    for (const char* axis : {"vx", "vy", "vz"}) h += ", " + std::string(axis) + std::to_string(k);
  return h + ", energy";
}

std::string coordinate_names(const ForceModel& model) {
  if (model.kind() == ModelKind::pendulum) return "order, x1";
  std::string h = "order";
  for (std::size_t k = 1; k <= model.bodies(); ++k)
    for (const char* axis : {"x", "y", "z"}) h += ", " + std::string(axis) + std::to_string(k);
  return h;
}

std::vector<double> output_times(double t0, double t_end, std::optional<double> cadence) {
  std::vector<double> times;
  const double span = t_end - t0;
  if (span == 0.0) return {t0};
  const double dir = span > 0 ? 1.0 : -1.0;
  if (cadence) {
    const double steps = std::floor(std::abs(span) / *cadence);
    for (double i = 0; i <= steps; ++i) times.push_back(t0 + dir * i * *cadence);
    if (std::abs(times.back() - t_end) <= 1e-12 * std::abs(span))
      times.back() = t_end;
    else
      times.push_back(t_end);
  } else {
    for (std::size_t i = 0; i < kDefaultRows; ++i)
      times.push_back(t0 + span * static_cast<double>(i) / static_cast<double>(kDefaultRows - 1));
    times.back() = t_end;
  }
  return times;
}

bool all_zero(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; });
}

void report_collision(const CommandContext& ctx, const CollisionError& e,
                      double t0, bool symmetric) {
  std::ostream& err = *ctx.stderr_stream;
  err << "nbody: " << e.what() << "\n";
  if (symmetric && e.time()) {
    const double dt = std::abs(*e.time() - t0);
    err << "nbody: by time symmetry the same pair collides at t="
        << format_number(t0 - dt) << " and t=" << format_number(t0 + dt) << "\n";
  }
}

double require_t_end(const RunConfig& c) {
  if (!c.t_end) throw ConfigError("t_end missing");
  return *c.t_end;
}

double default_box(const RunConfig& c) {
  double box = 1.0;
  for (const auto& p : c.positions)
    for (double x : p) box = std::max(box, std::abs(x));
  return box;
}

}  // namespace

int cmd_simulate(const CommandContext& ctx) {
  const RunConfig& c = ctx.config;
  const ForceModel model = build_model(c);
  State start = initial_state(c);
  const double t_end = require_t_end(c);

  IntegrationOptions opt;
  opt.tol = c.tol.value_or(kDefaultSimulateTol);
  opt.order = c.order;
  opt.b = c.b;
  try {
    const Trajectory traj = integrate(model, start, t_end, opt);
    const ForceModel& scaled = traj.model();
    std::string csv = header(model) + "\n";
    for (double t : output_times(start.t, t_end, c.cadence)) {
      const State s = dense_eval(traj, t);
      std::vector<double> row{t};
      row.insert(row.end(), s.y.begin(), s.y.end());
      row.insert(row.end(), s.v.begin(), s.v.end());
      row.push_back(total_energy(scaled, s));
      csv += format_row(row) + "\n";
    }
    emit(ctx, csv);
  } catch (const CollisionError& e) {
    report_collision(ctx, e, start.t, all_zero(start.v));
    return kExitCollision;
  }
  return kExitOk;
}

int cmd_coeffs(const CommandContext& ctx) {
  const RunConfig& c = ctx.config;
  const ForceModel model = build_model(c);
  const State start = initial_state(c);
  try {
    const SeriesState s = taylor_coefficients(model, start.y, start.v, c.order);
    std::string csv = coordinate_names(model) + "\n";
    for (std::size_t k = 0; k <= c.order; ++k) {
      std::vector<double> row{static_cast<double>(k)};
      for (const PowerSeries& p : s.coords) row.push_back(p[k]);
      csv += format_row(row) + "\n";
    }
    // odd_defect: odd-order coefficients (zero for a zero-velocity start);
    // even_defect: even-order ones (zero for a start at the origin)
    csv += "odd_defect=" + format_number(coefficient_defect(s, SymmetryKind::even)) +
           ", even_defect=" + format_number(coefficient_defect(s, SymmetryKind::odd)) + "\n";
    emit(ctx, csv);
  } catch (const CollisionError& e) {
    report_collision(ctx, e, start.t, false);
    return kExitCollision;
  }
  return kExitOk;
}

int cmd_verify(const CommandContext& ctx) {
  const RunConfig& c = ctx.config;
  const ForceModel model = build_model(c);
  const State start = initial_state(c);
  if (ctx.kind == SymmetryKind::odd && model.kind() != ModelKind::softened) {
    *ctx.stderr_stream << "nbody: odd verification starts every body at one point; "
                          "only the softened model is defined there\n";
    return kExitConfig;
  }
  const double T = std::abs(require_t_end(c) - start.t);
  if (T == 0.0) throw ConfigError("verify needs t_end different from the start time");

  VerifyOptions opt;
  opt.step_tol = kVerifyStepTol;
  try {
    const SymmetryReport r = verify_symmetry(model, start, ctx.kind, T,
                                             c.tol.value_or(kDefaultVerifyTol), c.order, opt);
    std::ostringstream text;
    text << "kind=" << to_string(r.kind) << "\n"
         << "coeff_defect=" << format_number(r.coeff_defect) << "\n"
         << "mirror_defect=" << format_number(r.mirror_defect) << "\n"
         << "velocity_defect=" << format_number(r.velocity_defect) << "\n"
         << "accel_defect=" << format_number(r.accel_defect) << "\n"
         << "samples=" << r.samples << "\n"
         << "span=" << format_number(r.span) << "\n"
         << "tolerance=" << format_number(r.tolerance) << "\n"
         << "passed=" << (r.passed ? "true" : "false") << "\n";
    emit(ctx, text.str());
    return r.passed ? kExitOk : kExitVerifyFailed;
  } catch (const CollisionError& e) {
    report_collision(ctx, e, start.t, true);
    return kExitCollision;
  }
}

int cmd_radius(const CommandContext& ctx) {
  const RunConfig& c = ctx.config;
  const ForceModel model = build_model(c);
  const State start = initial_state(c);
  const double b = c.b ? *c.b : default_radius_parameter(model, start.y);
  try {
    const RadiusEstimate r = radius_estimate(model, start.y, b);
    emit(ctx, "b=" + format_number(r.b) + " M=" + format_number(r.M) +
                  " radius=" + format_number(r.radius) + "\n");
  } catch (const InvalidRadiusParameterError& e) {
    *ctx.stderr_stream << "nbody: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitOk;
}

int cmd_parity(const CommandContext& ctx) {
  const RunConfig& c = ctx.config;
  const ForceModel model = build_model(c);
  const double box = c.box.value_or(default_box(c));
  const std::size_t dim = model.dimension();

  const double jacobian = jacobian_parity_check(model, c.samples, box, ctx.seed);

  // f(-y) = -f(y) on the same kind of samples
  std::mt19937_64 rng(ctx.seed + 1);
  std::uniform_real_distribution<double> uni(-box, box);
  std::vector<double> y(dim), neg(dim);
  double force_defect = 0.0;
  std::size_t accepted = 0;
  for (std::size_t draws = 0; accepted < c.samples; ++draws) {
    if (draws >= 1000 * c.samples) throw Error("could not draw collision-free samples");
    for (double& x : y) x = uni(rng);
    for (std::size_t i = 0; i < dim; ++i) neg[i] = -y[i];
    std::vector<double> fp, fm;
    try {
      fp = model.accel(y);
      fm = model.accel(neg);
    } catch (const CollisionError&) {
      continue;
    }
    double diff = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
      diff = std::max(diff, std::abs(fp[i] + fm[i]));
      scale = std::max(scale, std::abs(fp[i]));
    }
    force_defect = std::max(force_defect, diff / (1.0 + scale));
    ++accepted;
  }

  const bool passed = jacobian <= kParityTolerance && force_defect <= kParityTolerance;
  std::ostringstream text;
  text << "model=" << to_string(model.kind()) << "\n"
       << "jacobian_parity_defect=" << format_number(jacobian) << "\n"
       << "force_parity_defect=" << format_number(force_defect) << "\n"
       << "samples=" << c.samples << "\n"
       << "box=" << format_number(box) << "\n"
       << "seed=" << ctx.seed << "\n"
       << "tolerance=" << format_number(kParityTolerance) << "\n"
       << "passed=" << (passed ? "true" : "false") << "\n";
  emit(ctx, text.str());
  return passed ? kExitOk : kExitVerifyFailed;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Taylor-series integrator for y'' = f(y)", "nbody"};
  app.require_subcommand(1);

  std::string config_path, out_path, kind = "even";
  const std::vector<std::pair<std::string, int (*)(const CommandContext&)>> commands = {
      {"simulate", cmd_simulate}, {"coeffs", cmd_coeffs}, {"verify", cmd_verify},
      {"radius", cmd_radius},     {"parity", cmd_parity}};
  const std::vector<std::string> help = {
      "integrate and write a trajectory CSV",
      "write the Taylor coefficients at the start state",
      "check the mirror symmetry of the solution about the start time",
      "print the guaranteed convergence radius",
      "check parity of the force and its Jacobian"};
  std::vector<CLI::App*> subs;
  for (std::size_t i = 0; i < commands.size(); ++i) {
    CLI::App* sub = app.add_subcommand(commands[i].first, help[i]);
    sub->add_option("--config", config_path, "run configuration file")->required();
    sub->add_option("--out", out_path, "output file (default: config 'out', else stdout)");
    sub->add_option("--kind", kind, "symmetry to verify")
        ->check(CLI::IsMember({"even", "odd"}));
    subs.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "nbody: " << e.what() << "\n";
    return kExitConfig;
  }

  try {
    CommandContext ctx;
    ctx.config = load_config(config_path);
    ctx.out = out_path.empty() ? ctx.config.out : std::optional<std::string>(out_path);
    ctx.kind = kind == "odd" ? SymmetryKind::odd : SymmetryKind::even;
    if (const char* seed = std::getenv("NBODY_SEED")) {
      char* end = nullptr;
      const unsigned long long v = std::strtoull(seed, &end, 10);
      if (*seed == '\0' || *end != '\0') throw ConfigError("NBODY_SEED must be an integer");
      ctx.seed = v;
    }
    ctx.stdout_stream = &out;
    ctx.stderr_stream = &err;
    for (std::size_t i = 0; i < commands.size(); ++i)
      if (subs[i]->parsed()) return commands[i].second(ctx);
  } catch (const ConfigError& e) {
    err << "nbody: " << e.what() << "\n";
    return kExitConfig;
  } catch (const CollisionError& e) {
    err << "nbody: " << e.what() << "\n";
    return kExitCollision;
  } catch (const Error& e) {
    err << "nbody: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitConfig;
}

}  // namespace nbody::cli
