#include "nbody_cli/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "nbody/errors.hpp"

namespace nbody::cli {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

double parse_number(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double value = 0.0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (s.empty() || ec != std::errc() || end != s.data() + s.size() ||
      !std::isfinite(value))
    throw ConfigError("not a finite number: '" + std::string(s) + "'");
  return value;
}

std::size_t parse_count(std::string_view s) {
  const double v = parse_number(s);
  if (v < 0 || v != std::floor(v)) throw ConfigError("expected a non-negative integer");
  return static_cast<std::size_t>(v);
}

std::vector<double> parse_list(std::string_view s) {
  std::vector<double> out;
  if (trim(s).empty()) return out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = s.find(',', start);
    out.push_back(parse_number(s.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

ModelKind parse_kind(std::string_view s) {
  if (s == "newtonian") return ModelKind::newtonian;
  if (s == "softened") return ModelKind::softened;
  if (s == "pendulum") return ModelKind::pendulum;
  throw ConfigError("unknown model '" + std::string(s) +
                    "' (expected newtonian, softened or pendulum)");
}

std::vector<double> single_group(std::string_view value) {
  auto groups = parse_groups(value);
  if (groups.size() != 1) throw ConfigError("expected one bracketed list");
  return groups.front();
}

void validate(const RunConfig& c) {
  if (c.order < kMinOrder || c.order > kMaxOrder)
    throw ConfigError("order must lie in 4..60");
  if (c.tol && !(*c.tol > 0.0)) throw ConfigError("tol must be positive");
  if (c.cadence && !(*c.cadence > 0.0)) throw ConfigError("cadence must be positive");
  if (c.box && !(*c.box > 0.0)) throw ConfigError("box must be positive");
  if (c.b && !(*c.b > 0.0)) throw ConfigError("b must be positive");
  if (c.samples == 0) throw ConfigError("samples must be at least 1");

  if (c.kind == ModelKind::pendulum) {
    if (!c.masses.empty()) throw ConfigError("the pendulum takes no masses");
    if (c.softening || c.softening_matrix)
      throw ConfigError("softening is only valid for the softened model");
    if (c.positions.size() != 1 || c.positions[0].size() != 1)
      throw ConfigError("the pendulum needs positions = [angle]");
    if (!c.velocities.empty() && (c.velocities.size() != 1 || c.velocities[0].size() != 1))
      throw ConfigError("the pendulum needs velocities = [angular velocity]");
    return;
  }

  const std::size_t n = c.masses.size();
  if (n == 0) throw ConfigError("masses missing");
  if (c.positions.size() != n)
    throw ConfigError("positions: expected " + std::to_string(n) + " triples");
  for (const auto& p : c.positions)
    if (p.size() != 3) throw ConfigError("positions must be triples");
  if (!c.velocities.empty()) {
    if (c.velocities.size() != n)
      throw ConfigError("velocities: expected " + std::to_string(n) + " triples");
    for (const auto& v : c.velocities)
      if (v.size() != 3) throw ConfigError("velocities must be triples");
  }
  const bool has_softening = c.softening || c.softening_matrix;
  if (c.kind == ModelKind::softened && !has_softening)
    throw ConfigError("the softened model needs softening");
  if (c.kind != ModelKind::softened && has_softening)
    throw ConfigError("softening is only valid for the softened model");
  if (c.softening_matrix) {
    if (c.softening_matrix->size() != n)
      throw ConfigError("softening matrix needs one row per body");
    for (const auto& row : *c.softening_matrix)
      if (row.size() != n) throw ConfigError("softening matrix must be square");
  }
}

}  // namespace

std::vector<std::vector<double>> parse_groups(std::string_view value) {
  value = trim(value);
  std::vector<std::vector<double>> groups;
  if (value.empty()) return groups;
  if (value.front() != '[') {
    groups.push_back(parse_list(value));
    return groups;
  }
  // a matrix may also be written with one outer pair of brackets
  if (const std::string_view rest = trim(value.substr(1)); !rest.empty() && rest.front() == '[') {
    if (value.back() != ']') throw ConfigError("unbalanced '['");
    value = trim(value.substr(1, value.size() - 2));
  }
  std::size_t i = 0;
  while (i < value.size()) {
    if (value[i] != '[') throw ConfigError("expected '['");
    const std::size_t close = value.find(']', i);
    if (close == std::string_view::npos) throw ConfigError("unbalanced '['");
    const std::string_view inner = value.substr(i + 1, close - i - 1);
    if (inner.find('[') != std::string_view::npos) throw ConfigError("nested '['");
    groups.push_back(parse_list(inner));
    i = close + 1;
    while (i < value.size() && std::isspace(static_cast<unsigned char>(value[i]))) ++i;
    if (i == value.size()) break;
    if (value[i] != ',') throw ConfigError("expected ',' between lists");
    ++i;
    while (i < value.size() && std::isspace(static_cast<unsigned char>(value[i]))) ++i;
  }
  return groups;
}

RunConfig parse_config(std::string_view text) {
  RunConfig c;
  std::set<std::string> seen;
  bool have_model = false;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view line =
        text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;

    if (const std::size_t hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const std::string where = "line " + std::to_string(line_no) + ": ";
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(where + "expected key = value");
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    if (!seen.insert(key).second) throw ConfigError(where + "duplicate key '" + key + "'");

    try {
      if (key == "model") {
        c.kind = parse_kind(value);
        have_model = true;
      } else if (key == "G") {
        c.G = parse_number(value);
      } else if (key == "masses") {
        c.masses = single_group(value);
      } else if (key == "positions") {
        c.positions = parse_groups(value);
      } else if (key == "velocities") {
        c.velocities = parse_groups(value);
      } else if (key == "softening") {
        if (!value.empty() && value.front() == '[')
          c.softening_matrix = parse_groups(value);
        else
          c.softening = parse_number(value);
      } else if (key == "order") {
        c.order = parse_count(value);
      } else if (key == "tol") {
        c.tol = parse_number(value);
      } else if (key == "t_end") {
        c.t_end = parse_number(value);
      } else if (key == "b") {
        c.b = parse_number(value);
      } else if (key == "out") {
        if (value.empty()) throw ConfigError("empty output path");
        c.out = std::string(value);
      } else if (key == "samples") {
        c.samples = parse_count(value);
      } else if (key == "cadence") {
        c.cadence = parse_number(value);
      } else if (key == "box") {
        c.box = parse_number(value);
      } else {
        throw ConfigError("unknown key '" + key + "'");
      }
    } catch (const ConfigError& e) {
      throw ConfigError(where + e.what());
    }
  }
  if (!have_model) throw ConfigError("model missing");
  validate(c);
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

ForceModel build_model(const RunConfig& c) {
  try {
    switch (c.kind) {
      case ModelKind::pendulum:
        return ForceModel::pendulum();
      case ModelKind::newtonian:
        return ForceModel::newtonian(BodySystem(c.masses, c.G));
      case ModelKind::softened: {
        if (c.softening) return ForceModel::softened(BodySystem::uniform(c.masses, c.G, *c.softening));
        std::vector<double> flat;
        for (const auto& row : *c.softening_matrix) flat.insert(flat.end(), row.begin(), row.end());
        return ForceModel::softened(BodySystem(c.masses, c.G, flat));
      }
    }
  } catch (const InvalidArgumentError& e) {
    throw ConfigError(e.what());
  }
  throw ConfigError("unknown model");
}

State initial_state(const RunConfig& c) {
  State s;
  for (const auto& p : c.positions) s.y.insert(s.y.end(), p.begin(), p.end());
  if (c.velocities.empty()) {
    s.v.assign(s.y.size(), 0.0);
  } else {
    for (const auto& v : c.velocities) s.v.insert(s.v.end(), v.begin(), v.end());
  }
  return s;
}

}  // namespace nbody::cli
