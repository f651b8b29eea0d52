#pragma once

// Run configuration: a flat text file with one `key = value` per line.
//
//   model = softened            # newtonian | softened | pendulum
//   G = 1
//   masses = [1, 1]
//   positions = [-1, 0, 0], [1, 0, 0]
//   velocities = [0, 0, 0], [0, 0, 0]
//   softening = 0.5             # or one bracketed row per body
//   t_end = 10
//
// The pendulum takes a single angle and angular velocity:
//   positions = [0.3]
//   velocities = [0]

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "nbody/forces.hpp"

namespace nbody::cli {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  ModelKind kind = ModelKind::newtonian;
  double G = 1.0;
  std::vector<double> masses;
  std::vector<std::vector<double>> positions;
  std::vector<std::vector<double>> velocities;
  std::optional<double> softening;
  std::optional<std::vector<std::vector<double>>> softening_matrix;
  std::size_t order = 20;
  std::optional<double> tol;
  std::optional<double> t_end;
  std::optional<double> b;
  std::optional<std::string> out;
  std::size_t samples = 100;
  std::optional<double> cadence;
  std::optional<double> box;
};

inline constexpr std::size_t kMinOrder = 4;
inline constexpr std::size_t kMaxOrder = 60;

/// Throws ConfigError with the offending line number.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);

ForceModel build_model(const RunConfig& config);
State initial_state(const RunConfig& config);

/// "[1, 2], [3, 4]" -> {{1, 2}, {3, 4}}; "1, 2" -> {{1, 2}}.
std::vector<std::vector<double>> parse_groups(std::string_view value);

}  // namespace nbody::cli
