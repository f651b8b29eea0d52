#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "nbody/symmetry.hpp"
#include "nbody_cli/config.hpp"

namespace nbody::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 1,
  kExitCollision = 2,
  kExitVerifyFailed = 3,
};

/// Rows per run when the config has no cadence.
inline constexpr std::size_t kDefaultRows = 64;
/// Pass threshold of the parity command.
inline constexpr double kParityTolerance = 1e-5;
/// Integrator tolerance inside verify; the config's tol is the pass bar.
inline constexpr double kVerifyStepTol = 1e-12;
inline constexpr double kDefaultVerifyTol = 1e-9;
inline constexpr double kDefaultSimulateTol = 1e-10;

struct CommandContext {
  RunConfig config;
  /// --out, else the config's out; stdout when neither is set.
  std::optional<std::string> out;
  SymmetryKind kind = SymmetryKind::even;
  std::uint64_t seed = 0;
  std::ostream* stdout_stream = nullptr;
  std::ostream* stderr_stream = nullptr;
};

int cmd_simulate(const CommandContext& ctx);
int cmd_coeffs(const CommandContext& ctx);
int cmd_verify(const CommandContext& ctx);
int cmd_radius(const CommandContext& ctx);
int cmd_parity(const CommandContext& ctx);

/// Full command line: `nbody <command> --config <path> [--out <path>]
/// [--kind even|odd]`. Returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err);

}  // namespace nbody::cli
