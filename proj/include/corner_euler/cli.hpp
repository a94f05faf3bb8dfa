#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "corner_euler/domain.hpp"
#include "corner_euler/flow.hpp"
#include "corner_euler/vorticity.hpp"

namespace corner_euler::cli {

enum class Command {
  simulate,
  verify_kernel,
  verify_map,
  verify_velocity,
  verify_k3,
  gronwall,
  boundary,
  w1p,
  all_checks,
};

std::string to_string(Command c);
Command command_from_string(const std::string& name);

/// Invalid configuration. The message starts with the JSON path of the
/// offending field, e.g. "domain.theta0: ...".
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct PatchSource {
  Patch patch;
  double resolution = 32.0;
  int subdivisions = 4;
};

struct VortexSource {
  Vec2 position;  // disk coordinates
  double circulation = 1.0;
};

using VorticitySource = std::variant<PatchSource, VortexSource>;

struct CheckParams {
  std::size_t identity_samples = 100000;
  std::size_t kernel_samples = 1000000;
  std::size_t k3_pairs = 48;
  std::size_t k3_resolution = 256;
  double k3_stability = 0.10;
  std::size_t velocity_samples = 20000;
  std::vector<double> w1p_p = {2.0, 4.0, 8.0, 16.0};
  std::size_t w1p_grid = 512;
  std::vector<double> gronwall_d0 = {1e-2, 1e-3, 1e-4};
  std::vector<double> boundary_margins = {0.1, 0.01};
  std::size_t boundary_tracers_per_margin = 8;
};

struct RunConfig {
  Command command = Command::simulate;
  std::uint64_t seed = 1;
  std::string output_dir = "corner_euler_out";
  DomainSpec domain;
  std::vector<VorticitySource> vorticity;
  std::vector<Vec2> disk_tracers;
  std::vector<Vec2> physical_tracers;
  FlowConfig flow;
  bool snapshots = false;
  CheckParams checks;
  /// Canonical JSON of the fully resolved configuration.
  std::string resolved_json;
};

/// Parses and validates a JSON config. `command` overrides the config's
/// command field. Throws ConfigError before any computation.
RunConfig parse_config(const std::string& json_text,
                       const std::optional<std::string>& command = std::nullopt);

/// Runs the configured command and writes its outputs. Returns 0 when every
/// executed check passes and 1 otherwise. Throws on runtime failure after
/// removing anything it wrote.
int run(const RunConfig& cfg, std::ostream& log);

/// Entry point used by the corner-euler executable. Exit codes: 0 all
/// checks pass, 1 a check failed, 2 invalid usage or configuration,
/// 3 runtime failure.
int main(int argc, char** argv);

}  // namespace corner_euler::cli
