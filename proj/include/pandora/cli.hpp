#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "pandora/bounds.hpp"
#include "pandora/society.hpp"

namespace pandora {

inline constexpr std::string_view kEngineVersion = "0.3.0";

// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitBoundsViolated = 1;
inline constexpr int kExitInvalidConfig = 2;
inline constexpr int kExitRuntimeFailure = 3;

struct ExperimentPreset {
  std::string name = "experiment";
  std::vector<WorldConfig> configs;
  // Empty means the default geometric grid (20 points per decade).
  std::vector<std::int64_t> rounds_grid;
  std::filesystem::path output = ".";
  bool check_bounds = false;

  void validate() const;
  /// Checkpoints used for `config`: the explicit grid clipped to its rounds,
  /// or the default grid.
  std::vector<std::int64_t> grid_for(const WorldConfig& config) const;
};

std::vector<std::string> preset_names();
/// Throws DomainError for an unknown name.
ExperimentPreset builtin_preset(std::string_view name);

/// Parses the declarative `key = value` format. Experiment keys sit at the
/// top; every [world] section expands its `sigma` and `cost` lists into
/// one WorldConfig per (cost, sigma) pair.
ExperimentPreset parse_config_text(std::string_view text);

nlohmann::json to_sidecar_json(const ExperimentPreset& preset, double wall_time_seconds);
ExperimentPreset from_sidecar_json(const nlohmann::json& sidecar);

/// Reads either a JSON sidecar or a `key = value` file.
ExperimentPreset load_config_file(const std::filesystem::path& path);

inline constexpr std::string_view kCsvHeader =
    "sigma,T,mean_avg_utility,se_avg_utility,alt_convention_utility,mean_max_quality,"
    "se_max_quality,mean_items_explored,runs,seed,model,cost,diamond_p,diamond_D";

std::string format_number(double value);
std::string curves_to_csv(const std::vector<WorldConfig>& configs,
                          const std::vector<std::vector<CurvePoint>>& curves);
std::string bounds_to_csv(const std::vector<BoundReport>& reports);

struct ExperimentResult {
  std::filesystem::path csv_path;
  std::filesystem::path sidecar_path;
  std::optional<std::filesystem::path> bounds_path;
  std::vector<std::vector<CurvePoint>> curves;
  std::vector<BoundReport> reports;
  bool bounds_satisfied = true;
};

/// Runs every configuration and writes <output>/<name>.csv plus the JSON
/// sidecar (and <name>_bounds.csv when bounds are checked).
ExperimentResult run_experiment(const ExperimentPreset& preset, std::size_t workers);

/// Entry point of the command-line tool; returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace pandora
