#pragma once

#include <filesystem>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "gloa/config.hpp"
#include "gloa/engine.hpp"
#include "gloa/objective.hpp"

namespace gloa::harness {

using json = nlohmann::json;

struct ReportFlags {
    bool trajectory = true;
    bool summary = true;
    bool encounter = false;

    bool operator==(const ReportFlags&) const = default;
};

/// One experiment: an objective, solver settings and reporting options.
struct ExperimentConfig {
    std::string name = "experiment";
    json objective = json::object();
    GloaConfig gloa;
    int repeats = 1;
    std::string output_dir; ///< empty: --output-dir flag, env, or default
    ReportFlags reports;
};

/// Strict parser; unknown keys and malformed values raise ConfigError
/// naming the offending field.
ExperimentConfig parse_config(const json& j);
json to_json(const ExperimentConfig& cfg);
ExperimentConfig load_config_file(const std::filesystem::path& path);

/// Applies "dotted.path=value" onto the raw config document; the value is
/// parsed as JSON when possible, else taken as a string.
void apply_override(json& document, const std::string& assignment);

/// Objective plus the glue the harness needs around it.
struct BuiltObjective {
    std::unique_ptr<Objective> objective;
    /// Writes objective-specific artifacts for one finished run.
    std::function<void(const RunReport&, const std::filesystem::path& stem)> artifacts;
    bool lj_incremental = false;
    bool lj_lamarckian = false;
    int lj_particles = 0;
};

/// Instantiates the objective named in the spec section. Needs data_dir
/// to resolve reference tables and target files.
BuiltObjective build_objective(const json& objective_spec,
                               const std::filesystem::path& data_dir);

struct ExperimentResult {
    std::vector<RunReport> reports;
    std::filesystem::path output_dir;
};

/// Runs repeats with seeds gloa.seed+0..repeats-1 and writes the
/// configured reports. jobs > 1 runs repeats concurrently; outputs are
/// identical for any job count.
ExperimentResult run_experiment(const ExperimentConfig& cfg,
                                const std::filesystem::path& output_dir,
                                const std::filesystem::path& data_dir, int jobs = 1);

/// Environment variable consulted for the default output directory.
inline constexpr const char* kOutputDirEnvVar = "GLOA_OUTPUT_DIR";

/// Resolution order: explicit flag, config field, environment, "gloa-out".
std::filesystem::path resolve_output_dir(const std::string& flag_value,
                                         const ExperimentConfig& cfg);

/// Formats a double with enough digits to round-trip exactly.
std::string format_double(double v);

/// Reads a two-column (x, y) CSV with optional header for fit-scaling.
std::vector<std::pair<double, double>> read_xy_csv(const std::filesystem::path& path);

struct PresetInfo {
    std::string file;
    std::string name;
    std::string objective;
    int repeats = 0;
    std::string error; ///< non-empty when the file failed validation
};

/// Parses every *.json in the directory, sorted by filename.
std::vector<PresetInfo> list_presets(const std::filesystem::path& presets_dir,
                                     const std::filesystem::path& data_dir);

} // namespace gloa::harness
