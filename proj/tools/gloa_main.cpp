#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gloa/fit.hpp"
#include "gloa/harness.hpp"

namespace fs = std::filesystem;
using gloa::harness::format_double;

namespace {

fs::path default_data_dir() { return fs::path(GLOA_REPO_DIR) / "data"; }
fs::path default_presets_dir() { return fs::path(GLOA_REPO_DIR) / "presets"; }

int cmd_run(const std::string& config_path, const std::vector<std::string>& overrides,
            int repeats, long long seed, bool seed_set, const std::string& output_dir,
            const std::string& data_dir, int jobs, bool quiet) {
    std::ifstream in(config_path);
    if (!in) {
        std::fprintf(stderr, "error: cannot open %s\n", config_path.c_str());
        return 1;
    }
    gloa::harness::json document;
    try {
        document = gloa::harness::json::parse(in);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s is not valid JSON: %s\n", config_path.c_str(),
                     e.what());
        return 1;
    }
    try {
        for (const std::string& assignment : overrides)
            gloa::harness::apply_override(document, assignment);
        gloa::harness::ExperimentConfig cfg = gloa::harness::parse_config(document);
        if (!document.contains("name")) cfg.name = fs::path(config_path).stem().string();
        if (repeats > 0) cfg.repeats = repeats;
        if (seed_set) cfg.gloa.seed = static_cast<std::uint64_t>(seed);

        const fs::path out = gloa::harness::resolve_output_dir(output_dir, cfg);
        const fs::path data = data_dir.empty() ? default_data_dir() : fs::path(data_dir);
        const auto result = gloa::harness::run_experiment(cfg, out, data, jobs);

        if (!quiet) {
            std::printf("experiment %s: %d run%s -> %s\n", cfg.name.c_str(), cfg.repeats,
                        cfg.repeats == 1 ? "" : "s", result.output_dir.c_str());
            for (std::size_t r = 0; r < result.reports.size(); ++r) {
                const auto& report = result.reports[r];
                std::printf("  run %zu: best %s after %d iterations (%lld evals, %s, %ss)\n",
                            r, format_double(report.best_candidate.fitness).c_str(),
                            report.iterations_run, report.evaluations,
                            gloa::to_string(report.termination),
                            format_double(report.elapsed_seconds).c_str());
            }
        }
        return 0;
    } catch (const gloa::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}

int cmd_list_presets(const std::string& presets_dir, const std::string& data_dir) {
    const fs::path dir = presets_dir.empty() ? default_presets_dir() : fs::path(presets_dir);
    const fs::path data = data_dir.empty() ? default_data_dir() : fs::path(data_dir);
    const auto presets = gloa::harness::list_presets(dir, data);
    if (presets.empty()) {
        std::printf("no presets found in %s\n", dir.c_str());
        return 0;
    }
    int bad = 0;
    for (const auto& p : presets) {
        if (p.error.empty()) {
            std::printf("%-32s %-24s repeats=%d\n", p.file.c_str(), p.objective.c_str(),
                        p.repeats);
        } else {
            std::printf("%-32s INVALID: %s\n", p.file.c_str(), p.error.c_str());
            ++bad;
        }
    }
    return bad == 0 ? 0 : 2;
}

int cmd_fit_scaling(const std::string& csv_path) {
    try {
        const auto points = gloa::harness::read_xy_csv(csv_path);
        const auto fit = gloa::fit_power_law(points);
        std::printf("samples:  %zu\n", points.size());
        std::printf("exponent: %s +/- %s\n", format_double(fit.exponent).c_str(),
                    format_double(fit.exponent_stderr).c_str());
        std::printf("prefactor: %s\n", format_double(std::exp(fit.log_intercept)).c_str());
        return 0;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Group-based stochastic optimizer and experiment harness"};
    app.require_subcommand(1);

    std::string config_path, output_dir, data_dir, presets_dir, csv_path;
    std::vector<std::string> overrides;
    int repeats = 0;
    long long seed = 0;
    int jobs = 1;
    bool quiet = false;

    CLI::App* run = app.add_subcommand("run", "Run an experiment from a JSON config");
    run->add_option("config", config_path, "Experiment config file")->required();
    run->add_option("--override", overrides,
                    "Override a config field, e.g. gloa.max_iterations=100");
    run->add_option("--repeats", repeats, "Override the number of repeats");
    CLI::Option* seed_opt = run->add_option("--seed", seed, "Override the base seed");
    run->add_option("--output-dir", output_dir, "Where to write reports");
    run->add_option("--data-dir", data_dir, "Directory with reference tables");
    run->add_option("--jobs", jobs, "Concurrent repeats")->check(CLI::PositiveNumber);
    run->add_flag("--quiet", quiet, "Suppress per-run summaries");

    CLI::App* list = app.add_subcommand("list-presets", "Validate and list preset configs");
    list->add_option("--presets-dir", presets_dir, "Directory with preset JSON files");
    list->add_option("--data-dir", data_dir, "Directory with reference tables");

    CLI::App* fit = app.add_subcommand("fit-scaling", "Fit a power law to (x, y) samples");
    fit->add_option("csv", csv_path, "Two-column CSV of (size, seconds)")->required();

    CLI11_PARSE(app, argc, argv);

    if (run->parsed())
        return cmd_run(config_path, overrides, repeats, seed, seed_opt->count() > 0,
                       output_dir, data_dir, jobs, quiet);
    if (list->parsed()) return cmd_list_presets(presets_dir, data_dir);
    if (fit->parsed()) return cmd_fit_scaling(csv_path);
    return 0;
}
