#include "gloa/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include "gloa/benchmarks.hpp"
#include "gloa/lj.hpp"
#include "gloa/quantum.hpp"

namespace gloa::harness {

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& what) {
    throw ConfigError(field + ": " + what);
}

void expect_keys(const json& j, const std::string& section,
                 const std::set<std::string>& allowed) {
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (!allowed.count(key))
            fail(section.empty() ? key : section + "." + key, "unknown field");
    }
}

Rate parse_rate(const json& j, const std::string& field) {
    if (j.is_number()) return Rate::fixed(j.get<double>());
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return Rate::interval(j[0].get<double>(), j[1].get<double>());
    fail(field, "expected a number or [lo, hi]");
}

json rate_to_json(const Rate& r) {
    if (r.is_fixed()) return r.lo();
    return json::array({r.lo(), r.hi()});
}

std::vector<Interval> parse_bounds(const json& j, const std::string& field) {
    std::vector<Interval> bounds;
    if (!j.is_array()) fail(field, "expected an array of [lo, hi] pairs");
    for (const auto& item : j) {
        if (!item.is_array() || item.size() != 2 || !item[0].is_number() ||
            !item[1].is_number())
            fail(field, "expected [lo, hi] pairs");
        bounds.push_back({item[0].get<double>(), item[1].get<double>()});
    }
    return bounds;
}

GloaConfig parse_gloa(const json& j) {
    expect_keys(j, "gloa",
                {"n_groups", "group_size", "r1", "r2", "r3", "complementary_r2",
                 "bounds", "bound_policy", "random_term", "noise_sharing",
                 "mutate_transfers", "max_iterations", "target_fitness",
                 "target_tolerance", "seed", "threads"});
    GloaConfig cfg;
    auto get_int = [&](const char* key, int& out) {
        if (!j.contains(key)) return;
        if (!j[key].is_number_integer()) fail(std::string("gloa.") + key, "expected an integer");
        out = j[key].get<int>();
    };
    auto get_bool = [&](const char* key, bool& out) {
        if (!j.contains(key)) return;
        if (!j[key].is_boolean()) fail(std::string("gloa.") + key, "expected a boolean");
        out = j[key].get<bool>();
    };
    get_int("n_groups", cfg.n_groups);
    get_int("group_size", cfg.group_size);
    get_int("max_iterations", cfg.max_iterations);
    get_int("threads", cfg.threads);
    if (j.contains("r1")) cfg.r1 = parse_rate(j["r1"], "gloa.r1");
    if (j.contains("r2")) cfg.r2 = parse_rate(j["r2"], "gloa.r2");
    if (j.contains("r3")) cfg.r3 = parse_rate(j["r3"], "gloa.r3");
    get_bool("complementary_r2", cfg.complementary_r2);
    get_bool("mutate_transfers", cfg.mutate_transfers);
    if (j.contains("bounds")) cfg.bounds = parse_bounds(j["bounds"], "gloa.bounds");
    if (j.contains("bound_policy")) {
        const auto s = j["bound_policy"].is_string() ? j["bound_policy"].get<std::string>() : "";
        if (s == "clip") cfg.bound_policy = BoundPolicy::clip;
        else if (s == "free_after_init") cfg.bound_policy = BoundPolicy::free_after_init;
        else fail("gloa.bound_policy", "expected \"clip\" or \"free_after_init\"");
    }
    if (j.contains("random_term")) {
        const auto s = j["random_term"].is_string() ? j["random_term"].get<std::string>() : "";
        if (s == "uniform_in_bounds") cfg.random_term = RandomTerm::uniform_in_bounds;
        else if (s == "signed_unit") cfg.random_term = RandomTerm::signed_unit;
        else fail("gloa.random_term", "expected \"uniform_in_bounds\" or \"signed_unit\"");
    }
    if (j.contains("noise_sharing")) {
        const auto s = j["noise_sharing"].is_string() ? j["noise_sharing"].get<std::string>() : "";
        if (s == "per_coordinate") cfg.noise_sharing = NoiseSharing::per_coordinate;
        else if (s == "per_member") cfg.noise_sharing = NoiseSharing::per_member;
        else fail("gloa.noise_sharing", "expected \"per_coordinate\" or \"per_member\"");
    }
    if (j.contains("target_fitness")) {
        if (j["target_fitness"].is_null()) cfg.target_fitness.reset();
        else if (j["target_fitness"].is_number())
            cfg.target_fitness = j["target_fitness"].get<double>();
        else fail("gloa.target_fitness", "expected a number or null");
    }
    if (j.contains("target_tolerance")) {
        if (!j["target_tolerance"].is_number())
            fail("gloa.target_tolerance", "expected a number");
        cfg.target_tolerance = j["target_tolerance"].get<double>();
    }
    if (j.contains("seed")) {
        if (!j["seed"].is_number_unsigned() && !j["seed"].is_number_integer())
            fail("gloa.seed", "expected an integer");
        cfg.seed = j["seed"].get<std::uint64_t>();
    }
    return cfg;
}

json gloa_to_json(const GloaConfig& cfg) {
    json j;
    j["n_groups"] = cfg.n_groups;
    j["group_size"] = cfg.group_size;
    j["r1"] = rate_to_json(cfg.r1);
    j["r2"] = rate_to_json(cfg.r2);
    j["r3"] = rate_to_json(cfg.r3);
    if (cfg.complementary_r2) j["complementary_r2"] = true;
    if (!cfg.bounds.empty()) {
        json b = json::array();
        for (const Interval& iv : cfg.bounds) b.push_back({iv.lo, iv.hi});
        j["bounds"] = b;
    }
    j["bound_policy"] =
        cfg.bound_policy == BoundPolicy::clip ? "clip" : "free_after_init";
    j["random_term"] = cfg.random_term == RandomTerm::uniform_in_bounds
                           ? "uniform_in_bounds"
                           : "signed_unit";
    j["noise_sharing"] = cfg.noise_sharing == NoiseSharing::per_coordinate
                             ? "per_coordinate"
                             : "per_member";
    if (cfg.mutate_transfers) j["mutate_transfers"] = true;
    j["max_iterations"] = cfg.max_iterations;
    if (cfg.target_fitness) j["target_fitness"] = *cfg.target_fitness;
    j["target_tolerance"] = cfg.target_tolerance;
    j["seed"] = cfg.seed;
    if (cfg.threads != 1) j["threads"] = cfg.threads;
    return j;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
}

std::string trajectory_csv(const RunReport& report) {
    std::string s = "iteration,best_fitness\n";
    for (std::size_t i = 0; i < report.best_fitness_per_iteration.size(); ++i) {
        s += std::to_string(i);
        s += ',';
        s += format_double(report.best_fitness_per_iteration[i]);
        s += '\n';
    }
    return s;
}

} // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

ExperimentConfig parse_config(const json& j) {
    if (!j.is_object()) throw ConfigError("config: expected a JSON object");
    expect_keys(j, "",
                {"name", "objective", "gloa", "repeats", "output_dir", "reports"});
    ExperimentConfig cfg;
    if (j.contains("name")) {
        if (!j["name"].is_string()) fail("name", "expected a string");
        cfg.name = j["name"].get<std::string>();
    }
    if (!j.contains("objective") || !j["objective"].is_object() ||
        !j["objective"].contains("name"))
        fail("objective", "expected an object with a \"name\" field");
    cfg.objective = j["objective"];
    if (j.contains("gloa")) {
        if (!j["gloa"].is_object()) fail("gloa", "expected an object");
        cfg.gloa = parse_gloa(j["gloa"]);
    }
    if (j.contains("repeats")) {
        if (!j["repeats"].is_number_integer() || j["repeats"].get<int>() < 1)
            fail("repeats", "expected a positive integer");
        cfg.repeats = j["repeats"].get<int>();
    }
    if (j.contains("output_dir")) {
        if (!j["output_dir"].is_string()) fail("output_dir", "expected a string");
        cfg.output_dir = j["output_dir"].get<std::string>();
    }
    if (j.contains("reports")) {
        const json& r = j["reports"];
        expect_keys(r, "reports", {"trajectory", "summary", "encounter"});
        auto get = [&](const char* key, bool& out) {
            if (!r.contains(key)) return;
            if (!r[key].is_boolean()) fail(std::string("reports.") + key, "expected a boolean");
            out = r[key].get<bool>();
        };
        get("trajectory", cfg.reports.trajectory);
        get("summary", cfg.reports.summary);
        get("encounter", cfg.reports.encounter);
    }
    return cfg;
}

json to_json(const ExperimentConfig& cfg) {
    json j;
    j["name"] = cfg.name;
    j["objective"] = cfg.objective;
    j["gloa"] = gloa_to_json(cfg.gloa);
    j["repeats"] = cfg.repeats;
    if (!cfg.output_dir.empty()) j["output_dir"] = cfg.output_dir;
    j["reports"] = {{"trajectory", cfg.reports.trajectory},
                    {"summary", cfg.reports.summary},
                    {"encounter", cfg.reports.encounter}};
    return j;
}

ExperimentConfig load_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config: " + path.string() + " is not valid JSON: " + e.what());
    }
    ExperimentConfig cfg = parse_config(j);
    if (!j.contains("name")) cfg.name = path.stem().string();
    return cfg;
}

void apply_override(json& document, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0)
        throw ConfigError("override: expected key.path=value, got \"" + assignment + "\"");
    const std::string path = assignment.substr(0, eq);
    const std::string raw = assignment.substr(eq + 1);
    json value;
    try {
        value = json::parse(raw);
    } catch (const json::parse_error&) {
        value = raw; // bare strings are taken verbatim
    }
    json* node = &document;
    std::istringstream keys(path);
    std::string key;
    std::vector<std::string> parts;
    while (std::getline(keys, key, '.')) {
        if (key.empty())
            throw ConfigError("override: empty key segment in \"" + path + "\"");
        parts.push_back(key);
    }
    for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
        if (!node->is_object()) throw ConfigError("override: " + path + " does not resolve");
        node = &(*node)[parts[i]];
    }
    if (!node->is_object()) throw ConfigError("override: " + path + " does not resolve");
    (*node)[parts.back()] = value;
}

BuiltObjective build_objective(const json& spec, const std::filesystem::path& data_dir) {
    if (!spec.is_object() || !spec.contains("name") || !spec["name"].is_string())
        fail("objective.name", "expected a string");
    const std::string name = spec["name"].get<std::string>();

    const auto& benchmarks = bench::benchmark_registry();
    if (const auto it = benchmarks.find(name); it != benchmarks.end()) {
        expect_keys(spec, "objective", {"name", "dimension"});
        int dim = it->second.default_dimension;
        if (spec.contains("dimension")) {
            if (!spec["dimension"].is_number_integer())
                fail("objective.dimension", "expected an integer");
            dim = spec["dimension"].get<int>();
        }
        BuiltObjective built;
        built.objective = it->second.make_objective(dim);
        return built;
    }

    if (name == "lj") {
        expect_keys(spec, "objective", {"name", "n_particles", "incremental", "lamarckian"});
        if (!spec.contains("n_particles") || !spec["n_particles"].is_number_integer())
            fail("objective.n_particles", "expected an integer");
        const int n = spec["n_particles"].get<int>();
        if (n < 2) fail("objective.n_particles", "must be at least 2");
        BuiltObjective built;
        built.objective = std::make_unique<lj::ClusterObjective>(n);
        built.lj_particles = n;
        if (spec.contains("incremental")) {
            if (!spec["incremental"].is_boolean())
                fail("objective.incremental", "expected a boolean");
            built.lj_incremental = spec["incremental"].get<bool>();
        }
        if (spec.contains("lamarckian")) {
            if (!spec["lamarckian"].is_boolean())
                fail("objective.lamarckian", "expected a boolean");
            built.lj_lamarckian = spec["lamarckian"].get<bool>();
        }
        built.artifacts = [](const RunReport& report, const std::filesystem::path& stem) {
            lj::ClusterGeometry g;
            g.coords = report.best_candidate.values;
            std::ofstream out(stem.string() + ".xyz");
            lj::write_xyz(out, g, "energy " + format_double(report.best_candidate.fitness));
        };
        return built;
    }

    if (name == "grover_diffusion" || name == "unitary_file") {
        expect_keys(spec, "objective",
                    {"name", "n_qubits", "path", "max_gates", "alpha", "beta"});
        int max_gates = 8;
        double alpha = 0.9, beta = 0.1;
        if (spec.contains("max_gates")) {
            if (!spec["max_gates"].is_number_integer())
                fail("objective.max_gates", "expected an integer");
            max_gates = spec["max_gates"].get<int>();
        }
        if (spec.contains("alpha")) alpha = spec["alpha"].get<double>();
        if (spec.contains("beta")) beta = spec["beta"].get<double>();

        qc::UnitaryMatrix target;
        int n_qubits = 0;
        if (name == "grover_diffusion") {
            if (!spec.contains("n_qubits") || !spec["n_qubits"].is_number_integer())
                fail("objective.n_qubits", "expected an integer");
            n_qubits = spec["n_qubits"].get<int>();
            if (n_qubits < 1) fail("objective.n_qubits", "must be at least 1");
            target = qc::grover_diffusion(n_qubits);
        } else {
            if (!spec.contains("path") || !spec["path"].is_string())
                fail("objective.path", "expected a file path");
            auto path = std::filesystem::path(spec["path"].get<std::string>());
            if (path.is_relative()) path = data_dir / path;
            target = qc::load_unitary_file(path.string());
            n_qubits = 0;
            for (int order = target.order(); order > 1; order >>= 1) ++n_qubits;
        }

        auto objective = std::make_unique<qc::SynthesisObjective>(
            std::move(target), n_qubits, max_gates, alpha, beta);
        const qc::SynthesisObjective* raw = objective.get();
        BuiltObjective built;
        built.objective = std::move(objective);
        built.artifacts = [raw](const RunReport& report, const std::filesystem::path& stem) {
            const auto genome = raw->decode(report.best_candidate.values);
            std::ofstream out(stem.string() + ".circuit.txt");
            qc::write_circuit(out, genome);
        };
        return built;
    }

    fail("objective.name", "unknown objective \"" + name + "\"");
}

std::filesystem::path resolve_output_dir(const std::string& flag_value,
                                         const ExperimentConfig& cfg) {
    if (!flag_value.empty()) return flag_value;
    if (!cfg.output_dir.empty()) return cfg.output_dir;
    if (const char* env = std::getenv(kOutputDirEnvVar); env && *env) return env;
    return "gloa-out";
}

ExperimentResult run_experiment(const ExperimentConfig& cfg,
                                const std::filesystem::path& output_dir,
                                const std::filesystem::path& data_dir, int jobs) {
    BuiltObjective built = build_objective(cfg.objective, data_dir);
    validate(cfg.gloa, *built.objective);

    std::optional<lj::ReferenceMinima> reference;
    if (built.lj_particles > 0) {
        reference = lj::ReferenceMinima::load((data_dir / "lj_reference_minima.txt").string());
        if (!reference->contains(built.lj_particles))
            fail("objective.n_particles",
                 "no reference energy for n=" + std::to_string(built.lj_particles));
    }

    ExperimentResult result;
    result.output_dir = output_dir / cfg.name;
    std::filesystem::create_directories(result.output_dir);
    result.reports.resize(static_cast<std::size_t>(cfg.repeats));

    auto execute_one = [&](int r) {
        GloaConfig run_cfg = cfg.gloa;
        run_cfg.seed = cfg.gloa.seed + static_cast<std::uint64_t>(r);
        if (built.lj_incremental) {
            GloaConfig base = run_cfg;
            base.target_fitness.reset();
            const int first = std::min(5, built.lj_particles);
            auto stages = lj::incremental_chain(first, built.lj_particles, base,
                                                *reference, run_cfg.seed, 0.5,
                                                built.lj_lamarckian);
            RunReport combined = stages.back().report;
            combined.evaluations = 0;
            combined.elapsed_seconds = 0.0;
            for (const auto& stage : stages) {
                combined.evaluations +=
                    stage.report.evaluations + stage.discarded_evaluations;
                combined.elapsed_seconds += stage.report.elapsed_seconds;
            }
            result.reports[static_cast<std::size_t>(r)] = std::move(combined);
            return;
        }
        if (built.lj_particles > 0 && !run_cfg.target_fitness)
            run_cfg.target_fitness = reference->at(built.lj_particles);
        RunHooks hooks;
        if (built.lj_lamarckian) hooks.leader_refiner = lj::lamarckian_refiner();
        result.reports[static_cast<std::size_t>(r)] =
            run(run_cfg, *built.objective, hooks);
    };

    if (jobs <= 1) {
        for (int r = 0; r < cfg.repeats; ++r) execute_one(r);
    } else {
        std::atomic<int> next{0};
        std::vector<std::exception_ptr> errors(static_cast<std::size_t>(cfg.repeats));
        std::vector<std::thread> pool;
        const int workers = std::min(jobs, cfg.repeats);
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (int r = next.fetch_add(1); r < cfg.repeats; r = next.fetch_add(1)) {
                    try {
                        execute_one(r);
                    } catch (...) {
                        errors[static_cast<std::size_t>(r)] = std::current_exception();
                    }
                }
            });
        }
        for (auto& t : pool) t.join();
        for (const auto& e : errors)
            if (e) std::rethrow_exception(e);
    }

    for (int r = 0; r < cfg.repeats; ++r) {
        const RunReport& report = result.reports[static_cast<std::size_t>(r)];
        const auto stem = result.output_dir / ("run" + std::to_string(r));
        if (cfg.reports.trajectory)
            write_file(result.output_dir / ("trajectory_run" + std::to_string(r) + ".csv"),
                       trajectory_csv(report));
        if (built.artifacts) built.artifacts(report, stem);
    }

    if (cfg.reports.summary) {
        std::string s = "run,final_fitness,iterations,evaluations,seconds,termination\n";
        for (int r = 0; r < cfg.repeats; ++r) {
            const RunReport& report = result.reports[static_cast<std::size_t>(r)];
            s += std::to_string(r) + ',' + format_double(report.best_candidate.fitness) +
                 ',' + std::to_string(report.iterations_run) + ',' +
                 std::to_string(report.evaluations) + ',' +
                 format_double(report.elapsed_seconds) + ',' +
                 to_string(report.termination) + '\n';
        }
        write_file(result.output_dir / "summary.csv", s);
    }

    if (cfg.reports.encounter) {
        std::string s = "run,iterations,seconds,censored\n";
        for (int r = 0; r < cfg.repeats; ++r) {
            const RunReport& report = result.reports[static_cast<std::size_t>(r)];
            const bool censored = report.termination != Termination::target_reached;
            s += std::to_string(r) + ',' + std::to_string(report.iterations_run) + ',' +
                 format_double(report.elapsed_seconds) + ',' +
                 (censored ? "1" : "0") + '\n';
        }
        write_file(result.output_dir / "encounter.csv", s);
    }

    return result;
}

std::vector<std::pair<double, double>> read_xy_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::vector<std::pair<double, double>> points;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream fields(line);
        double x = 0.0, y = 0.0;
        if (fields >> x >> y) {
            points.emplace_back(x, y);
        } else if (line_no > 1 || points.empty()) {
            // header row tolerated on the first line only
            if (line_no > 1)
                throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                                         ": expected two numeric columns");
        }
    }
    return points;
}

std::vector<PresetInfo> list_presets(const std::filesystem::path& presets_dir,
                                     const std::filesystem::path& data_dir) {
    std::vector<std::filesystem::path> files;
    if (std::filesystem::is_directory(presets_dir))
        for (const auto& entry : std::filesystem::directory_iterator(presets_dir))
            if (entry.path().extension() == ".json") files.push_back(entry.path());
    std::sort(files.begin(), files.end());

    std::vector<PresetInfo> infos;
    for (const auto& file : files) {
        PresetInfo info;
        info.file = file.filename().string();
        try {
            const ExperimentConfig cfg = load_config_file(file);
            BuiltObjective built = build_objective(cfg.objective, data_dir);
            validate(cfg.gloa, *built.objective);
            info.name = cfg.name;
            info.objective = built.objective->name();
            info.repeats = cfg.repeats;
        } catch (const std::exception& e) {
            info.error = e.what();
        }
        infos.push_back(std::move(info));
    }
    return infos;
}

} // namespace gloa::harness
