#include "gloa/lj.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include "gloa/fit.hpp"

namespace gloa::lj {

namespace {

std::uint64_t stage_seed(std::uint64_t seed, int n_particles) {
    return detail::mix64(seed ^ detail::mix64(static_cast<std::uint64_t>(n_particles)));
}

} // namespace

CoincidentParticles::CoincidentParticles(int i, int j)
    : std::runtime_error("coincident particles " + std::to_string(i) + " and " +
                         std::to_string(j)),
      first(i), second(j) {}

double lj_energy(std::span<const double> coords) {
    const int n = static_cast<int>(coords.size() / 3);
    constexpr double s_min = kCoincidenceDistance * kCoincidenceDistance;
    double energy = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double dx = coords[3 * i] - coords[3 * j];
            const double dy = coords[3 * i + 1] - coords[3 * j + 1];
            const double dz = coords[3 * i + 2] - coords[3 * j + 2];
            const double s = dx * dx + dy * dy + dz * dz;
            if (s < s_min) throw CoincidentParticles(i, j);
            const double inv6 = 1.0 / (s * s * s);
            energy += 4.0 * (inv6 * inv6 - inv6);
        }
    }
    return energy;
}

std::vector<double> lj_gradient(std::span<const double> coords) {
    const int n = static_cast<int>(coords.size() / 3);
    constexpr double s_min = kCoincidenceDistance * kCoincidenceDistance;
    std::vector<double> grad(coords.size(), 0.0);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double dx = coords[3 * i] - coords[3 * j];
            const double dy = coords[3 * i + 1] - coords[3 * j + 1];
            const double dz = coords[3 * i + 2] - coords[3 * j + 2];
            const double s = dx * dx + dy * dy + dz * dz;
            if (s < s_min) throw CoincidentParticles(i, j);
            const double inv = 1.0 / s;
            const double inv3 = inv * inv * inv;
            // d/dx of 4*(s^-6 - s^-3) with s = r^2
            const double scale = 24.0 * inv3 * inv * (1.0 - 2.0 * inv3);
            grad[3 * i] += scale * dx;
            grad[3 * i + 1] += scale * dy;
            grad[3 * i + 2] += scale * dz;
            grad[3 * j] -= scale * dx;
            grad[3 * j + 1] -= scale * dy;
            grad[3 * j + 2] -= scale * dz;
        }
    }
    return grad;
}

MinimizeResult local_minimize(const ClusterGeometry& start, int max_steps,
                              double tolerance) {
    MinimizeResult result;
    result.geometry = start;
    result.energy = lj_energy(result.geometry.coords);

    auto energy_or_inf = [](std::span<const double> coords) {
        try {
            return lj_energy(coords);
        } catch (const CoincidentParticles&) {
            return std::numeric_limits<double>::infinity();
        }
    };

    double step = 1e-3;
    std::vector<double> trial(start.coords.size());
    for (int it = 0; it < max_steps; ++it) {
        const auto grad = lj_gradient(result.geometry.coords);
        double norm_sq = 0.0;
        for (double g : grad) norm_sq += g * g;
        result.gradient_norm = std::sqrt(norm_sq);
        result.steps = it;
        if (result.gradient_norm < tolerance) return result;

        // Armijo backtracking along the steepest descent direction.
        constexpr double c_armijo = 1e-4;
        bool accepted = false;
        for (int shrink = 0; shrink < 60; ++shrink) {
            for (std::size_t k = 0; k < trial.size(); ++k)
                trial[k] = result.geometry.coords[k] - step * grad[k];
            const double e = energy_or_inf(trial);
            if (e <= result.energy - c_armijo * step * norm_sq) {
                result.geometry.coords = trial;
                result.energy = e;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) return result; // no descent step at machine scale
        step = std::min(step * 2.0, 1.0);
    }
    result.steps = max_steps;
    return result;
}

ClusterObjective::ClusterObjective(int n_particles, Interval initial_box)
    : n_(n_particles), box_(initial_box) {
    if (n_particles < 2)
        throw ConfigError("n_particles: a cluster needs at least 2 particles");
}

std::size_t ClusterObjective::dimension() const {
    return 3 * static_cast<std::size_t>(n_);
}

std::vector<Interval> ClusterObjective::domain() const {
    return std::vector<Interval>(dimension(), box_);
}

double ClusterObjective::evaluate(std::span<const double> x) const {
    try {
        return lj_energy(x);
    } catch (const CoincidentParticles&) {
        return std::numeric_limits<double>::infinity();
    }
}

std::string ClusterObjective::name() const {
    return "lj" + std::to_string(n_);
}

ReferenceMinima ReferenceMinima::load(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("reference minima: cannot open " + path);
    return parse(in, path);
}

ReferenceMinima ReferenceMinima::parse(std::istream& in, const std::string& origin) {
    ReferenceMinima table;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        std::istringstream fields(line);
        int n = 0;
        double energy = 0.0;
        if (!(fields >> n)) continue; // blank or comment-only line
        const auto where = origin + ":" + std::to_string(line_no);
        if (!(fields >> energy))
            throw std::runtime_error("reference minima: malformed line at " + where);
        if (n < 2)
            throw std::runtime_error("reference minima: particle count below 2 at " + where);
        if (table.energy_.count(n))
            throw std::runtime_error("reference minima: duplicate entry at " + where);
        table.energy_[n] = energy;
    }
    // Physical sanity: adding a particle always lowers the minimum energy.
    double prev = std::numeric_limits<double>::infinity();
    for (const auto& [n, e] : table.energy_) {
        if (!(e < prev))
            throw std::runtime_error(
                "reference minima: energies must strictly decrease with size (" +
                origin + ", n=" + std::to_string(n) + ")");
        prev = e;
    }
    return table;
}

double ReferenceMinima::at(int n) const {
    const auto it = energy_.find(n);
    if (it == energy_.end())
        throw std::out_of_range("reference minima: no entry for n=" + std::to_string(n));
    return it->second;
}

MemberInitializer seeded_initializer(const ClusterGeometry& solved, double fraction,
                                     int group_size) {
    const int seeded = std::clamp(
        static_cast<int>(std::lround(fraction * group_size)), 0, group_size);
    // Bounding box of the solved geometry, widened by one unit on each side.
    std::array<Interval, 3> box;
    for (int axis = 0; axis < 3; ++axis) {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -std::numeric_limits<double>::infinity();
        for (int i = 0; i < solved.particle_count(); ++i) {
            lo = std::min(lo, solved.coords[3 * i + axis]);
            hi = std::max(hi, solved.coords[3 * i + axis]);
        }
        box[axis] = {lo - 1.0, hi + 1.0};
    }
    std::vector<double> base = solved.coords;
    return [seeded, box, base](int, int member, SplitRng& rng)
               -> std::optional<std::vector<double>> {
        if (member >= seeded) return std::nullopt;
        std::vector<double> values = base;
        for (int axis = 0; axis < 3; ++axis)
            values.push_back(rng.uniform(box[axis].lo, box[axis].hi));
        return values;
    };
}

LeaderRefiner lamarckian_refiner(int max_steps, double tolerance) {
    return [max_steps, tolerance](std::span<const double> values)
               -> std::optional<std::vector<double>> {
        ClusterGeometry g;
        g.coords.assign(values.begin(), values.end());
        try {
            return local_minimize(g, max_steps, tolerance).geometry.coords;
        } catch (const CoincidentParticles&) {
            return std::nullopt; // degenerate leader, nothing to refine
        }
    };
}

GloaConfig cluster_preset(int n_particles) {
    GloaConfig cfg;
    cfg.n_groups = 15;
    cfg.group_size = 30;
    cfg.r1 = Rate::interval(0.85, 0.95);
    cfg.complementary_r2 = true;
    cfg.r3 = Rate::interval(0.0001, 0.001);
    cfg.random_term = RandomTerm::signed_unit;
    cfg.mutate_transfers = true;
    cfg.bound_policy = BoundPolicy::free_after_init;
    cfg.bounds.assign(3 * static_cast<std::size_t>(n_particles), Interval{-2.0, 2.0});
    cfg.max_iterations = 3000;
    cfg.target_tolerance = 1e-3;
    return cfg;
}

namespace {

// A stage may grow from two competing cores: the previous stage's winner
// and, when the previous stage needed a restart, the basin it abandoned.
// Carrying the loser forward matters because the best (n-1)-particle core
// is not always the fragment the n-particle minimum grows from.
struct StageOutcome {
    StageResult stage;
    std::optional<ClusterGeometry> alternate;
};

// One chain stage with a known or unknown target. Attempts run in order:
// seeded from each available prior, then cold restarts, stopping as soon as
// the target is reached. Without a target there is nothing to judge a
// retry by, so exactly one attempt runs. The reported result is the best
// attempt; the best distinct loser is kept as the next stage's alternate.
StageOutcome run_chain_stage(int n, const GloaConfig& base,
                             const ReferenceMinima& reference, std::uint64_t seed,
                             const ClusterGeometry* prior0,
                             const ClusterGeometry* prior1, double seed_fraction,
                             bool lamarckian) {
    constexpr int kColdAttempts = 3;

    ClusterObjective objective(n);
    GloaConfig cfg = base;
    cfg.bounds.assign(objective.dimension(), Interval{-2.0, 2.0});
    const std::uint64_t base_seed = stage_seed(seed, n);
    if (reference.contains(n))
        cfg.target_fitness = reference.at(n);
    else
        cfg.target_fitness.reset();

    struct Attempt {
        RunReport report;
        bool cold = false;
    };
    std::vector<Attempt> attempts;
    int ordinal = 0;
    auto attempt = [&](const ClusterGeometry* prior) {
        GloaConfig attempt_cfg = cfg;
        attempt_cfg.seed = ordinal == 0
                               ? base_seed
                               : detail::mix64(base_seed ^
                                               (0x636f6c64ull + static_cast<std::uint64_t>(ordinal)));
        ++ordinal;
        RunHooks hooks;
        if (prior)
            hooks.initializer = seeded_initializer(*prior, seed_fraction,
                                                   attempt_cfg.group_size);
        if (lamarckian) hooks.leader_refiner = lamarckian_refiner();
        attempts.push_back({run(attempt_cfg, objective, hooks), prior == nullptr});
        return attempts.back().report.termination == Termination::target_reached;
    };

    bool done = attempt(prior0);
    if (cfg.target_fitness) {
        if (!done && prior0 && prior1) done = attempt(prior1);
        int cold_runs = prior0 ? 0 : 1;
        while (!done && cold_runs < kColdAttempts) {
            done = attempt(nullptr);
            ++cold_runs;
        }
    }

    std::size_t winner = 0;
    for (std::size_t i = 1; i < attempts.size(); ++i)
        if (attempts[i].report.best_candidate.fitness <
            attempts[winner].report.best_candidate.fitness)
            winner = i;

    StageOutcome out;
    out.stage.n_particles = n;
    out.stage.cold_restart = attempts[winner].cold && prior0 != nullptr;
    double alternate_fitness = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < attempts.size(); ++i) {
        if (i == winner) continue;
        out.stage.discarded_evaluations += attempts[i].report.evaluations;
        const double f = attempts[i].report.best_candidate.fitness;
        if (std::abs(f - attempts[winner].report.best_candidate.fitness) > 1e-6 &&
            f < alternate_fitness) {
            alternate_fitness = f;
            out.alternate = ClusterGeometry{attempts[i].report.best_candidate.values};
        }
    }
    out.stage.report = std::move(attempts[winner].report);
    out.stage.best.coords = out.stage.report.best_candidate.values;
    return out;
}

} // namespace

std::vector<StageResult> incremental_chain(int first_n, int last_n,
                                           const GloaConfig& base,
                                           const ReferenceMinima& reference,
                                           std::uint64_t seed, double seed_fraction,
                                           bool lamarckian) {
    if (first_n > last_n)
        throw ConfigError("n_particles: chain start exceeds chain end");
    std::vector<StageResult> stages;
    std::optional<ClusterGeometry> alternate;
    const ClusterGeometry* previous = nullptr;
    for (int n = first_n; n <= last_n; ++n) {
        StageOutcome outcome =
            run_chain_stage(n, base, reference, seed, previous,
                            alternate ? &*alternate : nullptr, seed_fraction,
                            lamarckian);
        stages.push_back(std::move(outcome.stage));
        alternate = std::move(outcome.alternate);
        previous = &stages.back().best;
    }
    return stages;
}

std::vector<EncounterRecord> first_encounter_experiment(int n_particles, int runs,
                                                        const GloaConfig& base,
                                                        const ReferenceMinima& reference,
                                                        double tolerance,
                                                        std::uint64_t seed) {
    std::vector<EncounterRecord> records;
    records.reserve(static_cast<std::size_t>(runs));
    ClusterObjective objective(n_particles);
    for (int r = 0; r < runs; ++r) {
        GloaConfig cfg = base;
        cfg.bounds.assign(objective.dimension(), Interval{-2.0, 2.0});
        cfg.seed = seed + static_cast<std::uint64_t>(r);
        cfg.target_fitness = reference.at(n_particles);
        cfg.target_tolerance = tolerance;
        const RunReport report = run(cfg, objective);
        records.push_back({report.iterations_run, report.elapsed_seconds,
                           report.termination != Termination::target_reached});
    }
    return records;
}

ScalingResult scaling_experiment(std::span<const int> sizes, const GloaConfig& base,
                                 const ReferenceMinima& reference, std::uint64_t seed) {
    if (sizes.size() < 3)
        throw std::invalid_argument("scaling_experiment: need at least 3 sizes");
    if (!std::is_sorted(sizes.begin(), sizes.end()))
        throw std::invalid_argument("scaling_experiment: sizes must ascend");

    ScalingResult result;
    std::optional<ClusterGeometry> alternate;
    const ClusterGeometry* previous = nullptr;
    std::vector<StageResult> stages;
    stages.reserve(sizes.size());
    for (int n : sizes) {
        const auto t0 = std::chrono::steady_clock::now();
        StageOutcome outcome =
            run_chain_stage(n, base, reference, seed, previous,
                            alternate ? &*alternate : nullptr, 0.5, false);
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        stages.push_back(std::move(outcome.stage));
        alternate = std::move(outcome.alternate);
        previous = &stages.back().best;
        result.seconds_per_n.emplace_back(n, seconds);
    }

    std::vector<std::pair<double, double>> points;
    for (const auto& [n, s] : result.seconds_per_n)
        points.emplace_back(static_cast<double>(n), s);
    const PowerLawFit fit = fit_power_law(points);
    result.exponent = fit.exponent;
    result.exponent_stderr = fit.exponent_stderr;
    return result;
}

void write_xyz(std::ostream& out, const ClusterGeometry& geometry,
               const std::string& comment) {
    out << geometry.particle_count() << '\n' << comment << '\n';
    char buf[96];
    for (int i = 0; i < geometry.particle_count(); ++i) {
        std::snprintf(buf, sizeof(buf), "X %.17g %.17g %.17g\n",
                      geometry.coords[3 * i], geometry.coords[3 * i + 1],
                      geometry.coords[3 * i + 2]);
        out << buf;
    }
}

} // namespace gloa::lj
