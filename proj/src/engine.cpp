#include "gloa/engine.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <sstream>
#include <thread>

namespace gloa {

namespace {

double evaluate_checked(const Objective& objective, std::span<const double> x,
                        long long* evaluations) {
    const double f = objective.evaluate(x);
    if (evaluations) ++*evaluations;
    return f;
}

/// Keeps leader_index[g] equal to the argmin (lowest index on ties) after
/// member j of group g changed to a strictly better fitness.
void update_leader_after_improvement(GroupSet& pop, int g, int j) {
    const double f = pop.groups[g][j].fitness;
    const int lead = pop.leader_index[g];
    const double lead_f = pop.groups[g][lead].fitness;
    if (f < lead_f || (f == lead_f && j < lead)) pop.leader_index[g] = j;
}

void sweep_group(GroupSet& pop, int g, const GloaConfig& cfg,
                 std::span<const Interval> bounds, const Objective& objective,
                 SplitRng& rng, long long& evaluations) {
    const int p = pop.group_size();
    std::vector<double> trial(objective.dimension());
    for (int j = 0; j < p; ++j) {
        mutate_recombine(pop.groups[g][j], pop.leader(g), cfg, bounds, rng, trial);
        greedy_replace(pop, g, j, trial, objective, &evaluations);
    }
}

std::string location_message(const char* phase, int g, int j, const std::exception& e) {
    std::ostringstream os;
    os << "objective evaluation failed (" << phase << ", group " << g
       << ", member " << j << "): " << e.what();
    return os.str();
}

} // namespace

const char* to_string(Termination t) {
    switch (t) {
    case Termination::max_iterations: return "max_iterations";
    case Termination::target_reached: return "target_reached";
    }
    return "unknown";
}

std::pair<int, int> GroupSet::best_location() const {
    int bg = 0, bj = 0;
    double best = std::numeric_limits<double>::infinity();
    for (int g = 0; g < group_count(); ++g)
        for (int j = 0; j < static_cast<int>(groups[g].size()); ++j)
            if (groups[g][j].fitness < best) {
                best = groups[g][j].fitness;
                bg = g;
                bj = j;
            }
    return {bg, bj};
}

const Candidate& GroupSet::best() const {
    auto [g, j] = best_location();
    return groups[g][j];
}

int draw_transfer_count(int dimension, SplitRng& rng) {
    return rng.uniform_int(1, dimension / 2 + 1);
}

GroupSet init_population(const GloaConfig& cfg, const Objective& objective,
                         std::vector<SplitRng>& group_rngs,
                         const MemberInitializer& initializer,
                         long long* evaluations) {
    const auto bounds = resolved_bounds(cfg, objective);
    const auto dim = objective.dimension();
    GroupSet pop;
    pop.groups.resize(cfg.n_groups);
    pop.leader_index.assign(cfg.n_groups, 0);
    for (int g = 0; g < cfg.n_groups; ++g) {
        SplitRng& rng = group_rngs[g];
        pop.groups[g].resize(cfg.group_size);
        for (int j = 0; j < cfg.group_size; ++j) {
            Candidate& c = pop.groups[g][j];
            std::optional<std::vector<double>> seeded;
            if (initializer) seeded = initializer(g, j, rng);
            if (seeded) {
                if (seeded->size() != dim)
                    throw ConfigError("initializer: produced wrong dimension");
                c.values = std::move(*seeded);
            } else {
                c.values.resize(dim);
                for (std::size_t k = 0; k < dim; ++k)
                    c.values[k] = rng.uniform(bounds[k].lo, bounds[k].hi);
            }
            try {
                c.fitness = evaluate_checked(objective, c.values, evaluations);
            } catch (const EvaluationError&) {
                throw;
            } catch (const std::exception& e) {
                throw EvaluationError(location_message("init", g, j, e), RunReport{});
            }
            c.valid = true;
        }
        pop.leader_index[g] = select_leader(pop.groups[g]);
    }
    return pop;
}

int select_leader(const std::vector<Candidate>& group) {
    int best = 0;
    for (int j = 0; j < static_cast<int>(group.size()); ++j) {
        if (!group[j].valid)
            throw std::logic_error("select_leader: member " + std::to_string(j) +
                                   " has no evaluated fitness");
        if (group[j].fitness < group[best].fitness) best = j;
    }
    return best;
}

void mutate_recombine(const Candidate& member, const Candidate& leader,
                      const GloaConfig& cfg, std::span<const Interval> bounds,
                      SplitRng& rng, std::vector<double>& out) {
    const double r1 = cfg.r1.sample(rng);
    const double r2 = cfg.complementary_r2 ? 1.0 - r1 : cfg.r2.sample(rng);
    const double r3 = cfg.r3.sample(rng);
    const std::size_t dim = member.values.size();
    const bool shared = cfg.noise_sharing == NoiseSharing::per_member;
    // One unit draw stretched into each variable's interval keeps the random
    // term identical across coordinates when sharing is on.
    const double shared_unit = (shared && r3 != 0.0) ? rng.next_double() : 0.0;
    out.resize(dim);
    for (std::size_t k = 0; k < dim; ++k) {
        double v = r1 * member.values[k] + r2 * leader.values[k];
        if (r3 != 0.0) {
            double rnd;
            if (cfg.random_term == RandomTerm::signed_unit)
                rnd = shared ? 2.0 * shared_unit - 1.0 : rng.uniform(-1.0, 1.0);
            else
                rnd = shared ? bounds[k].lo + shared_unit * (bounds[k].hi - bounds[k].lo)
                             : rng.uniform(bounds[k].lo, bounds[k].hi);
            v += r3 * rnd;
        }
        if (cfg.bound_policy == BoundPolicy::clip) v = bounds[k].clamp(v);
        out[k] = v;
    }
}

Candidate mutate_recombine(const Candidate& member, const Candidate& leader,
                           const GloaConfig& cfg, std::span<const Interval> bounds,
                           SplitRng& rng) {
    Candidate c;
    mutate_recombine(member, leader, cfg, bounds, rng, c.values);
    return c;
}

bool greedy_replace(GroupSet& pop, int g, int j, std::span<const double> trial,
                    const Objective& objective, long long* evaluations) {
    double f;
    try {
        f = evaluate_checked(objective, trial, evaluations);
    } catch (const std::exception& e) {
        throw EvaluationError(location_message("sweep", g, j, e), RunReport{});
    }
    Candidate& member = pop.groups[g][j];
    if (!(f < member.fitness)) return false;
    member.values.assign(trial.begin(), trial.end());
    member.fitness = f;
    member.valid = true;
    update_leader_after_improvement(pop, g, j);
    return true;
}

int one_way_crossover(GroupSet& pop, const Objective& objective,
                      const GloaConfig& cfg, std::span<const Interval> bounds,
                      SplitRng& rng, long long* evaluations,
                      std::vector<TransferRecord>* log) {
    const int n = pop.group_count();
    if (n < 2) return 0;
    const int p = pop.group_size();
    const int dim = static_cast<int>(objective.dimension());
    int accepted_total = 0;
    std::vector<double> trial;
    for (int g = 0; g < n; ++g) {
        const int transfers = draw_transfer_count(dim, rng);
        for (int t = 0; t < transfers; ++t) {
            const int j = rng.uniform_int(0, p - 1);
            int source = rng.uniform_int(0, n - 2);
            if (source >= g) ++source;
            const int k = rng.uniform_int(0, p - 1);
            const int var = rng.uniform_int(0, dim - 1);

            double v = pop.groups[source][k].values[var];
            if (cfg.mutate_transfers)
                v += cfg.r3.sample(rng) * rng.uniform(-1.0, 1.0);
            if (cfg.bound_policy == BoundPolicy::clip) v = bounds[var].clamp(v);

            trial = pop.groups[g][j].values;
            trial[var] = v;
            double f;
            try {
                f = evaluate_checked(objective, trial, evaluations);
            } catch (const std::exception& e) {
                throw EvaluationError(location_message("crossover", g, j, e), RunReport{});
            }
            const bool accepted = f < pop.groups[g][j].fitness;
            if (accepted) {
                pop.groups[g][j].values = trial;
                pop.groups[g][j].fitness = f;
                update_leader_after_improvement(pop, g, j);
                ++accepted_total;
            }
            if (log) log->push_back({g, j, source, k, var, v, accepted});
        }
    }
    return accepted_total;
}

RunReport run(const GloaConfig& cfg, const Objective& objective, const RunHooks& hooks) {
    validate(cfg, objective);
    const auto bounds = resolved_bounds(cfg, objective);
    const auto t0 = std::chrono::steady_clock::now();

    SplitRng root(cfg.seed);
    std::vector<SplitRng> group_rngs;
    group_rngs.reserve(cfg.n_groups);
    for (int g = 0; g < cfg.n_groups; ++g)
        group_rngs.push_back(root.substream(static_cast<std::uint64_t>(g)));
    SplitRng crossover_rng = root.substream(kCrossoverStreamId);

    RunReport report;
    std::vector<long long> group_evals(cfg.n_groups, 0);
    long long shared_evals = 0; // init, crossover and refinement evaluations

    GroupSet pop;
    std::vector<double> leader_fitness(cfg.n_groups);
    auto record_state = [&](int iteration) {
        const double best = pop.best().fitness;
        report.best_fitness_per_iteration.push_back(best);
        if (hooks.on_iteration) {
            for (int g = 0; g < cfg.n_groups; ++g)
                leader_fitness[g] = pop.leader(g).fitness;
            hooks.on_iteration(iteration, best, leader_fitness);
        }
        return best;
    };
    auto target_met = [&](double best) {
        return cfg.target_fitness &&
               std::abs(best - *cfg.target_fitness) < cfg.target_tolerance;
    };
    auto assemble = [&](Termination reason, int iterations) {
        report.termination = reason;
        report.iterations_run = iterations;
        report.evaluations = shared_evals;
        for (long long e : group_evals) report.evaluations += e;
        report.best_candidate = pop.best();
        report.elapsed_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    };

    try {
        pop = init_population(cfg, objective, group_rngs, hooks.initializer, &shared_evals);

        double best = record_state(0);
        if (target_met(best)) {
            assemble(Termination::target_reached, 0);
            return report;
        }
        if (cfg.max_iterations == 0) {
            assemble(Termination::max_iterations, 0);
            return report;
        }

        const int workers = std::min(cfg.threads, cfg.n_groups);
        for (int iteration = 1; iteration <= cfg.max_iterations; ++iteration) {
            for (int g = 0; g < cfg.n_groups; ++g)
                pop.leader_index[g] = select_leader(pop.groups[g]);

            if (workers <= 1) {
                for (int g = 0; g < cfg.n_groups; ++g)
                    sweep_group(pop, g, cfg, bounds, objective, group_rngs[g],
                                group_evals[g]);
            } else {
                // Groups touch disjoint state and own their substreams, so
                // any assignment of groups to threads yields identical results.
                std::vector<std::exception_ptr> errors(cfg.n_groups);
                std::vector<std::thread> threads;
                threads.reserve(workers);
                for (int w = 0; w < workers; ++w) {
                    threads.emplace_back([&, w] {
                        for (int g = w; g < cfg.n_groups; g += workers) {
                            try {
                                sweep_group(pop, g, cfg, bounds, objective,
                                            group_rngs[g], group_evals[g]);
                            } catch (...) {
                                errors[g] = std::current_exception();
                            }
                        }
                    });
                }
                for (auto& th : threads) th.join();
                for (int g = 0; g < cfg.n_groups; ++g)
                    if (errors[g]) std::rethrow_exception(errors[g]);
            }

            one_way_crossover(pop, objective, cfg, bounds, crossover_rng,
                              &shared_evals);

            if (hooks.leader_refiner && hooks.refine_every > 0 &&
                iteration % hooks.refine_every == 0) {
                for (int g = 0; g < cfg.n_groups; ++g) {
                    auto refined = hooks.leader_refiner(pop.leader(g).values);
                    if (refined)
                        greedy_replace(pop, g, pop.leader_index[g], *refined,
                                       objective, &shared_evals);
                }
            }

            best = record_state(iteration);
            if (target_met(best)) {
                assemble(Termination::target_reached, iteration);
                return report;
            }
        }
        assemble(Termination::max_iterations, cfg.max_iterations);
        return report;
    } catch (EvaluationError& e) {
        RunReport partial;
        partial.best_fitness_per_iteration = report.best_fitness_per_iteration;
        partial.evaluations = shared_evals;
        for (long long ge : group_evals) partial.evaluations += ge;
        partial.iterations_run =
            static_cast<int>(partial.best_fitness_per_iteration.empty()
                                 ? 0
                                 : partial.best_fitness_per_iteration.size() - 1);
        throw EvaluationError(e.what(), std::move(partial));
    }
}

} // namespace gloa
