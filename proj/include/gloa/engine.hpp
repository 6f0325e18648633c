#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gloa/config.hpp"
#include "gloa/objective.hpp"
#include "gloa/rng.hpp"

namespace gloa {

/// One candidate solution with its cached fitness.
struct Candidate {
    std::vector<double> values;
    double fitness = std::numeric_limits<double>::infinity();
    bool valid = false; ///< fitness cache holds evaluate(values)
};

/// Population partitioned into groups, each with a designated leader.
struct GroupSet {
    std::vector<std::vector<Candidate>> groups;
    std::vector<int> leader_index;

    int group_count() const { return static_cast<int>(groups.size()); }
    int group_size() const {
        return groups.empty() ? 0 : static_cast<int>(groups.front().size());
    }
    const Candidate& leader(int g) const { return groups[g][leader_index[g]]; }

    /// Best member over all groups; ties resolved toward the lowest
    /// group index, then the lowest member index.
    std::pair<int, int> best_location() const;
    const Candidate& best() const;
};

enum class Termination {
    max_iterations,
    target_reached,
};

const char* to_string(Termination t);

struct RunReport {
    Candidate best_candidate;
    /// Entry 0 is the best fitness after initialization; entry t the best
    /// after iteration t. Non-increasing.
    std::vector<double> best_fitness_per_iteration;
    long long evaluations = 0;
    int iterations_run = 0;
    Termination termination = Termination::max_iterations;
    double elapsed_seconds = 0.0;
};

/// Objective evaluation failed inside the engine. Carries the population
/// trajectory recorded up to the failing iteration.
class EvaluationError : public std::runtime_error {
public:
    EvaluationError(const std::string& what, RunReport partial_report)
        : std::runtime_error(what), partial(std::move(partial_report)) {}
    RunReport partial;
};

/// Optional per-member initializer: return initial values for (group,
/// member) or nullopt to fall back to a uniform draw from the bounds.
using MemberInitializer =
    std::function<std::optional<std::vector<double>>(int group, int member, SplitRng& rng)>;

/// Optional leader refinement: given a leader's values, return improved
/// values (or nullopt). The engine evaluates the result and keeps it only
/// if strictly better.
using LeaderRefiner = std::function<std::optional<std::vector<double>>(std::span<const double> values)>;

struct RunHooks {
    /// Called after initialization (iteration 0) and after every iteration.
    std::function<void(int iteration, double best_fitness,
                       std::span<const double> leader_fitness)> on_iteration;
    MemberInitializer initializer;
    LeaderRefiner leader_refiner;
    int refine_every = 50; ///< iterations between leader refinements
};

/// Record of a single crossover transfer attempt.
struct TransferRecord {
    int dest_group = 0;
    int dest_member = 0;
    int source_group = 0;
    int source_member = 0;
    int variable = 0;
    double transferred_value = 0.0; ///< value written into the trial
    bool accepted = false;
};

/// Substream id of the crossover generator (groups use ids 0..n-1).
inline constexpr std::uint64_t kCrossoverStreamId = 0x63726f7373ULL;

/// Draws the number of one-variable transfers a group attempts in one
/// crossover pass: uniform over {1, ..., dim/2 + 1}.
int draw_transfer_count(int dimension, SplitRng& rng);

/// Uniform random population over the bounds; group g consumes only
/// rngs[g]. Fitnesses are evaluated and leaders selected.
GroupSet init_population(const GloaConfig& cfg, const Objective& objective,
                         std::vector<SplitRng>& group_rngs,
                         const MemberInitializer& initializer = {},
                         long long* evaluations = nullptr);

/// Index of the lowest-fitness member, lowest index on ties.
/// Throws std::logic_error if any fitness cache is invalid.
int select_leader(const std::vector<Candidate>& group);

/// Recombination rule: out[k] = r1*member[k] + r2*leader[k] + r3*random[k],
/// rates sampled once per call, random fresh per coordinate, result clipped
/// under BoundPolicy::clip. Does not evaluate fitness.
void mutate_recombine(const Candidate& member, const Candidate& leader,
                      const GloaConfig& cfg, std::span<const Interval> bounds,
                      SplitRng& rng, std::vector<double>& out);

/// Convenience overload returning a fresh (unevaluated) candidate.
Candidate mutate_recombine(const Candidate& member, const Candidate& leader,
                           const GloaConfig& cfg, std::span<const Interval> bounds,
                           SplitRng& rng);

/// Evaluates trial values and replaces member (g, j) when strictly better.
/// Keeps the group's leader index exact at every step. Returns true when
/// the replacement happened.
bool greedy_replace(GroupSet& pop, int g, int j, std::span<const double> trial,
                    const Objective& objective, long long* evaluations = nullptr);

/// One-way parameter transfers between groups (one variable per transfer,
/// accepted only when strictly better; sources are never modified by the
/// transfer). Returns the number of accepted transfers.
int one_way_crossover(GroupSet& pop, const Objective& objective,
                      const GloaConfig& cfg, std::span<const Interval> bounds,
                      SplitRng& rng, long long* evaluations = nullptr,
                      std::vector<TransferRecord>* log = nullptr);

/// Full optimization: init, then per iteration a leader refresh, the
/// group-local recombination sweep, and the crossover pass. Deterministic
/// for a fixed (config, objective, seed) regardless of cfg.threads.
RunReport run(const GloaConfig& cfg, const Objective& objective,
              const RunHooks& hooks = {});

} // namespace gloa
