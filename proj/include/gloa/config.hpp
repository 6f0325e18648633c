#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gloa/objective.hpp"
#include "gloa/rng.hpp"

namespace gloa {

/// Invalid or inconsistent configuration; the message names the field.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Mixing rate: either a fixed value or a closed interval sampled
/// uniformly each time it is used. A fixed rate consumes no randomness.
class Rate {
public:
    Rate() = default;
    static Rate fixed(double v) { return Rate(v, v); }
    static Rate interval(double lo, double hi) { return Rate(lo, hi); }

    double lo() const { return lo_; }
    double hi() const { return hi_; }
    bool is_fixed() const { return lo_ == hi_; }

    double sample(SplitRng& rng) const {
        return is_fixed() ? lo_ : rng.uniform(lo_, hi_);
    }

    bool operator==(const Rate&) const = default;

private:
    Rate(double lo, double hi) : lo_(lo), hi_(hi) {}
    double lo_ = 0.0;
    double hi_ = 0.0;
};

/// What happens to variables that leave the configured box.
enum class BoundPolicy {
    clip,           ///< every new value is clamped into the box
    free_after_init ///< the box only seeds the population and random draws
};

/// Distribution of the random term in the recombination rule.
enum class RandomTerm {
    uniform_in_bounds, ///< fresh uniform draw from the variable's interval
    signed_unit        ///< fresh uniform draw from [-1, 1]
};

/// How many random draws feed one recombination.
enum class NoiseSharing {
    per_coordinate, ///< independent draw for every variable
    per_member      ///< one draw, broadcast across the whole vector
};

struct GloaConfig {
    int n_groups = 10;
    int group_size = 25;

    Rate r1 = Rate::fixed(0.8);
    Rate r2 = Rate::fixed(0.2);
    Rate r3 = Rate::fixed(0.0);
    /// When set, r2 is derived as 1 - r1 and the configured r2 is ignored.
    bool complementary_r2 = false;

    /// Per-variable initial/search box; empty means take the objective's.
    std::vector<Interval> bounds;
    BoundPolicy bound_policy = BoundPolicy::clip;
    RandomTerm random_term = RandomTerm::uniform_in_bounds;
    /// Shared draws keep the random term identical across coordinates, so
    /// acceptance odds stop shrinking with dimension; this is what lets the
    /// narrow-valley benchmarks converge at high dimension.
    NoiseSharing noise_sharing = NoiseSharing::per_coordinate;

    /// When set, transferred variables in the crossover step receive an
    /// additive r3-scaled perturbation.
    bool mutate_transfers = false;

    int max_iterations = 1000;
    std::optional<double> target_fitness;
    double target_tolerance = 1e-3;

    std::uint64_t seed = 0;
    /// Worker threads for the per-group sweep; results are identical for
    /// any thread count.
    int threads = 1;
};

/// Returns config bounds, falling back to the objective's domain.
/// Throws ConfigError on dimension mismatch or malformed intervals.
std::vector<Interval> resolved_bounds(const GloaConfig& cfg, const Objective& objective);

/// Validates the whole configuration against an objective.
/// Throws ConfigError naming the offending field.
void validate(const GloaConfig& cfg, const Objective& objective);

} // namespace gloa
