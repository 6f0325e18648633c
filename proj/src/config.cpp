#include "gloa/config.hpp"

#include <string>

namespace gloa {

namespace {

void check_rate(const Rate& r, const char* field) {
    if (!(r.lo() <= r.hi()))
        throw ConfigError(std::string(field) + ": interval endpoints out of order");
    if (r.lo() < 0.0 || r.hi() > 1.0)
        throw ConfigError(std::string(field) + ": rate must lie in [0, 1]");
}

} // namespace

std::vector<Interval> resolved_bounds(const GloaConfig& cfg, const Objective& objective) {
    std::vector<Interval> bounds = cfg.bounds.empty() ? objective.domain() : cfg.bounds;
    if (bounds.size() != objective.dimension())
        throw ConfigError("bounds: expected one interval per variable (" +
                          std::to_string(objective.dimension()) + "), got " +
                          std::to_string(bounds.size()));
    for (const Interval& b : bounds)
        if (!(b.lo <= b.hi))
            throw ConfigError("bounds: interval endpoints out of order");
    return bounds;
}

void validate(const GloaConfig& cfg, const Objective& objective) {
    if (cfg.n_groups < 1)
        throw ConfigError("n_groups: must be at least 1");
    if (cfg.group_size < 1)
        throw ConfigError("group_size: must be at least 1");
    if (cfg.max_iterations < 0)
        throw ConfigError("max_iterations: must be non-negative");
    if (cfg.threads < 1)
        throw ConfigError("threads: must be at least 1");
    if (objective.dimension() < 1)
        throw ConfigError("objective: dimension must be at least 1");
    check_rate(cfg.r1, "r1");
    if (!cfg.complementary_r2)
        check_rate(cfg.r2, "r2");
    check_rate(cfg.r3, "r3");
    if (cfg.target_fitness && !(cfg.target_tolerance > 0.0))
        throw ConfigError("target_tolerance: must be positive when target_fitness is set");
    resolved_bounds(cfg, objective);
}

} // namespace gloa
