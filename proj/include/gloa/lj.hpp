#pragma once

#include <iosfwd>
#include <map>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "gloa/config.hpp"
#include "gloa/engine.hpp"
#include "gloa/objective.hpp"

namespace gloa::lj {

/// Flat particle coordinates: (x0, y0, z0, x1, y1, z1, ...).
struct ClusterGeometry {
    std::vector<double> coords;

    int particle_count() const { return static_cast<int>(coords.size() / 3); }
    std::span<const double> particle(int i) const {
        return std::span<const double>(coords).subspan(3 * static_cast<std::size_t>(i), 3);
    }
};

/// Two particles closer than the coincidence threshold.
class CoincidentParticles : public std::runtime_error {
public:
    CoincidentParticles(int i, int j);
    int first;
    int second;
};

/// Pairs closer than this are degenerate; energy evaluation refuses them.
inline constexpr double kCoincidenceDistance = 1e-12;

/// Total pair energy sum of 4*(r^-12 - r^-6) in reduced units.
/// Throws CoincidentParticles when a pair distance is below the threshold.
double lj_energy(std::span<const double> coords);

/// Analytic gradient of lj_energy with respect to every coordinate.
std::vector<double> lj_gradient(std::span<const double> coords);

struct MinimizeResult {
    ClusterGeometry geometry;
    double energy = 0.0;
    double gradient_norm = 0.0;
    int steps = 0;
};

/// Steepest descent with backtracking line search. The returned energy is
/// never above the input energy. Stops when the gradient norm drops below
/// tolerance or after max_steps.
MinimizeResult local_minimize(const ClusterGeometry& start, int max_steps = 20000,
                              double tolerance = 1e-6);

/// Engine-facing objective: coordinates of n particles, degenerate
/// geometries scored +infinity. Initial box [-2, 2] per coordinate.
class ClusterObjective final : public Objective {
public:
    explicit ClusterObjective(int n_particles, Interval initial_box = {-2.0, 2.0});

    std::size_t dimension() const override;
    std::vector<Interval> domain() const override;
    double evaluate(std::span<const double> x) const override;
    std::string name() const override;
    int particle_count() const { return n_; }

private:
    int n_;
    Interval box_;
};

/// Table of putative global minimum energies keyed by particle count.
class ReferenceMinima {
public:
    static ReferenceMinima load(const std::string& path);
    static ReferenceMinima parse(std::istream& in, const std::string& origin);

    bool contains(int n) const { return energy_.count(n) != 0; }
    double at(int n) const;
    const std::map<int, double>& table() const { return energy_; }

private:
    std::map<int, double> energy_;
};

/// Per-member initializer that seeds a fraction of every group with the
/// solved (n-1)-particle geometry plus one fresh particle placed uniformly
/// in the solution's bounding box inflated by one unit on each side.
/// Remaining members fall back to uniform draws from the fresh domain.
MemberInitializer seeded_initializer(const ClusterGeometry& solved, double fraction,
                                     int group_size);

/// Leader refiner for Lamarckian runs: a short local_minimize pass.
LeaderRefiner lamarckian_refiner(int max_steps = 200, double tolerance = 1e-4);

/// Solver settings customarily used for clusters: 15 groups of 30,
/// r1 ~ U[0.85, 0.95] with r2 = 1 - r1, r3 ~ U[0.0001, 0.001] as a signed
/// perturbation scale, free particles after boxed initialization, mutated
/// transfers, 3000 iterations.
GloaConfig cluster_preset(int n_particles);

struct StageResult {
    int n_particles = 0;
    RunReport report;                    ///< the kept (best) attempt for this stage
    ClusterGeometry best;
    bool cold_restart = false;           ///< a cold attempt beat the seeded ones
    long long discarded_evaluations = 0; ///< total cost of the losing attempts
};

/// Optimizes clusters of increasing size, seeding each stage's population
/// from the previous stage's best geometry. Stage targets come from the
/// reference table (termination tolerance per cfg); stages whose size is
/// absent from the table run their full iteration budget. Runs stages
/// first_n..last_n inclusive.
///
/// A grown geometry is not always a usable prior: seeded members can pull
/// every group into the basin above the inherited core even when the true
/// minimum needs a rearranged core. When a stage misses its known target,
/// it retries, first seeded from the previous stage's runner-up basin when
/// one exists, then from cold populations, keeping the best attempt. A
/// stage without a table entry runs exactly once.
std::vector<StageResult> incremental_chain(int first_n, int last_n,
                                           const GloaConfig& base,
                                           const ReferenceMinima& reference,
                                           std::uint64_t seed,
                                           double seed_fraction = 0.5,
                                           bool lamarckian = false);

struct EncounterRecord {
    int iterations = 0;
    double seconds = 0.0;
    bool censored = false; ///< budget exhausted before reaching the target
};

/// Cold-start first-encounter runs: how long until the reference energy is
/// matched within tolerance. One record per run, seeds seed+0..runs-1.
std::vector<EncounterRecord> first_encounter_experiment(int n_particles, int runs,
                                                        const GloaConfig& base,
                                                        const ReferenceMinima& reference,
                                                        double tolerance,
                                                        std::uint64_t seed);

struct ScalingResult {
    std::vector<std::pair<int, double>> seconds_per_n;
    double exponent = 0.0;
    double exponent_stderr = 0.0;
};

/// Times an incremental chain over the given sizes and fits
/// log(seconds) = a + b*log(n). Sizes must be ascending.
ScalingResult scaling_experiment(std::span<const int> sizes, const GloaConfig& base,
                                 const ReferenceMinima& reference, std::uint64_t seed);

/// XYZ format: particle count, comment, then one "X x y z" line each.
void write_xyz(std::ostream& out, const ClusterGeometry& geometry,
               const std::string& comment);

} // namespace gloa::lj
