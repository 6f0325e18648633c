#include "gloa/benchmarks.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace gloa::bench {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kE = std::numbers::e;

// Global minimum of the two-variable product form below, and one of its
// minimizers: (argmin of the factor, argmax of the factor) on [-10, 10].
constexpr double kShubertMin = -186.73090883102383;
constexpr double kShubertArgMin = -7.70831373549935;
constexpr double kShubertArgMax = 5.48286420670761;

double shubert_factor(double x) {
    double s = 0.0;
    for (int i = 1; i <= 5; ++i) s += i * std::cos((i + 1) * x + i);
    return s;
}

std::vector<double> constant_vector(int dim, double v) {
    return std::vector<double>(static_cast<std::size_t>(dim), v);
}

GloaConfig single_dim_preset(double tolerance, double target) {
    GloaConfig cfg;
    cfg.n_groups = 10;
    cfg.group_size = 25;
    cfg.r1 = Rate::fixed(0.8);
    cfg.r2 = Rate::fixed(0.2);
    cfg.r3 = Rate::fixed(0.0);
    cfg.max_iterations = 500;
    cfg.target_fitness = target;
    cfg.target_tolerance = tolerance;
    return cfg;
}

GloaConfig multi_dim_preset(double r1, double r2, double r3, int iterations) {
    GloaConfig cfg;
    cfg.n_groups = 10;
    cfg.group_size = 25;
    cfg.r1 = Rate::fixed(r1);
    cfg.r2 = Rate::fixed(r2);
    cfg.r3 = Rate::fixed(r3);
    // Broadcasting one draw across the vector is what keeps acceptance
    // alive at high dimension; see NoiseSharing.
    cfg.noise_sharing = NoiseSharing::per_member;
    cfg.max_iterations = iterations;
    cfg.target_fitness = 0.0;
    cfg.target_tolerance = 1e-3;
    return cfg;
}

} // namespace

double beale(double x1, double x2) {
    const double a = 1.5 - x1 * (1.0 - x2);
    const double b = 2.25 - x1 * (1.0 - x2 * x2);
    const double c = 2.625 - x1 * (1.0 - x2 * x2 * x2);
    return a * a + b * b + c * c;
}

double easom(double x1, double x2) {
    const double d1 = x1 - kPi;
    const double d2 = x2 - kPi;
    return -std::cos(x1) * std::cos(x2) * std::exp(-(d1 * d1 + d2 * d2));
}

double goldstein_price(double x1, double x2) {
    const double s = x1 + x2 + 1.0;
    const double first =
        1.0 + s * s *
                  (19.0 - 14.0 * x1 + 3.0 * x1 * x1 - 14.0 * x2 +
                   6.0 * x1 * x2 + 3.0 * x2 * x2);
    const double t = 2.0 * x1 - 3.0 * x2;
    const double second =
        30.0 + t * t *
                   (18.0 - 32.0 * x1 + 12.0 * x1 * x1 + 48.0 * x2 -
                    36.0 * x1 * x2 + 27.0 * x2 * x2);
    return first * second;
}

double shubert(double x1, double x2) {
    return shubert_factor(x1) * shubert_factor(x2);
}

double rosenbrock_paper(std::span<const double> x) {
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        const double a = x[i] - x[i + 1];
        const double b = x[i] - 1.0;
        s += 100.0 * a * a + b * b;
    }
    return s;
}

double rosenbrock_classic(std::span<const double> x) {
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        const double a = x[i + 1] - x[i] * x[i];
        const double b = 1.0 - x[i];
        s += 100.0 * a * a + b * b;
    }
    return s;
}

double griewank(std::span<const double> x) {
    double sum = 0.0;
    double prod = 1.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sum += x[i] * x[i];
        prod *= std::cos(x[i] / std::sqrt(static_cast<double>(i + 1)));
    }
    return 1.0 + sum / 4000.0 - prod;
}

double ackley(std::span<const double> x) {
    const auto n = static_cast<double>(x.size());
    double sum_sq = 0.0;
    double sum_cos = 0.0;
    for (double v : x) {
        sum_sq += v * v;
        sum_cos += std::cos(2.0 * kPi * v);
    }
    return 20.0 + kE - 20.0 * std::exp(-0.2 * std::sqrt(sum_sq / n)) -
           std::exp(sum_cos / n);
}

double sphere(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return s;
}

double rastrigin(std::span<const double> x) {
    double s = 10.0 * static_cast<double>(x.size());
    for (double v : x) s += v * v - 10.0 * std::cos(2.0 * kPi * v);
    return s;
}

std::unique_ptr<Objective> BenchmarkSpec::make_objective(int dimension) const {
    if (fixed_dimension && dimension != 2)
        throw ConfigError("dimension: " + name + " is defined for exactly 2 variables");
    if (dimension < 2)
        throw ConfigError("dimension: must be at least 2");
    const std::string fn = name;
    std::function<double(std::span<const double>)> f;
    if (fn == "beale") f = [](std::span<const double> x) { return beale(x[0], x[1]); };
    else if (fn == "easom") f = [](std::span<const double> x) { return easom(x[0], x[1]); };
    else if (fn == "goldstein_price")
        f = [](std::span<const double> x) { return goldstein_price(x[0], x[1]); };
    else if (fn == "shubert") f = [](std::span<const double> x) { return shubert(x[0], x[1]); };
    else if (fn == "rosenbrock_paper") f = rosenbrock_paper;
    else if (fn == "rosenbrock_classic") f = rosenbrock_classic;
    else if (fn == "griewank") f = griewank;
    else if (fn == "ackley") f = ackley;
    else if (fn == "sphere") f = sphere;
    else if (fn == "rastrigin") f = rastrigin;
    else throw std::logic_error("unregistered benchmark: " + fn);
    return std::make_unique<FunctionObjective>(
        name, static_cast<std::size_t>(dimension),
        std::vector<Interval>(static_cast<std::size_t>(dimension), domain), std::move(f));
}

const std::map<std::string, BenchmarkSpec>& benchmark_registry() {
    static const std::map<std::string, BenchmarkSpec> registry = [] {
        std::map<std::string, BenchmarkSpec> r;
        auto add = [&r](BenchmarkSpec spec) { r.emplace(spec.name, std::move(spec)); };

        add({.name = "beale",
             .fixed_dimension = true,
             .default_dimension = 2,
             .domain = {-100.0, 100.0},
             .known_minimum_value = 0.0,
             .known_minimizer = [](int) { return std::vector<double>{3.0, 0.5}; },
             .preset = single_dim_preset(1e-3, 0.0)});
        add({.name = "easom",
             .fixed_dimension = true,
             .default_dimension = 2,
             .domain = {-100.0, 100.0},
             .known_minimum_value = -1.0,
             .known_minimizer = [](int) { return std::vector<double>{kPi, kPi}; },
             .preset = single_dim_preset(1e-3, -1.0)});
        add({.name = "goldstein_price",
             .fixed_dimension = true,
             .default_dimension = 2,
             .domain = {-100.0, 100.0},
             .known_minimum_value = 3.0,
             .known_minimizer = [](int) { return std::vector<double>{0.0, -1.0}; },
             .preset = single_dim_preset(1e-3, 3.0)});
        add({.name = "shubert",
             .fixed_dimension = true,
             .default_dimension = 2,
             .domain = {-10.0, 10.0},
             .known_minimum_value = kShubertMin,
             .known_minimizer =
                 [](int) { return std::vector<double>{kShubertArgMin, kShubertArgMax}; },
             .preset = single_dim_preset(0.05, kShubertMin)});

        add({.name = "rosenbrock_paper",
             .fixed_dimension = false,
             .default_dimension = 10,
             .domain = {-100.0, 100.0},
             .known_minimum_value = 0.0,
             .known_minimizer = [](int dim) { return constant_vector(dim, 1.0); },
             .preset = multi_dim_preset(0.8, 0.1, 0.1, 2000)});
        add({.name = "rosenbrock_classic",
             .fixed_dimension = false,
             .default_dimension = 10,
             .domain = {-100.0, 100.0},
             .known_minimum_value = 0.0,
             .known_minimizer = [](int dim) { return constant_vector(dim, 1.0); },
             .preset = multi_dim_preset(0.8, 0.1, 0.1, 2000)});
        add({.name = "griewank",
             .fixed_dimension = false,
             .default_dimension = 10,
             .domain = {-600.0, 600.0},
             .known_minimum_value = 0.0,
             .known_minimizer = [](int dim) { return constant_vector(dim, 0.0); },
             .preset = multi_dim_preset(0.8, 0.19, 0.01, 1000)});
        add({.name = "ackley",
             .fixed_dimension = false,
             .default_dimension = 10,
             .domain = {-32.768, 32.768},
             .known_minimum_value = 0.0,
             .known_minimizer = [](int dim) { return constant_vector(dim, 0.0); },
             .preset = multi_dim_preset(0.8, 0.19, 0.01, 1000)});
        add({.name = "sphere",
             .fixed_dimension = false,
             .default_dimension = 10,
             .domain = {-100.0, 100.0},
             .known_minimum_value = 0.0,
             .known_minimizer = [](int dim) { return constant_vector(dim, 0.0); },
             .preset = multi_dim_preset(0.6, 0.2, 0.2, 1000)});
        add({.name = "rastrigin",
             .fixed_dimension = false,
             .default_dimension = 10,
             .domain = {-10.0, 10.0},
             .known_minimum_value = 0.0,
             .known_minimizer = [](int dim) { return constant_vector(dim, 0.0); },
             .preset = multi_dim_preset(0.6, 0.2, 0.2, 1500)});
        return r;
    }();
    return registry;
}

} // namespace gloa::bench
