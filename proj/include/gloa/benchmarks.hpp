#pragma once

#include <functional>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "gloa/config.hpp"
#include "gloa/objective.hpp"

namespace gloa::bench {

// Two-variable test functions.
double beale(double x1, double x2);
double easom(double x1, double x2);
double goldstein_price(double x1, double x2);
double shubert(double x1, double x2);

// Arbitrary-dimension test functions.
/// Chain form 100*(x_i - x_{i+1})^2 + (x_i - 1)^2; minimum 0 at all ones.
double rosenbrock_paper(std::span<const double> x);
/// Classical valley form 100*(x_{i+1} - x_i^2)^2 + (1 - x_i)^2.
double rosenbrock_classic(std::span<const double> x);
double griewank(std::span<const double> x);
double ackley(std::span<const double> x);
double sphere(std::span<const double> x);
double rastrigin(std::span<const double> x);

/// Registered benchmark: function, search box, known optimum and the
/// solver settings customarily paired with it.
struct BenchmarkSpec {
    std::string name;
    bool fixed_dimension = false; ///< two-variable functions
    int default_dimension = 2;
    Interval domain;              ///< same interval for every variable
    double known_minimum_value = 0.0;
    /// A global minimizer for the given dimension.
    std::function<std::vector<double>(int dimension)> known_minimizer;
    GloaConfig preset;            ///< rates, iteration budget, stop target

    std::unique_ptr<Objective> make_objective(int dimension) const;
    std::unique_ptr<Objective> make_objective() const {
        return make_objective(default_dimension);
    }
};

/// All registered benchmarks keyed by name.
const std::map<std::string, BenchmarkSpec>& benchmark_registry();

} // namespace gloa::bench
