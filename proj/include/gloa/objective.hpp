#pragma once

#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace gloa {

/// Closed interval [lo, hi].
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    bool contains(double v) const { return v >= lo && v <= hi; }
    double clamp(double v) const { return v < lo ? lo : (v > hi ? hi : v); }
    bool operator==(const Interval&) const = default;
};

/// Minimization problem seen by the engine: a fixed-dimension real vector
/// mapped to a scalar fitness. Implementations must be pure and thread-safe;
/// identical inputs must reproduce identical outputs bit for bit.
class Objective {
public:
    virtual ~Objective() = default;

    virtual std::size_t dimension() const = 0;

    /// Suggested search box, one interval per variable.
    virtual std::vector<Interval> domain() const = 0;

    virtual double evaluate(std::span<const double> x) const = 0;

    virtual std::string name() const { return "objective"; }
};

/// Objective built from a plain function plus metadata.
class FunctionObjective final : public Objective {
public:
    using Fn = std::function<double(std::span<const double>)>;

    FunctionObjective(std::string name, std::size_t dimension,
                      std::vector<Interval> domain, Fn fn)
        : name_(std::move(name)), dimension_(dimension),
          domain_(std::move(domain)), fn_(std::move(fn)) {}

    std::size_t dimension() const override { return dimension_; }
    std::vector<Interval> domain() const override { return domain_; }
    double evaluate(std::span<const double> x) const override { return fn_(x); }
    std::string name() const override { return name_; }

private:
    std::string name_;
    std::size_t dimension_;
    std::vector<Interval> domain_;
    Fn fn_;
};

/// Negation adapter: minimizing the result maximizes the wrapped objective.
class NegatedObjective final : public Objective {
public:
    explicit NegatedObjective(const Objective& inner) : inner_(&inner) {}

    std::size_t dimension() const override { return inner_->dimension(); }
    std::vector<Interval> domain() const override { return inner_->domain(); }
    double evaluate(std::span<const double> x) const override {
        return -inner_->evaluate(x);
    }
    std::string name() const override { return "negated_" + inner_->name(); }

private:
    const Objective* inner_;
};

} // namespace gloa
