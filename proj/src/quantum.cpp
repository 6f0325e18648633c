#include "gloa/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "gloa/config.hpp"

namespace gloa::qc {

namespace {

constexpr double kPi = std::numbers::pi;

/// Bit of basis index `state` belonging to qubit q (qubit 0 = MSB).
int qubit_bit(int state, int qubit, int n_qubits) {
    return (state >> (n_qubits - 1 - qubit)) & 1;
}

int with_qubit_bit(int state, int qubit, int n_qubits, int bit) {
    const int mask = 1 << (n_qubits - 1 - qubit);
    return bit ? (state | mask) : (state & ~mask);
}

struct Gate2x2 {
    cplx a, b, c, d; // [[a, b], [c, d]]
};

Gate2x2 base_matrix(GateKind kind, double angle) {
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    const cplx i(0.0, 1.0);
    switch (kind) {
    case GateKind::noop: return {1, 0, 0, 1};
    case GateKind::h: return {inv_sqrt2, inv_sqrt2, inv_sqrt2, -inv_sqrt2};
    case GateKind::x: case GateKind::cx: return {0, 1, 1, 0};
    case GateKind::y: return {0, -i, i, 0};
    case GateKind::z: case GateKind::cz: return {1, 0, 0, -1};
    case GateKind::rx:
        return {std::cos(angle / 2), -i * std::sin(angle / 2),
                -i * std::sin(angle / 2), std::cos(angle / 2)};
    case GateKind::ry:
        return {std::cos(angle / 2), -std::sin(angle / 2),
                std::sin(angle / 2), std::cos(angle / 2)};
    case GateKind::rz:
        return {std::exp(-i * (angle / 2)), 0, 0, std::exp(i * (angle / 2))};
    case GateKind::phase: case GateKind::cphase:
        return {1, 0, 0, std::exp(i * angle)};
    }
    throw std::logic_error("unknown gate kind");
}

} // namespace

UnitaryMatrix UnitaryMatrix::identity(int order) {
    UnitaryMatrix m(order);
    for (int r = 0; r < order; ++r) m.at(r, r) = 1.0;
    return m;
}

UnitaryMatrix UnitaryMatrix::operator*(const UnitaryMatrix& rhs) const {
    if (order_ != rhs.order_)
        throw std::invalid_argument("matrix product: order mismatch");
    UnitaryMatrix out(order_);
    for (int r = 0; r < order_; ++r)
        for (int k = 0; k < order_; ++k) {
            const cplx v = at(r, k);
            if (v == cplx{}) continue;
            for (int c = 0; c < order_; ++c) out.at(r, c) += v * rhs.at(k, c);
        }
    return out;
}

UnitaryMatrix UnitaryMatrix::dagger() const {
    UnitaryMatrix out(order_);
    for (int r = 0; r < order_; ++r)
        for (int c = 0; c < order_; ++c) out.at(c, r) = std::conj(at(r, c));
    return out;
}

cplx UnitaryMatrix::trace() const {
    cplx t = 0.0;
    for (int r = 0; r < order_; ++r) t += at(r, r);
    return t;
}

UnitaryMatrix UnitaryMatrix::kron(const UnitaryMatrix& a, const UnitaryMatrix& b) {
    UnitaryMatrix out(a.order_ * b.order_);
    for (int ra = 0; ra < a.order_; ++ra)
        for (int ca = 0; ca < a.order_; ++ca) {
            const cplx v = a.at(ra, ca);
            if (v == cplx{}) continue;
            for (int rb = 0; rb < b.order_; ++rb)
                for (int cb = 0; cb < b.order_; ++cb)
                    out.at(ra * b.order_ + rb, ca * b.order_ + cb) = v * b.at(rb, cb);
        }
    return out;
}

std::vector<cplx> UnitaryMatrix::apply(std::span<const cplx> state) const {
    if (static_cast<int>(state.size()) != order_)
        throw std::invalid_argument("apply: state size mismatch");
    std::vector<cplx> out(state.size());
    for (int r = 0; r < order_; ++r) {
        cplx acc = 0.0;
        for (int c = 0; c < order_; ++c) acc += at(r, c) * state[c];
        out[r] = acc;
    }
    return out;
}

double UnitaryMatrix::unitarity_error() const {
    const UnitaryMatrix product = *this * dagger();
    double worst = 0.0;
    for (int r = 0; r < order_; ++r)
        for (int c = 0; c < order_; ++c) {
            const cplx expected = r == c ? cplx{1.0} : cplx{};
            worst = std::max(worst, std::abs(product.at(r, c) - expected));
        }
    return worst;
}

bool is_controlled(GateKind kind) {
    return kind == GateKind::cx || kind == GateKind::cz || kind == GateKind::cphase;
}

bool is_parameterized(GateKind kind) {
    return kind == GateKind::rx || kind == GateKind::ry || kind == GateKind::rz ||
           kind == GateKind::phase || kind == GateKind::cphase;
}

const char* gate_name(GateKind kind) {
    switch (kind) {
    case GateKind::noop: return "NOP";
    case GateKind::h: return "H";
    case GateKind::x: return "X";
    case GateKind::y: return "Y";
    case GateKind::z: return "Z";
    case GateKind::rx: return "Rx";
    case GateKind::ry: return "Ry";
    case GateKind::rz: return "Rz";
    case GateKind::phase: return "P";
    case GateKind::cx: return "CX";
    case GateKind::cz: return "CZ";
    case GateKind::cphase: return "CP";
    }
    return "?";
}

GateLibrary::GateLibrary(std::vector<GateKind> kinds) : kinds_(std::move(kinds)) {
    if (kinds_.empty() || kinds_.front() != GateKind::noop)
        throw ConfigError("gate library: slot 0 must be the no-op");
}

const GateLibrary& GateLibrary::standard() {
    static const GateLibrary lib({GateKind::noop, GateKind::h, GateKind::x,
                                  GateKind::y, GateKind::z, GateKind::rx,
                                  GateKind::ry, GateKind::rz, GateKind::phase,
                                  GateKind::cx, GateKind::cz, GateKind::cphase});
    return lib;
}

int GateLibrary::index_of(GateKind kind) const {
    for (int i = 0; i < size(); ++i)
        if (kinds_[static_cast<std::size_t>(i)] == kind) return i;
    throw std::invalid_argument("gate library: kind not present");
}

bool CircuitGenome::effectively_empty() const {
    return std::all_of(gates.begin(), gates.end(),
                       [](const GateSpec& g) { return g.kind == GateKind::noop; });
}

CircuitGenome decode_genome(std::span<const double> x, int n_qubits, int max_gates,
                            const GateLibrary& library) {
    if (n_qubits < 1) throw ConfigError("n_qubits: must be at least 1");
    if (static_cast<int>(x.size()) != 4 * max_gates)
        throw ConfigError("genome: expected " + std::to_string(4 * max_gates) +
                          " values, got " + std::to_string(x.size()));
    auto round_clamped = [](double v, int lo, int hi) {
        const auto r = static_cast<int>(std::lround(v));
        return std::clamp(r, lo, hi);
    };
    CircuitGenome genome;
    genome.n_qubits = n_qubits;
    genome.gates.reserve(static_cast<std::size_t>(max_gates));
    for (int g = 0; g < max_gates; ++g) {
        GateSpec gate;
        gate.kind = library.at(round_clamped(x[4 * g], 0, library.size() - 1));
        gate.target = round_clamped(x[4 * g + 1], 0, n_qubits - 1);
        if (n_qubits >= 2) {
            int control = round_clamped(x[4 * g + 2], 0, n_qubits - 1);
            if (control == gate.target) control = (control + 1) % n_qubits;
            gate.control = control;
        }
        gate.angle = x[4 * g + 3];
        genome.gates.push_back(gate);
    }
    return genome;
}

std::vector<double> encode_genome(const CircuitGenome& genome, const GateLibrary& library) {
    std::vector<double> x;
    x.reserve(genome.gates.size() * 4);
    for (const GateSpec& gate : genome.gates) {
        x.push_back(static_cast<double>(library.index_of(gate.kind)));
        x.push_back(static_cast<double>(gate.target));
        x.push_back(static_cast<double>(gate.control.value_or(0)));
        x.push_back(gate.angle);
    }
    return x;
}

UnitaryMatrix gate_unitary(const GateSpec& gate, int n_qubits) {
    const int order = 1 << n_qubits;
    if (gate.kind == GateKind::noop) return UnitaryMatrix::identity(order);
    const Gate2x2 m = base_matrix(gate.kind, gate.angle);
    const bool controlled = is_controlled(gate.kind) && gate.control.has_value();
    UnitaryMatrix out(order);
    for (int c = 0; c < order; ++c) {
        if (controlled && qubit_bit(c, *gate.control, n_qubits) == 0) {
            out.at(c, c) = 1.0;
            continue;
        }
        const int tb = qubit_bit(c, gate.target, n_qubits);
        const int r0 = with_qubit_bit(c, gate.target, n_qubits, 0);
        const int r1 = with_qubit_bit(c, gate.target, n_qubits, 1);
        out.at(r0, c) += tb == 0 ? m.a : m.b;
        out.at(r1, c) += tb == 0 ? m.c : m.d;
    }
    return out;
}

UnitaryMatrix circuit_unitary(const CircuitGenome& genome) {
    const int order = 1 << genome.n_qubits;
    UnitaryMatrix u = UnitaryMatrix::identity(order);
    for (const GateSpec& gate : genome.gates) {
        if (gate.kind == GateKind::noop) continue;
        u = gate_unitary(gate, genome.n_qubits) * u;
    }
    return u;
}

double circuit_cost(const CircuitGenome& genome) {
    double cost = 0.0;
    for (const GateSpec& gate : genome.gates) {
        if (gate.kind == GateKind::noop) continue;
        if (is_controlled(gate.kind) && gate.control)
            cost += 2.0 * std::abs(gate.target - *gate.control);
        else
            cost += 1.0;
    }
    return cost;
}

double correctness(const UnitaryMatrix& target, const UnitaryMatrix& found) {
    if (target.order() != found.order())
        throw std::invalid_argument("correctness: order mismatch");
    // trace(target * found^dagger) without forming the product
    cplx t = 0.0;
    for (int r = 0; r < target.order(); ++r)
        for (int c = 0; c < target.order(); ++c)
            t += target.at(r, c) * std::conj(found.at(r, c));
    return std::abs(t) / static_cast<double>(target.order());
}

double objective_y(double correctness_value, double cost, double alpha, double beta,
                   bool empty_circuit) {
    const double cost_term = empty_circuit ? 0.0 : beta / cost;
    return std::abs(1.0 - (alpha * correctness_value + cost_term));
}

SynthesisObjective::SynthesisObjective(UnitaryMatrix target, int n_qubits, int max_gates,
                                       double alpha, double beta, const GateLibrary& library)
    : target_(std::move(target)), n_qubits_(n_qubits), max_gates_(max_gates),
      alpha_(alpha), beta_(beta), library_(&library) {
    if (n_qubits < 1) throw ConfigError("n_qubits: must be at least 1");
    if (max_gates < 1) throw ConfigError("max_gates: must be at least 1");
    if (target_.order() != (1 << n_qubits))
        throw ConfigError("target: order must be 2^n_qubits");
    if (!target_.is_unitary(1e-10))
        throw ConfigError("target: matrix is not unitary within 1e-10");
}

std::size_t SynthesisObjective::dimension() const {
    return 4 * static_cast<std::size_t>(max_gates_);
}

std::vector<Interval> SynthesisObjective::domain() const {
    const double qubit_hi = n_qubits_ - 0.51;
    std::vector<Interval> box;
    box.reserve(dimension());
    for (int g = 0; g < max_gates_; ++g) {
        box.push_back({0.0, library_->size() - 0.51}); // kind
        box.push_back({-0.49, qubit_hi});              // target
        box.push_back({-0.49, qubit_hi});              // control
        box.push_back({0.0, 2.0 * kPi});               // angle
    }
    return box;
}

double SynthesisObjective::evaluate(std::span<const double> x) const {
    const CircuitGenome genome = decode(x);
    const double c = correctness(target_, circuit_unitary(genome));
    return objective_y(c, circuit_cost(genome), alpha_, beta_,
                       genome.effectively_empty());
}

CircuitGenome SynthesisObjective::decode(std::span<const double> x) const {
    return decode_genome(x, n_qubits_, max_gates_, *library_);
}

UnitaryMatrix grover_oracle(int marked, int n_qubits) {
    const int order = 1 << n_qubits;
    if (marked < 0 || marked >= order)
        throw std::invalid_argument("grover_oracle: marked state out of range");
    UnitaryMatrix m = UnitaryMatrix::identity(order);
    m.at(marked, marked) = -1.0;
    return m;
}

UnitaryMatrix grover_diffusion(int n_qubits) {
    const int order = 1 << n_qubits;
    const double off = 2.0 / static_cast<double>(order);
    UnitaryMatrix m(order);
    for (int r = 0; r < order; ++r)
        for (int c = 0; c < order; ++c) m.at(r, c) = r == c ? off - 1.0 : off;
    return m;
}

int grover_round_count(int n_qubits) {
    const double n_states = static_cast<double>(1 << n_qubits);
    return static_cast<int>(std::floor(kPi / 4.0 * std::sqrt(n_states)));
}

double simulate_grover(int n_qubits, int marked, const UnitaryMatrix& diffusion,
                       int rounds) {
    const int order = 1 << n_qubits;
    if (diffusion.order() != order)
        throw std::invalid_argument("simulate_grover: diffusion order mismatch");
    if (marked < 0 || marked >= order)
        throw std::invalid_argument("simulate_grover: marked state out of range");
    const UnitaryMatrix oracle = grover_oracle(marked, n_qubits);
    // uniform superposition from H on every qubit
    std::vector<cplx> state(static_cast<std::size_t>(order),
                            cplx{1.0 / std::sqrt(static_cast<double>(order))});
    for (int r = 0; r < rounds; ++r) {
        state = oracle.apply(state);
        state = diffusion.apply(state);
    }
    return std::norm(state[static_cast<std::size_t>(marked)]);
}

double simulate_grover(int n_qubits, int marked, const UnitaryMatrix& diffusion) {
    return simulate_grover(n_qubits, marked, diffusion, grover_round_count(n_qubits));
}

double simulate_grover(int n_qubits, int marked) {
    return simulate_grover(n_qubits, marked, grover_diffusion(n_qubits));
}

void write_circuit(std::ostream& out, const CircuitGenome& genome) {
    char buf[128];
    for (const GateSpec& gate : genome.gates) {
        if (gate.kind == GateKind::noop) continue;
        std::snprintf(buf, sizeof(buf), "%d %d %d %.17g %s\n",
                      static_cast<int>(gate.kind), gate.target,
                      gate.control.value_or(-1), gate.angle, gate_name(gate.kind));
        out << buf;
    }
}

UnitaryMatrix load_unitary(std::istream& in, const std::string& origin) {
    std::vector<double> numbers;
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        std::istringstream fields(line);
        double v = 0.0;
        while (fields >> v) numbers.push_back(v);
        if (!fields.eof())
            throw std::runtime_error("unitary file: malformed number in " + origin);
    }
    if (numbers.empty() || numbers.size() % 2 != 0)
        throw std::runtime_error("unitary file: expected re/im pairs in " + origin);
    const auto entries = numbers.size() / 2;
    const auto order = static_cast<int>(std::llround(std::sqrt(static_cast<double>(entries))));
    if (static_cast<std::size_t>(order) * order != entries)
        throw std::runtime_error("unitary file: entry count is not square in " + origin);
    if (order < 2 || (order & (order - 1)) != 0)
        throw std::runtime_error("unitary file: order must be a power of two in " + origin);
    UnitaryMatrix m(order);
    for (int r = 0; r < order; ++r)
        for (int c = 0; c < order; ++c) {
            const std::size_t k = 2 * (static_cast<std::size_t>(r) * order + c);
            m.at(r, c) = cplx{numbers[k], numbers[k + 1]};
        }
    if (!m.is_unitary(1e-10))
        throw std::runtime_error("unitary file: matrix is not unitary within 1e-10 in " +
                                 origin);
    return m;
}

UnitaryMatrix load_unitary_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("unitary file: cannot open " + path);
    return load_unitary(in, path);
}

} // namespace gloa::qc
