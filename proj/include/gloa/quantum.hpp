#pragma once

#include <complex>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gloa/objective.hpp"

namespace gloa::qc {

using cplx = std::complex<double>;

/// Dense square complex matrix on 2^n basis states, row major.
/// Qubit 0 is the most significant bit of the basis-state index.
class UnitaryMatrix {
public:
    UnitaryMatrix() = default;
    explicit UnitaryMatrix(int order) : order_(order), a_(static_cast<std::size_t>(order) * order) {}
    static UnitaryMatrix identity(int order);

    int order() const { return order_; }
    cplx& at(int r, int c) { return a_[static_cast<std::size_t>(r) * order_ + c]; }
    const cplx& at(int r, int c) const { return a_[static_cast<std::size_t>(r) * order_ + c]; }

    UnitaryMatrix operator*(const UnitaryMatrix& rhs) const;
    UnitaryMatrix dagger() const;
    cplx trace() const;
    static UnitaryMatrix kron(const UnitaryMatrix& a, const UnitaryMatrix& b);

    std::vector<cplx> apply(std::span<const cplx> state) const;

    /// Largest per-entry deviation of U * U^dagger from the identity.
    double unitarity_error() const;
    bool is_unitary(double tol = 1e-10) const { return unitarity_error() <= tol; }

    bool operator==(const UnitaryMatrix&) const = default;

private:
    int order_ = 0;
    std::vector<cplx> a_;
};

/// Gate vocabulary. Integer values are the genome encoding.
enum class GateKind : int {
    noop = 0,
    h = 1,
    x = 2,
    y = 3,
    z = 4,
    rx = 5,
    ry = 6,
    rz = 7,
    phase = 8,
    cx = 9,
    cz = 10,
    cphase = 11,
};

bool is_controlled(GateKind kind);
bool is_parameterized(GateKind kind);
const char* gate_name(GateKind kind);

/// One decoded gate. The control field is ignored by uncontrolled kinds
/// but always carried so decoding round-trips; it never equals target.
struct GateSpec {
    GateKind kind = GateKind::noop;
    int target = 0;
    std::optional<int> control;
    double angle = 0.0;

    bool operator==(const GateSpec&) const = default;
};

/// Ordered set of gate kinds a genome may select from; index 0 is noop.
class GateLibrary {
public:
    static const GateLibrary& standard();

    explicit GateLibrary(std::vector<GateKind> kinds);
    int size() const { return static_cast<int>(kinds_.size()); }
    GateKind at(int index) const { return kinds_[static_cast<std::size_t>(index)]; }
    int index_of(GateKind kind) const;

private:
    std::vector<GateKind> kinds_;
};

/// Fixed-length gate list over an n-qubit register; noop slots make the
/// effective circuit shorter than the slot count.
struct CircuitGenome {
    int n_qubits = 1;
    std::vector<GateSpec> gates;

    bool effectively_empty() const;
    bool operator==(const CircuitGenome&) const = default;
};

/// Real-vector layout: 4 numbers per gate slot (kind, target, control,
/// angle). Kind/target/control round to the nearest valid index; a control
/// colliding with its target shifts to the next qubit modulo n; angles pass
/// through unchanged.
CircuitGenome decode_genome(std::span<const double> x, int n_qubits, int max_gates,
                            const GateLibrary& library = GateLibrary::standard());

/// Inverse of decode_genome up to the rounding decode applies:
/// decode(encode(g)) == g for any decoded genome g.
std::vector<double> encode_genome(const CircuitGenome& genome,
                                  const GateLibrary& library = GateLibrary::standard());

/// Full-register matrix of one gate.
UnitaryMatrix gate_unitary(const GateSpec& gate, int n_qubits);

/// Product of the gate matrices, first listed gate applied first.
UnitaryMatrix circuit_unitary(const CircuitGenome& genome);

/// 1 per single-qubit gate, 2*|target - control| per controlled gate,
/// noop slots free.
double circuit_cost(const CircuitGenome& genome);

/// |trace(target * found^dagger)| / order; 1 iff equal up to global phase.
double correctness(const UnitaryMatrix& target, const UnitaryMatrix& found);

/// Synthesis score y = |1 - (alpha*C + beta/cost)|; the cost term is
/// dropped for an effectively empty circuit.
double objective_y(double correctness_value, double cost, double alpha, double beta,
                   bool empty_circuit);

/// Engine objective: genomes of max_gates slots scored against a target
/// unitary. Search box: kind in [0, library size - 0.51], target/control in
/// [-0.49, n - 0.51], angle in [0, 2*pi].
class SynthesisObjective final : public Objective {
public:
    SynthesisObjective(UnitaryMatrix target, int n_qubits, int max_gates = 8,
                       double alpha = 0.9, double beta = 0.1,
                       const GateLibrary& library = GateLibrary::standard());

    std::size_t dimension() const override;
    std::vector<Interval> domain() const override;
    double evaluate(std::span<const double> x) const override;
    std::string name() const override { return "synthesis"; }

    CircuitGenome decode(std::span<const double> x) const;
    const UnitaryMatrix& target() const { return target_; }
    int n_qubits() const { return n_qubits_; }
    int max_gates() const { return max_gates_; }

private:
    UnitaryMatrix target_;
    int n_qubits_;
    int max_gates_;
    double alpha_;
    double beta_;
    const GateLibrary* library_;
};

/// Reflection about |marked>: identity with the marked diagonal negated.
UnitaryMatrix grover_oracle(int marked, int n_qubits);

/// Inversion about the mean: 2/N everywhere, 2/N - 1 on the diagonal.
UnitaryMatrix grover_diffusion(int n_qubits);

/// floor(pi/4 * sqrt(2^n)) amplification rounds.
int grover_round_count(int n_qubits);

/// Probability of measuring `marked` after running the search with the
/// given diffusion operator (exact operator by default).
double simulate_grover(int n_qubits, int marked);
double simulate_grover(int n_qubits, int marked, const UnitaryMatrix& diffusion);
double simulate_grover(int n_qubits, int marked, const UnitaryMatrix& diffusion,
                       int rounds);

/// One gate per line: kind target control angle name. Noop slots skipped.
void write_circuit(std::ostream& out, const CircuitGenome& genome);

/// Reads a square complex matrix from whitespace-separated "re im" pairs
/// (row major, '#' comments). The order must be a power of two and the
/// matrix unitary within 1e-10.
UnitaryMatrix load_unitary(std::istream& in, const std::string& origin);
UnitaryMatrix load_unitary_file(const std::string& path);

} // namespace gloa::qc
