#include <doctest.h>

#include <cmath>
#include <complex>
#include <cstdio>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "gloa/config.hpp"
#include "gloa/quantum.hpp"
#include "gloa/rng.hpp"

using namespace gloa;
using namespace gloa::qc;

namespace {

constexpr double kPi = std::numbers::pi;

double max_abs_diff(const UnitaryMatrix& a, const UnitaryMatrix& b) {
    REQUIRE(a.order() == b.order());
    double worst = 0.0;
    for (int r = 0; r < a.order(); ++r)
        for (int c = 0; c < a.order(); ++c)
            worst = std::max(worst, std::abs(a.at(r, c) - b.at(r, c)));
    return worst;
}

GateSpec gate(GateKind kind, int target, std::optional<int> control = std::nullopt,
              double angle = 0.0) {
    GateSpec g;
    g.kind = kind;
    g.target = target;
    g.control = control;
    g.angle = angle;
    return g;
}

/// Diffusion as a gate sequence: H on both qubits, phase flip of everything
/// but |00>, H on both qubits again.
CircuitGenome diffusion_circuit_2q() {
    CircuitGenome genome;
    genome.n_qubits = 2;
    genome.gates = {gate(GateKind::h, 0, 1),  gate(GateKind::h, 1, 0),
                    gate(GateKind::z, 0, 1),  gate(GateKind::z, 1, 0),
                    gate(GateKind::cz, 1, 0), gate(GateKind::h, 0, 1),
                    gate(GateKind::h, 1, 0)};
    return genome;
}

} // namespace

TEST_SUITE("quantum") {

TEST_CASE("matrix primitives behave like linear algebra") {
    const UnitaryMatrix id = UnitaryMatrix::identity(4);
    CHECK(id.order() == 4);
    CHECK(id.trace() == cplx{4.0, 0.0});
    CHECK(id * id == id);
    CHECK(id.unitarity_error() == 0.0);

    const UnitaryMatrix h = gate_unitary(gate(GateKind::h, 0), 1);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(h.at(0, 0) - cplx{inv_sqrt2, 0.0}) < 1e-15);
    CHECK(std::abs(h.at(1, 1) - cplx{-inv_sqrt2, 0.0}) < 1e-15);
    CHECK(max_abs_diff(h * h, UnitaryMatrix::identity(2)) < 1e-15);

    const UnitaryMatrix p = gate_unitary(gate(GateKind::phase, 0, {}, 0.7), 1);
    CHECK(max_abs_diff(p.dagger() * p, UnitaryMatrix::identity(2)) < 1e-15);

    const UnitaryMatrix x1 = gate_unitary(gate(GateKind::x, 0), 1);
    const std::vector<cplx> zero{cplx{1.0, 0.0}, cplx{0.0, 0.0}};
    const auto flipped = x1.apply(zero);
    CHECK(std::abs(flipped[0]) < 1e-15);
    CHECK(std::abs(flipped[1] - cplx{1.0, 0.0}) < 1e-15);

    // kron puts its first factor on the most significant qubit
    const UnitaryMatrix via_kron = UnitaryMatrix::kron(x1, UnitaryMatrix::identity(2));
    const UnitaryMatrix via_gate = gate_unitary(gate(GateKind::x, 0, 1), 2);
    CHECK(max_abs_diff(via_kron, via_gate) == 0.0);
}

TEST_CASE("qubit 0 is the most significant bit of the state index") {
    const UnitaryMatrix x_on_0 = gate_unitary(gate(GateKind::x, 0, 1), 2);
    CHECK(x_on_0.at(2, 0) == cplx{1.0, 0.0}); // |00> -> |10>
    CHECK(x_on_0.at(0, 2) == cplx{1.0, 0.0});

    const UnitaryMatrix x_on_1 = gate_unitary(gate(GateKind::x, 1, 0), 2);
    CHECK(x_on_1.at(1, 0) == cplx{1.0, 0.0}); // |00> -> |01>
    CHECK(x_on_1.at(3, 2) == cplx{1.0, 0.0});
}

TEST_CASE("controlled gates act only when the control bit is set") {
    const UnitaryMatrix cx = gate_unitary(gate(GateKind::cx, 1, 0), 2);
    CHECK(cx.at(0, 0) == cplx{1.0, 0.0});
    CHECK(cx.at(1, 1) == cplx{1.0, 0.0});
    CHECK(cx.at(3, 2) == cplx{1.0, 0.0}); // |10> -> |11>
    CHECK(cx.at(2, 3) == cplx{1.0, 0.0});
    CHECK(cx.at(2, 2) == cplx{0.0, 0.0});

    const UnitaryMatrix cz = gate_unitary(gate(GateKind::cz, 1, 0), 2);
    for (int k = 0; k < 4; ++k)
        CHECK(cz.at(k, k) == (k == 3 ? cplx{-1.0, 0.0} : cplx{1.0, 0.0}));

    const double theta = 0.9;
    const UnitaryMatrix cp = gate_unitary(gate(GateKind::cphase, 1, 0, theta), 2);
    CHECK(std::abs(cp.at(3, 3) - std::exp(cplx{0.0, theta})) < 1e-15);
    CHECK(cp.at(2, 2) == cplx{1.0, 0.0});
}

TEST_CASE("rotation gates match their closed forms") {
    const UnitaryMatrix rx_pi = gate_unitary(gate(GateKind::rx, 0, {}, kPi), 1);
    CHECK(std::abs(rx_pi.at(0, 0)) < 1e-15);
    CHECK(std::abs(rx_pi.at(0, 1) - cplx{0.0, -1.0}) < 1e-15);
    CHECK(std::abs(rx_pi.at(1, 0) - cplx{0.0, -1.0}) < 1e-15);

    const UnitaryMatrix rz = gate_unitary(gate(GateKind::rz, 0, {}, 0.6), 1);
    CHECK(std::abs(rz.at(0, 0) - std::exp(cplx{0.0, -0.3})) < 1e-15);
    CHECK(std::abs(rz.at(1, 1) - std::exp(cplx{0.0, 0.3})) < 1e-15);
}

TEST_CASE("every gate in the vocabulary is unitary for random parameters") {
    SplitRng rng(17);
    const GateLibrary& lib = GateLibrary::standard();
    for (int trial = 0; trial < 50; ++trial)
        for (int k = 0; k < lib.size(); ++k) {
            const int target = rng.uniform_int(0, 2);
            int control = rng.uniform_int(0, 2);
            if (control == target) control = (control + 1) % 3;
            const UnitaryMatrix u = gate_unitary(
                gate(lib.at(k), target, control, rng.uniform(0.0, 2.0 * kPi)), 3);
            CHECK(u.unitarity_error() <= 1e-10);
        }
}

TEST_CASE("circuit matrices compose in application order") {
    // X then H differs from H then X; first listed acts first
    CircuitGenome xh;
    xh.n_qubits = 1;
    xh.gates = {gate(GateKind::x, 0), gate(GateKind::h, 0)};
    const UnitaryMatrix expected = gate_unitary(gate(GateKind::h, 0), 1) *
                                   gate_unitary(gate(GateKind::x, 0), 1);
    CHECK(max_abs_diff(circuit_unitary(xh), expected) == 0.0);

    CircuitGenome with_noop = xh;
    with_noop.gates.insert(with_noop.gates.begin(), gate(GateKind::noop, 0));
    CHECK(circuit_unitary(with_noop) == circuit_unitary(xh));
    CHECK_FALSE(with_noop.effectively_empty());

    CircuitGenome empty;
    empty.n_qubits = 2;
    empty.gates.assign(5, gate(GateKind::noop, 0, 1));
    CHECK(empty.effectively_empty());
    CHECK(circuit_unitary(empty) == UnitaryMatrix::identity(4));
}

TEST_CASE("genomes decode with rounding, clamping and collision shifts") {
    const std::vector<double> x{2.0, 3.0, 2.0, 0.3, 3.0, 2.0, 1.0, 0.5};
    const CircuitGenome genome = decode_genome(x, 4, 2);
    REQUIRE(genome.gates.size() == 2);
    CHECK(genome.gates[0] == gate(GateKind::x, 3, 2, 0.3));
    CHECK(genome.gates[1] == gate(GateKind::y, 2, 1, 0.5));

    const std::vector<double> wild{-5.0, 7.6, 2.2, 1.0, 99.0, -3.0, 0.4, 2.0};
    const CircuitGenome clamped = decode_genome(wild, 4, 2);
    CHECK(clamped.gates[0].kind == GateKind::noop);
    CHECK(clamped.gates[0].target == 3);
    CHECK(clamped.gates[0].control == 2);
    CHECK(clamped.gates[1].kind == GateKind::cphase);
    CHECK(clamped.gates[1].target == 0);

    // a control landing on its target moves to the next qubit modulo n
    const std::vector<double> collide{9.0, 2.0, 2.0, 0.0, 9.0, 3.0, 3.0, 0.0};
    const CircuitGenome shifted = decode_genome(collide, 4, 2);
    CHECK(shifted.gates[0].control == 3);
    CHECK(shifted.gates[1].control == 0);

    CHECK_THROWS_AS((void)decode_genome(x, 0, 2), ConfigError);
    CHECK_THROWS_AS((void)decode_genome(x, 4, 3), ConfigError);
}

TEST_CASE("single-qubit registers have no controls") {
    const std::vector<double> x{9.0, 0.0, 0.0, 0.0};
    const CircuitGenome genome = decode_genome(x, 1, 1);
    CHECK_FALSE(genome.gates[0].control.has_value());
    // an uncontrollable controlled-X degrades to a plain X
    CHECK(circuit_unitary(genome) == gate_unitary(gate(GateKind::x, 0), 1));
}

TEST_CASE("decoding is idempotent through the encoder") {
    SplitRng rng(29);
    for (int n_qubits : {2, 3}) {
        const SynthesisObjective objective(UnitaryMatrix::identity(1 << n_qubits),
                                           n_qubits, 6);
        const auto domain = objective.domain();
        for (int trial = 0; trial < 25; ++trial) {
            std::vector<double> x;
            for (const Interval& b : domain) x.push_back(rng.uniform(b.lo, b.hi));
            const CircuitGenome genome = decode_genome(x, n_qubits, 6);
            const CircuitGenome again =
                decode_genome(encode_genome(genome), n_qubits, 6);
            CHECK(again == genome);
        }
    }
}

TEST_CASE("cost counts gate wiring, not slots") {
    CircuitGenome genome;
    genome.n_qubits = 4;
    genome.gates.assign(3, gate(GateKind::noop, 0, 1));
    CHECK(circuit_cost(genome) == 0.0);

    genome.gates.push_back(gate(GateKind::h, 2, 3));
    CHECK(circuit_cost(genome) == 1.0);

    genome.gates.push_back(gate(GateKind::cx, 1, 0));
    CHECK(circuit_cost(genome) == 3.0); // adjacent control costs 2

    genome.gates.push_back(gate(GateKind::cx, 3, 0));
    CHECK(circuit_cost(genome) == 9.0); // distance 3 costs 6
}

TEST_CASE("correctness ignores global phase and nothing else") {
    const UnitaryMatrix z = gate_unitary(gate(GateKind::z, 0), 1);
    const UnitaryMatrix x = gate_unitary(gate(GateKind::x, 0), 1);
    CHECK(correctness(z, x) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(correctness(z, z) == doctest::Approx(1.0).epsilon(1e-15));

    const UnitaryMatrix d = grover_diffusion(2);
    UnitaryMatrix phased = d;
    const cplx phase = std::exp(cplx{0.0, 1.234});
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) phased.at(r, c) *= phase;
    CHECK(std::abs(correctness(d, phased) - 1.0) <= 1e-12);
}

TEST_CASE("the synthesis score folds correctness and cost") {
    CHECK(objective_y(1.0, 10.0, 0.9, 0.1, false) == doctest::Approx(0.09).epsilon(1e-12));
    CHECK(objective_y(1.0, 8.0, 0.9, 0.1, false) == doctest::Approx(0.0875).epsilon(1e-12));
    // empty circuits drop the cost bonus
    CHECK(objective_y(1.0, 0.0, 0.9, 0.1, true) == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(objective_y(0.0, 1.0, 0.9, 0.1, false) == doctest::Approx(0.9).epsilon(1e-12));
}

TEST_CASE("the synthesis objective scores the diffusion construction") {
    const SynthesisObjective objective(grover_diffusion(2), 2, 8);
    CHECK(objective.dimension() == 32);
    const auto domain = objective.domain();
    REQUIRE(domain.size() == 32);
    CHECK(domain[0] == Interval{0.0, 11.49});       // kind slot
    CHECK(domain[1] == Interval{-0.49, 1.49});      // target slot
    CHECK(domain[2] == Interval{-0.49, 1.49});      // control slot
    CHECK(domain[3] == Interval{0.0, 2.0 * kPi});   // angle slot

    CircuitGenome genome = diffusion_circuit_2q();
    genome.gates.push_back(gate(GateKind::noop, 0, 1)); // pad to 8 slots
    const std::vector<double> x = encode_genome(genome);
    REQUIRE(x.size() == 32);
    // perfect unitary at cost 8: y = |1 - (0.9*1 + 0.1/8)|
    CHECK(objective.evaluate(x) == doctest::Approx(0.0875).epsilon(1e-9));
    CHECK(objective.decode(x) == genome);

    CHECK_THROWS_AS(SynthesisObjective(grover_diffusion(2), 0, 8), ConfigError);
    CHECK_THROWS_AS(SynthesisObjective(grover_diffusion(2), 2, 0), ConfigError);
    CHECK_THROWS_AS(SynthesisObjective(grover_diffusion(2), 3, 8), ConfigError);
}

TEST_CASE("diffusion operators match their closed forms") {
    const UnitaryMatrix d1 = grover_diffusion(1);
    CHECK(d1.at(0, 0) == cplx{0.0, 0.0});
    CHECK(d1.at(0, 1) == cplx{1.0, 0.0});
    CHECK(d1.at(1, 0) == cplx{1.0, 0.0});

    const UnitaryMatrix d2 = grover_diffusion(2);
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c)
            CHECK(d2.at(r, c) == (r == c ? cplx{-0.5, 0.0} : cplx{0.5, 0.0}));
    CHECK(d2.is_unitary());

    // the textbook gate sequence reproduces the operator exactly
    CHECK(max_abs_diff(circuit_unitary(diffusion_circuit_2q()), d2) < 1e-12);
}

TEST_CASE("round counts follow the square-root schedule") {
    CHECK(grover_round_count(1) == 1);
    CHECK(grover_round_count(2) == 1);
    CHECK(grover_round_count(4) == 3);
}

TEST_CASE("the search finds a marked two-qubit state with certainty") {
    for (int marked = 0; marked < 4; ++marked)
        CHECK(std::abs(simulate_grover(2, marked) - 1.0) <= 1e-9);

    CHECK(simulate_grover(1, 0) == doctest::Approx(0.5).epsilon(1e-12));

    // zero rounds leave the uniform superposition untouched
    CHECK(simulate_grover(2, 1, grover_diffusion(2), 0) ==
          doctest::Approx(0.25).epsilon(1e-12));

    // a circuit-built diffusion is a drop-in replacement
    const UnitaryMatrix built = circuit_unitary(diffusion_circuit_2q());
    for (int marked = 0; marked < 4; ++marked)
        CHECK(std::abs(simulate_grover(2, marked, built) -
                       simulate_grover(2, marked)) <= 1e-12);

    CHECK_THROWS_AS((void)simulate_grover(2, 7), std::invalid_argument);
    CHECK_THROWS_AS((void)simulate_grover(2, 0, grover_diffusion(1)),
                    std::invalid_argument);
}

TEST_CASE("circuits serialize one gate per line") {
    CircuitGenome genome;
    genome.n_qubits = 2;
    genome.gates = {gate(GateKind::h, 0), gate(GateKind::noop, 1),
                    gate(GateKind::cx, 1, 0, 0.25)};
    std::ostringstream out;
    write_circuit(out, genome);
    CHECK(out.str() == "1 0 -1 0 H\n9 1 0 0.25 CX\n");
}

TEST_CASE("unitary files load strictly") {
    std::istringstream good("# identity\n1 0 0 0\n0 0 1 0\n");
    const UnitaryMatrix m = load_unitary(good, "test");
    CHECK(m == UnitaryMatrix::identity(2));

    std::istringstream odd("1 0 0\n");
    CHECK_THROWS_AS((void)load_unitary(odd, "test"), std::runtime_error);

    std::istringstream not_square("1 0 0 0 0 0\n");
    CHECK_THROWS_AS((void)load_unitary(not_square, "test"), std::runtime_error);

    std::istringstream not_power_of_two(
        "1 0 0 0 0 0  0 0 1 0 0 0  0 0 0 0 1 0\n");
    CHECK_THROWS_AS((void)load_unitary(not_power_of_two, "test"), std::runtime_error);

    std::istringstream not_unitary("1 0 0 0 0 0 2 0\n");
    CHECK_THROWS_AS((void)load_unitary(not_unitary, "test"), std::runtime_error);

    std::istringstream garbled("1 0 zero 0\n");
    CHECK_THROWS_AS((void)load_unitary(garbled, "test"), std::runtime_error);

    CHECK_THROWS_AS((void)load_unitary_file("/nonexistent/u.txt"), std::runtime_error);

    // full-precision text round trips the Hadamard exactly
    const UnitaryMatrix h = gate_unitary(gate(GateKind::h, 0), 1);
    char buf[512];
    std::string text;
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) {
            std::snprintf(buf, sizeof(buf), "%.17g %.17g\n", h.at(r, c).real(),
                          h.at(r, c).imag());
            text += buf;
        }
    std::istringstream round_trip(text);
    CHECK(load_unitary(round_trip, "test") == h);
}

} // TEST_SUITE
