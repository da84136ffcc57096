#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "bornlab/pauli.hpp"
#include "bornlab/rng.hpp"

namespace bornlab {

// Dense state over 2^n basis states. Basis index convention: qubit 1 is the
// most significant bit, so index(x) = sum_i x_i 2^{n-i} and the amplitudes
// are in lexicographic bitstring order 00..0, 00..1, ...
struct StateVector {
    int n = 0;
    std::vector<std::complex<double>> amp;

    static StateVector zero_state(int n);
    double norm_sq() const;
};

// Public masks over qubit subsets use qubit space: bit q-1 <-> qubit q.
// index_space_mask converts to a mask over basis-index bits.
std::uint64_t index_space_mask(int n, std::uint64_t qubit_mask);

struct Gate {
    enum class Kind { pauli_rotation, hadamard, cnot };
    Kind kind = Kind::pauli_rotation;
    PauliString generator;  // pauli_rotation
    int param_index = -1;   // pauli_rotation
    int qubit = 0;          // hadamard
    int control = 0, target = 0;  // cnot
};

Gate rotation_gate(const PauliString& generator, int param_index);
Gate hadamard_gate(int qubit);
Gate cnot_gate(int control, int target);

struct Circuit {
    int n = 0;
    std::vector<Gate> gates;
    int param_count = 0;
};

// in-place gate application; rotation convention R_P(theta) = exp(-i theta/2 P)
void apply_gate(StateVector& state, const Gate& gate, double theta);
void apply_pauli(StateVector& state, const PauliString& p);  // state <- P state

StateVector simulate(const Circuit& circuit, const std::vector<double>& theta);

std::vector<double> born_distribution(const StateVector& state);

// <Z_subset> = sum_x (-1)^{sum_{i in subset} x_i} Pr(x); subset in qubit space
double z_correlator(const StateVector& state, std::uint64_t subset);
double z_correlator(const std::vector<double>& probs, int n, std::uint64_t subset);

// i.i.d. draws from the Born distribution, deterministic per seed.
// Returned values are basis indices (qubit 1 = MSB).
std::vector<std::uint64_t> sample(const StateVector& state, std::size_t m,
                                  std::uint64_t seed);
std::vector<std::uint64_t> sample(const std::vector<double>& probs, std::size_t m,
                                  std::uint64_t seed);

// --------------------------------------------------------------------------
// ansatz construction

struct AnsatzSpec {
    enum class Kind { iqp, matchcircuit, dla_sampled, strongly_entangling };
    Kind kind = Kind::strongly_entangling;
    int n = 0;
    int gate_count = 0;   // matchcircuit / dla_sampled: number of rotations
    int layers = 0;       // strongly_entangling
    int iqp_pairs = -1;   // iqp: extra two-qubit ZZ rotations (-1 -> n-1)
    std::uint64_t seed = 0;
    std::vector<PauliString> dla_basis;  // dla_sampled
};

Circuit build_ansatz(const AnsatzSpec& spec);

// circuit of Note III: two RY rotations followed by the two CNOTs, wired so
// that <Z_1> = cos t1, <Z_2> = cos t1 cos t2, <Z_1 Z_2> = cos t2
Circuit simple_eg_circuit();

// H on qubit 1 plus a CNOT chain
Circuit ghz_circuit(int n);

inline constexpr int kMaxDenseQubits = 24;

}  // namespace bornlab
