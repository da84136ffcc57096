#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace bornlab {

// n-qubit Pauli word stored as two bitmasks. Bit q of a mask refers to qubit
// q+1 (qubits are numbered 1..n throughout). The operator represented is
//
//     i^phase_exp * H(x_mask, z_mask)
//
// where H(x, z) is the Hermitian word built from literal X/Y/Z letters
// (Y on qubits where both masks are set). phase_exp lives in {0,1,2,3}.
struct PauliString {
    int n = 0;
    std::uint64_t x_mask = 0;
    std::uint64_t z_mask = 0;
    int phase_exp = 0;

    bool is_identity() const { return x_mask == 0 && z_mask == 0; }
    int weight() const;

    // masks-only key, ignoring phase; unique for n <= 32
    std::uint64_t key() const { return (x_mask << 32) | z_mask; }

    bool operator==(const PauliString& o) const {
        return n == o.n && x_mask == o.x_mask && z_mask == o.z_mask &&
               phase_exp == o.phase_exp;
    }
};

PauliString identity_string(int n);

// single-letter constructors, 1-based qubit index
PauliString pauli_x(int n, int qubit);
PauliString pauli_y(int n, int qubit);
PauliString pauli_z(int n, int qubit);

// word from a label such as "XZIY" (qubit 1 leftmost)
PauliString pauli_from_label(const std::string& label);
std::string pauli_label(const PauliString& p);

// strips the phase, keeping the Hermitian representative
PauliString phase_stripped(const PauliString& p);

bool pauli_commutes(const PauliString& a, const PauliString& b);

// exact product a*b with phase tracking
PauliString pauli_product(const PauliString& a, const PauliString& b);

int popcount64(std::uint64_t v);

}  // namespace bornlab
