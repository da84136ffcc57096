#include "bornlab/pauli.hpp"

#include <bit>
#include <stdexcept>

namespace bornlab {

int popcount64(std::uint64_t v) { return std::popcount(v); }

int PauliString::weight() const { return popcount64(x_mask | z_mask); }

PauliString identity_string(int n) { return PauliString{n, 0, 0, 0}; }

static void check_qubit(int n, int qubit) {
    if (qubit < 1 || qubit > n) throw std::invalid_argument("qubit index out of range");
}

PauliString pauli_x(int n, int qubit) {
    check_qubit(n, qubit);
    return PauliString{n, 1ULL << (qubit - 1), 0, 0};
}

PauliString pauli_y(int n, int qubit) {
    check_qubit(n, qubit);
    return PauliString{n, 1ULL << (qubit - 1), 1ULL << (qubit - 1), 0};
}

PauliString pauli_z(int n, int qubit) {
    check_qubit(n, qubit);
    return PauliString{n, 0, 1ULL << (qubit - 1), 0};
}

PauliString pauli_from_label(const std::string& label) {
    const int n = static_cast<int>(label.size());
    if (n == 0 || n > 32) throw std::invalid_argument("label length must be in [1, 32]");
    PauliString p{n, 0, 0, 0};
    for (int i = 0; i < n; ++i) {
        const std::uint64_t bit = 1ULL << i;
        switch (label[static_cast<std::size_t>(i)]) {
            case 'I': break;
            case 'X': p.x_mask |= bit; break;
            case 'Y': p.x_mask |= bit; p.z_mask |= bit; break;
            case 'Z': p.z_mask |= bit; break;
            default: throw std::invalid_argument("label may only contain I, X, Y, Z");
        }
    }
    return p;
}

std::string pauli_label(const PauliString& p) {
    std::string out(static_cast<std::size_t>(p.n), 'I');
    for (int i = 0; i < p.n; ++i) {
        const bool x = (p.x_mask >> i) & 1;
        const bool z = (p.z_mask >> i) & 1;
        if (x && z) out[static_cast<std::size_t>(i)] = 'Y';
        else if (x) out[static_cast<std::size_t>(i)] = 'X';
        else if (z) out[static_cast<std::size_t>(i)] = 'Z';
    }
    return out;
}

PauliString phase_stripped(const PauliString& p) {
    return PauliString{p.n, p.x_mask, p.z_mask, 0};
}

bool pauli_commutes(const PauliString& a, const PauliString& b) {
    const int s = popcount64(a.x_mask & b.z_mask) + popcount64(a.z_mask & b.x_mask);
    return (s & 1) == 0;
}

PauliString pauli_product(const PauliString& a, const PauliString& b) {
    if (a.n != b.n) throw std::invalid_argument("pauli_product: qubit count mismatch");
    // Work in the i^k X^x Z^z representation, where the Hermitian word is
    // H(x,z) = i^{|x&z|} X^x Z^z, and fold back at the end.
    const int ka = a.phase_exp + popcount64(a.x_mask & a.z_mask);
    const int kb = b.phase_exp + popcount64(b.x_mask & b.z_mask);
    const std::uint64_t x = a.x_mask ^ b.x_mask;
    const std::uint64_t z = a.z_mask ^ b.z_mask;
    // Z^za X^xb = (-1)^{|za & xb|} X^xb Z^za
    int k = ka + kb + 2 * popcount64(a.z_mask & b.x_mask);
    k -= popcount64(x & z);  // convert back to Hermitian-canonical form
    k = ((k % 4) + 4) % 4;
    return PauliString{a.n, x, z, k};
}

}  // namespace bornlab
