#include <doctest.h>

#include "bornlab/pauli.hpp"
#include "bornlab/rng.hpp"

using namespace bornlab;

TEST_CASE("pauli product basics") {
    // X*X = I
    const auto xx = pauli_product(pauli_x(2, 1), pauli_x(2, 1));
    CHECK(xx.is_identity());
    CHECK(xx.phase_exp == 0);

    // XZ = -iY
    const auto xz = pauli_product(pauli_x(1, 1), pauli_z(1, 1));
    CHECK(pauli_label(xz) == "Y");
    CHECK(xz.phase_exp == 3);

    // ZX = +iY
    const auto zx = pauli_product(pauli_z(1, 1), pauli_x(1, 1));
    CHECK(pauli_label(zx) == "Y");
    CHECK(zx.phase_exp == 1);

    // product against the identity
    const auto p = pauli_from_label("XZIY");
    const auto pi = pauli_product(p, identity_string(4));
    CHECK(pi == p);
}

TEST_CASE("anticommutation of Z1 and X1X2") {
    const auto zi = pauli_z(2, 1);
    const auto xx = pauli_from_label("XX");
    CHECK_FALSE(pauli_commutes(zi, xx));
    const auto ab = pauli_product(zi, xx);
    const auto ba = pauli_product(xx, zi);
    CHECK(ab.x_mask == ba.x_mask);
    CHECK(ab.z_mask == ba.z_mask);
    // ab and ba differ by the sign i^2
    CHECK((ab.phase_exp - ba.phase_exp + 4) % 4 == 2);
    CHECK(pauli_label(ab) == "YX");
}

TEST_CASE("product phase order parity matches the symplectic form") {
    // property: ab = +- ba with the sign fixed by the commutation parity
    const char* labels[] = {"XZIY", "YYZI", "IIXZ", "ZXYX", "XXXX", "IZZY"};
    for (const char* la : labels)
        for (const char* lb : labels) {
            const auto a = pauli_from_label(la);
            const auto b = pauli_from_label(lb);
            const auto ab = pauli_product(a, b);
            const auto ba = pauli_product(b, a);
            const int diff = (ab.phase_exp - ba.phase_exp + 4) % 4;
            if (pauli_commutes(a, b)) CHECK(diff == 0);
            else CHECK(diff == 2);
        }
}

TEST_CASE("weight and labels") {
    const auto p = pauli_from_label("XZIY");
    CHECK(p.weight() == 3);
    CHECK(pauli_label(p) == "XZIY");
    CHECK(identity_string(5).weight() == 0);
    CHECK_THROWS(pauli_from_label("XQ"));
    CHECK_THROWS(pauli_product(pauli_x(2, 1), pauli_x(3, 1)));
}

TEST_CASE("product is associative on random word triples") {
    bornlab::Rng rng(57);
    const int n = 5;
    for (int rep = 0; rep < 200; ++rep) {
        auto draw = [&] {
            PauliString p{n, rng.next_u64() & 0x1f, rng.next_u64() & 0x1f,
                          static_cast<int>(rng.uniform_index(4))};
            return p;
        };
        const auto a = draw(), b = draw(), c = draw();
        const auto left = pauli_product(pauli_product(a, b), c);
        const auto right = pauli_product(a, pauli_product(b, c));
        CHECK(left == right);
    }
}

TEST_CASE("Hermitian canonical words square to the identity") {
    const char* labels[] = {"Y", "XY", "YZY", "XZIY", "YYYY"};
    for (const char* l : labels) {
        const auto p = pauli_from_label(l);
        const auto sq = pauli_product(p, p);
        CHECK(sq.is_identity());
        CHECK(sq.phase_exp == 0);
    }
}
