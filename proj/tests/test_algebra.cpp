#include <doctest.h>

#include <set>

#include "bornlab/algebra.hpp"

using namespace bornlab;

namespace {

std::set<std::uint64_t> keys(const OperatorAlgebra& a) {
    std::set<std::uint64_t> s;
    for (const auto& p : a.basis) s.insert(p.key());
    return s;
}

}  // namespace

TEST_CASE("closure of the n=2 matchgate generators is so(4)") {
    const auto alg = lie_closure(matchgate_generators(2), 256);
    CHECK(alg.dimension() == 6);
    CHECK(alg.is_commutation_closed());
}

TEST_CASE("single diagonal generator closes on itself") {
    const auto alg = lie_closure({pauli_z(3, 1)}, 64);
    CHECK(alg.dimension() == 1);
    CHECK(pauli_label(alg.basis[0]) == "ZII");
}

TEST_CASE("max_dim guard aborts with the partial basis") {
    bool thrown = false;
    try {
        lie_closure(haldane_generator_words(4), 10);
    } catch (const ClosureOverflow& e) {
        thrown = true;
        CHECK(e.partial_result.dimension() > 10);
    }
    CHECK(thrown);
}

TEST_CASE("closure is monotone in the generator set") {
    const auto small = lie_closure({pauli_z(3, 1), pauli_from_label("XXI")}, 4096);
    auto gens = std::vector<PauliString>{pauli_z(3, 1), pauli_from_label("XXI"),
                                         pauli_from_label("IXX")};
    const auto big = lie_closure(gens, 4096);
    CHECK(big.dimension() >= small.dimension());
    for (const auto& p : small.basis) CHECK(big.contains(p));
}

TEST_CASE("named matchgate dimensions n(2n-1) and closure equality") {
    for (int n = 2; n <= 6; ++n) {
        const auto named = named_dla(DlaKind::matchgate, n);
        CHECK(named.dimension() == static_cast<std::size_t>(n * (2 * n - 1)));
        const auto cl = lie_closure(matchgate_generators(n), 1u << 14);
        CHECK(keys(cl) == keys(named));
    }
}

TEST_CASE("named heisenberg basis equals the word closure; dimension 4^{n-1}-1-3[n even]") {
    for (int n = 3; n <= 6; ++n) {
        const auto named = named_dla(DlaKind::heisenberg, n);
        const std::size_t expect =
            (std::size_t{1} << (2 * (n - 1))) - 1 - (n % 2 == 0 ? 3 : 0);
        CHECK(named.dimension() == expect);
        const auto cl = lie_closure(heisenberg_generator_words(n), 1u << 14);
        CHECK(keys(cl) == keys(named));
    }
}

TEST_CASE("named haldane dimension 4^{n-1}-4; closure equality for n >= 4") {
    for (int n = 3; n <= 6; ++n) {
        const auto named = named_dla(DlaKind::haldane, n);
        CHECK(named.dimension() == (std::size_t{1} << (2 * (n - 1))) - 4);
        const auto cl = lie_closure(haldane_generator_words(n), 1u << 14);
        if (n == 3) {
            // at n = 3 the excluded X_o = IXI is itself a field generator, so
            // the closure carries one extra word
            CHECK(cl.dimension() == named.dimension() + 1);
            CHECK(cl.contains(pauli_from_label("IXI")));
            for (const auto& p : named.basis) CHECK(cl.contains(p));
        } else {
            CHECK(keys(cl) == keys(named));
        }
    }
}

TEST_CASE("named bases are commutation closed") {
    // the 12-element haldane basis at n=3 is a proper subalgebra: no pair of
    // its members commutes onto the excluded X_o, which only enters the
    // closure because it is itself a field generator there
    for (int n = 3; n <= 5; ++n) {
        CHECK(named_dla(DlaKind::haldane, n).is_commutation_closed());
        CHECK(named_dla(DlaKind::heisenberg, n).is_commutation_closed());
        CHECK(named_dla(DlaKind::matchgate, n).is_commutation_closed());
    }
}

TEST_CASE("haldane named basis excludes X_o, X_e, X^n") {
    const auto named = named_dla(DlaKind::haldane, 5);
    CHECK_FALSE(named.contains(pauli_from_label("IXIXI")));
    CHECK_FALSE(named.contains(pauli_from_label("XIXIX")));
    CHECK_FALSE(named.contains(pauli_from_label("XXXXX")));
    CHECK(named.contains(pauli_from_label("ZXZII")));
}

TEST_CASE("span closure of the tied Hamiltonian sums is smaller than the word closure") {
    // coefficient ties shrink the true Lie algebra; the word support still
    // matches the paper's basis
    const auto res = lie_closure_spans(heisenberg_generator_sums(4), 4, 4096);
    CHECK(res.dimension < named_dla(DlaKind::heisenberg, 4).dimension());
    CHECK(res.support.size() == named_dla(DlaKind::heisenberg, 4).dimension());
}

TEST_CASE("algebra intersection") {
    const auto a = named_dla(DlaKind::haldane, 4);
    const auto b = named_dla(DlaKind::heisenberg, 4);
    const auto aa = algebra_intersection(a, a);
    CHECK(keys(aa) == keys(a));

    const auto ab = algebra_intersection(a, b);
    for (const auto& p : ab.basis) {
        CHECK(a.contains(p));
        CHECK(b.contains(p));
    }
    // the paper quotes ~2^{n-2}-2 for this size; measured it is far larger,
    // so only record and sanity-bound it
    CHECK(ab.dimension() > 0);
    CHECK(ab.dimension() < std::min(a.dimension(), b.dimension()));

    OperatorAlgebra s1, s2;
    s1.n = s2.n = 2;
    s1.basis = {phase_stripped(pauli_z(2, 1))};
    s2.basis = {phase_stripped(pauli_x(2, 1))};
    CHECK(algebra_intersection(s1, s2).dimension() == 0);
}

TEST_CASE("export labels") {
    const auto alg = lie_closure({pauli_z(2, 1)}, 16);
    CHECK(alg.export_labels() == "ZI\n");
}
