#include <doctest.h>

#include <cmath>

#include "bornlab/statevector.hpp"
#include "oracles.hpp"

using namespace bornlab;

TEST_CASE("empty circuit prepares the zero state") {
    Circuit c;
    c.n = 3;
    const auto s = simulate(c, {});
    CHECK(std::abs(s.amp[0] - std::complex<double>{1.0, 0.0}) < 1e-15);
    CHECK(s.norm_sq() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("single RY rotation gives Pr(0) = cos^2(theta/2)") {
    Circuit c;
    c.n = 1;
    c.gates.push_back(rotation_gate(pauli_y(1, 1), 0));
    c.param_count = 1;
    for (const double t : {0.0, 0.3, 1.7, 3.1}) {
        const auto p = born_distribution(simulate(c, {t}));
        CHECK(p[0] == doctest::Approx(std::cos(t / 2) * std::cos(t / 2)).epsilon(1e-12));
    }
}

TEST_CASE("GHZ circuit puts half the weight on each end") {
    const auto s = simulate(ghz_circuit(3), {});
    const auto p = born_distribution(s);
    CHECK(p[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(p[7] == doctest::Approx(0.5).epsilon(1e-12));
    for (int i = 1; i < 7; ++i) CHECK(std::abs(p[i]) < 1e-14);

    CHECK(z_correlator(s, 0b011) == doctest::Approx(1.0));   // qubits {1,2}
    CHECK(z_correlator(s, 0b001) == doctest::Approx(0.0));   // {1}
    CHECK(z_correlator(s, 0b111) == doctest::Approx(0.0));   // {1,2,3}
    CHECK(z_correlator(s, 0) == doctest::Approx(1.0));
}

TEST_CASE("simple_eg analytic correlators") {
    const auto c = simple_eg_circuit();
    for (double t1 = 0.2; t1 < 6.0; t1 += 1.1)
        for (double t2 = 0.4; t2 < 6.0; t2 += 1.3) {
            const auto s = simulate(c, {t1, t2});
            CHECK(z_correlator(s, 0b01) == doctest::Approx(std::cos(t1)).epsilon(1e-12));
            CHECK(z_correlator(s, 0b10) ==
                  doctest::Approx(std::cos(t1) * std::cos(t2)).epsilon(1e-12));
            CHECK(z_correlator(s, 0b11) == doctest::Approx(std::cos(t2)).epsilon(1e-12));
        }
}

TEST_CASE("z_correlator agrees with direct enumeration") {
    Rng rng(41);
    AnsatzSpec spec;
    spec.kind = AnsatzSpec::Kind::matchcircuit;
    spec.n = 4;
    spec.gate_count = 12;
    spec.seed = 5;
    const auto circ = build_ansatz(spec);
    std::vector<double> theta(static_cast<std::size_t>(circ.param_count));
    for (auto& t : theta) t = rng.uniform(0.0, 6.28);
    const auto probs = born_distribution(simulate(circ, theta));
    for (std::uint64_t sub = 0; sub < 16; ++sub)
        CHECK(z_correlator(probs, 4, sub) ==
              doctest::Approx(oracle::correlator(probs, 4, sub)).epsilon(1e-12));
}

TEST_CASE("norm preservation along a deep random circuit") {
    Rng rng(7);
    AnsatzSpec spec;
    spec.kind = AnsatzSpec::Kind::strongly_entangling;
    spec.n = 5;
    spec.layers = 4;
    spec.seed = 3;
    const auto circ = build_ansatz(spec);
    std::vector<double> theta(static_cast<std::size_t>(circ.param_count));
    for (auto& t : theta) t = rng.uniform(0.0, 6.28);
    StateVector s = StateVector::zero_state(5);
    for (const auto& g : circ.gates) {
        apply_gate(s, g, g.param_index >= 0 ? theta[static_cast<std::size_t>(g.param_index)] : 0.0);
        CHECK(s.norm_sq() == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("parameter shift equals central finite differences") {
    AnsatzSpec spec;
    spec.kind = AnsatzSpec::Kind::matchcircuit;
    spec.n = 3;
    spec.gate_count = 8;
    spec.seed = 11;
    const auto circ = build_ansatz(spec);
    Rng rng(13);
    std::vector<double> theta(static_cast<std::size_t>(circ.param_count));
    for (auto& t : theta) t = rng.uniform(0.0, 6.28);
    const std::uint64_t sub = 0b001;
    const double h = 1e-4;
    for (std::size_t j = 0; j < theta.size(); ++j) {
        auto tp = theta, tm = theta;
        tp[j] += 1.5707963267948966;
        tm[j] -= 1.5707963267948966;
        const double shift =
            0.5 * (z_correlator(simulate(circ, tp), sub) - z_correlator(simulate(circ, tm), sub));
        tp = theta; tm = theta;
        tp[j] += h;
        tm[j] -= h;
        const double fd =
            (z_correlator(simulate(circ, tp), sub) - z_correlator(simulate(circ, tm), sub)) /
            (2 * h);
        CHECK(shift == doctest::Approx(fd).epsilon(1e-6));
    }
}

TEST_CASE("iqp rotations commute: permuting them leaves the distribution unchanged") {
    AnsatzSpec spec;
    spec.kind = AnsatzSpec::Kind::iqp;
    spec.n = 4;
    spec.iqp_pairs = 4;
    spec.seed = 17;
    auto circ = build_ansatz(spec);
    Rng rng(19);
    std::vector<double> theta(static_cast<std::size_t>(circ.param_count));
    for (auto& t : theta) t = rng.uniform(0.0, 6.28);
    const auto p1 = born_distribution(simulate(circ, theta));
    // reverse the rotation block (gates 4..4+m)
    auto first = circ.gates.begin() + 4;
    auto last = circ.gates.end() - 4;
    std::reverse(first, last);
    const auto p2 = born_distribution(simulate(circ, theta));
    for (std::size_t i = 0; i < p1.size(); ++i)
        CHECK(p1[i] == doctest::Approx(p2[i]).epsilon(1e-12));
}

TEST_CASE("iqp with zero rotations is the identity circuit") {
    AnsatzSpec spec;
    spec.kind = AnsatzSpec::Kind::iqp;
    spec.n = 3;
    spec.iqp_pairs = 2;
    spec.seed = 23;
    const auto circ = build_ansatz(spec);
    const std::vector<double> theta(static_cast<std::size_t>(circ.param_count), 0.0);
    const auto p = born_distribution(simulate(circ, theta));
    CHECK(p[0] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("matchcircuit ansatz conserves total parity") {
    AnsatzSpec spec;
    spec.kind = AnsatzSpec::Kind::matchcircuit;
    spec.n = 4;
    spec.gate_count = 40;
    Rng rng(29);
    for (int rep = 0; rep < 10; ++rep) {
        spec.seed = rng.next_u64();
        const auto circ = build_ansatz(spec);
        std::vector<double> theta(static_cast<std::size_t>(circ.param_count));
        for (auto& t : theta) t = rng.uniform(0.0, 6.28);
        CHECK(z_correlator(simulate(circ, theta), 0b1111) == doctest::Approx(1.0).epsilon(1e-10));
        // generators stay inside the matchgate set
        for (const auto& g : circ.gates) {
            const auto lbl = pauli_label(g.generator);
            const bool zz = g.generator.x_mask == 0 && g.generator.weight() == 1;
            const bool xx = g.generator.z_mask == 0 && g.generator.weight() == 2;
            CHECK((zz || xx));
        }
    }
}

TEST_CASE("strongly entangling parameter count n*layers*3") {
    AnsatzSpec spec;
    spec.kind = AnsatzSpec::Kind::strongly_entangling;
    spec.n = 6;
    spec.layers = 6;
    spec.seed = 1;
    const auto circ = build_ansatz(spec);
    CHECK(circ.param_count == 6 * 6 * 3);
    // ring connectivity present in every layer
    int cnots = 0;
    for (const auto& g : circ.gates)
        if (g.kind == Gate::Kind::cnot) ++cnots;
    CHECK(cnots == 6 * 6);
}

TEST_CASE("sampling is deterministic and matches the distribution") {
    const auto s = simulate(ghz_circuit(3), {});
    const auto a = sample(s, 32, 99);
    const auto b = sample(s, 32, 99);
    CHECK(a == b);
    // delta state
    StateVector d = StateVector::zero_state(2);
    for (const auto x : sample(d, 20, 3)) CHECK(x == 0);
    // GHZ frequencies within 5 binomial sigmas
    const auto big = sample(s, 10000, 7);
    std::size_t zeros = 0;
    for (const auto x : big)
        if (x == 0) ++zeros;
    const double sigma = std::sqrt(10000 * 0.25);
    CHECK(std::abs(static_cast<double>(zeros) - 5000.0) < 5 * sigma);
}
