#include <doctest.h>

#include <cmath>

#include "bornlab/surrogates.hpp"
#include "bornlab/training.hpp"
#include "oracles.hpp"

using namespace bornlab;

namespace {

IqpSpec random_iqp(int n, int g, Rng& rng) {
    IqpSpec spec;
    spec.n = n;
    for (int j = 0; j < g; ++j) {
        std::uint64_t z = 0;
        while (z == 0) z = rng.next_u64() & ((1ULL << n) - 1);
        spec.generators.emplace_back(PauliString{n, 0, z, 0}, j);
    }
    return spec;
}

std::vector<double> random_theta(std::size_t count, Rng& rng) {
    std::vector<double> t(count);
    for (auto& v : t) v = rng.uniform(0.0, 6.283185307179586);
    return t;
}

}  // namespace

TEST_CASE("anticommuting set from overlap parity") {
    IqpSpec spec;
    spec.n = 2;
    spec.generators.emplace_back(PauliString{2, 0, 0b01, 0}, 0);        // Z1
    spec.generators.emplace_back(PauliString{2, 0, 0b11, 0}, 1);        // Z1Z2
    CHECK(iqp_anticommuting_set(spec, 0b01) == std::vector<int>{0, 1});
    CHECK(iqp_anticommuting_set(spec, 0b11) == std::vector<int>{0});

    IqpSpec pair;
    pair.n = 2;
    pair.generators.emplace_back(PauliString{2, 0, 0b11, 0}, 0);
    CHECK(iqp_anticommuting_set(pair, 0b11).empty());  // even overlap commutes
}

TEST_CASE("iqp closed form on the two worked examples") {
    const double t1 = 0.7, t2 = 1.3;
    IqpSpec a;
    a.n = 1;
    a.generators.emplace_back(PauliString{1, 0, 1, 0}, 0);
    CHECK(iqp_surrogate_correlator(a, {t1}, 0b1) == doctest::Approx(std::cos(t1)).epsilon(1e-14));

    IqpSpec b;
    b.n = 2;
    b.generators.emplace_back(PauliString{2, 0, 0b01, 0}, 0);
    b.generators.emplace_back(PauliString{2, 0, 0b11, 0}, 1);
    // the r = (1,1) flip leaves a bare Z on qubit 2 and is parity-killed
    CHECK(iqp_surrogate_correlator(b, {t1, t2}, 0b01) ==
          doctest::Approx(std::cos(t1) * std::cos(t2)).epsilon(1e-14));
}

TEST_CASE("theta = 0 gives the identity circuit") {
    Rng rng(31);
    const auto spec = random_iqp(4, 6, rng);
    const std::vector<double> theta(6, 0.0);
    for (SubsetIndex s = 1; s < 16; ++s)
        CHECK(iqp_surrogate_correlator(spec, theta, s) == doctest::Approx(1.0));
}

TEST_CASE("full-budget iqp surrogate reproduces the statevector") {
    Rng rng(33);
    for (int inst = 0; inst < 40; ++inst) {
        const int n = 2 + static_cast<int>(rng.uniform_index(5));  // up to 6
        const int g = 1 + static_cast<int>(rng.uniform_index(10));
        const auto spec = random_iqp(n, g, rng);
        const auto theta = random_theta(static_cast<std::size_t>(g), rng);
        const auto state = simulate(iqp_circuit(spec), theta);
        const SubsetIndex s = 1 + rng.uniform_index((1ULL << n) - 1);
        const double sv = z_correlator(state, s);
        const double su = iqp_surrogate_correlator(spec, theta, s);
        CHECK(su == doctest::Approx(sv).epsilon(1e-10));
    }
}

TEST_CASE("term count equals the binomial sum exactly") {
    Rng rng(35);
    const auto spec = random_iqp(5, 9, rng);
    const auto theta = random_theta(9, rng);
    const SubsetIndex s = 0b10101;
    const int M = static_cast<int>(iqp_anticommuting_set(spec, s).size());
    for (int h = 0; h <= M; ++h) {
        std::uint64_t count = 0;
        iqp_surrogate_correlator(spec, theta, s, h, &count);
        double expect = 0.0;
        for (int w = 0; w <= h; ++w) expect += oracle::binom(M, w);
        CHECK(count == static_cast<std::uint64_t>(expect));
    }
}

TEST_CASE("iqp truncated probability: k = 0 and the exact limit") {
    Rng rng(37);
    const int n = 5, g = 10;
    const auto spec = random_iqp(n, g, rng);
    const auto theta = random_theta(g, rng);
    CHECK(iqp_truncated_prob(spec, theta, 3, 0) == doctest::Approx(1.0 / 32.0));
    const auto probs = born_distribution(simulate(iqp_circuit(spec), theta));
    for (const std::uint64_t x : {0ULL, 7ULL, 21ULL})
        CHECK(iqp_truncated_prob(spec, theta, x, n) ==
              doctest::Approx(probs[x]).epsilon(1e-10));

    // theta = 0, full orders: delta at 0
    const std::vector<double> zeros(g, 0.0);
    CHECK(iqp_truncated_prob(spec, zeros, 0, n) == doctest::Approx(1.0));
    CHECK(iqp_truncated_prob(spec, zeros, 5, n) == doctest::Approx(0.0));
}

TEST_CASE("gate order does not change the iqp expansion") {
    Rng rng(39);
    auto spec = random_iqp(4, 7, rng);
    const auto theta = random_theta(7, rng);
    const double a = iqp_surrogate_correlator(spec, theta, 0b0110);
    std::reverse(spec.generators.begin(), spec.generators.end());
    const double b = iqp_surrogate_correlator(spec, theta, 0b0110);
    CHECK(a == doctest::Approx(b).epsilon(1e-12));
}

TEST_CASE("pauli propagation: commuting observable passes through") {
    Circuit c;
    c.n = 2;
    c.gates.push_back(rotation_gate(pauli_z(2, 1), 0));
    c.param_count = 1;
    CHECK(pauli_propagate(c, phase_stripped(pauli_z(2, 1)), {0.9}, 2) ==
          doctest::Approx(1.0));
}

TEST_CASE("pauli propagation on the simple_eg circuit") {
    const auto c = simple_eg_circuit();
    const double t1 = 0.8, t2 = 2.1;
    // <Z_2> = cos t1 cos t2, reachable within weight 2
    const double v = pauli_propagate(c, phase_stripped(pauli_z(2, 2)), {t1, t2}, 2);
    CHECK(v == doctest::Approx(std::cos(t1) * std::cos(t2)).epsilon(1e-12));
    CHECK(pauli_propagate(c, phase_stripped(pauli_z(2, 1)), {t1, t2}, 2) ==
          doctest::Approx(std::cos(t1)).epsilon(1e-12));
}

TEST_CASE("full-weight propagation matches the statevector on random circuits") {
    Rng rng(43);
    for (int inst = 0; inst < 25; ++inst) {
        const int n = 2 + static_cast<int>(rng.uniform_index(4));  // up to 5
        AnsatzSpec spec;
        spec.kind = AnsatzSpec::Kind::strongly_entangling;
        spec.n = n;
        spec.layers = 2;
        spec.seed = rng.next_u64();
        const auto circ = build_ansatz(spec);
        const auto theta = random_theta(static_cast<std::size_t>(circ.param_count), rng);
        const auto state = simulate(circ, theta);
        const SubsetIndex sub = 1 + rng.uniform_index((1ULL << n) - 1);
        const double sv = z_correlator(state, sub);
        const double pp = pauli_propagate(circ, PauliString{n, 0, sub, 0}, theta, n);
        CHECK(pp == doctest::Approx(sv).epsilon(1e-10));
    }
}

TEST_CASE("weight truncation drops the heavy branches") {
    // a chain that needs weight 3: <Z_3> after CNOT(1,2) CNOT(2,3) H(1) ...
    AnsatzSpec spec;
    spec.kind = AnsatzSpec::Kind::strongly_entangling;
    spec.n = 4;
    spec.layers = 2;
    spec.seed = 77;
    const auto circ = build_ansatz(spec);
    Rng rng(78);
    const auto theta = random_theta(static_cast<std::size_t>(circ.param_count), rng);
    const double full = pauli_propagate(circ, PauliString{4, 0, 0b1111, 0}, theta, 4);
    const double w1 = pauli_propagate(circ, PauliString{4, 0, 0b1111, 0}, theta, 1);
    CHECK(std::abs(full - w1) > 1e-6);  // truncation must actually bite here
}

// ---------------------------------------------------------------------------

TEST_CASE("transition matrices match the printed entries at ell=2") {
    // chi = 2: eta_l = eta_x = 0.4, zeta = 7/30, mu = 1/15
    const auto ti = transition_matrix(TransitionKind::identity, 2, 2);
    CHECK(ti[0][0] == doctest::Approx(1.0));
    CHECK(ti[0][1] == doctest::Approx(0.4));
    CHECK(ti[1][0] == doctest::Approx(0.0));
    CHECK(ti[1][1] == doctest::Approx(0.4));
    const auto tz = transition_matrix(TransitionKind::z, 2, 2);
    CHECK(tz[0][0] == doctest::Approx(-1.0 / 30.0));
    CHECK(tz[0][1] == doctest::Approx(-2.0 / 30.0));
    CHECK(tz[1][0] == doctest::Approx(4.0 / 30.0));
    CHECK(tz[1][1] == doctest::Approx(8.0 / 30.0));
    const auto tf = transition_matrix(TransitionKind::flip, 2, 2);
    CHECK(tf[0][0] == doctest::Approx(0.4));
    CHECK(tf[0][1] == doctest::Approx(0.0));
    CHECK(tf[1][0] == doctest::Approx(0.4));
    CHECK(tf[1][1] == doctest::Approx(1.0));
    const auto to = transition_matrix(TransitionKind::projector, 2, 2);
    CHECK(to[0][0] == doctest::Approx(7.0 / 30.0));
    CHECK(to[0][1] == doctest::Approx(1.0 / 15.0));

    // chi = 1: T_I = [[1,1],[0,0]], T_Z = (1/6)[[-1,-1],[2,2]]
    const auto t1 = transition_matrix(TransitionKind::identity, 2, 1);
    CHECK(t1[0][1] == doctest::Approx(1.0));
    CHECK(t1[1][1] == doctest::Approx(0.0));
    const auto z1 = transition_matrix(TransitionKind::z, 2, 1);
    CHECK(z1[1][0] == doctest::Approx(1.0 / 3.0));

    // chi = 3: eta_l = 16/35, eta_x = 9/35
    const auto t3 = transition_matrix(TransitionKind::identity, 2, 3);
    CHECK(t3[0][1] == doctest::Approx(9.0 / 35.0));
    CHECK(t3[1][1] == doctest::Approx(16.0 / 35.0));
    // chi = 10: eta_l = 2*99/399, eta_x = 30/399
    const auto t10 = transition_matrix(TransitionKind::identity, 2, 10);
    CHECK(t10[0][1] == doctest::Approx(30.0 / 399.0));
    CHECK(t10[1][1] == doctest::Approx(198.0 / 399.0));
}

TEST_CASE("single-site correlator variance hits the Haar values") {
    CHECK(rmps_correlator_variance({2, 1, 1}, 0b1) == doctest::Approx(1.0 / 3.0));
    // (chi+1)/(2(2chi+1))
    CHECK(rmps_correlator_variance({2, 2, 1}, 0b1) == doctest::Approx(3.0 / 10.0));
    CHECK(rmps_correlator_variance({2, 1000000, 1}, 0b1) == doctest::Approx(0.25).epsilon(1e-3));
    CHECK(rmps_correlator_variance({2, 5, 3}, 0) == doctest::Approx(0.0));
}

TEST_CASE("correlator variance is reflection symmetric, with boundary dependence") {
    // the all-ones boundary contraction is symmetric under site reversal, but
    // bulk and edge sites genuinely differ at finite chi
    const RmpsParams p{2, 3, 5};
    const double a = rmps_correlator_variance(p, 0b00011);  // sites {1,2}
    const double c = rmps_correlator_variance(p, 0b11000);  // sites {4,5}
    CHECK(a == doctest::Approx(c).epsilon(1e-12));
    const double mid = rmps_correlator_variance(p, 0b00110);
    CHECK(std::abs(mid - a) > 1e-4);

    // the Monte-Carlo ensemble shows the same position dependence: middle site
    // of n=3 at chi=2 sits near 0.1613 while the edges sit near 0.188
    double se = 0.0;
    const double mc_mid = rmps_mc_correlator_variance({2, 2, 3}, 0b010, 4000, 51, &se);
    CHECK(std::abs(mc_mid - rmps_correlator_variance({2, 2, 3}, 0b010)) < 4 * se);
    CHECK(rmps_correlator_variance({2, 2, 3}, 0b010) == doctest::Approx(0.1613333333).epsilon(1e-6));
    CHECK(rmps_correlator_variance({2, 2, 3}, 0b001) == doctest::Approx(0.188).epsilon(1e-9));
}

TEST_CASE("marginal variance limits") {
    // n=4, m=2, chi -> inf limit 2^-2m (1 + 2^m/2^n) = 5/64
    const double v = rmps_marginal_variance({2, 1000000, 4}, 2);
    CHECK(v == doctest::Approx(5.0 / 64.0).epsilon(1e-3));
    // m = n: 2^{1-2n}
    const double vn = rmps_marginal_variance({2, 1000000, 4}, 4);
    CHECK(vn == doctest::Approx(std::pow(2.0, 1 - 8)).epsilon(1e-3));
}

TEST_CASE("renyi-2 closed form and limits") {
    CHECK(rmps_renyi2_max({2, 7, 6}, 0) > 0.0);
    // k = 0 at chi -> inf tends to 1 + 2^-n
    CHECK(rmps_renyi2_max({2, 1000000, 8}, 0) == doctest::Approx(1.0 + 1.0 / 256).epsilon(1e-3));
    CHECK(rmps_renyi2_max({2, 1000000, 8}, 3) == doctest::Approx(0.15625).epsilon(1e-3));
    // decreasing then floored by 2^{k-n}
    const RmpsParams p{2, 50, 12};
    double prev = 1e300;
    for (int k = 0; k <= 6; ++k) {
        const double s = rmps_renyi2_max(p, k);
        CHECK(s < prev);
        prev = s;
    }
}

TEST_CASE("truncated-prob variance is non-decreasing in k") {
    const RmpsParams p{2, 4, 6};
    double prev = -1.0;
    for (int k = 0; k <= 6; ++k) {
        const double v = rmps_truncated_prob_variance(p, k);
        CHECK(v >= prev - 1e-15);
        prev = v;
    }
}

TEST_CASE("truncated-prob variance recursion equals the explicit subset scan") {
    const RmpsParams p{2, 3, 5};
    for (int k = 0; k <= 5; ++k) {
        double scan = 0.0;
        for (SubsetIndex s = 0; s < 32; ++s) {
            if (subset_order(s) > k) continue;
            if (s == 0) {
                // identity string contraction
                RmpsParams q = p;
                const auto ti = transition_matrix(TransitionKind::identity, 2, p.chi);
                double m[2][2] = {{1, 0}, {0, 1}};
                for (int site = 0; site < p.n; ++site) {
                    double nx[2][2] = {{0, 0}, {0, 0}};
                    for (int i = 0; i < 2; ++i)
                        for (int j = 0; j < 2; ++j)
                            for (int l = 0; l < 2; ++l) nx[i][j] += m[i][l] * ti[l][j];
                    for (int i = 0; i < 2; ++i)
                        for (int j = 0; j < 2; ++j) m[i][j] = nx[i][j];
                }
                scan += m[0][0] + m[0][1] + m[1][0] + m[1][1];
                (void)q;
            } else {
                scan += rmps_correlator_variance(p, s);
            }
        }
        scan /= 32.0;
        CHECK(rmps_truncated_prob_variance(p, k) == doctest::Approx(scan).epsilon(1e-12));
    }
}

TEST_CASE("rmps monte carlo agrees with the closed forms at small chi") {
    double se = 0.0;
    // n=1 chi=2 correlator: 3/10
    const double mc1 = rmps_mc_correlator_variance({2, 2, 1}, 0b1, 3000, 404, &se);
    CHECK(std::abs(mc1 - 0.3) < 4 * se);
    // n=3 m=1 chi=2 marginal
    const double closed_m = rmps_marginal_variance({2, 2, 3}, 1);
    const double mcm = rmps_mc_marginal_variance({2, 2, 3}, 1, 3000, 405, &se);
    CHECK(std::abs(mcm - closed_m) < 4 * se);
    // n=3 k=1 chi=2 purity
    const double closed_r = rmps_renyi2_max({2, 2, 3}, 1);
    const double mcr = rmps_mc_renyi2_max({2, 2, 3}, 1, 3000, 406, &se);
    CHECK(std::abs(mcr - closed_r) < 4 * se);
    // n=2 k=1 chi=2 truncated prob
    const double closed_t = rmps_truncated_prob_variance({2, 2, 2}, 1);
    const double mct = rmps_mc_truncated_prob_variance({2, 2, 2}, 1, 3000, 407, &se);
    CHECK(std::abs(mct - closed_t) < 4 * se);
}
