#include "bornlab/variance.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "bornlab/algebra.hpp"

namespace bornlab {

namespace {

double binom(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double r = 1.0;
    for (int i = 1; i <= k; ++i)
        r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
    return r;
}

}  // namespace

double matchgate_correlator_variance(int n, int k) {
    if (n < 2) throw std::invalid_argument("matchgate_correlator_variance: n must be >= 2");
    if (k < 1 || k > n - 1)
        throw std::domain_error(
            "matchgate_correlator_variance: valid for 1 <= k <= n-1 "
            "(parity conservation pins the boundary orders)");
    return binom(n, k) / binom(2 * n, 2 * k);
}

double matchgate_truncated_variance(int n, int k) {
    if (n < 2) throw std::invalid_argument("matchgate_truncated_variance: n must be >= 2");
    if (k < 0 || k > n) throw std::domain_error("matchgate_truncated_variance: bad k");
    double total = 0.0;
    for (int p = 1; p <= n - 1; ++p) {
        if (p > k) continue;
        const double w = (n - p <= k) ? 2.0 : 1.0;
        total += w * binom(n, p) * binom(n, p) / binom(2 * n, 2 * p);
    }
    return total / std::pow(2.0, 2 * n);
}

HaarTruncationError haar_truncation_error(int n, int k) {
    if (k < 0 || k > n) throw std::domain_error("haar_truncation_error: bad k");
    double nk = 0.0;
    for (int p = 0; p <= k; ++p) nk += binom(n, p);
    const double dim = std::pow(2.0, n);
    HaarTruncationError e;
    e.haar_mean_sq = (dim - nk) / std::pow(2.0, 3 * n);
    const double t = 1.0 - nk / dim;
    e.deterministic_bound = t * t;
    return e;
}

VarianceReport mc_variance(const std::function<double(Rng&)>& draw_quantity,
                           std::size_t draws, std::uint64_t seed, double closed_form) {
    if (draws < 2) throw std::invalid_argument("mc_variance: draws must be >= 2");
    Rng rng(seed);
    std::vector<double> vals(draws);
    double sum = 0.0;
    for (std::size_t i = 0; i < draws; ++i) {
        vals[i] = draw_quantity(rng);
        sum += vals[i];
    }
    const double N = static_cast<double>(draws);
    const double mean = sum / N;
    double m2 = 0.0;
    for (const double v : vals) m2 += (v - mean) * (v - mean);
    const double var = m2 / (N - 1.0);

    // jackknife over leave-one-out variances
    double jsum = 0.0, jsumsq = 0.0;
    for (const double v : vals) {
        const double d = v - mean;
        // leave-one-out second moment in closed form
        const double m2_i = m2 - d * d * N / (N - 1.0);
        const double var_i = m2_i / (N - 2.0);
        jsum += var_i;
        jsumsq += var_i * var_i;
    }
    const double jmean = jsum / N;
    const double jvar = (jsumsq / N - jmean * jmean) * (N - 1.0);
    VarianceReport rep;
    rep.closed_form = closed_form;
    rep.monte_carlo.mean = var;
    rep.monte_carlo.std_error = std::sqrt(std::max(jvar, 0.0));
    rep.monte_carlo.draws = draws;
    rep.relative_gap = rep.monte_carlo.std_error > 0.0
                           ? std::abs(closed_form - var) / rep.monte_carlo.std_error
                           : std::abs(closed_form - var);
    return rep;
}

StateVector haar_state(int n, Rng& rng) {
    StateVector s;
    s.n = n;
    s.amp.resize(std::size_t{1} << n);
    double norm = 0.0;
    for (auto& a : s.amp) {
        a = {rng.normal(), rng.normal()};
        norm += std::norm(a);
    }
    norm = std::sqrt(norm);
    for (auto& a : s.amp) a /= norm;
    return s;
}

StateVector draw_matchcircuit_state(int n, int g, Rng& rng) {
    static thread_local int cached_n = -1;
    static thread_local std::vector<PauliString> pool;
    if (cached_n != n) {
        pool = matchgate_generators(n);
        cached_n = n;
    }
    StateVector state = StateVector::zero_state(n);
    const double two_pi = 6.283185307179586476925286766559;
    for (int i = 0; i < g; ++i) {
        const auto& gen = pool[rng.uniform_index(pool.size())];
        apply_gate(state, rotation_gate(gen, 0), rng.uniform(0.0, two_pi));
    }
    return state;
}

namespace {

void apply_haar_single(StateVector& state, int qubit, Rng& rng) {
    // Haar U(2) via QR of a 2x2 Ginibre matrix
    std::complex<double> a{rng.normal(), rng.normal()}, b{rng.normal(), rng.normal()};
    std::complex<double> c{rng.normal(), rng.normal()}, d{rng.normal(), rng.normal()};
    const double n1 = std::sqrt(std::norm(a) + std::norm(c));
    a /= n1;
    c /= n1;
    const std::complex<double> ip = std::conj(a) * b + std::conj(c) * d;
    b -= ip * a;
    d -= ip * c;
    const double n2 = std::sqrt(std::norm(b) + std::norm(d));
    b /= n2;
    d /= n2;
    const int n = state.n;
    const std::uint64_t mask = 1ULL << (n - qubit);
    for (std::size_t i = 0; i < state.amp.size(); ++i) {
        if (i & mask) continue;
        const auto a0 = state.amp[i], a1 = state.amp[i | mask];
        state.amp[i] = a * a0 + b * a1;
        state.amp[i | mask] = c * a0 + d * a1;
    }
}

void apply_cz_ring(StateVector& state) {
    const int n = state.n;
    for (int q = 1; q <= n; ++q) {
        const int r = q % n + 1;
        const std::uint64_t m = (1ULL << (n - q)) | (1ULL << (n - r));
        for (std::size_t i = 0; i < state.amp.size(); ++i)
            if ((i & m) == m) state.amp[i] = -state.amp[i];
    }
}

}  // namespace

StateVector draw_scrambled_state(int n, int layers, Rng& rng) {
    StateVector state = StateVector::zero_state(n);
    for (int l = 0; l < layers; ++l) {
        for (int q = 1; q <= n; ++q) apply_haar_single(state, q, rng);
        apply_cz_ring(state);
    }
    for (int q = 1; q <= n; ++q) apply_haar_single(state, q, rng);
    return state;
}

ScramblingCheck scrambling_bound_check(int n, SubsetIndex subset, std::size_t draws,
                                       std::uint64_t seed, double eps) {
    if (draws < 100) throw std::invalid_argument("scrambling_bound_check: draws must be >= 100");
    const VarianceReport rep = mc_variance(
        [&](Rng& rng) {
            const StateVector s = draw_scrambled_state(n, 3, rng);
            return z_correlator(s, subset);
        },
        draws, seed, 0.0);
    ScramblingCheck chk;
    chk.empirical_var = rep.monte_carlo.mean;
    chk.bound = std::pow(2.0 / 3.0, subset_order(subset));
    chk.satisfied = chk.empirical_var <= chk.bound * (1.0 + eps);
    return chk;
}

}  // namespace bornlab
