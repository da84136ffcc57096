#pragma once

#include <cstdint>
#include <functional>

#include "bornlab/fourier.hpp"
#include "bornlab/rng.hpp"
#include "bornlab/statevector.hpp"

namespace bornlab {

struct MonteCarloStats {
    double mean = 0.0;        // sample variance of the drawn quantity
    double std_error = 0.0;   // jackknife std error of that variance
    std::size_t draws = 0;
};

struct VarianceReport {
    double closed_form = 0.0;
    MonteCarloStats monte_carlo;
    double relative_gap = 0.0;  // |closed - mc| in units of std errors

    bool within(double n_std_errors) const { return relative_gap <= n_std_errors; }
};

// Var over matchcircuits of <Z_i>, |i| = k: C(n,k) / C(2n,2k).
// Valid for 1 <= k <= n-1; the boundary orders are parity-pinned.
double matchgate_correlator_variance(int n, int k);

// Var over matchcircuits of the k-order truncated probability:
// 2^{-2n} sum_{p=1}^{n-1} V_p, V_p doubled when both p <= k and n-p <= k
double matchgate_truncated_variance(int n, int k);

// Haar average of the squared truncation error and the deterministic bound:
// E[D_k^2] = (2^n - N_k) / 2^{3n},  |D_k|^2 <= (1 - N_k/2^n)^2
struct HaarTruncationError {
    double haar_mean_sq = 0.0;
    double deterministic_bound = 0.0;
};
HaarTruncationError haar_truncation_error(int n, int k);

// sample variance of a drawn quantity with jackknife errors; deterministic per
// seed. `draw_quantity` bundles the circuit family and parameter law.
VarianceReport mc_variance(const std::function<double(Rng&)>& draw_quantity,
                           std::size_t draws, std::uint64_t seed, double closed_form);

// Haar-random n-qubit state
StateVector haar_state(int n, Rng& rng);

// random matchcircuit draw: g gates from {X_i X_{i+1}} u {Z_i},
// theta i.i.d. uniform [0, 2pi)
StateVector draw_matchcircuit_state(int n, int g, Rng& rng);

// circuit with Haar single-qubit layers interleaved with CZ rings
StateVector draw_scrambled_state(int n, int layers, Rng& rng);

struct ScramblingCheck {
    double empirical_var = 0.0;
    double bound = 0.0;       // (2/3)^{|i|}
    bool satisfied = false;   // empirical <= bound * (1 + eps)
};
ScramblingCheck scrambling_bound_check(int n, SubsetIndex subset, std::size_t draws,
                                       std::uint64_t seed, double eps = 0.1);

}  // namespace bornlab
