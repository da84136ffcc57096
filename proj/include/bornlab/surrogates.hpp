#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "bornlab/fourier.hpp"
#include "bornlab/pauli.hpp"
#include "bornlab/statevector.hpp"

namespace bornlab {

// ---------------------------------------------------------------------------
// IQP Pauli-propagation closed form

// H^n (commuting Z-type rotations) H^n with one parameter per gate
struct IqpSpec {
    int n = 0;
    std::vector<std::pair<PauliString, int>> generators;  // Z-type word, param index

    int param_count() const;
    void validate() const;  // every generator diagonal, indices in range
};

// spec and circuit guaranteed to describe the same unitary
IqpSpec iqp_spec(const AnsatzSpec& ansatz);
Circuit iqp_circuit(const IqpSpec& spec);

// S(i): indices of gates whose generator shares an odd number of qubits with i
std::vector<int> iqp_anticommuting_set(const IqpSpec& spec, SubsetIndex subset);

inline constexpr std::size_t kIqpTermCap = std::size_t{1} << 26;

// sum over flip vectors r with |r| <= h_max of the parity-filtered
// trigonometric terms; h_max < 0 means the full expansion (h_max = M).
// term_counter, when given, receives the number of enumerated flip vectors,
// which is exactly sum_{w<=h} C(M, w).
double iqp_surrogate_correlator(const IqpSpec& spec, const std::vector<double>& theta,
                                SubsetIndex subset, int h_max = -1,
                                std::uint64_t* term_counter = nullptr);

// 2^{-n} sum_{|i| <= k} (-1)^{sum_{q in i} x_q} * surrogate correlator
double iqp_truncated_prob(const IqpSpec& spec, const std::vector<double>& theta,
                          std::uint64_t x, int k, int h_max = -1);

std::vector<SubsetIndex> subsets_of_order(int n, int order);

// ---------------------------------------------------------------------------
// generic weight-truncated Pauli propagation

inline constexpr std::size_t kPropagationTermCap = std::size_t{1} << 22;

// Heisenberg-picture back-propagation of `observable` through the circuit.
// Rotations split into cos/sin branches; new words heavier than w_max are
// dropped. Cliffords conjugate exactly (also subject to the weight cap).
// Returns <0|O'|0>.
double pauli_propagate(const Circuit& circuit, const PauliString& observable,
                       const std::vector<double>& theta, int w_max,
                       std::size_t term_cap = kPropagationTermCap);

// ---------------------------------------------------------------------------
// random-MPS transition-matrix calculus

struct RmpsParams {
    int ell = 2;   // local dimension
    int chi = 1;   // bond dimension
    int n = 1;     // sites
};

enum class TransitionKind { identity, z, flip, projector };

using TransitionMatrix = std::array<std::array<double, 2>, 2>;

TransitionMatrix transition_matrix(TransitionKind kind, int ell, int chi);

// (1 1) prod_site T (1 1)^T with T_z at sites in the subset, T_identity off it
double rmps_correlator_variance(const RmpsParams& params, SubsetIndex subset);

// (1 1) T_projector^m T_identity^{n-m} (1 1)^T;
// chi -> inf limit 2^{-2m}(1 + 2^m / 2^n)
double rmps_marginal_variance(const RmpsParams& params, int m);

// (1/2^n) sum_{p<=k} sum_{|i|=p} (1 1) T_i (1 1)^T via an order-resolved
// transfer-matrix recursion (no 2^n scan)
double rmps_truncated_prob_variance(const RmpsParams& params, int k);

// (1 1) T_flip^k T_identity^{n-k} (1 1)^T; chi -> inf limit 2^{-k} + 2^{k-n}
double rmps_renyi2_max(const RmpsParams& params, int k);

// ---------------------------------------------------------------------------
// Monte-Carlo oracle ensemble for the closed forms above.
//
// State: per site a Haar U(ell*chi) tensor A^x[a,b] = <x,a|U|0,b>, chained with
// both boundary bonds pinned to |0>; amplitudes are left unnormalized. The
// closed forms equal chi(chi+1) * ell^{-|i|} * E[<Z_i>^2] for correlators
// (no ell factor for marginals / purity), which the estimators below fold in.
struct RmpsSampler {
    RmpsParams params;

    // one draw of the full unnormalized amplitude vector (ell = 2 only)
    std::vector<std::complex<double>> draw_state(Rng& rng) const;
};

double rmps_mc_correlator_variance(const RmpsParams& params, SubsetIndex subset,
                                   std::size_t draws, std::uint64_t seed,
                                   double* std_error = nullptr);
double rmps_mc_marginal_variance(const RmpsParams& params, int m, std::size_t draws,
                                 std::uint64_t seed, double* std_error = nullptr);
double rmps_mc_truncated_prob_variance(const RmpsParams& params, int k, std::size_t draws,
                                       std::uint64_t seed, double* std_error = nullptr);
double rmps_mc_renyi2_max(const RmpsParams& params, int k, std::size_t draws,
                          std::uint64_t seed, double* std_error = nullptr);

}  // namespace bornlab
