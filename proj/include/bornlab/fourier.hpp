#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "bornlab/statevector.hpp"

namespace bornlab {

// Subset of qubits as a qubit-space bitmask: bit q-1 <-> qubit q.
using SubsetIndex = std::uint64_t;

inline int subset_order(SubsetIndex s) { return popcount64(s); }

// Fourier coefficients of a distribution: map subset -> <Z_subset>.
// The empty set is always present with value exactly 1.
struct CorrelatorVector {
    int n = 0;
    std::unordered_map<SubsetIndex, double> entries;

    bool contains(SubsetIndex s) const { return entries.count(s) > 0; }
    double at(SubsetIndex s) const;
    void set(SubsetIndex s, double v);

    static CorrelatorVector empty(int n);
};

struct TruncationSpec {
    enum class Kind { full, k_order, rfc };
    Kind kind = Kind::full;
    int k = 0;                        // k_order
    std::vector<SubsetIndex> omega;   // rfc, always contains the empty set

    static TruncationSpec full();
    static TruncationSpec k_order(int k);
    static TruncationSpec rfc(std::vector<SubsetIndex> omega);

    bool includes(SubsetIndex s, int n) const;
    // all retained subsets, sorted (order, then mask) for determinism
    std::vector<SubsetIndex> subsets(int n) const;
    std::size_t size(int n) const;
};

// Real vector over bitstrings summing to 1; entries may be negative.
struct PseudoDistribution {
    int n = 0;
    std::vector<double> values;  // basis-index order, qubit 1 = MSB

    double sum() const;
};

// entry(i) = sum_x (-1)^{sum_{q in i} x_q} p(x) for every subset, via a fast
// Walsh-Hadamard transform
CorrelatorVector decompose(const std::vector<double>& p, int n);

// Pr(x) = 2^{-n} sum_{i in trunc} (-1)^{sum_{q in i} x_q} c(i)
PseudoDistribution reconstruct(const CorrelatorVector& c, const TruncationSpec& trunc);

// linear reconstruction without the empty-set normalization requirement;
// used for derivative vectors
std::vector<double> reconstruct_linear(int n, const std::vector<SubsetIndex>& subsets,
                                       const std::vector<double>& coeffs);

// in-place unnormalized Walsh-Hadamard transform over index-space masks
void walsh_hadamard(std::vector<double>& v);

enum class EstimatorMode { z_parity, s_product };

struct EmpiricalEstimate {
    double estimate = 0.0;
    double variance = 0.0;
};

// Monte Carlo correlator estimates from samples (basis indices, qubit 1 = MSB).
// s_product: mean of prod_{q in i} x_q, variance (1/m) s(1-s)[1+(m-1)gamma].
// z_parity:  mean of (-1)^{sum x_q},    variance (1/m)(1-z^2)[1+(m-1)gamma].
std::vector<EmpiricalEstimate> empirical_correlators(
    const std::vector<std::uint64_t>& samples, int n,
    const std::vector<SubsetIndex>& subsets, EstimatorMode mode, double gamma = 0.0);

// per-order multisets of |<Z_i>|; result[k] holds all order-k magnitudes
std::vector<std::vector<double>> correlation_spectrum(const std::vector<double>& p, int n);

struct RfcPolicy {
    enum class Kind { uniform_up_to, bernoulli };
    Kind kind = Kind::uniform_up_to;
    int k_max = 0;       // uniform_up_to
    double prob = 0.5;   // bernoulli
};

// random subset family Omega with the empty set always included, |Omega| = D
TruncationSpec rfc_sample(int n, const RfcPolicy& policy, std::size_t D,
                          std::uint64_t seed);

// 2^{-n} sum_{i in omega} (-1)^{sum_{q in i} (x_q xor y_q)}; x, y basis indices
double parity_kernel(int n, std::uint64_t x, std::uint64_t y,
                     const std::vector<SubsetIndex>& omega);

}  // namespace bornlab
