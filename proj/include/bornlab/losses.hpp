#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "bornlab/fourier.hpp"

namespace bornlab {

struct KernelSpec {
    enum class Kind { gaussian, anova_substring, parity };
    Kind kind = Kind::gaussian;
    double sigma = 1.0;                // gaussian bandwidth
    int window_m = 1;                  // anova window length
    double gamma_decay = 1.0;          // anova exponential decay
    std::vector<SubsetIndex> omega;    // parity kernel subset family

    static KernelSpec gaussian(double sigma);
    static KernelSpec anova_substring(int window_m, double gamma_decay);
    static KernelSpec parity(std::vector<SubsetIndex> omega);
};

inline constexpr int kMaxKernelQubits = 12;

// dense 2^n x 2^n kernel matrix, row-major over basis indices.
// gaussian uses the squared Hamming distance (= Hamming on bits);
// anova sums exp(-gamma d_H) over all length-m contiguous windows.
std::vector<double> kernel_matrix(const KernelSpec& spec, int n);

// first row K(0, y); all three kernel kinds are shift-invariant
std::vector<double> kernel_row0(const KernelSpec& spec, int n);

// Boolean Bochner weights: K(x,y) = sum_S mu_S chi_S(x) chi_S(y).
// Input must be shift-invariant within 1e-10. Keys are qubit-space subsets.
std::unordered_map<SubsetIndex, double> kernel_walsh_spectrum(
    const std::vector<double>& kernel, int n);

struct LossSpec {
    enum class Kind { mmd, emd, sqe, kl };
    Kind kind = Kind::mmd;
    KernelSpec kernel;        // mmd
    double kl_epsilon = 1e-12;

    static LossSpec mmd(KernelSpec k);
    static LossSpec emd();
    static LossSpec sqe();
    static LossSpec kl(double epsilon = 1e-12);
};

// distance between a (pseudo-)distribution p and a distribution q.
// mmd/sqe/emd accept negative entries in p; kl requires p >= 0 and is meant
// for deployment evaluation on true distributions.
double distance(const std::vector<double>& p, const std::vector<double>& q,
                int n, const LossSpec& loss);

// gradient of distance(p, q) with respect to p
std::vector<double> distance_gradient(const std::vector<double>& p,
                                      const std::vector<double>& q, int n,
                                      const LossSpec& loss);

// same loss restricted to a subset of bitstrings (x-batching)
double distance_on_batch(const std::vector<double>& p, const std::vector<double>& q,
                         int n, const LossSpec& loss,
                         const std::vector<std::uint64_t>& batch);
std::vector<double> distance_gradient_on_batch(const std::vector<double>& p,
                                               const std::vector<double>& q, int n,
                                               const LossSpec& loss,
                                               const std::vector<std::uint64_t>& batch);

// MMD^2 via the three-expectation form, for cross-checks against the
// (p-q)^T K (p-q) matrix form
double mmd_three_expectations(const std::vector<double>& p, const std::vector<double>& q,
                              const std::vector<double>& kernel, int n);

}  // namespace bornlab
