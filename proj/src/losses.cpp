#include "bornlab/losses.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bornlab {

KernelSpec KernelSpec::gaussian(double sigma) {
    if (sigma <= 0.0) throw std::invalid_argument("gaussian kernel: sigma must be > 0");
    KernelSpec k;
    k.kind = Kind::gaussian;
    k.sigma = sigma;
    return k;
}

KernelSpec KernelSpec::anova_substring(int window_m, double gamma_decay) {
    if (window_m < 1) throw std::invalid_argument("anova kernel: window must be >= 1");
    if (gamma_decay <= 0.0) throw std::invalid_argument("anova kernel: gamma must be > 0");
    KernelSpec k;
    k.kind = Kind::anova_substring;
    k.window_m = window_m;
    k.gamma_decay = gamma_decay;
    return k;
}

KernelSpec KernelSpec::parity(std::vector<SubsetIndex> omega) {
    KernelSpec k;
    k.kind = Kind::parity;
    k.omega = std::move(omega);
    return k;
}

std::vector<double> kernel_row0(const KernelSpec& spec, int n) {
    if (n < 1 || n > kMaxKernelQubits)
        throw std::invalid_argument("kernel: n outside dense cap");
    const std::size_t N = std::size_t{1} << n;
    std::vector<double> row(N, 0.0);
    switch (spec.kind) {
        case KernelSpec::Kind::gaussian: {
            const double f = 1.0 / (2.0 * spec.sigma * spec.sigma);
            for (std::size_t z = 0; z < N; ++z)
                row[z] = std::exp(-f * static_cast<double>(popcount64(z)));
            break;
        }
        case KernelSpec::Kind::anova_substring: {
            const int m = spec.window_m;
            if (m > n) throw std::invalid_argument("anova kernel: window longer than n");
            for (std::size_t z = 0; z < N; ++z) {
                double s = 0.0;
                for (int start = 1; start + m - 1 <= n; ++start) {
                    // window of qubits start..start+m-1; index-space bits n-q
                    std::uint64_t wmask = 0;
                    for (int q = start; q < start + m; ++q) wmask |= 1ULL << (n - q);
                    s += std::exp(-spec.gamma_decay *
                                  static_cast<double>(popcount64(z & wmask)));
                }
                row[z] = s;
            }
            break;
        }
        case KernelSpec::Kind::parity: {
            for (std::size_t z = 0; z < N; ++z)
                row[z] = parity_kernel(n, 0, z, spec.omega);
            break;
        }
    }
    return row;
}

std::vector<double> kernel_matrix(const KernelSpec& spec, int n) {
    const std::vector<double> row = kernel_row0(spec, n);
    const std::size_t N = row.size();
    std::vector<double> K(N * N);
    for (std::size_t x = 0; x < N; ++x)
        for (std::size_t y = 0; y < N; ++y) K[x * N + y] = row[x ^ y];
    return K;
}

std::unordered_map<SubsetIndex, double> kernel_walsh_spectrum(
    const std::vector<double>& kernel, int n) {
    const std::size_t N = std::size_t{1} << n;
    if (kernel.size() != N * N)
        throw std::invalid_argument("kernel_walsh_spectrum: expected a 2^n x 2^n matrix");
    // shift invariance: K(x,y) must depend on x^y only
    for (std::size_t x = 0; x < N; ++x)
        for (std::size_t y = 0; y < N; ++y)
            if (std::abs(kernel[x * N + y] - kernel[x ^ y]) > 1e-10)
                throw std::invalid_argument("kernel_walsh_spectrum: kernel is not shift-invariant");
    std::vector<double> wht(kernel.begin(), kernel.begin() + static_cast<long>(N));
    walsh_hadamard(wht);
    std::unordered_map<SubsetIndex, double> mu;
    mu.reserve(N);
    for (std::size_t s = 0; s < N; ++s) {
        // index-space character label -> qubit-space subset
        std::uint64_t q = 0;
        for (int b = 0; b < n; ++b)
            if ((s >> b) & 1) q |= 1ULL << (n - 1 - b);
        mu[q] = wht[s] / static_cast<double>(N);
    }
    return mu;
}

LossSpec LossSpec::mmd(KernelSpec k) {
    LossSpec l;
    l.kind = Kind::mmd;
    l.kernel = std::move(k);
    return l;
}

LossSpec LossSpec::emd() {
    LossSpec l;
    l.kind = Kind::emd;
    return l;
}

LossSpec LossSpec::sqe() {
    LossSpec l;
    l.kind = Kind::sqe;
    return l;
}

LossSpec LossSpec::kl(double epsilon) {
    LossSpec l;
    l.kind = Kind::kl;
    l.kl_epsilon = epsilon;
    return l;
}

namespace {

void check_sizes(const std::vector<double>& p, const std::vector<double>& q, int n) {
    const std::size_t N = std::size_t{1} << n;
    if (p.size() != N || q.size() != N)
        throw std::invalid_argument("distance: length must be 2^n for both arguments");
}

// K (p-q) for a shift-invariant kernel via Walsh convolution
std::vector<double> kernel_times(const std::vector<double>& row0, std::vector<double> d) {
    std::vector<double> kr = row0;
    walsh_hadamard(kr);
    walsh_hadamard(d);
    for (std::size_t i = 0; i < d.size(); ++i) d[i] *= kr[i];
    walsh_hadamard(d);
    const double N = static_cast<double>(d.size());
    for (auto& x : d) x /= N;
    return d;
}

}  // namespace

double distance(const std::vector<double>& p, const std::vector<double>& q,
                int n, const LossSpec& loss) {
    check_sizes(p, q, n);
    const std::size_t N = std::size_t{1} << n;
    switch (loss.kind) {
        case LossSpec::Kind::sqe: {
            double s = 0.0;
            for (std::size_t i = 0; i < N; ++i) s += (p[i] - q[i]) * (p[i] - q[i]);
            return s;
        }
        case LossSpec::Kind::emd: {
            double s = 0.0, cp = 0.0, cq = 0.0;
            for (std::size_t i = 0; i < N; ++i) {
                cp += p[i];
                cq += q[i];
                s += std::abs(cp - cq);
            }
            return s;
        }
        case LossSpec::Kind::mmd: {
            std::vector<double> d(N);
            for (std::size_t i = 0; i < N; ++i) d[i] = p[i] - q[i];
            const auto kd = kernel_times(kernel_row0(loss.kernel, n), d);
            double s = 0.0;
            for (std::size_t i = 0; i < N; ++i) s += d[i] * kd[i];
            return s;
        }
        case LossSpec::Kind::kl: {
            for (std::size_t i = 0; i < N; ++i)
                if (p[i] < -1e-12)
                    throw std::domain_error("kl: negative model probability");
            double s = 0.0;
            for (std::size_t i = 0; i < N; ++i) {
                if (q[i] <= 0.0) continue;  // target zeros contribute 0
                const double pi = std::max(p[i], loss.kl_epsilon);
                s += q[i] * std::log(q[i] / pi);
            }
            return s;
        }
    }
    throw std::logic_error("distance: unknown loss");
}

std::vector<double> distance_gradient(const std::vector<double>& p,
                                      const std::vector<double>& q, int n,
                                      const LossSpec& loss) {
    check_sizes(p, q, n);
    const std::size_t N = std::size_t{1} << n;
    std::vector<double> g(N, 0.0);
    switch (loss.kind) {
        case LossSpec::Kind::sqe:
            for (std::size_t i = 0; i < N; ++i) g[i] = 2.0 * (p[i] - q[i]);
            return g;
        case LossSpec::Kind::emd: {
            // d/dp(z) sum_x |CDF_p(x)-CDF_q(x)| = sum_{x >= z} sign(...)
            double cp = 0.0, cq = 0.0;
            std::vector<double> sgn(N);
            for (std::size_t i = 0; i < N; ++i) {
                cp += p[i];
                cq += q[i];
                const double d = cp - cq;
                sgn[i] = d > 0.0 ? 1.0 : (d < 0.0 ? -1.0 : 0.0);
            }
            double acc = 0.0;
            for (std::size_t i = N; i-- > 0;) {
                acc += sgn[i];
                g[i] = acc;
            }
            return g;
        }
        case LossSpec::Kind::mmd: {
            std::vector<double> d(N);
            for (std::size_t i = 0; i < N; ++i) d[i] = p[i] - q[i];
            auto kd = kernel_times(kernel_row0(loss.kernel, n), d);
            for (std::size_t i = 0; i < N; ++i) g[i] = 2.0 * kd[i];
            return g;
        }
        case LossSpec::Kind::kl:
            for (std::size_t i = 0; i < N; ++i) {
                if (q[i] <= 0.0) continue;
                const double pi = std::max(p[i], loss.kl_epsilon);
                g[i] = p[i] >= loss.kl_epsilon ? -q[i] / pi : 0.0;
            }
            return g;
    }
    throw std::logic_error("distance_gradient: unknown loss");
}

double distance_on_batch(const std::vector<double>& p, const std::vector<double>& q,
                         int n, const LossSpec& loss,
                         const std::vector<std::uint64_t>& batch) {
    check_sizes(p, q, n);
    if (batch.empty()) throw std::invalid_argument("distance_on_batch: empty batch");
    switch (loss.kind) {
        case LossSpec::Kind::sqe: {
            double s = 0.0;
            for (const auto x : batch) s += (p[x] - q[x]) * (p[x] - q[x]);
            return s;
        }
        case LossSpec::Kind::mmd: {
            const auto row0 = kernel_row0(loss.kernel, n);
            double s = 0.0;
            for (const auto x : batch)
                for (const auto y : batch)
                    s += (p[x] - q[x]) * row0[x ^ y] * (p[y] - q[y]);
            return s;
        }
        default:
            throw std::invalid_argument("distance_on_batch: batching supports mmd and sqe");
    }
}

std::vector<double> distance_gradient_on_batch(const std::vector<double>& p,
                                               const std::vector<double>& q, int n,
                                               const LossSpec& loss,
                                               const std::vector<std::uint64_t>& batch) {
    check_sizes(p, q, n);
    const std::size_t N = std::size_t{1} << n;
    std::vector<double> g(N, 0.0);
    switch (loss.kind) {
        case LossSpec::Kind::sqe:
            for (const auto x : batch) g[x] += 2.0 * (p[x] - q[x]);
            return g;
        case LossSpec::Kind::mmd: {
            const auto row0 = kernel_row0(loss.kernel, n);
            for (const auto x : batch) {
                double acc = 0.0;
                for (const auto y : batch) acc += row0[x ^ y] * (p[y] - q[y]);
                g[x] += 2.0 * acc;
            }
            return g;
        }
        default:
            throw std::invalid_argument("distance_gradient_on_batch: batching supports mmd and sqe");
    }
}

double mmd_three_expectations(const std::vector<double>& p, const std::vector<double>& q,
                              const std::vector<double>& kernel, int n) {
    const std::size_t N = std::size_t{1} << n;
    if (kernel.size() != N * N) throw std::invalid_argument("mmd_three_expectations: bad kernel");
    double epp = 0.0, epq = 0.0, eqq = 0.0;
    for (std::size_t x = 0; x < N; ++x)
        for (std::size_t y = 0; y < N; ++y) {
            const double k = kernel[x * N + y];
            epp += p[x] * k * p[y];
            epq += p[x] * k * q[y];
            eqq += q[x] * k * q[y];
        }
    return epp - 2.0 * epq + eqq;
}

}  // namespace bornlab
