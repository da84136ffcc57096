#include "bornlab/surrogates.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <unordered_map>

namespace bornlab {

// ---------------------------------------------------------------------------
// IQP closed form

int IqpSpec::param_count() const {
    int m = -1;
    for (const auto& [g, idx] : generators) m = std::max(m, idx);
    return m + 1;
}

void IqpSpec::validate() const {
    for (const auto& [g, idx] : generators) {
        if (g.n != n) throw std::invalid_argument("IqpSpec: generator qubit count mismatch");
        if (g.x_mask != 0) throw std::invalid_argument("IqpSpec: generators must be Z-type");
        if (g.z_mask == 0) throw std::invalid_argument("IqpSpec: identity generator");
        if (idx < 0) throw std::invalid_argument("IqpSpec: negative parameter index");
    }
}

IqpSpec iqp_spec(const AnsatzSpec& ansatz) {
    if (ansatz.kind != AnsatzSpec::Kind::iqp)
        throw std::invalid_argument("iqp_spec: ansatz kind must be iqp");
    const Circuit c = build_ansatz(ansatz);
    IqpSpec spec;
    spec.n = ansatz.n;
    for (const auto& g : c.gates)
        if (g.kind == Gate::Kind::pauli_rotation)
            spec.generators.emplace_back(g.generator, g.param_index);
    spec.validate();
    return spec;
}

Circuit iqp_circuit(const IqpSpec& spec) {
    spec.validate();
    Circuit c;
    c.n = spec.n;
    for (int q = 1; q <= spec.n; ++q) c.gates.push_back(hadamard_gate(q));
    for (const auto& [g, idx] : spec.generators) c.gates.push_back(rotation_gate(g, idx));
    for (int q = 1; q <= spec.n; ++q) c.gates.push_back(hadamard_gate(q));
    c.param_count = spec.param_count();
    return c;
}

std::vector<int> iqp_anticommuting_set(const IqpSpec& spec, SubsetIndex subset) {
    std::vector<int> s;
    for (int j = 0; j < static_cast<int>(spec.generators.size()); ++j)
        if (popcount64(spec.generators[static_cast<std::size_t>(j)].first.z_mask & subset) & 1)
            s.push_back(j);
    return s;
}

namespace {

std::size_t binomial_sum(int M, int h) {
    long double total = 0.0L, c = 1.0L;
    for (int w = 0; w <= h; ++w) {
        total += c;
        c = c * static_cast<long double>(M - w) / static_cast<long double>(w + 1);
        if (total > 1e18L) return std::size_t{1} << 62;
    }
    return static_cast<std::size_t>(total);
}

}  // namespace

double iqp_surrogate_correlator(const IqpSpec& spec, const std::vector<double>& theta,
                                SubsetIndex subset, int h_max,
                                std::uint64_t* term_counter) {
    spec.validate();
    if (static_cast<int>(theta.size()) < spec.param_count())
        throw std::invalid_argument("iqp_surrogate_correlator: theta too short");
    if (subset == 0) {
        if (term_counter) *term_counter = 1;
        return 1.0;
    }
    const std::vector<int> S = iqp_anticommuting_set(spec, subset);
    const int M = static_cast<int>(S.size());
    if (h_max < 0 || h_max > M) h_max = M;
    if (binomial_sum(M, h_max) > kIqpTermCap)
        throw std::runtime_error("iqp_surrogate_correlator: expansion exceeds term cap");

    std::vector<double> sines(S.size()), cosines(S.size());
    std::vector<std::uint64_t> supports(S.size());
    for (std::size_t j = 0; j < S.size(); ++j) {
        const auto& [g, idx] = spec.generators[static_cast<std::size_t>(S[j])];
        sines[j] = std::sin(theta[static_cast<std::size_t>(idx)]);
        cosines[j] = std::cos(theta[static_cast<std::size_t>(idx)]);
        supports[j] = g.z_mask;
    }
    const double cos_all = [&] {
        double p = 1.0;
        for (const double c : cosines) p *= c;
        return p;
    }();

    std::uint64_t terms = 0;
    double total = 0.0;
    std::vector<int> combo;

    // enumerate flip vectors by Hamming weight; a term survives only if every
    // qubit it touches collects an even number of Z flips
    auto eval_combo = [&]() {
        ++terms;
        std::uint64_t flips_odd = 0;
        for (const int j : combo) flips_odd ^= supports[static_cast<std::size_t>(j)];
        if (flips_odd != 0) return;
        const int w = static_cast<int>(combo.size());
        if (w & 1) return;  // odd |r| cannot have all-even parity (and is imaginary)
        double term = (w / 2) % 2 == 0 ? 1.0 : -1.0;
        // product of sin at flipped gates, cos elsewhere
        term *= cos_all;
        for (const int j : combo) {
            const auto sj = static_cast<std::size_t>(j);
            term *= sines[sj] / cosines[sj];
        }
        total += term;
    };

    // cos factors can vanish; fall back to per-term products when any is tiny
    bool safe_ratio = true;
    for (const double c : cosines)
        if (std::abs(c) < 1e-12) safe_ratio = false;

    auto eval_combo_direct = [&]() {
        ++terms;
        std::uint64_t flips_odd = 0;
        for (const int j : combo) flips_odd ^= supports[static_cast<std::size_t>(j)];
        if (flips_odd != 0) return;
        const int w = static_cast<int>(combo.size());
        if (w & 1) return;
        double term = (w / 2) % 2 == 0 ? 1.0 : -1.0;
        std::size_t pos = 0;
        for (int j = 0; j < M; ++j) {
            const bool flipped = pos < combo.size() && combo[pos] == j;
            term *= flipped ? sines[static_cast<std::size_t>(j)]
                            : cosines[static_cast<std::size_t>(j)];
            if (flipped) ++pos;
        }
        total += term;
    };

    // weight-0 term
    combo.clear();
    if (safe_ratio) eval_combo(); else eval_combo_direct();

    for (int w = 1; w <= h_max; ++w) {
        combo.assign(static_cast<std::size_t>(w), 0);
        for (int i = 0; i < w; ++i) combo[static_cast<std::size_t>(i)] = i;
        while (true) {
            if (safe_ratio) eval_combo(); else eval_combo_direct();
            int i = w - 1;
            while (i >= 0 && combo[static_cast<std::size_t>(i)] == M - w + i) --i;
            if (i < 0) break;
            ++combo[static_cast<std::size_t>(i)];
            for (int j = i + 1; j < w; ++j)
                combo[static_cast<std::size_t>(j)] = combo[static_cast<std::size_t>(j - 1)] + 1;
        }
    }
    if (term_counter) *term_counter = terms;
    return total;
}

// all qubit-space masks of the given popcount, lexicographic in mask value
std::vector<SubsetIndex> subsets_of_order(int n, int order) {
    std::vector<SubsetIndex> out;
    if (order == 0) {
        out.push_back(0);
        return out;
    }
    if (order > n) return out;
    std::vector<int> combo(static_cast<std::size_t>(order));
    for (int i = 0; i < order; ++i) combo[static_cast<std::size_t>(i)] = i;
    while (true) {
        SubsetIndex s = 0;
        for (const int c : combo) s |= 1ULL << c;
        out.push_back(s);
        int i = order - 1;
        while (i >= 0 && combo[static_cast<std::size_t>(i)] == n - order + i) --i;
        if (i < 0) break;
        ++combo[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < order; ++j)
            combo[static_cast<std::size_t>(j)] = combo[static_cast<std::size_t>(j - 1)] + 1;
    }
    return out;
}

double iqp_truncated_prob(const IqpSpec& spec, const std::vector<double>& theta,
                          std::uint64_t x, int k, int h_max) {
    const int n = spec.n;
    if (k < 0 || k > n) throw std::invalid_argument("iqp_truncated_prob: k out of range");
    double total = 0.0;
    for (int p = 0; p <= k; ++p)
        for (const SubsetIndex s : subsets_of_order(n, p)) {
            const std::uint64_t im = index_space_mask(n, s);
            const double sign = (popcount64(x & im) & 1) ? -1.0 : 1.0;
            total += sign * iqp_surrogate_correlator(spec, theta, s, h_max);
        }
    return total / static_cast<double>(std::size_t{1} << n);
}

// ---------------------------------------------------------------------------
// generic Pauli propagation

namespace {

struct PropWord {
    std::uint64_t x = 0, z = 0;
};

// conjugation rules operating on (x, z, sign)
void conj_hadamard(std::uint64_t& x, std::uint64_t& z, double& coeff, int qbit) {
    const std::uint64_t m = 1ULL << qbit;
    const bool bx = x & m, bz = z & m;
    if (bx && bz) coeff = -coeff;  // H Y H = -Y
    // swap the X and Z components on this qubit
    if (bx != bz) {
        x ^= m;
        z ^= m;
    }
}

void conj_cnot(std::uint64_t& x, std::uint64_t& z, double& coeff, int cbit, int tbit) {
    const std::uint64_t cm = 1ULL << cbit, tm = 1ULL << tbit;
    const bool xc = x & cm, zc = z & cm, xt = x & tm, zt = z & tm;
    if (xc && zt && (xt == zc)) coeff = -coeff;
    if (xc) x ^= tm;  // X_c -> X_c X_t
    if (zt) z ^= cm;  // Z_t -> Z_c Z_t
}

}  // namespace

double pauli_propagate(const Circuit& circuit, const PauliString& observable,
                       const std::vector<double>& theta, int w_max,
                       std::size_t term_cap) {
    if (observable.n != circuit.n)
        throw std::invalid_argument("pauli_propagate: observable qubit count mismatch");
    if (w_max < 0) throw std::invalid_argument("pauli_propagate: w_max must be >= 0");
    if (observable.phase_exp != 0)
        throw std::invalid_argument("pauli_propagate: observable must be phase-free");

    std::unordered_map<std::uint64_t, double> terms;
    if (observable.weight() <= w_max || observable.is_identity())
        terms[observable.key()] = 1.0;

    // Heisenberg picture: walk the gates from last to first
    for (auto it = circuit.gates.rbegin(); it != circuit.gates.rend(); ++it) {
        const Gate& g = *it;
        std::unordered_map<std::uint64_t, double> next;
        next.reserve(terms.size() * 2);
        auto deposit = [&](std::uint64_t x, std::uint64_t z, double c) {
            if (popcount64(x | z) > w_max && (x | z) != 0) return;
            next[(x << 32) | z] += c;
        };
        if (g.kind == Gate::Kind::hadamard) {
            for (const auto& [key, c] : terms) {
                std::uint64_t x = key >> 32, z = key & 0xffffffffULL;
                double coeff = c;
                conj_hadamard(x, z, coeff, g.qubit - 1);
                deposit(x, z, coeff);
            }
        } else if (g.kind == Gate::Kind::cnot) {
            for (const auto& [key, c] : terms) {
                std::uint64_t x = key >> 32, z = key & 0xffffffffULL;
                double coeff = c;
                conj_cnot(x, z, coeff, g.control - 1, g.target - 1);
                deposit(x, z, coeff);
            }
        } else {
            const PauliString gen = phase_stripped(g.generator);
            const double th = theta.at(static_cast<std::size_t>(g.param_index));
            const double cth = std::cos(th), sth = std::sin(th);
            for (const auto& [key, c] : terms) {
                const PauliString w{circuit.n, key >> 32, key & 0xffffffffULL, 0};
                if (pauli_commutes(gen, w)) {
                    deposit(w.x_mask, w.z_mask, c);
                    continue;
                }
                // R^dag W R = cos(th) W + i sin(th) (G W); G W is +-i times a
                // Hermitian word, so the sin branch stays real
                deposit(w.x_mask, w.z_mask, c * cth);
                const PauliString gw = pauli_product(gen, w);
                const double sign = gw.phase_exp == 1 ? -1.0 : 1.0;  // i * (+-i) = -+1
                deposit(gw.x_mask, gw.z_mask, c * sth * sign);
            }
        }
        std::erase_if(next, [](const auto& e) { return std::abs(e.second) < 1e-15; });
        if (next.size() > term_cap)
            throw std::runtime_error("pauli_propagate: term count exceeds cap");
        terms = std::move(next);
    }

    // <0...0| W |0...0> is 1 for Z-only words, else 0
    double val = 0.0;
    for (const auto& [key, c] : terms)
        if ((key >> 32) == 0) val += c;
    return val;
}

// ---------------------------------------------------------------------------
// RMPS transition-matrix calculus

TransitionMatrix transition_matrix(TransitionKind kind, int ell, int chi) {
    if (ell < 2 || chi < 1) throw std::invalid_argument("transition_matrix: need ell >= 2, chi >= 1");
    const double l = ell, x = chi;
    const double denom = l * l * x * x - 1.0;
    const double eta_l = l * (x * x - 1.0) / denom;
    const double eta_x = x * (l * l - 1.0) / denom;
    switch (kind) {
        case TransitionKind::identity:
            return {{{1.0, eta_x}, {0.0, eta_l}}};
        case TransitionKind::z:
            return {{{-1.0 / (l * denom), -x / (l * denom)},
                     {x / denom, x * x / denom}}};
        case TransitionKind::flip:
            return {{{eta_l, 0.0}, {eta_x, 1.0}}};
        case TransitionKind::projector: {
            const double zeta = (l * x * x - 1.0) / (l * denom);
            const double mu = x * (l - 1.0) / (l * denom);
            return {{{zeta, mu}, {mu, zeta}}};
        }
    }
    throw std::logic_error("transition_matrix: unknown kind");
}

namespace {

using Mat2 = TransitionMatrix;

Mat2 matmul(const Mat2& a, const Mat2& b) {
    Mat2 c{};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
    return c;
}

double ones_contract(const Mat2& m) {
    return m[0][0] + m[0][1] + m[1][0] + m[1][1];
}

Mat2 identity2() { return {{{1.0, 0.0}, {0.0, 1.0}}}; }

}  // namespace

double rmps_correlator_variance(const RmpsParams& params, SubsetIndex subset) {
    if (subset == 0) return 0.0;  // <1> is constant
    if (subset_order(subset) > params.n)
        throw std::invalid_argument("rmps_correlator_variance: subset outside chain");
    const Mat2 ti = transition_matrix(TransitionKind::identity, params.ell, params.chi);
    const Mat2 tz = transition_matrix(TransitionKind::z, params.ell, params.chi);
    Mat2 acc = identity2();
    for (int site = 0; site < params.n; ++site)
        acc = matmul(acc, ((subset >> site) & 1) ? tz : ti);
    return ones_contract(acc);
}

double rmps_marginal_variance(const RmpsParams& params, int m) {
    if (m < 1 || m > params.n) throw std::invalid_argument("rmps_marginal_variance: bad m");
    const Mat2 ti = transition_matrix(TransitionKind::identity, params.ell, params.chi);
    const Mat2 to = transition_matrix(TransitionKind::projector, params.ell, params.chi);
    Mat2 acc = identity2();
    for (int site = 0; site < m; ++site) acc = matmul(acc, to);
    for (int site = m; site < params.n; ++site) acc = matmul(acc, ti);
    return ones_contract(acc);
}

double rmps_renyi2_max(const RmpsParams& params, int k) {
    if (k < 0 || k > params.n) throw std::invalid_argument("rmps_renyi2_max: bad k");
    const Mat2 ti = transition_matrix(TransitionKind::identity, params.ell, params.chi);
    const Mat2 tf = transition_matrix(TransitionKind::flip, params.ell, params.chi);
    Mat2 acc = identity2();
    for (int site = 0; site < k; ++site) acc = matmul(acc, tf);
    for (int site = k; site < params.n; ++site) acc = matmul(acc, ti);
    return ones_contract(acc);
}

double rmps_truncated_prob_variance(const RmpsParams& params, int k) {
    if (k < 0 || k > params.n) throw std::invalid_argument("rmps_truncated_prob_variance: bad k");
    const Mat2 ti = transition_matrix(TransitionKind::identity, params.ell, params.chi);
    const Mat2 tz = transition_matrix(TransitionKind::z, params.ell, params.chi);
    // order-resolved transfer recursion: after each site, acc[p] sums the
    // matrix products of all site strings containing p Z insertions
    std::vector<Mat2> acc(static_cast<std::size_t>(k) + 1, Mat2{});
    acc[0] = identity2();
    for (int site = 0; site < params.n; ++site) {
        std::vector<Mat2> next(acc.size(), Mat2{});
        for (std::size_t p = 0; p < acc.size(); ++p) {
            const Mat2 with_i = matmul(acc[p], ti);
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) next[p][i][j] += with_i[i][j];
            if (p + 1 <= static_cast<std::size_t>(k)) {
                const Mat2 with_z = matmul(acc[p], tz);
                for (int i = 0; i < 2; ++i)
                    for (int j = 0; j < 2; ++j) next[p + 1][i][j] += with_z[i][j];
            }
        }
        acc = std::move(next);
    }
    double total = 0.0;
    for (const auto& m : acc) total += ones_contract(m);
    return total / static_cast<double>(std::size_t{1} << params.n);
}

// ---------------------------------------------------------------------------
// Monte-Carlo oracle

std::vector<std::complex<double>> RmpsSampler::draw_state(Rng& rng) const {
    const int n = params.n, chi = params.chi;
    if (params.ell != 2)
        throw std::invalid_argument("RmpsSampler: only ell = 2 is supported");
    const int d = 2 * chi;
    // per site: Haar unitary via QR of a complex Ginibre matrix
    std::vector<std::vector<std::complex<double>>> A0(static_cast<std::size_t>(n)),
        A1(static_cast<std::size_t>(n));
    for (int site = 0; site < n; ++site) {
        // Ginibre
        std::vector<std::complex<double>> G(static_cast<std::size_t>(d) * d);
        for (auto& g : G) g = {rng.normal(), rng.normal()};
        // Gram-Schmidt columns (d small here; fine numerically with re-pass)
        for (int c = 0; c < d; ++c) {
            for (int pass = 0; pass < 2; ++pass)
                for (int c2 = 0; c2 < c; ++c2) {
                    std::complex<double> ip = 0.0;
                    for (int r = 0; r < d; ++r)
                        ip += std::conj(G[static_cast<std::size_t>(r) * d + c2]) *
                              G[static_cast<std::size_t>(r) * d + c];
                    for (int r = 0; r < d; ++r)
                        G[static_cast<std::size_t>(r) * d + c] -=
                            ip * G[static_cast<std::size_t>(r) * d + c2];
                }
            double nn = 0.0;
            for (int r = 0; r < d; ++r) nn += std::norm(G[static_cast<std::size_t>(r) * d + c]);
            nn = std::sqrt(nn);
            for (int r = 0; r < d; ++r) G[static_cast<std::size_t>(r) * d + c] /= nn;
        }
        // A^x[a,b] = <x,a|U|0,b>; row index (x*chi + a), column (0*chi + b)
        auto& a0 = A0[static_cast<std::size_t>(site)];
        auto& a1 = A1[static_cast<std::size_t>(site)];
        a0.resize(static_cast<std::size_t>(chi) * chi);
        a1.resize(static_cast<std::size_t>(chi) * chi);
        for (int a = 0; a < chi; ++a)
            for (int b = 0; b < chi; ++b) {
                a0[static_cast<std::size_t>(a) * chi + b] =
                    G[static_cast<std::size_t>(a) * d + b];
                a1[static_cast<std::size_t>(a) * chi + b] =
                    G[static_cast<std::size_t>(chi + a) * d + b];
            }
    }
    // psi(x) = <0| A_1^{x_1} ... A_n^{x_n} |0>, qubit 1 = MSB
    const std::size_t N = std::size_t{1} << n;
    std::vector<std::complex<double>> psi(N);
    std::vector<std::complex<double>> row(static_cast<std::size_t>(chi));
    for (std::size_t x = 0; x < N; ++x) {
        row.assign(static_cast<std::size_t>(chi), {0.0, 0.0});
        row[0] = 1.0;
        for (int site = 0; site < n; ++site) {
            const bool bit = (x >> (n - 1 - site)) & 1;
            const auto& A = bit ? A1[static_cast<std::size_t>(site)]
                                : A0[static_cast<std::size_t>(site)];
            std::vector<std::complex<double>> nxt(static_cast<std::size_t>(chi), {0.0, 0.0});
            for (int a = 0; a < chi; ++a) {
                if (row[static_cast<std::size_t>(a)] == std::complex<double>{0.0, 0.0}) continue;
                for (int b = 0; b < chi; ++b)
                    nxt[static_cast<std::size_t>(b)] +=
                        row[static_cast<std::size_t>(a)] * A[static_cast<std::size_t>(a) * chi + b];
            }
            row = std::move(nxt);
        }
        psi[x] = row[0];
    }
    return psi;
}

namespace {

double mc_mean(const std::function<double(Rng&)>& draw, std::size_t draws,
               std::uint64_t seed, double* std_error) {
    if (draws < 2) throw std::invalid_argument("rmps mc: need at least 2 draws");
    Rng rng(seed);
    double sum = 0.0, sumsq = 0.0;
    for (std::size_t i = 0; i < draws; ++i) {
        const double v = draw(rng);
        sum += v;
        sumsq += v * v;
    }
    const double m = sum / static_cast<double>(draws);
    if (std_error) {
        const double var = (sumsq - sum * m) / static_cast<double>(draws - 1);
        *std_error = std::sqrt(std::max(var, 0.0) / static_cast<double>(draws));
    }
    return m;
}

double scale_factor(const RmpsParams& p) {
    return static_cast<double>(p.chi) * (static_cast<double>(p.chi) + 1.0);
}

}  // namespace

double rmps_mc_correlator_variance(const RmpsParams& params, SubsetIndex subset,
                                   std::size_t draws, std::uint64_t seed,
                                   double* std_error) {
    RmpsSampler sampler{params};
    const std::uint64_t im = index_space_mask(params.n, subset);
    const double scale =
        scale_factor(params) / std::pow(2.0, subset_order(subset));
    const double m = mc_mean(
        [&](Rng& rng) {
            const auto psi = sampler.draw_state(rng);
            double z = 0.0;
            for (std::size_t b = 0; b < psi.size(); ++b)
                z += ((popcount64(b & im) & 1) ? -1.0 : 1.0) * std::norm(psi[b]);
            return scale * z * z;
        },
        draws, seed, std_error);
    return m;
}

double rmps_mc_marginal_variance(const RmpsParams& params, int m, std::size_t draws,
                                 std::uint64_t seed, double* std_error) {
    RmpsSampler sampler{params};
    const int n = params.n;
    const double scale = scale_factor(params);
    return mc_mean(
        [&](Rng& rng) {
            const auto psi = sampler.draw_state(rng);
            // projector onto x = 0 on the first m sites: indices with the top
            // m bits clear
            double p = 0.0;
            const std::size_t block = std::size_t{1} << (n - m);
            for (std::size_t b = 0; b < block; ++b) p += std::norm(psi[b]);
            return scale * p * p;
        },
        draws, seed, std_error);
}

double rmps_mc_renyi2_max(const RmpsParams& params, int k, std::size_t draws,
                          std::uint64_t seed, double* std_error) {
    RmpsSampler sampler{params};
    const int n = params.n;
    const double scale = scale_factor(params);
    return mc_mean(
        [&](Rng& rng) {
            const auto psi = sampler.draw_state(rng);
            // purity of the unnormalized reduced state on the first k sites
            const std::size_t rows = std::size_t{1} << k;
            const std::size_t cols = std::size_t{1} << (n - k);
            double purity = 0.0;
            for (std::size_t r1 = 0; r1 < rows; ++r1)
                for (std::size_t r2 = 0; r2 < rows; ++r2) {
                    std::complex<double> rho = 0.0;
                    for (std::size_t c = 0; c < cols; ++c)
                        rho += psi[r1 * cols + c] * std::conj(psi[r2 * cols + c]);
                    purity += std::norm(rho);
                }
            return scale * purity;
        },
        draws, seed, std_error);
}

double rmps_mc_truncated_prob_variance(const RmpsParams& params, int k, std::size_t draws,
                                       std::uint64_t seed, double* std_error) {
    RmpsSampler sampler{params};
    const int n = params.n;
    const std::size_t N = std::size_t{1} << n;
    const double base = scale_factor(params);
    return mc_mean(
        [&](Rng& rng) {
            const auto psi = sampler.draw_state(rng);
            std::vector<double> p(N);
            for (std::size_t b = 0; b < N; ++b) p[b] = std::norm(psi[b]);
            std::vector<double> wht = p;
            walsh_hadamard(wht);  // wht[s] = <Z_s> of the raw weights
            double total = 0.0;
            for (std::size_t s = 0; s < N; ++s) {
                const int order = popcount64(s);
                if (order > k) continue;
                total += base / std::pow(2.0, order) * wht[s] * wht[s];
            }
            return total / static_cast<double>(N);
        },
        draws, seed, std_error);
}

}  // namespace bornlab
