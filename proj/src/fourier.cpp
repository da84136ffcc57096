#include "bornlab/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace bornlab {

double CorrelatorVector::at(SubsetIndex s) const {
    auto it = entries.find(s);
    if (it == entries.end()) throw std::out_of_range("CorrelatorVector: missing subset entry");
    return it->second;
}

void CorrelatorVector::set(SubsetIndex s, double v) {
    if (s == 0 && std::abs(v - 1.0) > 1e-12)
        throw std::invalid_argument("CorrelatorVector: empty-set entry must be 1");
    entries[s] = v;
}

CorrelatorVector CorrelatorVector::empty(int n) {
    CorrelatorVector c;
    c.n = n;
    c.entries[0] = 1.0;
    return c;
}

TruncationSpec TruncationSpec::full() { return TruncationSpec{}; }

TruncationSpec TruncationSpec::k_order(int k) {
    if (k < 0) throw std::invalid_argument("k_order: k must be >= 0");
    TruncationSpec t;
    t.kind = Kind::k_order;
    t.k = k;
    return t;
}

TruncationSpec TruncationSpec::rfc(std::vector<SubsetIndex> omega) {
    TruncationSpec t;
    t.kind = Kind::rfc;
    std::sort(omega.begin(), omega.end(), [](SubsetIndex a, SubsetIndex b) {
        return std::make_pair(subset_order(a), a) < std::make_pair(subset_order(b), b);
    });
    omega.erase(std::unique(omega.begin(), omega.end()), omega.end());
    if (omega.empty() || omega.front() != 0)
        throw std::invalid_argument("rfc: omega must include the empty set");
    t.omega = std::move(omega);
    return t;
}

bool TruncationSpec::includes(SubsetIndex s, int n) const {
    switch (kind) {
        case Kind::full: return s < (1ULL << n);
        case Kind::k_order: return subset_order(s) <= k;
        case Kind::rfc: return std::binary_search(
            omega.begin(), omega.end(), s, [](SubsetIndex a, SubsetIndex b) {
                return std::make_pair(subset_order(a), a) < std::make_pair(subset_order(b), b);
            });
    }
    return false;
}

std::vector<SubsetIndex> TruncationSpec::subsets(int n) const {
    std::vector<SubsetIndex> out;
    if (kind == Kind::rfc) {
        out = omega;
        return out;
    }
    const int kmax = kind == Kind::full ? n : std::min(k, n);
    for (SubsetIndex s = 0; s < (1ULL << n); ++s)
        if (subset_order(s) <= kmax) out.push_back(s);
    std::sort(out.begin(), out.end(), [](SubsetIndex a, SubsetIndex b) {
        return std::make_pair(subset_order(a), a) < std::make_pair(subset_order(b), b);
    });
    return out;
}

std::size_t TruncationSpec::size(int n) const { return subsets(n).size(); }

void walsh_hadamard(std::vector<double>& v) {
    const std::size_t N = v.size();
    for (std::size_t half = 1; half < N; half <<= 1)
        for (std::size_t base = 0; base < N; base += half << 1)
            for (std::size_t i = base; i < base + half; ++i) {
                const double a = v[i], b = v[i + half];
                v[i] = a + b;
                v[i + half] = a - b;
            }
}

// index-space <-> qubit-space mask conversion is a bit reversal
static std::uint64_t reverse_mask(int n, std::uint64_t m) {
    std::uint64_t r = 0;
    for (int q = 0; q < n; ++q)
        if ((m >> q) & 1) r |= 1ULL << (n - 1 - q);
    return r;
}

CorrelatorVector decompose(const std::vector<double>& p, int n) {
    if (p.size() != (std::size_t{1} << n))
        throw std::invalid_argument("decompose: length must be 2^n");
    double total = 0.0;
    for (const double x : p) {
        if (x < -1e-12) throw std::invalid_argument("decompose: negative probability");
        total += x;
    }
    if (std::abs(total - 1.0) > 1e-9)
        throw std::invalid_argument("decompose: input not normalized");
    std::vector<double> wht = p;
    walsh_hadamard(wht);
    CorrelatorVector c;
    c.n = n;
    c.entries.reserve(wht.size());
    for (std::size_t s = 0; s < wht.size(); ++s)
        c.entries[reverse_mask(n, s)] = wht[s];
    c.entries[0] = 1.0;  // exact by construction, pin against rounding
    return c;
}

PseudoDistribution reconstruct(const CorrelatorVector& c, const TruncationSpec& trunc) {
    const int n = c.n;
    const std::size_t N = std::size_t{1} << n;
    PseudoDistribution out;
    out.n = n;
    if (trunc.kind == TruncationSpec::Kind::full &&
        c.entries.size() == N) {
        // dense inverse transform
        std::vector<double> v(N, 0.0);
        for (const auto& [s, val] : c.entries) v[reverse_mask(n, s)] = val;
        walsh_hadamard(v);
        for (auto& x : v) x /= static_cast<double>(N);
        out.values = std::move(v);
        return out;
    }
    const auto subs = trunc.subsets(n);
    std::vector<double> coeffs;
    coeffs.reserve(subs.size());
    for (const auto s : subs) coeffs.push_back(c.at(s));  // throws if missing
    out.values = reconstruct_linear(n, subs, coeffs);
    return out;
}

std::vector<double> reconstruct_linear(int n, const std::vector<SubsetIndex>& subsets,
                                       const std::vector<double>& coeffs) {
    if (subsets.size() != coeffs.size())
        throw std::invalid_argument("reconstruct_linear: size mismatch");
    const std::size_t N = std::size_t{1} << n;
    // scatter into index space and run one inverse transform; cheaper than
    // |subsets| * 2^n when the subset family is large
    std::vector<double> v(N, 0.0);
    for (std::size_t i = 0; i < subsets.size(); ++i)
        v[reverse_mask(n, subsets[i])] += coeffs[i];
    walsh_hadamard(v);
    for (auto& x : v) x /= static_cast<double>(N);
    return v;
}

double PseudoDistribution::sum() const {
    double s = 0.0;
    for (const double v : values) s += v;
    return s;
}

std::vector<EmpiricalEstimate> empirical_correlators(
    const std::vector<std::uint64_t>& samples, int n,
    const std::vector<SubsetIndex>& subsets, EstimatorMode mode, double gamma) {
    if (samples.empty()) throw std::invalid_argument("empirical_correlators: no samples");
    const double m = static_cast<double>(samples.size());
    std::vector<EmpiricalEstimate> out;
    out.reserve(subsets.size());
    for (const auto sub : subsets) {
        const std::uint64_t im = index_space_mask(n, sub);
        double acc = 0.0;
        if (mode == EstimatorMode::s_product) {
            for (const auto x : samples)
                if ((x & im) == im) acc += 1.0;  // product of bits is 1 iff all set
        } else {
            for (const auto x : samples)
                acc += (popcount64(x & im) & 1) ? -1.0 : 1.0;
        }
        const double est = acc / m;
        const double corr = 1.0 + (m - 1.0) * gamma;
        EmpiricalEstimate e;
        e.estimate = est;
        if (mode == EstimatorMode::s_product)
            e.variance = est * (1.0 - est) / m * corr;
        else
            e.variance = (1.0 - est * est) / m * corr;
        out.push_back(e);
    }
    return out;
}

std::vector<std::vector<double>> correlation_spectrum(const std::vector<double>& p, int n) {
    const CorrelatorVector c = decompose(p, n);
    std::vector<std::vector<double>> per_order(static_cast<std::size_t>(n) + 1);
    std::vector<std::pair<SubsetIndex, double>> items(c.entries.begin(), c.entries.end());
    std::sort(items.begin(), items.end());
    for (const auto& [s, v] : items)
        per_order[static_cast<std::size_t>(subset_order(s))].push_back(std::abs(v));
    return per_order;
}

TruncationSpec rfc_sample(int n, const RfcPolicy& policy, std::size_t D,
                          std::uint64_t seed) {
    if (D < 1) throw std::invalid_argument("rfc_sample: D must be >= 1");
    std::size_t available = 0;
    if (policy.kind == RfcPolicy::Kind::uniform_up_to) {
        const int kmax = std::min(policy.k_max, n);
        for (SubsetIndex s = 0; s < (1ULL << n); ++s)
            if (subset_order(s) <= kmax) ++available;
    } else {
        available = std::size_t{1} << n;
    }
    if (D > available) throw std::invalid_argument("rfc_sample: D exceeds available subsets");

    Rng rng(seed);
    std::set<SubsetIndex> chosen;
    chosen.insert(0);
    if (policy.kind == RfcPolicy::Kind::uniform_up_to) {
        const int kmax = std::min(policy.k_max, n);
        std::vector<SubsetIndex> pool;
        for (SubsetIndex s = 1; s < (1ULL << n); ++s)
            if (subset_order(s) <= kmax) pool.push_back(s);
        while (chosen.size() < D)
            chosen.insert(pool[rng.uniform_index(pool.size())]);
    } else {
        std::size_t attempts = 0;
        const std::size_t cap = 10000 * D + 100000;
        while (chosen.size() < D) {
            if (++attempts > cap)
                throw std::invalid_argument("rfc_sample: bernoulli policy cannot reach D subsets");
            SubsetIndex s = 0;
            for (int q = 0; q < n; ++q)
                if (rng.uniform() < policy.prob) s |= 1ULL << q;
            if (s != 0) chosen.insert(s);
        }
    }
    return TruncationSpec::rfc(std::vector<SubsetIndex>(chosen.begin(), chosen.end()));
}

double parity_kernel(int n, std::uint64_t x, std::uint64_t y,
                     const std::vector<SubsetIndex>& omega) {
    const std::uint64_t diff = x ^ y;
    double s = 0.0;
    for (const auto sub : omega) {
        const std::uint64_t im = index_space_mask(n, sub);
        s += (popcount64(diff & im) & 1) ? -1.0 : 1.0;
    }
    return s / static_cast<double>(std::size_t{1} << n);
}

}  // namespace bornlab
