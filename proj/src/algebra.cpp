#include "bornlab/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace bornlab {

bool OperatorAlgebra::contains(const PauliString& p) const {
    const std::uint64_t k = p.key();
    auto it = std::lower_bound(basis.begin(), basis.end(), k,
                               [](const PauliString& a, std::uint64_t v) { return a.key() < v; });
    return it != basis.end() && it->key() == k;
}

bool OperatorAlgebra::is_commutation_closed() const {
    for (std::size_t i = 0; i < basis.size(); ++i)
        for (std::size_t j = i + 1; j < basis.size(); ++j) {
            if (pauli_commutes(basis[i], basis[j])) continue;
            if (!contains(phase_stripped(pauli_product(basis[i], basis[j])))) return false;
        }
    return true;
}

std::string OperatorAlgebra::export_labels() const {
    std::string out;
    for (const auto& p : basis) {
        out += pauli_label(p);
        out += '\n';
    }
    return out;
}

static void sort_basis(std::vector<PauliString>& basis) {
    std::sort(basis.begin(), basis.end(),
              [](const PauliString& a, const PauliString& b) { return a.key() < b.key(); });
}

OperatorAlgebra lie_closure(const std::vector<PauliString>& generators, std::size_t max_dim) {
    if (generators.empty()) throw std::invalid_argument("lie_closure: no generators");
    if (max_dim < 1) throw std::invalid_argument("lie_closure: max_dim must be >= 1");
    const int n = generators.front().n;
    for (const auto& g : generators)
        if (g.n != n) throw std::invalid_argument("lie_closure: generators disagree on n");

    OperatorAlgebra alg;
    alg.n = n;
    alg.generators = generators;
    std::unordered_set<std::uint64_t> seen;
    std::deque<PauliString> work;

    auto add = [&](const PauliString& p) -> bool {
        if (p.is_identity()) return false;
        const PauliString c = phase_stripped(p);
        if (!seen.insert(c.key()).second) return false;
        alg.basis.push_back(c);
        work.push_back(c);
        return true;
    };

    for (const auto& g : generators) add(g);
    while (!work.empty()) {
        const PauliString p = work.front();
        work.pop_front();
        const std::size_t m = alg.basis.size();  // fresh elements get queued anyway
        for (std::size_t i = 0; i < m; ++i) {
            const PauliString& q = alg.basis[i];
            if (pauli_commutes(p, q)) continue;
            add(pauli_product(p, q));
            if (alg.basis.size() > max_dim) {
                sort_basis(alg.basis);
                throw ClosureOverflow("lie_closure: dimension guard exceeded", alg);
            }
        }
    }
    sort_basis(alg.basis);
    return alg;
}

// ---------------------------------------------------------------------------
// span-based closure

namespace {

// sparse real vector over Pauli-word keys, kept sorted by key
using SparseVec = std::vector<std::pair<std::uint64_t, double>>;

SparseVec from_sum(const PauliSum& s) {
    SparseVec v;
    v.reserve(s.size());
    for (const auto& [c, p] : s) v.emplace_back(phase_stripped(p).key(), c);
    std::sort(v.begin(), v.end());
    SparseVec out;
    for (const auto& [k, c] : v) {
        if (!out.empty() && out.back().first == k) out.back().second += c;
        else out.emplace_back(k, c);
    }
    std::erase_if(out, [](const auto& e) { return std::abs(e.second) < 1e-14; });
    return out;
}

double dot(const SparseVec& a, const SparseVec& b) {
    double s = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i].first < b[j].first) ++i;
        else if (b[j].first < a[i].first) ++j;
        else s += a[i++].second * b[j++].second;
    }
    return s;
}

void axpy(SparseVec& a, double alpha, const SparseVec& b) {
    SparseVec out;
    out.reserve(a.size() + b.size());
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) out.push_back(a[i++]);
        else if (i == a.size() || b[j].first < a[i].first) {
            out.emplace_back(b[j].first, alpha * b[j].second);
            ++j;
        } else {
            out.emplace_back(a[i].first, a[i].second + alpha * b[j].second);
            ++i; ++j;
        }
    }
    std::erase_if(out, [](const auto& e) { return std::abs(e.second) < 1e-13; });
    a = std::move(out);
}

PauliString string_from_key(std::uint64_t key, int n) {
    return PauliString{n, key >> 32, key & 0xffffffffULL, 0};
}

// commutator [A, B] of two Hermitian Pauli sums, divided by 2i (keeps entries real)
SparseVec commutator(const SparseVec& a, const SparseVec& b, int n) {
    std::unordered_map<std::uint64_t, double> acc;
    for (const auto& [ka, ca] : a)
        for (const auto& [kb, cb] : b) {
            const PauliString pa = string_from_key(ka, n);
            const PauliString pb = string_from_key(kb, n);
            if (pauli_commutes(pa, pb)) continue;
            const PauliString prod = pauli_product(pa, pb);
            // anticommuting Hermitian words: product phase is +-i, so
            // [A,B]/(2i) has real coefficient ca*cb*(+-1)
            const double sign = prod.phase_exp == 1 ? 1.0 : -1.0;
            acc[prod.key()] += ca * cb * sign;
        }
    SparseVec out(acc.begin(), acc.end());
    std::erase_if(out, [](const auto& e) { return std::abs(e.second) < 1e-12; });
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

SpanClosureResult lie_closure_spans(const std::vector<PauliSum>& generators,
                                    int n, std::size_t max_dim) {
    if (generators.empty()) throw std::invalid_argument("lie_closure_spans: no generators");
    std::vector<SparseVec> ortho;   // orthonormal span basis
    std::deque<std::size_t> work;   // indices of elements not yet bracketed
    std::vector<SparseVec> gens;

    auto add = [&](SparseVec v) -> bool {
        for (int pass = 0; pass < 2; ++pass)  // twice for numerical stability
            for (const auto& q : ortho) axpy(v, -dot(v, q), q);
        const double nrm = std::sqrt(dot(v, v));
        if (nrm < 1e-8) return false;
        for (auto& e : v) e.second /= nrm;
        ortho.push_back(std::move(v));
        work.push_back(ortho.size() - 1);
        return true;
    };

    for (const auto& g : generators) {
        gens.push_back(from_sum(g));
        add(gens.back());
    }
    while (!work.empty()) {
        const std::size_t idx = work.front();
        work.pop_front();
        // nested commutants: bracketing against the generators spans the algebra
        for (const auto& g : gens) {
            add(commutator(ortho[idx], g, n));
            if (ortho.size() > max_dim)
                throw std::runtime_error("lie_closure_spans: dimension guard exceeded");
        }
    }

    SpanClosureResult res;
    res.n = n;
    res.dimension = ortho.size();
    std::unordered_set<std::uint64_t> keys;
    for (const auto& v : ortho)
        for (const auto& [k, c] : v)
            if (std::abs(c) > 1e-9) keys.insert(k);
    for (const auto k : keys) res.support.push_back(string_from_key(k, n));
    std::sort(res.support.begin(), res.support.end(),
              [](const PauliString& a, const PauliString& b) { return a.key() < b.key(); });
    res.word_spanned = res.support.size() == res.dimension;
    return res;
}

// ---------------------------------------------------------------------------
// named algebras

std::vector<PauliString> matchgate_generators(int n) {
    std::vector<PauliString> gens;
    for (int i = 1; i < n; ++i)
        gens.push_back(pauli_product(pauli_x(n, i), pauli_x(n, i + 1)));
    for (int i = 1; i <= n; ++i) gens.push_back(pauli_z(n, i));
    for (auto& g : gens) g = phase_stripped(g);
    return gens;
}

std::vector<PauliString> heisenberg_generator_words(int n) {
    std::vector<PauliString> gens;
    for (int i = 1; i < n; ++i) {
        const std::uint64_t m = (1ULL << (i - 1)) | (1ULL << i);
        gens.push_back(PauliString{n, m, 0, 0});
        gens.push_back(PauliString{n, m, m, 0});
        gens.push_back(PauliString{n, 0, m, 0});
    }
    return gens;
}

std::vector<PauliString> haldane_generator_words(int n) {
    if (n < 3) throw std::invalid_argument("haldane generators need n >= 3");
    std::vector<PauliString> gens;
    for (int i = 1; i <= n - 2; ++i)  // Z_i X_{i+1} Z_{i+2}
        gens.push_back(PauliString{n, 1ULL << i, (1ULL << (i - 1)) | (1ULL << (i + 1)), 0});
    for (int i = 1; i <= n; ++i) gens.push_back(pauli_x(n, i));
    for (int i = 1; i < n; ++i)
        gens.push_back(PauliString{n, (1ULL << (i - 1)) | (1ULL << i), 0, 0});
    return gens;
}

std::vector<PauliSum> heisenberg_generator_sums(int n) {
    std::vector<PauliSum> out;
    for (int i = 1; i < n; ++i) {
        const std::uint64_t m = (1ULL << (i - 1)) | (1ULL << i);
        out.push_back(PauliSum{{1.0, PauliString{n, m, 0, 0}},
                               {1.0, PauliString{n, m, m, 0}},
                               {1.0, PauliString{n, 0, m, 0}}});
    }
    return out;
}

std::vector<PauliSum> haldane_generator_sums(int n) {
    if (n < 3) throw std::invalid_argument("haldane generators need n >= 3");
    PauliSum zxz, fields, xx;
    for (int i = 1; i <= n - 2; ++i)
        zxz.emplace_back(1.0, PauliString{n, 1ULL << i, (1ULL << (i - 1)) | (1ULL << (i + 1)), 0});
    for (int i = 1; i <= n; ++i) fields.emplace_back(1.0, pauli_x(n, i));
    for (int i = 1; i < n; ++i)
        xx.emplace_back(1.0, PauliString{n, (1ULL << (i - 1)) | (1ULL << i), 0, 0});
    return {zxz, fields, xx};
}

static OperatorAlgebra finish(int n, std::vector<PauliString> basis,
                              std::vector<PauliString> gens) {
    sort_basis(basis);
    OperatorAlgebra alg;
    alg.n = n;
    alg.basis = std::move(basis);
    alg.generators = std::move(gens);
    return alg;
}

OperatorAlgebra named_dla(DlaKind kind, int n) {
    if (kind == DlaKind::haldane ? n < 3 : n < 2)
        throw std::invalid_argument("named_dla: n below minimum for this kind");
    if (n > 12) throw std::invalid_argument("named_dla: n too large for explicit enumeration");

    std::vector<PauliString> basis;
    if (kind == DlaKind::matchgate) {
        for (int i = 1; i <= n; ++i) basis.push_back(pauli_z(n, i));
        // hat notation: A_i Z_{i+1}..Z_{j-1} B_j for A, B in {X, Y}
        for (int i = 1; i <= n; ++i)
            for (int j = i + 1; j <= n; ++j) {
                std::uint64_t chain = 0;
                for (int q = i + 1; q < j; ++q) chain |= 1ULL << (q - 1);
                for (int ay = 0; ay < 2; ++ay)
                    for (int by = 0; by < 2; ++by) {
                        PauliString p{n, 0, 0, 0};
                        p.x_mask = (1ULL << (i - 1)) | (1ULL << (j - 1));
                        p.z_mask = chain;
                        if (ay) p.z_mask |= 1ULL << (i - 1);
                        if (by) p.z_mask |= 1ULL << (j - 1);
                        basis.push_back(p);
                    }
            }
        return finish(n, std::move(basis), matchgate_generators(n));
    }

    const std::uint64_t full = (n == 64) ? ~0ULL : ((1ULL << n) - 1);
    if (kind == DlaKind::heisenberg) {
        // N_X + N_Y = |x_mask| and N_Y + N_Z = |z_mask| both even
        for (std::uint64_t x = 0; x <= full; ++x)
            for (std::uint64_t z = 0; z <= full; ++z) {
                if (x == 0 && z == 0) continue;
                if ((popcount64(x) & 1) || (popcount64(z) & 1)) continue;
                if ((x == full && z == 0) || (x == full && z == full) ||
                    (x == 0 && z == full))
                    continue;  // X^n, Y^n, Z^n; in the set only for even n
                basis.push_back(PauliString{n, x, z, 0});
            }
        return finish(n, std::move(basis), heisenberg_generator_words(n));
    }

    // haldane: even number of Y/Z letters on each sublattice
    std::uint64_t odd_sites = 0, even_sites = 0;
    for (int q = 1; q <= n; ++q)
        ((q & 1) ? odd_sites : even_sites) |= 1ULL << (q - 1);
    const std::uint64_t xo = even_sites;  // (1X)^{n/2}: X on qubits 2,4,..
    const std::uint64_t xe = odd_sites;   // (X1)^{n/2}X^{n mod 2}: X on 1,3,..
    for (std::uint64_t x = 0; x <= full; ++x)
        for (std::uint64_t z = 0; z <= full; ++z) {
            if (x == 0 && z == 0) continue;
            if ((popcount64(z & odd_sites) & 1) || (popcount64(z & even_sites) & 1)) continue;
            if (z == 0 && (x == xo || x == xe || x == full)) continue;
            basis.push_back(PauliString{n, x, z, 0});
        }
    return finish(n, std::move(basis), haldane_generator_words(n));
}

OperatorAlgebra algebra_intersection(const OperatorAlgebra& a, const OperatorAlgebra& b) {
    if (a.n != b.n) throw std::invalid_argument("algebra_intersection: qubit count mismatch");
    std::unordered_set<std::uint64_t> keys;
    for (const auto& p : b.basis) keys.insert(p.key());
    OperatorAlgebra out;
    out.n = a.n;
    for (const auto& p : a.basis)
        if (keys.count(p.key())) out.basis.push_back(p);
    return out;
}

}  // namespace bornlab
