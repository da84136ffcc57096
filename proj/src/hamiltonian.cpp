#include "bornlab/hamiltonian.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "bornlab/rng.hpp"

namespace bornlab {

StateVector Hamiltonian::apply(const StateVector& in) const {
    if (in.n != n) throw std::invalid_argument("Hamiltonian::apply: qubit count mismatch");
    StateVector out;
    out.n = n;
    out.amp.assign(in.amp.size(), {0.0, 0.0});
    for (const auto& [coeff, p] : terms) {
        const std::uint64_t ix = index_space_mask(n, p.x_mask);
        const std::uint64_t iz = index_space_mask(n, p.z_mask);
        const int k = (p.phase_exp + popcount64(p.x_mask & p.z_mask)) & 3;
        static const std::complex<double> ipow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
        const std::complex<double> w = coeff * ipow[k];
        for (std::size_t b = 0; b < in.amp.size(); ++b) {
            const double sign = (popcount64(b & iz) & 1) ? -1.0 : 1.0;
            out.amp[b ^ ix] += w * sign * in.amp[b];
        }
    }
    return out;
}

double Hamiltonian::expectation(const StateVector& state) const {
    const StateVector hs = apply(state);
    std::complex<double> acc = 0.0;
    for (std::size_t i = 0; i < state.amp.size(); ++i)
        acc += std::conj(state.amp[i]) * hs.amp[i];
    return acc.real();
}

Hamiltonian build_tfim(const TfimParams& p) {
    if (p.n < 2) throw std::invalid_argument("tfim: n must be >= 2");
    if (!std::isfinite(p.J) || !std::isfinite(p.h))
        throw std::invalid_argument("tfim: parameters must be finite");
    Hamiltonian h;
    h.n = p.n;
    for (int i = 1; i < p.n; ++i)
        h.terms.emplace_back(-p.J, phase_stripped(pauli_product(pauli_x(p.n, i),
                                                                pauli_x(p.n, i + 1))));
    for (int i = 1; i <= p.n; ++i) h.terms.emplace_back(-p.h, pauli_z(p.n, i));
    return h;
}

Hamiltonian build_heisenberg_alt(const HeisenbergAltParams& p) {
    if (p.n < 2) throw std::invalid_argument("heisenberg_alt: n must be >= 2");
    if (!std::isfinite(p.J_even) || !std::isfinite(p.J_odd))
        throw std::invalid_argument("heisenberg_alt: parameters must be finite");
    Hamiltonian h;
    h.n = p.n;
    for (int i = 1; i < p.n; ++i) {
        const double J = (i % 2 == 1) ? p.J_odd : p.J_even;
        const std::uint64_t m = (1ULL << (i - 1)) | (1ULL << i);
        h.terms.emplace_back(J, PauliString{p.n, m, 0, 0});
        h.terms.emplace_back(J, PauliString{p.n, m, m, 0});
        h.terms.emplace_back(J, PauliString{p.n, 0, m, 0});
    }
    return h;
}

Hamiltonian build_haldane_1d(const Haldane1dParams& p) {
    if (p.n < 3) throw std::invalid_argument("haldane_1d: n must be >= 3");
    if (!std::isfinite(p.J) || !std::isfinite(p.h1) || !std::isfinite(p.h2))
        throw std::invalid_argument("haldane_1d: parameters must be finite");
    Hamiltonian h;
    h.n = p.n;
    for (int i = 1; i <= p.n - 2; ++i)
        h.terms.emplace_back(-p.J, PauliString{p.n, 1ULL << i,
                                               (1ULL << (i - 1)) | (1ULL << (i + 1)), 0});
    for (int i = 1; i <= p.n; ++i) h.terms.emplace_back(-p.h1, pauli_x(p.n, i));
    for (int i = 1; i < p.n; ++i)
        h.terms.emplace_back(-p.h2, PauliString{p.n, (1ULL << (i - 1)) | (1ULL << i), 0, 0});
    return h;
}

LatticeAdjacency haldane_2d_adjacency(int nx, int ny) {
    if (nx < 1 || ny < 2) throw std::invalid_argument("haldane_2d: need nx >= 1, ny >= 2");
    auto site = [ny](int ix, int iy) { return (ix - 1) * ny + iy; };
    LatticeAdjacency adj;
    // nearest neighbors: open in x, periodic in y (dedup the ny = 2 wrap)
    for (int ix = 1; ix <= nx; ++ix)
        for (int iy = 1; iy <= ny; ++iy) {
            if (ix < nx) adj.pairs.push_back({site(ix, iy), site(ix + 1, iy)});
            const int iy2 = iy % ny + 1;
            if (ny > 2 || iy < ny) adj.pairs.push_back({site(ix, iy), site(ix, iy2)});
        }
    // straight-line triples along x (open) and along y (periodic, needs ny >= 3)
    for (int iy = 1; iy <= ny; ++iy)
        for (int ix = 1; ix <= nx - 2; ++ix)
            adj.triplets.push_back({site(ix, iy), site(ix + 1, iy), site(ix + 2, iy)});
    if (ny >= 3)
        for (int ix = 1; ix <= nx; ++ix)
            for (int iy = 1; iy <= ny; ++iy) {
                const int j = iy % ny + 1;
                const int k = j % ny + 1;
                adj.triplets.push_back({site(ix, iy), site(ix, j), site(ix, k)});
            }
    return adj;
}

Hamiltonian build_haldane_2d(const Haldane2dParams& p) {
    const int n = p.nx * p.ny;
    if (n < 2) throw std::invalid_argument("haldane_2d: lattice too small");
    if (!std::isfinite(p.J) || !std::isfinite(p.h1) || !std::isfinite(p.h2))
        throw std::invalid_argument("haldane_2d: parameters must be finite");
    const LatticeAdjacency adj = haldane_2d_adjacency(p.nx, p.ny);
    Hamiltonian h;
    h.n = n;
    for (const auto& t : adj.triplets) {
        PauliString zxz{n, 0, 0, 0};
        zxz.z_mask = (1ULL << (t[0] - 1)) | (1ULL << (t[2] - 1));
        zxz.x_mask = 1ULL << (t[1] - 1);
        h.terms.emplace_back(-p.J, zxz);
    }
    for (int i = 1; i <= n; ++i) h.terms.emplace_back(-p.h1, pauli_x(n, i));
    for (const auto& e : adj.pairs)
        h.terms.emplace_back(-p.h2,
                             PauliString{n, (1ULL << (e[0] - 1)) | (1ULL << (e[1] - 1)), 0, 0});
    return h;
}

std::vector<std::vector<std::complex<double>>> dense_matrix(const Hamiltonian& h) {
    if (h.n > 8) throw std::invalid_argument("dense_matrix: capped at n <= 8");
    const std::size_t N = std::size_t{1} << h.n;
    std::vector<std::vector<std::complex<double>>> M(N,
        std::vector<std::complex<double>>(N, {0.0, 0.0}));
    for (std::size_t col = 0; col < N; ++col) {
        StateVector e;
        e.n = h.n;
        e.amp.assign(N, {0.0, 0.0});
        e.amp[col] = 1.0;
        const StateVector he = h.apply(e);
        for (std::size_t row = 0; row < N; ++row) M[row][col] = he.amp[row];
    }
    return M;
}

namespace {

GroundStateResult dense_ground_state(const Hamiltonian& h) {
    const std::size_t N = std::size_t{1} << h.n;
    Eigen::MatrixXcd M(N, N);
    const auto dm = dense_matrix(h);
    for (std::size_t r = 0; r < N; ++r)
        for (std::size_t c = 0; c < N; ++c) M(r, c) = dm[r][c];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(M);
    const auto& vals = solver.eigenvalues();
    GroundStateResult res;
    res.energy = vals(0);
    res.gap = N > 1 ? vals(1) - vals(0) : 0.0;
    res.degenerate = res.gap < 1e-9;
    res.state.n = h.n;
    res.state.amp.resize(N);
    for (std::size_t i = 0; i < N; ++i) res.state.amp[i] = solver.eigenvectors()(i, 0);
    const StateVector hs = h.apply(res.state);
    double r2 = 0.0;
    for (std::size_t i = 0; i < N; ++i) r2 += std::norm(hs.amp[i] - res.energy * res.state.amp[i]);
    res.residual = std::sqrt(r2);
    return res;
}

// full-reorthogonalization Lanczos for the two lowest eigenpairs
GroundStateResult lanczos_ground_state(const Hamiltonian& h) {
    const std::size_t N = std::size_t{1} << h.n;
    const int max_iter = static_cast<int>(std::min<std::size_t>(N, 260));
    Rng rng(0x9d2c5680u);

    std::vector<StateVector> V;
    std::vector<double> alpha, beta;

    StateVector v;
    v.n = h.n;
    v.amp.resize(N);
    for (auto& a : v.amp) a = {rng.normal(), rng.normal()};
    double nv = std::sqrt(v.norm_sq());
    for (auto& a : v.amp) a /= nv;
    V.push_back(v);

    auto dotc = [](const StateVector& a, const StateVector& b) {
        std::complex<double> s = 0.0;
        for (std::size_t i = 0; i < a.amp.size(); ++i) s += std::conj(a.amp[i]) * b.amp[i];
        return s;
    };

    GroundStateResult res;
    res.state.n = h.n;
    for (int it = 0; it < max_iter; ++it) {
        StateVector w = h.apply(V.back());
        const double a = dotc(V.back(), w).real();
        alpha.push_back(a);
        for (std::size_t i = 0; i < N; ++i) w.amp[i] -= a * V.back().amp[i];
        if (V.size() > 1)
            for (std::size_t i = 0; i < N; ++i)
                w.amp[i] -= beta.back() * V[V.size() - 2].amp[i];
        // full reorthogonalization keeps Ritz pairs clean at desk scale
        for (const auto& u : V) {
            const auto c = dotc(u, w);
            for (std::size_t i = 0; i < N; ++i) w.amp[i] -= c * u.amp[i];
        }
        const double b = std::sqrt(w.norm_sq());

        const int m = static_cast<int>(alpha.size());
        bool check_now = (it + 1) % 20 == 0 || b < 1e-13 || it + 1 == max_iter || m == static_cast<int>(N);
        if (check_now) {
            Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);
            for (int i = 0; i < m; ++i) {
                T(i, i) = alpha[static_cast<std::size_t>(i)];
                if (i + 1 < m)
                    T(i, i + 1) = T(i + 1, i) = beta[static_cast<std::size_t>(i)];
            }
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
            StateVector psi;
            psi.n = h.n;
            psi.amp.assign(N, {0.0, 0.0});
            for (int i = 0; i < m; ++i) {
                const double c = es.eigenvectors()(i, 0);
                for (std::size_t j = 0; j < N; ++j) psi.amp[j] += c * V[static_cast<std::size_t>(i)].amp[j];
            }
            const double pn = std::sqrt(psi.norm_sq());
            for (auto& x : psi.amp) x /= pn;
            const double e0 = es.eigenvalues()(0);
            const StateVector hp = h.apply(psi);
            double r2 = 0.0;
            for (std::size_t j = 0; j < N; ++j) r2 += std::norm(hp.amp[j] - e0 * psi.amp[j]);
            const double resid = std::sqrt(r2);
            if (resid < 1e-10 || b < 1e-13 || it + 1 == max_iter || m == static_cast<int>(N)) {
                res.energy = e0;
                res.state = std::move(psi);
                res.gap = m > 1 ? es.eigenvalues()(1) - e0 : 0.0;
                res.degenerate = res.gap < 1e-9;
                res.residual = resid;
                if (resid > 1e-8)
                    throw std::runtime_error("ground_state: Lanczos did not converge");
                return res;
            }
        }
        if (b < 1e-13) break;  // exact invariant subspace found, handled above
        beta.push_back(b);
        StateVector next;
        next.n = h.n;
        next.amp.resize(N);
        for (std::size_t i = 0; i < N; ++i) next.amp[i] = w.amp[i] / b;
        V.push_back(std::move(next));
    }
    throw std::runtime_error("ground_state: Lanczos did not converge");
}

}  // namespace

GroundStateResult ground_state(const Hamiltonian& h, bool force_iterative) {
    if (h.n > 14) throw std::invalid_argument("ground_state: capped at n <= 14");
    if (h.n <= 8 && !force_iterative) return dense_ground_state(h);
    return lanczos_ground_state(h);
}

std::vector<double> BinaryDataset::empirical_distribution() const {
    std::vector<double> p(std::size_t{1} << n, 0.0);
    for (const auto r : rows) p[r] += 1.0;
    const double m = static_cast<double>(rows.size());
    for (auto& x : p) x /= m;
    return p;
}

BinaryDataset load_binary_csv(const std::string& path, const std::vector<int>& columns) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_binary_csv: cannot open " + path);
    BinaryDataset ds;
    std::string line;
    std::size_t line_no = 0;
    int width = -1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
            while (!cell.empty() && cell.front() == ' ') cell.erase(cell.begin());
            cells.push_back(cell);
        }
        // optional header: first row with any non-binary cell
        const bool binary_row = std::all_of(cells.begin(), cells.end(), [](const std::string& c) {
            return c == "0" || c == "1";
        });
        if (!binary_row) {
            if (line_no == 1) continue;  // header
            throw std::runtime_error("load_binary_csv: non-binary cell at line " +
                                     std::to_string(line_no));
        }
        std::vector<int> use = columns;
        if (use.empty()) {
            use.resize(cells.size());
            for (std::size_t i = 0; i < cells.size(); ++i) use[i] = static_cast<int>(i);
        }
        if (width < 0) {
            width = static_cast<int>(use.size());
            if (width < 1 || width > kMaxDenseQubits)
                throw std::runtime_error("load_binary_csv: unsupported column count");
            ds.n = width;
        }
        std::uint64_t row = 0;
        for (int j = 0; j < width; ++j) {
            const int col = use[static_cast<std::size_t>(j)];
            if (col < 0 || col >= static_cast<int>(cells.size()))
                throw std::runtime_error("load_binary_csv: ragged row at line " +
                                         std::to_string(line_no));
            if (cells[static_cast<std::size_t>(col)] == "1") row |= 1ULL << (width - 1 - j);
        }
        if (columns.empty() && static_cast<int>(cells.size()) != width)
            throw std::runtime_error("load_binary_csv: ragged row at line " +
                                     std::to_string(line_no));
        ds.rows.push_back(row);
    }
    if (ds.rows.empty()) throw std::runtime_error("load_binary_csv: no data rows");
    return ds;
}

}  // namespace bornlab
