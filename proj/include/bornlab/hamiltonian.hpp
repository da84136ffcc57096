#pragma once

#include <array>
#include <string>
#include <vector>

#include "bornlab/pauli.hpp"
#include "bornlab/statevector.hpp"

namespace bornlab {

struct Hamiltonian {
    int n = 0;
    std::vector<std::pair<double, PauliString>> terms;

    // |out> = H |in>, matrix-free
    StateVector apply(const StateVector& in) const;
    double expectation(const StateVector& state) const;
};

struct TfimParams { int n; double J; double h; };
struct HeisenbergAltParams { int n; double J_even; double J_odd; };
struct Haldane1dParams { int n; double J; double h1; double h2; };
struct Haldane2dParams { int nx; int ny; double J; double h1; double h2; };

Hamiltonian build_tfim(const TfimParams& p);
Hamiltonian build_heisenberg_alt(const HeisenbergAltParams& p);
Hamiltonian build_haldane_1d(const Haldane1dParams& p);
Hamiltonian build_haldane_2d(const Haldane2dParams& p);

// y-periodic lattice bookkeeping for the 2D Haldane model. Site numbering is
// column-major: site(ix, iy) = (ix-1)*ny + iy, 1-based.
struct LatticeAdjacency {
    std::vector<std::array<int, 2>> pairs;     // nearest neighbors <i,j>
    std::vector<std::array<int, 3>> triplets;  // straight-line <i,j,k>
};
LatticeAdjacency haldane_2d_adjacency(int nx, int ny);

struct GroundStateResult {
    double energy = 0.0;
    StateVector state;
    bool degenerate = false;
    double gap = 0.0;       // E1 - E0
    double residual = 0.0;  // ||H psi - E psi||
};

// Lowest eigenpair. Dense solve for n <= 8, restarted Lanczos up to n <= 14.
// force_iterative routes small problems through Lanczos for cross-checks.
GroundStateResult ground_state(const Hamiltonian& h, bool force_iterative = false);

// dense matrix for cross-checks, n <= 8
std::vector<std::vector<std::complex<double>>> dense_matrix(const Hamiltonian& h);

struct BinaryDataset {
    int n = 0;
    std::vector<std::uint64_t> rows;  // basis indices, qubit 1 = MSB

    std::vector<double> empirical_distribution() const;
};

// comma-separated 0/1 matrix, optional header row; columns picks a subset
// (0-based, in order) when non-empty
BinaryDataset load_binary_csv(const std::string& path,
                              const std::vector<int>& columns = {});

}  // namespace bornlab
