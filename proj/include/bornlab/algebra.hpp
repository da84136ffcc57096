#pragma once

#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "bornlab/pauli.hpp"

namespace bornlab {

// Real span of phase-normalized Pauli words, closed under commutation.
struct OperatorAlgebra {
    int n = 0;
    std::vector<PauliString> basis;       // phase-stripped, sorted by key
    std::vector<PauliString> generators;  // provenance

    std::size_t dimension() const { return basis.size(); }
    bool contains(const PauliString& p) const;
    bool is_commutation_closed() const;

    // newline-delimited Pauli labels, e.g. "XZIY"
    std::string export_labels() const;
};

// Thrown when a closure exceeds its dimension guard; carries the partial basis.
class ClosureOverflow : public std::runtime_error {
  public:
    ClosureOverflow(std::string msg, OperatorAlgebra partial)
        : std::runtime_error(std::move(msg)), partial_result(std::move(partial)) {}
    OperatorAlgebra partial_result;
};

// Smallest commutator-closed set of Pauli words containing the generators
// (phases stripped). Worklist of fresh commutators against the current basis.
OperatorAlgebra lie_closure(const std::vector<PauliString>& generators,
                            std::size_t max_dim);

// Real linear combination of Pauli words; one generator of a parameterized
// Hamiltonian (all words inside share a coefficient).
using PauliSum = std::vector<std::pair<double, PauliString>>;

struct SpanClosureResult {
    int n = 0;
    std::size_t dimension = 0;
    // Pauli words appearing with nonzero coefficient anywhere in the span
    std::vector<PauliString> support;
    // true when dimension == |support|, i.e. the span has a Pauli-word basis
    bool word_spanned = false;
};

// Lie closure of general Pauli-sum generators, tracked as a linear span.
// Needed for Hamiltonians whose terms share coefficients: closing over the
// individual words can strictly over-generate.
SpanClosureResult lie_closure_spans(const std::vector<PauliSum>& generators,
                                    int n, std::size_t max_dim);

enum class DlaKind { matchgate, heisenberg, haldane };

// Explicit basis constructions, not built by closure:
//   matchgate:  {Z_i} u {A_i Z...Z B_j : A,B in {X,Y}},    dim n(2n-1)
//   heisenberg: even #XY and even #YZ letters, minus {X^n, Y^n, Z^n} (the
//               three only belong to the set for even n),  dim 4^{n-1}-1-3[n even]
//   haldane:    even #YZ letters on each sublattice, minus
//               {X_o, X_e, X^n},                           dim 4^{n-1}-4
OperatorAlgebra named_dla(DlaKind kind, int n);

OperatorAlgebra algebra_intersection(const OperatorAlgebra& a, const OperatorAlgebra& b);

// Generator sets of the three ansatz families, as plain words.
std::vector<PauliString> matchgate_generators(int n);
std::vector<PauliString> heisenberg_generator_words(int n);
std::vector<PauliString> haldane_generator_words(int n);

// Same Hamiltonians with coefficient ties kept: one PauliSum per independent
// coupling (per bond for Heisenberg; the J/h1/h2 groups for Haldane).
std::vector<PauliSum> heisenberg_generator_sums(int n);
std::vector<PauliSum> haldane_generator_sums(int n);

}  // namespace bornlab
