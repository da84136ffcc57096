#include "bornlab/statevector.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bornlab/algebra.hpp"

namespace bornlab {

StateVector StateVector::zero_state(int n) {
    if (n < 1 || n > kMaxDenseQubits)
        throw std::invalid_argument("StateVector: n out of supported range");
    StateVector s;
    s.n = n;
    s.amp.assign(std::size_t{1} << n, {0.0, 0.0});
    s.amp[0] = {1.0, 0.0};
    return s;
}

double StateVector::norm_sq() const {
    double t = 0.0;
    for (const auto& a : amp) t += std::norm(a);
    return t;
}

std::uint64_t index_space_mask(int n, std::uint64_t qubit_mask) {
    std::uint64_t m = 0;
    for (int q = 0; q < n; ++q)
        if ((qubit_mask >> q) & 1) m |= 1ULL << (n - 1 - q);
    return m;
}

Gate rotation_gate(const PauliString& generator, int param_index) {
    Gate g;
    g.kind = Gate::Kind::pauli_rotation;
    g.generator = generator;
    g.param_index = param_index;
    return g;
}

Gate hadamard_gate(int qubit) {
    Gate g;
    g.kind = Gate::Kind::hadamard;
    g.qubit = qubit;
    return g;
}

Gate cnot_gate(int control, int target) {
    if (control == target) throw std::invalid_argument("cnot: control == target");
    Gate g;
    g.kind = Gate::Kind::cnot;
    g.control = control;
    g.target = target;
    return g;
}

void apply_pauli(StateVector& state, const PauliString& p) {
    if (p.n != state.n) throw std::invalid_argument("apply_pauli: qubit count mismatch");
    const int n = state.n;
    const std::uint64_t ix = index_space_mask(n, p.x_mask);
    const std::uint64_t iz = index_space_mask(n, p.z_mask);
    // operator = i^{phase_exp + |x&z|} X^x Z^z
    const int k = (p.phase_exp + popcount64(p.x_mask & p.z_mask)) & 3;
    static const std::complex<double> ipow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    const std::complex<double> base = ipow[k];
    const std::size_t N = state.amp.size();
    std::vector<std::complex<double>> out(N);
    for (std::size_t b = 0; b < N; ++b) {
        const double sign = (popcount64(b & iz) & 1) ? -1.0 : 1.0;
        out[b ^ ix] = base * sign * state.amp[b];
    }
    state.amp = std::move(out);
}

static void apply_rotation(StateVector& state, const PauliString& p, double theta) {
    const int n = state.n;
    const std::uint64_t ix = index_space_mask(n, p.x_mask);
    const std::uint64_t iz = index_space_mask(n, p.z_mask);
    const int k = (p.phase_exp + popcount64(p.x_mask & p.z_mask)) & 3;
    static const std::complex<double> ipow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    const std::complex<double> base = ipow[k];
    const double c = std::cos(theta / 2.0), s = std::sin(theta / 2.0);
    const std::complex<double> mis = std::complex<double>(0, -s) * base;
    const std::size_t N = state.amp.size();
    if (ix == 0) {  // diagonal generator, update in place
        for (std::size_t b = 0; b < N; ++b) {
            const double sign = (popcount64(b & iz) & 1) ? -1.0 : 1.0;
            state.amp[b] = (c + mis * sign) * state.amp[b];
        }
        return;
    }
    std::vector<std::complex<double>> out(N);
    for (std::size_t b = 0; b < N; ++b) {
        const double sign = (popcount64(b & iz) & 1) ? -1.0 : 1.0;
        out[b ^ ix] = mis * sign * state.amp[b];
    }
    for (std::size_t b = 0; b < N; ++b) state.amp[b] = c * state.amp[b] + out[b];
}

static void apply_hadamard(StateVector& state, int qubit) {
    const int n = state.n;
    if (qubit < 1 || qubit > n) throw std::invalid_argument("hadamard: bad qubit");
    const std::uint64_t mask = 1ULL << (n - qubit);
    const double inv = 1.0 / std::sqrt(2.0);
    const std::size_t N = state.amp.size();
    for (std::size_t b = 0; b < N; ++b) {
        if (b & mask) continue;
        const auto a0 = state.amp[b];
        const auto a1 = state.amp[b | mask];
        state.amp[b] = inv * (a0 + a1);
        state.amp[b | mask] = inv * (a0 - a1);
    }
}

static void apply_cnot(StateVector& state, int control, int target) {
    const int n = state.n;
    if (control < 1 || control > n || target < 1 || target > n)
        throw std::invalid_argument("cnot: bad qubit");
    const std::uint64_t cm = 1ULL << (n - control);
    const std::uint64_t tm = 1ULL << (n - target);
    const std::size_t N = state.amp.size();
    for (std::size_t b = 0; b < N; ++b)
        if ((b & cm) && !(b & tm)) std::swap(state.amp[b], state.amp[b | tm]);
}

void apply_gate(StateVector& state, const Gate& gate, double theta) {
    switch (gate.kind) {
        case Gate::Kind::pauli_rotation: apply_rotation(state, gate.generator, theta); break;
        case Gate::Kind::hadamard: apply_hadamard(state, gate.qubit); break;
        case Gate::Kind::cnot: apply_cnot(state, gate.control, gate.target); break;
    }
}

StateVector simulate(const Circuit& circuit, const std::vector<double>& theta) {
    if (static_cast<int>(theta.size()) != circuit.param_count)
        throw std::invalid_argument("simulate: parameter count mismatch");
    StateVector state = StateVector::zero_state(circuit.n);
    for (const auto& g : circuit.gates) {
        double t = 0.0;
        if (g.kind == Gate::Kind::pauli_rotation) {
            if (g.param_index < 0 || g.param_index >= circuit.param_count)
                throw std::invalid_argument("simulate: gate references missing parameter");
            t = theta[static_cast<std::size_t>(g.param_index)];
        }
        apply_gate(state, g, t);
    }
    return state;
}

std::vector<double> born_distribution(const StateVector& state) {
    std::vector<double> p(state.amp.size());
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = std::norm(state.amp[i]);
    return p;
}

double z_correlator(const std::vector<double>& probs, int n, std::uint64_t subset) {
    const std::uint64_t im = index_space_mask(n, subset);
    double s = 0.0;
    for (std::size_t b = 0; b < probs.size(); ++b)
        s += (popcount64(b & im) & 1) ? -probs[b] : probs[b];
    return s;
}

double z_correlator(const StateVector& state, std::uint64_t subset) {
    return z_correlator(born_distribution(state), state.n, subset);
}

std::vector<std::uint64_t> sample(const std::vector<double>& probs, std::size_t m,
                                  std::uint64_t seed) {
    if (m < 1) throw std::invalid_argument("sample: m must be >= 1");
    std::vector<double> cdf(probs.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        acc += probs[i];
        cdf[i] = acc;
    }
    Rng rng(seed);
    std::vector<std::uint64_t> out(m);
    for (std::size_t j = 0; j < m; ++j) {
        const double u = rng.uniform() * acc;
        out[j] = static_cast<std::uint64_t>(
            std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
    }
    return out;
}

std::vector<std::uint64_t> sample(const StateVector& state, std::size_t m,
                                  std::uint64_t seed) {
    return sample(born_distribution(state), m, seed);
}

// ---------------------------------------------------------------------------
// ansatz builders

static Circuit build_iqp(const AnsatzSpec& spec) {
    const int n = spec.n;
    Circuit c;
    c.n = n;
    for (int q = 1; q <= n; ++q) c.gates.push_back(hadamard_gate(q));
    int param = 0;
    for (int q = 1; q <= n; ++q)
        c.gates.push_back(rotation_gate(pauli_z(n, q), param++));
    const int pairs = spec.iqp_pairs >= 0 ? spec.iqp_pairs : n - 1;
    Rng rng(spec.seed);
    for (int k = 0; k < pairs; ++k) {
        const int i = 1 + static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(n)));
        int j = i;
        while (j == i) j = 1 + static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(n)));
        c.gates.push_back(rotation_gate(
            phase_stripped(pauli_product(pauli_z(n, i), pauli_z(n, j))), param++));
    }
    for (int q = 1; q <= n; ++q) c.gates.push_back(hadamard_gate(q));
    c.param_count = param;
    return c;
}

static Circuit build_sampled(const AnsatzSpec& spec, const std::vector<PauliString>& pool) {
    Circuit c;
    c.n = spec.n;
    Rng rng(spec.seed);
    for (int k = 0; k < spec.gate_count; ++k) {
        const auto& g = pool[rng.uniform_index(pool.size())];
        c.gates.push_back(rotation_gate(g, k));
    }
    c.param_count = spec.gate_count;
    return c;
}

static Circuit build_strongly_entangling(const AnsatzSpec& spec) {
    const int n = spec.n;
    Circuit c;
    c.n = n;
    int param = 0;
    for (int layer = 0; layer < spec.layers; ++layer) {
        for (int q = 1; q <= n; ++q) {
            c.gates.push_back(rotation_gate(pauli_z(n, q), param++));
            c.gates.push_back(rotation_gate(pauli_y(n, q), param++));
            c.gates.push_back(rotation_gate(pauli_z(n, q), param++));
        }
        const int range = n > 1 ? (layer % (n - 1)) + 1 : 0;
        if (range > 0)
            for (int q = 1; q <= n; ++q)
                c.gates.push_back(cnot_gate(q, (q - 1 + range) % n + 1));
    }
    c.param_count = param;
    return c;
}

Circuit build_ansatz(const AnsatzSpec& spec) {
    if (spec.n < 1) throw std::invalid_argument("build_ansatz: n must be >= 1");
    switch (spec.kind) {
        case AnsatzSpec::Kind::iqp:
            return build_iqp(spec);
        case AnsatzSpec::Kind::matchcircuit: {
            if (spec.n < 2) throw std::invalid_argument("matchcircuit needs n >= 2");
            if (spec.gate_count < 1) throw std::invalid_argument("matchcircuit: gate_count < 1");
            return build_sampled(spec, matchgate_generators(spec.n));
        }
        case AnsatzSpec::Kind::dla_sampled: {
            if (spec.dla_basis.empty())
                throw std::invalid_argument("dla_sampled: empty algebra basis");
            if (spec.gate_count < 1) throw std::invalid_argument("dla_sampled: gate_count < 1");
            return build_sampled(spec, spec.dla_basis);
        }
        case AnsatzSpec::Kind::strongly_entangling: {
            if (spec.layers < 1) throw std::invalid_argument("strongly_entangling: layers < 1");
            return build_strongly_entangling(spec);
        }
    }
    throw std::logic_error("build_ansatz: unknown kind");
}

Circuit simple_eg_circuit() {
    // The analytic correlator triple fixes the wiring: theta_2 drives the
    // rotation on qubit 1 and theta_1 the one on qubit 2.
    Circuit c;
    c.n = 2;
    c.gates.push_back(rotation_gate(pauli_y(2, 1), 1));
    c.gates.push_back(rotation_gate(pauli_y(2, 2), 0));
    c.gates.push_back(cnot_gate(1, 2));
    c.gates.push_back(cnot_gate(2, 1));
    c.param_count = 2;
    return c;
}

Circuit ghz_circuit(int n) {
    Circuit c;
    c.n = n;
    c.gates.push_back(hadamard_gate(1));
    for (int q = 1; q < n; ++q) c.gates.push_back(cnot_gate(q, q + 1));
    c.param_count = 0;
    return c;
}

}  // namespace bornlab
