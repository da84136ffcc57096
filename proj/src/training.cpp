#include "bornlab/training.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bornlab/rng.hpp"

namespace bornlab {

SurrogateChoice SurrogateChoice::statevector() { return SurrogateChoice{}; }

SurrogateChoice SurrogateChoice::iqp_pps(int h_max) {
    SurrogateChoice s;
    s.kind = Kind::iqp_pps;
    s.h_max = h_max;
    return s;
}

SurrogateChoice SurrogateChoice::pauli_prop(int w_max) {
    SurrogateChoice s;
    s.kind = Kind::pauli_prop;
    s.w_max = w_max;
    return s;
}

namespace {

class StatevectorModel : public CorrelatorModel {
  public:
    explicit StatevectorModel(Circuit c) : circuit_(std::move(c)) {}
    int n() const override { return circuit_.n; }
    std::vector<double> correlators(const std::vector<double>& theta,
                                    const std::vector<SubsetIndex>& subsets) const override {
        const auto probs = born_distribution(simulate(circuit_, theta));
        const CorrelatorVector c = decompose(probs, circuit_.n);
        std::vector<double> out;
        out.reserve(subsets.size());
        for (const auto s : subsets) out.push_back(c.at(s));
        return out;
    }

  private:
    Circuit circuit_;
};

class IqpPpsModel : public CorrelatorModel {
  public:
    IqpPpsModel(IqpSpec spec, int h_max) : spec_(std::move(spec)), h_max_(h_max) {
        spec_.validate();
    }
    int n() const override { return spec_.n; }
    std::vector<double> correlators(const std::vector<double>& theta,
                                    const std::vector<SubsetIndex>& subsets) const override {
        std::vector<double> out;
        out.reserve(subsets.size());
        for (const auto s : subsets)
            out.push_back(iqp_surrogate_correlator(spec_, theta, s, h_max_));
        return out;
    }

  private:
    IqpSpec spec_;
    int h_max_;
};

class PauliPropModel : public CorrelatorModel {
  public:
    PauliPropModel(Circuit c, int w_max)
        : circuit_(std::move(c)), w_max_(w_max < 0 ? circuit_.n : w_max) {}
    int n() const override { return circuit_.n; }
    std::vector<double> correlators(const std::vector<double>& theta,
                                    const std::vector<SubsetIndex>& subsets) const override {
        std::vector<double> out;
        out.reserve(subsets.size());
        for (const auto s : subsets) {
            if (s == 0) {
                out.push_back(1.0);
                continue;
            }
            PauliString z{circuit_.n, 0, s, 0};
            out.push_back(pauli_propagate(circuit_, z, theta, w_max_));
        }
        return out;
    }

  private:
    Circuit circuit_;
    int w_max_;
};

}  // namespace

IqpSpec iqp_spec_from_circuit(const Circuit& circuit) {
    const int n = circuit.n;
    IqpSpec spec;
    spec.n = n;
    std::uint64_t lead = 0, trail = 0;
    enum { leading, rotations, trailing } phase = leading;
    for (const auto& g : circuit.gates) {
        if (g.kind == Gate::Kind::hadamard) {
            const std::uint64_t bit = 1ULL << (g.qubit - 1);
            if (phase == leading) lead |= bit;
            else { phase = trailing; trail |= bit; }
        } else if (g.kind == Gate::Kind::pauli_rotation) {
            if (phase == trailing)
                throw std::invalid_argument("iqp_spec_from_circuit: rotation after final H layer");
            phase = rotations;
            spec.generators.emplace_back(g.generator, g.param_index);
        } else {
            throw std::invalid_argument("iqp_spec_from_circuit: circuit is not IQP-shaped");
        }
    }
    const std::uint64_t full = (1ULL << n) - 1;
    if (lead != full || trail != full)
        throw std::invalid_argument("iqp_spec_from_circuit: missing Hadamard walls");
    spec.validate();
    return spec;
}

std::unique_ptr<CorrelatorModel> make_model(const Circuit& circuit,
                                            const SurrogateChoice& surrogate) {
    switch (surrogate.kind) {
        case SurrogateChoice::Kind::statevector:
            return std::make_unique<StatevectorModel>(circuit);
        case SurrogateChoice::Kind::iqp_pps:
            return std::make_unique<IqpPpsModel>(iqp_spec_from_circuit(circuit),
                                                 surrogate.h_max);
        case SurrogateChoice::Kind::pauli_prop:
            return std::make_unique<PauliPropModel>(circuit, surrogate.w_max);
    }
    throw std::logic_error("make_model: unknown surrogate");
}

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

struct LossEvaluator {
    const CorrelatorModel* model;
    const std::vector<SubsetIndex>* subsets;
    const std::vector<double>* target;
    const LossSpec* loss;
    int n;
    const std::vector<std::uint64_t>* batch = nullptr;  // null -> full support

    std::vector<double> pseudo(const std::vector<double>& theta) const {
        const auto c = model->correlators(theta, *subsets);
        return reconstruct_linear(n, *subsets, c);
    }

    double operator()(const std::vector<double>& theta) const {
        const auto p = pseudo(theta);
        return batch ? distance_on_batch(p, *target, n, *loss, *batch)
                     : distance(p, *target, n, *loss);
    }
};

}  // namespace

TrainResult train(const Circuit& ansatz, const std::vector<double>& target,
                  const LossSpec& loss, const TrainConfig& config) {
    const int n = ansatz.n;
    if (target.size() != (std::size_t{1} << n))
        throw std::invalid_argument("train: target length must be 2^n");
    if (config.iterations < 0) throw std::invalid_argument("train: iterations must be >= 0");
    if (config.learning_rate <= 0.0) throw std::invalid_argument("train: learning rate must be > 0");
    if (loss.kind == LossSpec::Kind::kl &&
        config.truncation.kind != TruncationSpec::Kind::full)
        throw std::invalid_argument("train: kl loss requires the full truncation");

    const auto model = make_model(ansatz, config.surrogate);
    const auto subsets = config.truncation.subsets(n);

    Rng rng(config.seed);
    std::vector<double> theta(static_cast<std::size_t>(ansatz.param_count), 0.0);
    if (config.init == TrainConfig::Init::random_uniform) {
        for (auto& t : theta) t = rng.uniform(0.0, kTwoPi);
    } else {
        theta = init_from_data(ansatz, target);
    }

    // parameter sharing: parameter-shift stays exact only for parameters
    // owned by a single rotation gate
    std::vector<int> gate_count(theta.size(), 0);
    for (const auto& g : ansatz.gates)
        if (g.kind == Gate::Kind::pauli_rotation)
            ++gate_count[static_cast<std::size_t>(g.param_index)];

    LossEvaluator eval{model.get(), &subsets, &target, &loss, n, nullptr};

    std::vector<double> adam_m(theta.size(), 0.0), adam_v(theta.size(), 0.0);
    TrainResult result;
    result.config = config;
    result.loss_history.reserve(static_cast<std::size_t>(config.iterations) + 1);

    std::vector<std::uint64_t> batch;
    auto refresh_batch = [&]() {
        if (!config.batch) return;
        if (*config.batch < 1) throw std::invalid_argument("train: batch size must be >= 1");
        batch = sample(target, static_cast<std::size_t>(*config.batch), rng.next_u64());
        eval.batch = &batch;
    };

    refresh_batch();
    result.loss_history.push_back(eval(theta));

    for (int iter = 0; iter < config.iterations; ++iter) {
        // gradient
        std::vector<double> grad(theta.size(), 0.0);
        const bool use_shift = config.gradient == TrainConfig::Gradient::parameter_shift;
        std::vector<double> grad_p;
        if (use_shift) {
            const auto p = eval.pseudo(theta);
            grad_p = eval.batch
                         ? distance_gradient_on_batch(p, target, n, loss, *eval.batch)
                         : distance_gradient(p, target, n, loss);
        }
        for (std::size_t j = 0; j < theta.size(); ++j) {
            if (use_shift && gate_count[j] <= 1) {
                std::vector<double> tp = theta, tm = theta;
                tp[j] += kTwoPi / 4.0;
                tm[j] -= kTwoPi / 4.0;
                const auto cp = model->correlators(tp, subsets);
                const auto cm = model->correlators(tm, subsets);
                std::vector<double> dc(cp.size());
                for (std::size_t i = 0; i < cp.size(); ++i) dc[i] = 0.5 * (cp[i] - cm[i]);
                const auto dp = reconstruct_linear(n, subsets, dc);
                double g = 0.0;
                for (std::size_t x = 0; x < dp.size(); ++x) g += grad_p[x] * dp[x];
                grad[j] = g;
            } else {
                std::vector<double> tp = theta, tm = theta;
                tp[j] += config.fd_step;
                tm[j] -= config.fd_step;
                grad[j] = (eval(tp) - eval(tm)) / (2.0 * config.fd_step);
            }
        }
        // machine-noise gradients mean convergence; stepping on them would let
        // the scale-free Adam update walk away from an exact optimum
        double gmax = 0.0;
        for (const double g : grad) gmax = std::max(gmax, std::abs(g));
        if (gmax < 1e-14) {
            refresh_batch();
            result.loss_history.push_back(eval(theta));
            continue;
        }
        // update
        if (config.optimizer == TrainConfig::Optimizer::adam) {
            const double b1 = config.adam.beta1, b2 = config.adam.beta2;
            const double t = static_cast<double>(iter + 1);
            for (std::size_t j = 0; j < theta.size(); ++j) {
                adam_m[j] = b1 * adam_m[j] + (1.0 - b1) * grad[j];
                adam_v[j] = b2 * adam_v[j] + (1.0 - b2) * grad[j] * grad[j];
                const double mhat = adam_m[j] / (1.0 - std::pow(b1, t));
                const double vhat = adam_v[j] / (1.0 - std::pow(b2, t));
                theta[j] -= config.learning_rate * mhat / (std::sqrt(vhat) + config.adam.eps);
            }
        } else {
            for (std::size_t j = 0; j < theta.size(); ++j)
                theta[j] -= config.learning_rate * grad[j];
        }
        refresh_batch();
        result.loss_history.push_back(eval(theta));
    }

    result.theta_star = theta;
    result.final_correlators.n = n;
    const auto cfin = model->correlators(theta, subsets);
    for (std::size_t i = 0; i < subsets.size(); ++i)
        result.final_correlators.entries[subsets[i]] = cfin[i];
    result.final_correlators.entries[0] = 1.0;
    return result;
}

double deploy_evaluate(const Circuit& circuit, const std::vector<double>& theta,
                       const std::vector<double>& target, double epsilon) {
    const auto probs = born_distribution(simulate(circuit, theta));
    return distance(probs, target, circuit.n, LossSpec::kl(epsilon));
}

double mse_k(const CorrelatorVector& exact, const CorrelatorVector& approx, int k) {
    if (exact.n != approx.n) throw std::invalid_argument("mse_k: dimension mismatch");
    const auto subs = subsets_of_order(exact.n, k);
    if (subs.empty()) throw std::invalid_argument("mse_k: no subsets at this order");
    double s = 0.0;
    for (const auto sub : subs) {
        const double d = exact.at(sub) - approx.at(sub);
        s += d * d;
    }
    return s / static_cast<double>(subs.size());
}

namespace {

std::vector<double> scaled_correlator_vector(const CorrelatorVector& c) {
    // dense 2^n vector of 2^{-n/2} <Z_i>, zero where absent
    const std::size_t N = std::size_t{1} << c.n;
    const double scale = 1.0 / std::sqrt(static_cast<double>(N));
    std::vector<double> v(N, 0.0);
    for (const auto& [s, val] : c.entries) v[s] = scale * val;
    return v;
}

double risk_vs_target(const std::vector<double>& model, const std::vector<double>& target) {
    double r = 0.0;
    for (std::size_t x = 0; x < target.size(); ++x) {
        const double d = target[x] - model[x];
        r += target[x] * d * d;
    }
    return r;
}

}  // namespace

DiscrepancyReport discrepancy_report(const Circuit& circuit,
                                     const std::vector<double>& target,
                                     const TrainResult& classical_result,
                                     const TrainResult& quantum_result) {
    const int n = circuit.n;
    if (target.size() != (std::size_t{1} << n))
        throw std::invalid_argument("discrepancy_report: target length mismatch");
    if (quantum_result.config.truncation.kind != TruncationSpec::Kind::full)
        throw std::invalid_argument("discrepancy_report: quantum run must use full truncation");
    if (quantum_result.config.surrogate.kind != SurrogateChoice::Kind::statevector)
        throw std::invalid_argument(
            "discrepancy_report: quantum run must use the statevector backend");

    // classical pseudo-distribution and correlators on its constrained set
    const auto cl_subsets = classical_result.config.truncation.subsets(n);
    const auto cl_model = make_model(circuit, classical_result.config.surrogate);
    const auto c_cl_vals = cl_model->correlators(classical_result.theta_star, cl_subsets);
    CorrelatorVector c_cl;
    c_cl.n = n;
    for (std::size_t i = 0; i < cl_subsets.size(); ++i)
        c_cl.entries[cl_subsets[i]] = c_cl_vals[i];
    const auto pr_cl = reconstruct_linear(n, cl_subsets, c_cl_vals);

    // quantum-deployed distributions at both parameter sets
    const auto pr_q_at_cl =
        born_distribution(simulate(circuit, classical_result.theta_star));
    const CorrelatorVector c_q_at_cl = decompose(pr_q_at_cl, n);
    const auto pr_q_at_q = born_distribution(simulate(circuit, quantum_result.theta_star));
    const CorrelatorVector c_q_at_q = decompose(pr_q_at_q, n);

    const auto v_cl = scaled_correlator_vector(c_cl);
    const auto v_q_cl = scaled_correlator_vector(c_q_at_cl);
    const auto v_q_q = scaled_correlator_vector(c_q_at_q);

    DiscrepancyReport rep;
    rep.risk_classical = risk_vs_target(pr_cl, target);
    rep.risk_quantum_deployed = risk_vs_target(pr_q_at_cl, target);

    double g1 = 0.0, g2 = 0.0;
    for (std::size_t i = 0; i < v_cl.size(); ++i) {
        const double d1 = v_cl[i] - v_q_q[i];
        const double d2 = v_q_q[i] - v_q_cl[i];
        g1 += d1 * d1;
        g2 += d2 * d2;
    }
    rep.norm_feature_gap = std::sqrt(g1);
    rep.norm_surrogate_mismatch = std::sqrt(g2);

    // C = || (Pr_cl - Pi Pr*) + (Pr_Q - Pi Pr*) || in L2(target); the full
    // Hilbert projector at desk scale makes Pi Pr* the target itself
    double c2 = 0.0;
    for (std::size_t x = 0; x < target.size(); ++x) {
        const double t = (pr_cl[x] - target[x]) + (pr_q_at_cl[x] - target[x]);
        c2 += target[x] * t * t;
    }
    rep.constant_C = std::sqrt(c2);

    const double lhs = std::abs(rep.risk_classical - rep.risk_quantum_deployed);
    const double rhs = rep.constant_C * (rep.norm_feature_gap + rep.norm_surrogate_mismatch);
    rep.bound_satisfied = lhs <= rhs + 1e-12;

    // Theorem-1 style diagnostics on the classical coefficient distribution
    double abs_sum = 0.0, abs_max = 0.0, dot = 0.0, n1 = 0.0, n2 = 0.0;
    for (std::size_t i = 0; i < v_cl.size(); ++i) {
        const double a = std::abs(v_cl[i]);
        const double b = std::abs(v_q_q[i]);
        abs_sum += a;
        abs_max = std::max(abs_max, a);
        dot += a * b;
        n1 += a * a;
        n2 += b * b;
    }
    rep.alignment_c_max = abs_sum > 0.0 ? abs_max / abs_sum : 0.0;
    rep.alignment_deviation =
        (n1 > 0.0 && n2 > 0.0) ? 1.0 - dot / std::sqrt(n1 * n2) : 1.0;
    return rep;
}

std::vector<double> init_from_data(const Circuit& ansatz,
                                   const std::vector<double>& data_distribution) {
    const int n = ansatz.n;
    if (data_distribution.size() != (std::size_t{1} << n))
        throw std::invalid_argument("init_from_data: distribution length mismatch");
    std::vector<double> theta(static_cast<std::size_t>(ansatz.param_count), 0.0);
    std::vector<bool> seen(theta.size(), false);
    for (const auto& g : ansatz.gates) {
        if (g.kind != Gate::Kind::pauli_rotation) continue;
        const auto j = static_cast<std::size_t>(g.param_index);
        if (seen[j]) continue;
        seen[j] = true;
        const std::uint64_t support = g.generator.x_mask | g.generator.z_mask;
        const std::uint64_t im = index_space_mask(n, support);
        double s = 0.0;
        for (std::size_t x = 0; x < data_distribution.size(); ++x)
            if ((x & im) == im) s += data_distribution[x];
        theta[j] = s;
    }
    return theta;
}

}  // namespace bornlab
