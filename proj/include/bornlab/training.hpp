#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "bornlab/fourier.hpp"
#include "bornlab/losses.hpp"
#include "bornlab/statevector.hpp"
#include "bornlab/surrogates.hpp"

namespace bornlab {

// correlator backend used during training
struct SurrogateChoice {
    enum class Kind { statevector, iqp_pps, pauli_prop };
    Kind kind = Kind::statevector;
    int h_max = -1;  // iqp_pps flip budget
    int w_max = -1;  // pauli_prop weight cap (-1 -> n)

    static SurrogateChoice statevector();
    static SurrogateChoice iqp_pps(int h_max);
    static SurrogateChoice pauli_prop(int w_max);
};

struct AdamParams {
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

struct TrainConfig {
    int iterations = 100;
    double learning_rate = 0.05;
    enum class Optimizer { adam, sgd } optimizer = Optimizer::adam;
    AdamParams adam;
    enum class Gradient { parameter_shift, finite_difference } gradient =
        Gradient::parameter_shift;
    double fd_step = 1e-4;
    TruncationSpec truncation = TruncationSpec::full();
    SurrogateChoice surrogate = SurrogateChoice::statevector();
    std::optional<int> batch;  // bitstrings per step, drawn from the target
    std::uint64_t seed = 0;
    enum class Init { random_uniform, data_driven } init = Init::random_uniform;
};

struct TrainResult {
    std::vector<double> theta_star;
    std::vector<double> loss_history;  // iterations + 1 entries, initial first
    CorrelatorVector final_correlators;
    TrainConfig config;  // echo for reproducibility
};

// evaluates correlators of the circuit at theta through the configured backend
class CorrelatorModel {
  public:
    virtual ~CorrelatorModel() = default;
    virtual int n() const = 0;
    virtual std::vector<double> correlators(
        const std::vector<double>& theta,
        const std::vector<SubsetIndex>& subsets) const = 0;
};

std::unique_ptr<CorrelatorModel> make_model(const Circuit& circuit,
                                            const SurrogateChoice& surrogate);

// extracts the Z-generator list from an H^n (Z rotations) H^n circuit
IqpSpec iqp_spec_from_circuit(const Circuit& circuit);

// gradient descent on distance(reconstruct(correlators(theta), truncation), target)
TrainResult train(const Circuit& ansatz, const std::vector<double>& target,
                  const LossSpec& loss, const TrainConfig& config);

// KL(target || Born(theta)) on the full, untruncated distribution
double deploy_evaluate(const Circuit& circuit, const std::vector<double>& theta,
                       const std::vector<double>& target, double epsilon = 1e-12);

// mean squared error between correlator vectors at a fixed order
double mse_k(const CorrelatorVector& exact, const CorrelatorVector& approx, int k);

struct DiscrepancyReport {
    double risk_classical = 0.0;
    double risk_quantum_deployed = 0.0;
    double norm_feature_gap = 0.0;        // ||c_Cl(th*_Cl) - c_Q(th*_Q)||
    double norm_surrogate_mismatch = 0.0; // ||c_Q(th*_Q) - c_Q(th*_Cl)||
    double constant_C = 0.0;
    bool bound_satisfied = false;
    double alignment_c_max = 0.0;         // max of the normalized |c_Cl|
    double alignment_deviation = 0.0;     // 1 - cos(|c_Cl|, |c_Q(th*_Q)|)
};

// classical_result: trained on a surrogate/truncation; quantum_result: trained
// with full truncation on the statevector backend. Risks are exact target
// expectations of the squared pointwise error.
DiscrepancyReport discrepancy_report(const Circuit& circuit,
                                     const std::vector<double>& target,
                                     const TrainResult& classical_result,
                                     const TrainResult& quantum_result);

// theta_j = empirical product moment of the data on the gate generator support
std::vector<double> init_from_data(const Circuit& ansatz,
                                   const std::vector<double>& data_distribution);

}  // namespace bornlab
