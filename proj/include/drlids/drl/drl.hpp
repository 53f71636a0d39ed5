#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "json.hpp"

#include "drlids/common/rng.hpp"

namespace drlids::drl {

/// Fully connected net: ReLU on hidden layers, softmax on the output.
/// Weights of layer l are stored row-major as (out x in).
class Mlp {
public:
    Mlp() = default;
    /// Zero-initialized parameters.
    explicit Mlp(std::vector<std::size_t> layer_sizes);
    /// He initialization: weights ~ N(0, 2 / fan_in), biases 0.
    static Mlp he_init(std::vector<std::size_t> layer_sizes, Rng& rng);

    const std::vector<std::size_t>& layer_sizes() const { return sizes_; }
    std::size_t layer_count() const { return weights_.size(); }
    std::size_t input_size() const { return sizes_.front(); }
    std::size_t output_size() const { return sizes_.back(); }
    std::size_t parameter_count() const;

    std::vector<double>& weights(std::size_t layer) { return weights_[layer]; }
    const std::vector<double>& weights(std::size_t layer) const { return weights_[layer]; }
    std::vector<double>& biases(std::size_t layer) { return biases_[layer]; }
    const std::vector<double>& biases(std::size_t layer) const { return biases_[layer]; }

    /// Parameters flattened layer by layer, weights before biases.
    std::vector<double> flat_parameters() const;
    void set_flat_parameters(std::span<const double> flat);

    /// Sum of squared weights over all layers (biases excluded).
    double weight_sum_of_squares() const;

    friend bool operator==(const Mlp&, const Mlp&) = default;

private:
    std::vector<std::size_t> sizes_;
    std::vector<std::vector<double>> weights_;
    std::vector<std::vector<double>> biases_;
};

struct ForwardCache {
    std::vector<std::vector<double>> activations;  ///< input, then each hidden layer after ReLU
    std::vector<double> logits;
    std::vector<double> probs;
};

/// Gradient with the same layout as the net's parameters.
struct MlpGradient {
    std::vector<std::vector<double>> weights;
    std::vector<std::vector<double>> biases;

    explicit MlpGradient(const Mlp& net);
    std::vector<double> flat() const;
    double norm() const;
    void scale(double factor);
};

/// Softmax policy distribution. Throws DimensionMismatch on a wrong-width state.
std::vector<double> forward(const Mlp& net, std::span<const double> state);
ForwardCache forward_cached(const Mlp& net, std::span<const double> state);

/// Accumulates dLoss/dparams given dLoss/dlogits for one forward pass.
void backward(const Mlp& net, const ForwardCache& cache, std::span<const double> dlogits, MlpGradient& grad);

enum class ActMode { Sample, Greedy };

/// Greedy takes the argmax (lowest index on ties). Throws
/// InvalidDistribution unless entries are finite, non-negative and sum to 1.
std::size_t act(std::span<const double> probs, ActMode mode, Rng& rng);

/// r_t = 1 when the chosen action equals the ground-truth action.
std::vector<double> reward_sequence(std::span<const std::size_t> predicted, std::span<const std::size_t> truth);

/// R_t = sum_{i>=0} gamma^i r_{t+i}, computed backward in O(T).
std::vector<double> discounted_returns(std::span<const double> rewards, double gamma_discount);

enum class BaselineMode {
    BatchMean,  ///< per-timestep mean of R across the paths of a batch
    PathMean,   ///< mean of R over the timesteps of each path
};

struct AdvantageBatch {
    std::vector<std::vector<double>> baseline;    ///< per path
    std::vector<std::vector<double>> advantages;  ///< A = R - b, per path
};

/// Paths must share one length.
AdvantageBatch advantages(const std::vector<std::vector<double>>& returns, BaselineMode mode = BaselineMode::BatchMean);

inline constexpr double kProbabilityFloor = 1e-12;

/// -sum_t log(max(pi_t, floor)) * A_t
double policy_gradient_loss(std::span<const double> chosen_probs, std::span<const double> advantages);

struct RegularizedLoss {
    double mse_term = 0.0;      ///< (1/sqrt(m)) * sum ||x - x_hat||^2
    double penalty_term = 0.0;  ///< (lambda/sqrt(m)) * sum W^2
    double value() const { return mse_term + penalty_term; }
};

/// J(W,b) with x the one-hot truth and x_hat the predicted distribution.
RegularizedLoss regularized_loss(const Mlp& net, const std::vector<std::vector<double>>& targets,
                                 const std::vector<std::vector<double>>& predictions, double lambda_reg);

/// mse_term * discounted_sum + penalty_term; a monitoring scalar only.
double combined_diagnostic(double mse_term, double discounted_sum, double penalty_term);

struct DrlParams {
    double gamma_discount = 0.9;
    double lambda_reg = 1e-4;
    double learning_rate = 0.01;
    std::vector<std::size_t> hidden{64, 32};
    std::size_t sync_interval = 100;
    std::size_t episode_length = 32;
    std::size_t paths_per_episode = 8;  ///< sampled action paths per state window
    double grad_clip = 10.0;            ///< global-norm clip; <= 0 disables

    void validate() const;
};

nlohmann::json to_json(const DrlParams& p);
DrlParams drl_params_from_json(const nlohmann::json& j, DrlParams defaults = {});

/// Online net plus a delayed copy refreshed every `sync_interval` steps.
struct PolicyPair {
    Mlp online;
    Mlp target;
    std::size_t step_counter = 0;
    std::size_t sync_interval = 100;

    static PolicyPair create(std::size_t input_size, std::size_t action_count, const DrlParams& params, Rng& rng);
    friend bool operator==(const PolicyPair&, const PolicyPair&) = default;
};

/// Copies online into target when step_counter is a multiple of sync_interval.
void sync_target(PolicyPair& pair);

struct Trajectory {
    std::vector<std::vector<double>> states;
    std::vector<std::size_t> actions;
    std::vector<std::vector<double>> action_probs;
    std::vector<double> rewards;
    std::vector<double> returns;
    std::vector<double> baseline;
    std::vector<double> advantages;
};

struct EpisodeStep {
    std::vector<double> state;
    std::size_t truth = 0;
};

struct EpisodeReport {
    double mean_reward = 0.0;
    double objective = 0.0;  ///< policy loss + lambda_reg * sum W^2 before the update
    RegularizedLoss regularized;
    double diagnostic = 0.0;
    double grad_norm = 0.0;  ///< before clipping
    std::vector<Trajectory> paths;
};

/// Mean over paths of the policy-gradient loss, plus lambda_reg * sum W^2.
/// Probabilities are recomputed from `net` for each trajectory's states.
double policy_objective(const Mlp& net, const std::vector<Trajectory>& paths, double lambda_reg);
MlpGradient policy_objective_gradient(const Mlp& net, const std::vector<Trajectory>& paths, double lambda_reg);

/// Samples paths_per_episode action paths over the episode with the online
/// net, scores them, and applies one clipped gradient-descent step on
/// policy_objective. Increments the step counter and syncs the target.
EpisodeReport train_episode(PolicyPair& pair, std::span<const EpisodeStep> episode, const DrlParams& params, Rng& rng);

nlohmann::json to_json(const Mlp& net);
Mlp mlp_from_json(const nlohmann::json& j);
nlohmann::json to_json(const PolicyPair& pair, const DrlParams& params);
PolicyPair policy_pair_from_json(const nlohmann::json& j);

}  // namespace drlids::drl
