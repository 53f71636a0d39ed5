#include <algorithm>
#include <cmath>

#include "drlids/common/error.hpp"
#include "drlids/drl/drl.hpp"

namespace drlids::drl {

void DrlParams::validate() const {
    if (!(gamma_discount >= 0.0 && gamma_discount < 1.0)) throw ConfigError("drl.gamma_discount must lie in [0, 1)");
    if (lambda_reg < 0.0) throw ConfigError("drl.lambda_reg must be >= 0");
    if (learning_rate < 0.0) throw ConfigError("drl.learning_rate must be >= 0");
    if (sync_interval < 1) throw ConfigError("drl.sync_interval must be >= 1");
    if (episode_length < 1) throw ConfigError("drl.episode_length must be >= 1");
    if (paths_per_episode < 1) throw ConfigError("drl.paths_per_episode must be >= 1");
    for (auto h : hidden) {
        if (h == 0) throw ConfigError("drl.hidden sizes must be positive");
    }
}

PolicyPair PolicyPair::create(std::size_t input_size, std::size_t action_count, const DrlParams& params, Rng& rng) {
    params.validate();
    std::vector<std::size_t> sizes{input_size};
    sizes.insert(sizes.end(), params.hidden.begin(), params.hidden.end());
    sizes.push_back(action_count);
    PolicyPair pair;
    pair.online = Mlp::he_init(std::move(sizes), rng);
    pair.target = pair.online;
    pair.sync_interval = params.sync_interval;
    return pair;
}

void sync_target(PolicyPair& pair) {
    if (pair.sync_interval == 0) throw ConfigError("sync_interval must be >= 1");
    if (pair.step_counter % pair.sync_interval == 0) pair.target = pair.online;
}

double policy_objective(const Mlp& net, const std::vector<Trajectory>& paths, double lambda_reg) {
    double loss = 0.0;
    for (const auto& path : paths) {
        std::vector<double> chosen(path.states.size());
        for (std::size_t t = 0; t < path.states.size(); ++t) chosen[t] = forward(net, path.states[t])[path.actions[t]];
        loss += policy_gradient_loss(chosen, path.advantages);
    }
    if (!paths.empty()) loss /= static_cast<double>(paths.size());
    return loss + lambda_reg * net.weight_sum_of_squares();
}

MlpGradient policy_objective_gradient(const Mlp& net, const std::vector<Trajectory>& paths, double lambda_reg) {
    MlpGradient grad(net);
    const double path_weight = paths.empty() ? 0.0 : 1.0 / static_cast<double>(paths.size());
    std::vector<double> dlogits(net.output_size());
    for (const auto& path : paths) {
        if (path.actions.size() != path.states.size() || path.advantages.size() != path.states.size()) {
            throw LengthMismatch("trajectory sequences differ in length");
        }
        for (std::size_t t = 0; t < path.states.size(); ++t) {
            const ForwardCache cache = forward_cached(net, path.states[t]);
            const std::size_t a = path.actions[t];
            if (cache.probs[a] < kProbabilityFloor) continue;  // clamped log has zero slope
            // d(-A log pi_a)/dz = -A (onehot_a - pi)
            const double scale = -path.advantages[t] * path_weight;
            for (std::size_t i = 0; i < dlogits.size(); ++i) {
                dlogits[i] = scale * ((i == a ? 1.0 : 0.0) - cache.probs[i]);
            }
            backward(net, cache, dlogits, grad);
        }
    }
    for (std::size_t l = 0; l < net.layer_count(); ++l) {
        const auto& w = net.weights(l);
        for (std::size_t i = 0; i < w.size(); ++i) grad.weights[l][i] += 2.0 * lambda_reg * w[i];
    }
    return grad;
}

EpisodeReport train_episode(PolicyPair& pair, std::span<const EpisodeStep> episode, const DrlParams& params, Rng& rng) {
    params.validate();
    if (episode.empty()) throw EmptyDataset("train_episode needs a non-empty episode");
    Mlp& net = pair.online;
    const std::size_t T = episode.size();
    const std::size_t n_actions = net.output_size();

    std::vector<std::vector<double>> probs(T);
    std::vector<std::size_t> truth(T);
    std::vector<std::vector<double>> onehot(T, std::vector<double>(n_actions, 0.0));
    for (std::size_t t = 0; t < T; ++t) {
        probs[t] = forward(net, episode[t].state);
        truth[t] = episode[t].truth;
        if (truth[t] >= n_actions) throw DimensionMismatch("truth action out of range");
        onehot[t][truth[t]] = 1.0;
    }

    EpisodeReport report;
    std::vector<std::vector<double>> returns;
    double reward_total = 0.0;
    for (std::size_t p = 0; p < params.paths_per_episode; ++p) {
        Trajectory path;
        for (std::size_t t = 0; t < T; ++t) {
            path.states.push_back(episode[t].state);
            path.actions.push_back(act(probs[t], ActMode::Sample, rng));
            path.action_probs.push_back(probs[t]);
        }
        path.rewards = reward_sequence(path.actions, truth);
        path.returns = discounted_returns(path.rewards, params.gamma_discount);
        for (double r : path.rewards) reward_total += r;
        returns.push_back(path.returns);
        report.paths.push_back(std::move(path));
    }
    const AdvantageBatch adv = advantages(returns, BaselineMode::BatchMean);
    for (std::size_t p = 0; p < report.paths.size(); ++p) {
        report.paths[p].baseline = adv.baseline[p];
        report.paths[p].advantages = adv.advantages[p];
    }

    report.mean_reward = reward_total / static_cast<double>(T * params.paths_per_episode);
    report.regularized = regularized_loss(net, onehot, probs, params.lambda_reg);
    double first_return = 0.0;
    for (const auto& r : returns) first_return += r.front();
    first_return /= static_cast<double>(returns.size());
    report.diagnostic = combined_diagnostic(report.regularized.mse_term, first_return, report.regularized.penalty_term);
    report.objective = policy_objective(net, report.paths, params.lambda_reg);

    MlpGradient grad = policy_objective_gradient(net, report.paths, params.lambda_reg);
    report.grad_norm = grad.norm();
    if (params.grad_clip > 0.0 && report.grad_norm > params.grad_clip) grad.scale(params.grad_clip / report.grad_norm);
    for (std::size_t l = 0; l < net.layer_count(); ++l) {
        auto& w = net.weights(l);
        auto& b = net.biases(l);
        for (std::size_t i = 0; i < w.size(); ++i) w[i] -= params.learning_rate * grad.weights[l][i];
        for (std::size_t i = 0; i < b.size(); ++i) b[i] -= params.learning_rate * grad.biases[l][i];
    }

    ++pair.step_counter;
    sync_target(pair);
    return report;
}

}  // namespace drlids::drl
