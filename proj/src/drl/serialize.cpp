#include "drlids/common/error.hpp"
#include "drlids/drl/drl.hpp"

namespace drlids::drl {

using nlohmann::json;

json to_json(const DrlParams& p) {
    return {{"gamma_discount", p.gamma_discount},
            {"lambda_reg", p.lambda_reg},
            {"learning_rate", p.learning_rate},
            {"hidden", p.hidden},
            {"sync_interval", p.sync_interval},
            {"episode_length", p.episode_length},
            {"paths_per_episode", p.paths_per_episode},
            {"grad_clip", p.grad_clip}};
}

DrlParams drl_params_from_json(const json& j, DrlParams p) {
    p.gamma_discount = j.value("gamma_discount", p.gamma_discount);
    p.lambda_reg = j.value("lambda_reg", p.lambda_reg);
    p.learning_rate = j.value("learning_rate", p.learning_rate);
    p.hidden = j.value("hidden", p.hidden);
    p.sync_interval = j.value("sync_interval", p.sync_interval);
    p.episode_length = j.value("episode_length", p.episode_length);
    p.paths_per_episode = j.value("paths_per_episode", p.paths_per_episode);
    p.grad_clip = j.value("grad_clip", p.grad_clip);
    p.validate();
    return p;
}

json to_json(const Mlp& net) {
    json weights = json::array(), biases = json::array();
    for (std::size_t l = 0; l < net.layer_count(); ++l) {
        weights.push_back(net.weights(l));
        biases.push_back(net.biases(l));
    }
    return {{"layer_sizes", net.layer_sizes()}, {"weights", weights}, {"biases", biases}};
}

Mlp mlp_from_json(const json& j) {
    Mlp net(j.at("layer_sizes").get<std::vector<std::size_t>>());
    const auto& weights = j.at("weights");
    const auto& biases = j.at("biases");
    if (weights.size() != net.layer_count() || biases.size() != net.layer_count()) {
        throw ArtifactError("policy artifact: layer count mismatch");
    }
    for (std::size_t l = 0; l < net.layer_count(); ++l) {
        auto w = weights[l].get<std::vector<double>>();
        auto b = biases[l].get<std::vector<double>>();
        if (w.size() != net.weights(l).size() || b.size() != net.biases(l).size()) {
            throw ArtifactError("policy artifact: parameter shape mismatch in layer " + std::to_string(l));
        }
        net.weights(l) = std::move(w);
        net.biases(l) = std::move(b);
    }
    return net;
}

json to_json(const PolicyPair& pair, const DrlParams& params) {
    return {{"layer_sizes", pair.online.layer_sizes()},
            {"online", to_json(pair.online)},
            {"target", to_json(pair.target)},
            {"step_counter", pair.step_counter},
            {"sync_interval", pair.sync_interval},
            {"params", to_json(params)}};
}

PolicyPair policy_pair_from_json(const json& j) {
    PolicyPair pair;
    pair.online = mlp_from_json(j.at("online"));
    pair.target = mlp_from_json(j.at("target"));
    if (pair.online.layer_sizes() != pair.target.layer_sizes()) {
        throw ArtifactError("policy artifact: online and target shapes differ");
    }
    pair.step_counter = j.at("step_counter").get<std::size_t>();
    pair.sync_interval = j.at("sync_interval").get<std::size_t>();
    return pair;
}

}  // namespace drlids::drl
