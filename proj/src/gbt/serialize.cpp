#include "drlids/common/error.hpp"
#include "drlids/gbt/gbt.hpp"

namespace drlids::gbt {

using nlohmann::json;

namespace {

json node_to_json(const std::vector<TreeNode>& nodes, std::size_t i) {
    const TreeNode& n = nodes[i];
    if (n.feature < 0) return {{"leaf", n.value}};
    return {{"feature", n.feature},
            {"threshold", n.threshold},
            {"missing_left", n.missing_left},
            {"gain", n.gain},
            {"left", node_to_json(nodes, static_cast<std::size_t>(n.left))},
            {"right", node_to_json(nodes, static_cast<std::size_t>(n.right))}};
}

// Rebuilds the pre-order flat layout the builder produces.
int node_from_json(const json& j, std::vector<TreeNode>& nodes) {
    const int id = static_cast<int>(nodes.size());
    nodes.push_back(TreeNode{});
    if (j.contains("leaf")) {
        nodes[id].value = j.at("leaf").get<double>();
        return id;
    }
    TreeNode n;
    n.feature = j.at("feature").get<int>();
    n.threshold = j.at("threshold").get<double>();
    n.missing_left = j.at("missing_left").get<bool>();
    n.gain = j.at("gain").get<double>();
    n.left = node_from_json(j.at("left"), nodes);
    n.right = node_from_json(j.at("right"), nodes);
    nodes[id] = n;
    return id;
}

}  // namespace

json to_json(const GbtModel& model) {
    json trees = json::array();
    for (const auto& t : model.trees) trees.push_back(node_to_json(t.nodes(), 0));
    return {{"base", model.base},
            {"learning_rate", model.learning_rate},
            {"n_features", model.n_features},
            {"bins", model.bins},
            {"trees", trees},
            {"train_loss_history", model.train_loss_history}};
}

GbtModel gbt_model_from_json(const json& j) {
    GbtModel m;
    m.base = j.at("base").get<double>();
    m.learning_rate = j.at("learning_rate").get<double>();
    m.n_features = j.at("n_features").get<std::size_t>();
    m.bins = j.at("bins").get<std::vector<std::vector<double>>>();
    for (const auto& t : j.at("trees")) {
        std::vector<TreeNode> nodes;
        node_from_json(t, nodes);
        m.trees.emplace_back(std::move(nodes));
    }
    m.train_loss_history = j.at("train_loss_history").get<std::vector<double>>();
    if (m.bins.size() != m.n_features) throw ArtifactError("gbt artifact: bin table width mismatch");
    return m;
}

json to_json(const GbtParams& p) {
    return {{"n_trees", p.n_trees},     {"learning_rate", p.learning_rate}, {"max_depth", p.max_depth},
            {"lambda_l1", p.lambda_l1}, {"lambda_l2", p.lambda_l2},         {"n_bins", p.n_bins},
            {"min_samples_leaf", p.min_samples_leaf}};
}

GbtParams gbt_params_from_json(const json& j, GbtParams p) {
    p.n_trees = j.value("n_trees", p.n_trees);
    p.learning_rate = j.value("learning_rate", p.learning_rate);
    p.max_depth = j.value("max_depth", p.max_depth);
    p.lambda_l1 = j.value("lambda_l1", p.lambda_l1);
    p.lambda_l2 = j.value("lambda_l2", p.lambda_l2);
    p.n_bins = j.value("n_bins", p.n_bins);
    p.min_samples_leaf = j.value("min_samples_leaf", p.min_samples_leaf);
    p.validate();
    return p;
}

}  // namespace drlids::gbt
