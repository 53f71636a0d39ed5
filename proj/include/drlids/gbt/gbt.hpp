#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "json.hpp"

#include "drlids/data/dataset.hpp"

namespace drlids::gbt {

struct GbtParams {
    std::size_t n_trees = 100;
    double learning_rate = 0.1;
    std::size_t max_depth = 6;
    double lambda_l1 = 0.0;
    double lambda_l2 = 1.0;
    std::size_t n_bins = 64;
    std::size_t min_samples_leaf = 1;

    void validate() const;
};

/// Flat binary tree. Node 0 is the root; a node with `feature < 0` is a leaf.
/// Records go left when `x < threshold`, and follow `missing_left` when the
/// cell is NaN.
struct TreeNode {
    int feature = -1;
    double threshold = 0.0;
    bool missing_left = true;
    int left = -1;
    int right = -1;
    double value = 0.0;  ///< leaf output
    double gain = 0.0;   ///< SSE reduction of the split (internal nodes)
    friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

class RegTree {
public:
    RegTree() : nodes_{TreeNode{}} {}
    explicit RegTree(std::vector<TreeNode> nodes);

    double predict(std::span<const double> record) const;
    /// Leaf index reached by `record`.
    std::size_t leaf_of(std::span<const double> record) const;

    const std::vector<TreeNode>& nodes() const { return nodes_; }
    std::size_t depth() const;
    bool is_leaf_only() const { return nodes_.size() == 1; }

    friend bool operator==(const RegTree&, const RegTree&) = default;

private:
    std::vector<TreeNode> nodes_;
};

/// F_m(x) = base + learning_rate * sum_i h_i(x).
class GbtModel {
public:
    double base = 0.0;
    double learning_rate = 0.1;
    std::size_t n_features = 0;
    std::vector<std::vector<double>> bins;  ///< per-feature split thresholds
    std::vector<RegTree> trees;
    std::vector<double> train_loss_history;  ///< MSE before and after each tree

    /// Throws DimensionMismatch on a record of the wrong width.
    double predict(std::span<const double> record) const;
    std::vector<double> predict(const data::Matrix& m) const;

    /// Per-feature total split gain, normalized to sum 1 (all zeros if no split).
    std::vector<double> feature_importance() const;

    friend bool operator==(const GbtModel&, const GbtModel&) = default;
};

/// Ascending split candidates at the interior n_bins-quantile boundaries,
/// placed midway between adjacent distinct sorted values. NaNs are ignored.
std::vector<double> quantile_bins(std::span<const double> values, std::size_t n_bins);

/// One regularized regression tree on `residuals`. Leaves hold
/// sign(G) * max(|G| - l1, 0) / (H + l2) with G the residual sum and H the
/// row count; splits maximize the SSE reduction over the bin thresholds and
/// learn a default direction for missing cells.
RegTree fit_residual_tree(const data::Matrix& x, std::span<const double> residuals, const GbtParams& params,
                          const std::vector<std::vector<double>>& bins);
RegTree fit_residual_tree(const data::Matrix& x, std::span<const double> residuals, const GbtParams& params);

/// Boosting from F0 = mean(targets) for params.n_trees rounds.
GbtModel boost(const data::Matrix& x, std::span<const double> targets, const GbtParams& params);
GbtModel boost(const data::Dataset& data, std::span<const double> targets, const GbtParams& params);

/// Top-k feature indices by importance; ties go to the lower index.
/// Throws UntrainedModel if the model has no trees.
std::vector<std::size_t> select_features(const GbtModel& model, std::size_t k);

nlohmann::json to_json(const GbtModel& model);
GbtModel gbt_model_from_json(const nlohmann::json& j);
nlohmann::json to_json(const GbtParams& p);
GbtParams gbt_params_from_json(const nlohmann::json& j, GbtParams defaults = {});

}  // namespace drlids::gbt
