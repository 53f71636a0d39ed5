#include <algorithm>
#include <cmath>
#include <numeric>

#include "drlids/common/error.hpp"
#include "drlids/gbt/gbt.hpp"

namespace drlids::gbt {

void GbtParams::validate() const {
    if (!(learning_rate > 0.0)) throw ConfigError("gbt.learning_rate must be > 0");
    if (lambda_l1 < 0.0 || lambda_l2 < 0.0) throw ConfigError("gbt regularization weights must be >= 0");
    if (n_bins < 1 || n_bins > 65535) throw ConfigError("gbt.n_bins must be in [1, 65535]");
    if (min_samples_leaf < 1) throw ConfigError("gbt.min_samples_leaf must be >= 1");
}

double GbtModel::predict(std::span<const double> record) const {
    if (record.size() != n_features) {
        throw DimensionMismatch("record has " + std::to_string(record.size()) + " features, model expects " +
                                std::to_string(n_features));
    }
    double sum = 0.0;
    for (const auto& t : trees) sum += t.predict(record);
    return base + learning_rate * sum;
}

std::vector<double> GbtModel::predict(const data::Matrix& m) const {
    std::vector<double> out(m.rows);
    for (std::size_t r = 0; r < m.rows; ++r) out[r] = predict(m.row(r));
    return out;
}

std::vector<double> GbtModel::feature_importance() const {
    std::vector<double> imp(n_features, 0.0);
    for (const auto& t : trees) {
        for (const auto& node : t.nodes()) {
            if (node.feature >= 0) imp[static_cast<std::size_t>(node.feature)] += node.gain;
        }
    }
    const double total = std::accumulate(imp.begin(), imp.end(), 0.0);
    if (total > 0.0) {
        for (auto& v : imp) v /= total;
    }
    return imp;
}

namespace {

double mse(std::span<const double> targets, std::span<const double> pred) {
    double s = 0.0;
    for (std::size_t i = 0; i < targets.size(); ++i) s += (targets[i] - pred[i]) * (targets[i] - pred[i]);
    return s / static_cast<double>(targets.size());
}

}  // namespace

GbtModel boost(const data::Matrix& x, std::span<const double> targets, const GbtParams& params) {
    params.validate();
    if (x.rows == 0) throw EmptyDataset("cannot boost on an empty dataset");
    if (targets.size() != x.rows) throw LengthMismatch("target count does not match row count");

    GbtModel model;
    model.learning_rate = params.learning_rate;
    model.n_features = x.cols;
    model.base = std::accumulate(targets.begin(), targets.end(), 0.0) / static_cast<double>(targets.size());

    std::vector<double> col(x.rows);
    for (std::size_t f = 0; f < x.cols; ++f) {
        for (std::size_t r = 0; r < x.rows; ++r) col[r] = x(r, f);
        model.bins.push_back(quantile_bins(col, params.n_bins));
    }

    // Predictions are kept as base + eta * (sum of tree outputs), the same
    // association predict() uses, so the recorded losses match it exactly.
    std::vector<double> tree_sum(x.rows, 0.0);
    std::vector<double> pred(x.rows, model.base);
    std::vector<double> residuals(x.rows);
    model.train_loss_history.push_back(mse(targets, pred));

    for (std::size_t m = 0; m < params.n_trees; ++m) {
        for (std::size_t r = 0; r < x.rows; ++r) residuals[r] = targets[r] - pred[r];
        RegTree tree = fit_residual_tree(x, residuals, params, model.bins);
        for (std::size_t r = 0; r < x.rows; ++r) {
            tree_sum[r] += tree.predict(x.row(r));
            pred[r] = model.base + model.learning_rate * tree_sum[r];
        }
        model.trees.push_back(std::move(tree));
        model.train_loss_history.push_back(mse(targets, pred));
    }
    return model;
}

GbtModel boost(const data::Dataset& data, std::span<const double> targets, const GbtParams& params) {
    return boost(data.numeric_matrix(), targets, params);
}

std::vector<std::size_t> select_features(const GbtModel& model, std::size_t k) {
    if (model.trees.empty()) throw UntrainedModel("feature selection needs a model with at least one tree");
    const auto imp = model.feature_importance();
    std::vector<std::size_t> order(imp.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return imp[a] > imp[b]; });
    order.resize(std::min(k, order.size()));
    return order;
}

}  // namespace drlids::gbt
