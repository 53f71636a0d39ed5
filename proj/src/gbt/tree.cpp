#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>

#include "drlids/common/error.hpp"
#include "drlids/gbt/gbt.hpp"

namespace drlids::gbt {

RegTree::RegTree(std::vector<TreeNode> nodes) : nodes_(std::move(nodes)) {
    if (nodes_.empty()) throw DimensionMismatch("tree needs at least one node");
    const int n = static_cast<int>(nodes_.size());
    for (const auto& node : nodes_) {
        if (node.feature >= 0) {
            if (node.left <= 0 || node.left >= n || node.right <= 0 || node.right >= n) {
                throw DimensionMismatch("internal tree node has a child index out of range");
            }
        } else if (!std::isfinite(node.value)) {
            throw DimensionMismatch("tree leaf value is not finite");
        }
    }
}

std::size_t RegTree::leaf_of(std::span<const double> record) const {
    std::size_t i = 0;
    while (nodes_[i].feature >= 0) {
        const TreeNode& node = nodes_[i];
        const auto f = static_cast<std::size_t>(node.feature);
        if (f >= record.size()) throw DimensionMismatch("record too short for tree split feature");
        const double v = record[f];
        const bool go_left = std::isnan(v) ? node.missing_left : v < node.threshold;
        i = static_cast<std::size_t>(go_left ? node.left : node.right);
    }
    return i;
}

double RegTree::predict(std::span<const double> record) const { return nodes_[leaf_of(record)].value; }

std::size_t RegTree::depth() const {
    std::function<std::size_t(std::size_t)> rec = [&](std::size_t i) -> std::size_t {
        const auto& node = nodes_[i];
        if (node.feature < 0) return 0;
        return 1 + std::max(rec(static_cast<std::size_t>(node.left)), rec(static_cast<std::size_t>(node.right)));
    };
    return rec(0);
}

namespace {

constexpr std::uint16_t kMissingBin = std::numeric_limits<std::uint16_t>::max();

double leaf_weight(double g, double h, const GbtParams& p) {
    const double shrunk = std::max(std::abs(g) - p.lambda_l1, 0.0);
    return std::copysign(shrunk, g) / (h + p.lambda_l2);
}

struct SplitCandidate {
    int feature = -1;
    std::size_t bin = 0;  ///< rows with bin index <= this go left
    bool missing_left = true;
    double gain = 0.0;
};

// Column-major bin indices, computed once per tree fit and reused by every node.
class BinnedColumns {
public:
    BinnedColumns(const data::Matrix& x, const std::vector<std::vector<double>>& bins) : rows_(x.rows) {
        cols_.resize(x.cols);
        for (std::size_t f = 0; f < x.cols; ++f) {
            cols_[f].resize(x.rows);
            for (std::size_t r = 0; r < x.rows; ++r) {
                const double v = x(r, f);
                cols_[f][r] = std::isnan(v) ? kMissingBin
                                            : static_cast<std::uint16_t>(
                                                  std::upper_bound(bins[f].begin(), bins[f].end(), v) - bins[f].begin());
            }
        }
    }
    std::uint16_t at(std::size_t f, std::size_t r) const { return cols_[f][r]; }

private:
    std::size_t rows_;
    std::vector<std::vector<std::uint16_t>> cols_;
};

class TreeBuilder {
public:
    TreeBuilder(const BinnedColumns& binned, std::span<const double> residuals, const GbtParams& params,
                const std::vector<std::vector<double>>& bins)
        : binned_(binned), residuals_(residuals), params_(params), bins_(bins) {}

    std::vector<TreeNode> build(std::vector<std::size_t> rows) {
        grow(rows, 0);
        return std::move(nodes_);
    }

private:
    int grow(const std::vector<std::size_t>& rows, std::size_t depth) {
        double g = 0.0;
        for (auto r : rows) g += residuals_[r];
        const double h = static_cast<double>(rows.size());

        const int id = static_cast<int>(nodes_.size());
        nodes_.push_back(TreeNode{});
        nodes_[id].value = leaf_weight(g, h, params_);

        if (depth >= params_.max_depth || rows.size() < 2 * params_.min_samples_leaf) return id;
        const SplitCandidate best = find_split(rows, g);
        if (best.feature < 0) return id;

        std::vector<std::size_t> left, right;
        const auto f = static_cast<std::size_t>(best.feature);
        for (auto r : rows) {
            const auto b = binned_.at(f, r);
            const bool go_left = b == kMissingBin ? best.missing_left : b <= best.bin;
            (go_left ? left : right).push_back(r);
        }

        TreeNode node;
        node.feature = best.feature;
        node.threshold = bins_[f][best.bin];
        node.missing_left = best.missing_left;
        node.gain = best.gain;
        node.left = grow(left, depth + 1);
        node.right = grow(right, depth + 1);
        nodes_[id] = node;
        return id;
    }

    SplitCandidate find_split(const std::vector<std::size_t>& rows, double g_total) const {
        SplitCandidate best;
        const double h_total = static_cast<double>(rows.size());
        const double parent = g_total * g_total / h_total;
        const double min_leaf = static_cast<double>(params_.min_samples_leaf);

        for (std::size_t f = 0; f < bins_.size(); ++f) {
            const std::size_t n_thresholds = bins_[f].size();
            if (n_thresholds == 0) continue;
            std::vector<double> sum(n_thresholds + 1, 0.0);
            std::vector<double> count(n_thresholds + 1, 0.0);
            double miss_g = 0.0, miss_h = 0.0;
            for (auto r : rows) {
                const auto b = binned_.at(f, r);
                if (b == kMissingBin) {
                    miss_g += residuals_[r];
                    miss_h += 1.0;
                } else {
                    sum[b] += residuals_[r];
                    count[b] += 1.0;
                }
            }
            double gl = 0.0, hl = 0.0;
            for (std::size_t k = 0; k < n_thresholds; ++k) {
                gl += sum[k];
                hl += count[k];
                for (bool missing_left : {true, false}) {
                    const double l_g = gl + (missing_left ? miss_g : 0.0);
                    const double l_h = hl + (missing_left ? miss_h : 0.0);
                    const double r_g = g_total - l_g;
                    const double r_h = h_total - l_h;
                    if (l_h < min_leaf || r_h < min_leaf) continue;
                    const double gain = l_g * l_g / l_h + r_g * r_g / r_h - parent;
                    if (gain > best.gain) best = {static_cast<int>(f), k, missing_left, gain};
                }
            }
        }
        return best;
    }

    const BinnedColumns& binned_;
    std::span<const double> residuals_;
    const GbtParams& params_;
    const std::vector<std::vector<double>>& bins_;
    std::vector<TreeNode> nodes_;
};

}  // namespace

RegTree fit_residual_tree(const data::Matrix& x, std::span<const double> residuals, const GbtParams& params,
                          const std::vector<std::vector<double>>& bins) {
    params.validate();
    if (residuals.size() != x.rows) throw LengthMismatch("residual count does not match row count");
    if (bins.size() != x.cols) throw DimensionMismatch("bin table width does not match feature count");
    if (x.rows == 0) return RegTree{};
    BinnedColumns binned(x, bins);
    std::vector<std::size_t> rows(x.rows);
    for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
    return RegTree(TreeBuilder(binned, residuals, params, bins).build(std::move(rows)));
}

RegTree fit_residual_tree(const data::Matrix& x, std::span<const double> residuals, const GbtParams& params) {
    std::vector<std::vector<double>> bins;
    std::vector<double> col(x.rows);
    for (std::size_t f = 0; f < x.cols; ++f) {
        for (std::size_t r = 0; r < x.rows; ++r) col[r] = x(r, f);
        bins.push_back(quantile_bins(col, params.n_bins));
    }
    return fit_residual_tree(x, residuals, params, bins);
}

}  // namespace drlids::gbt
