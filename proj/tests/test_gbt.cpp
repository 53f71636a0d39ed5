#include <cmath>
#include <limits>
#include <numeric>

#include "doctest.h"

#include "drlids/common/error.hpp"
#include "drlids/common/rng.hpp"
#include "drlids/data/synthetic.hpp"
#include "drlids/gbt/gbt.hpp"

using namespace drlids;
using namespace drlids::gbt;
using drlids::data::Matrix;

namespace {

Matrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols) {
    Matrix m(rows, cols);
    for (auto& v : m.values) v = rng.uniform(-1.0, 1.0);
    return m;
}

double sse(const std::vector<double>& v) {
    if (v.empty()) return 0.0;
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    double s = 0.0;
    for (double x : v) s += (x - mean) * (x - mean);
    return s;
}

// Exhaustive best single split by direct SSE reduction.
double best_stump_gain(const Matrix& x, const std::vector<double>& y, const std::vector<std::vector<double>>& bins) {
    double best = 0.0;
    for (std::size_t f = 0; f < x.cols; ++f) {
        for (double t : bins[f]) {
            std::vector<double> left, right;
            for (std::size_t r = 0; r < x.rows; ++r) (x(r, f) < t ? left : right).push_back(y[r]);
            if (left.empty() || right.empty()) continue;
            best = std::max(best, sse(y) - sse(left) - sse(right));
        }
    }
    return best;
}

}  // namespace

TEST_CASE("quantile bins on distinct values sit between neighbors") {
    const std::vector<double> v{5, 1, 4, 2, 3, 8, 7, 6};
    const auto bins = quantile_bins(v, 4);
    CHECK(bins == std::vector<double>{2.5, 4.5, 6.5});
    CHECK(quantile_bins(std::vector<double>{1, 1, 1}, 4).empty());
    const double nan = std::numeric_limits<double>::quiet_NaN();
    CHECK(quantile_bins(std::vector<double>{nan, 1, 2, nan}, 2) == std::vector<double>{1.5});
}

TEST_CASE("quantile bins are strictly increasing and separate the data") {
    Rng rng(8);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> v(1 + rng.uniform_index(200));
        for (auto& x : v) x = std::round(rng.uniform(0, 20));
        const auto bins = quantile_bins(v, 1 + rng.uniform_index(32));
        for (std::size_t i = 1; i < bins.size(); ++i) CHECK(bins[i - 1] < bins[i]);
        for (double t : bins) {
            const bool below = std::any_of(v.begin(), v.end(), [&](double x) { return x < t; });
            const bool above = std::any_of(v.begin(), v.end(), [&](double x) { return x >= t; });
            CHECK((below && above));
        }
    }
}

TEST_CASE("a stump takes the exhaustive best split and regularized leaf values") {
    Rng rng(21);
    for (int trial = 0; trial < 20; ++trial) {
        const Matrix x = random_matrix(rng, 60, 3);
        std::vector<double> y(60);
        for (auto& v : y) v = rng.normal();
        GbtParams p;
        p.max_depth = 1;
        p.n_bins = 8;
        p.lambda_l2 = 1.5;
        p.lambda_l1 = 0.3;
        std::vector<std::vector<double>> bins;
        for (std::size_t f = 0; f < 3; ++f) {
            std::vector<double> col(60);
            for (std::size_t r = 0; r < 60; ++r) col[r] = x(r, f);
            bins.push_back(quantile_bins(col, p.n_bins));
        }
        const RegTree tree = fit_residual_tree(x, y, p, bins);
        const double oracle = best_stump_gain(x, y, bins);
        REQUIRE(tree.nodes().size() == 3);
        CHECK(tree.nodes()[0].gain == doctest::Approx(oracle).epsilon(1e-9));
        for (int side : {tree.nodes()[0].left, tree.nodes()[0].right}) {
            double g = 0.0, h = 0.0;
            for (std::size_t r = 0; r < 60; ++r) {
                if (tree.leaf_of(x.row(r)) == static_cast<std::size_t>(side)) {
                    g += y[r];
                    h += 1.0;
                }
            }
            const double expected = (g > 0 ? 1 : -1) * std::max(std::abs(g) - 0.3, 0.0) / (h + 1.5);
            CHECK(tree.nodes()[static_cast<std::size_t>(side)].value == doctest::Approx(expected).epsilon(1e-12));
        }
    }
}

TEST_CASE("missing cells follow the learned default direction") {
    // the missing rows carry large targets, matching the high-value rows
    Matrix x(8, 1);
    std::vector<double> y{0, 0, 0, 10, 10, 10, 10, 10};
    const double nan = std::numeric_limits<double>::quiet_NaN();
    const std::vector<double> col{1, 2, 3, 7, 8, 9, nan, nan};
    for (std::size_t r = 0; r < 8; ++r) x(r, 0) = col[r];
    GbtParams p;
    p.max_depth = 1;
    p.lambda_l2 = 0.0;
    const RegTree tree = fit_residual_tree(x, y, p);
    REQUIRE(tree.nodes().size() == 3);
    CHECK_FALSE(tree.nodes()[0].missing_left);
    CHECK(tree.predict(std::vector<double>{nan}) == doctest::Approx(10.0));
    CHECK(tree.predict(std::vector<double>{1.5}) == doctest::Approx(0.0));
}

TEST_CASE("depth and leaf size limits are respected") {
    Rng rng(4);
    const Matrix x = random_matrix(rng, 200, 4);
    std::vector<double> y(200);
    for (auto& v : y) v = rng.normal();
    GbtParams p;
    p.max_depth = 3;
    p.min_samples_leaf = 10;
    const RegTree tree = fit_residual_tree(x, y, p);
    CHECK(tree.depth() <= 3);
    std::vector<int> per_leaf(tree.nodes().size(), 0);
    for (std::size_t r = 0; r < 200; ++r) ++per_leaf[tree.leaf_of(x.row(r))];
    for (std::size_t i = 0; i < tree.nodes().size(); ++i) {
        if (tree.nodes()[i].feature < 0) CHECK(per_leaf[i] >= 10);
    }
}

TEST_CASE("boosting loss never increases and predict is base plus shrunk tree sum") {
    Rng rng(12);
    const Matrix x = random_matrix(rng, 300, 5);
    std::vector<double> y(300);
    for (std::size_t r = 0; r < 300; ++r) y[r] = std::sin(3 * x(r, 0)) + x(r, 1) * x(r, 2) + 0.1 * rng.normal();
    GbtParams p;
    p.n_trees = 30;
    const GbtModel m = boost(x, y, p);
    REQUIRE(m.train_loss_history.size() == 31);
    for (std::size_t i = 1; i < m.train_loss_history.size(); ++i) {
        CHECK(m.train_loss_history[i] <= m.train_loss_history[i - 1] + 1e-9);
    }
    CHECK(m.base == doctest::Approx(std::accumulate(y.begin(), y.end(), 0.0) / 300.0));
    for (std::size_t r = 0; r < 300; ++r) {
        double sum = 0.0;
        for (const auto& t : m.trees) sum += t.predict(x.row(r));
        CHECK(std::abs(m.predict(x.row(r)) - (m.base + m.learning_rate * sum)) <= 1e-12);
    }
}

TEST_CASE("importance concentrates on informative features") {
    const auto d = data::make_separable({.rows = 800});
    const Matrix x = d.numeric_matrix();
    std::vector<double> y(d.size());
    for (std::size_t r = 0; r < d.size(); ++r) y[r] = d.raw_label(r) == "1" ? 1.0 : 0.0;
    GbtParams p;
    p.n_trees = 20;
    p.max_depth = 3;
    const GbtModel m = boost(x, y, p);
    const auto imp = m.feature_importance();
    CHECK(std::accumulate(imp.begin(), imp.end(), 0.0) == doctest::Approx(1.0));
    auto top = select_features(m, 3);
    std::sort(top.begin(), top.end());
    CHECK(top == std::vector<std::size_t>{0, 1, 2});
    CHECK(select_features(m, 10).size() == 10);
}

TEST_CASE("boosting errors and untrained selection") {
    GbtParams p;
    CHECK_THROWS_AS(boost(Matrix(0, 2), std::vector<double>{}, p), EmptyDataset);
    CHECK_THROWS_AS(boost(Matrix(3, 2), std::vector<double>{1, 2}, p), LengthMismatch);
    CHECK_THROWS_AS(select_features(GbtModel{}, 2), UntrainedModel);
    p.learning_rate = 0.0;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    GbtModel m = boost(Matrix(3, 2), std::vector<double>{1, 2, 3}, GbtParams{});
    CHECK_THROWS_AS(m.predict(std::vector<double>{1.0}), DimensionMismatch);
}

TEST_CASE("model JSON round-trip preserves predictions") {
    Rng rng(2);
    const Matrix x = random_matrix(rng, 100, 3);
    std::vector<double> y(100);
    for (auto& v : y) v = rng.normal();
    GbtParams p;
    p.n_trees = 10;
    const GbtModel m = boost(x, y, p);
    const GbtModel back = gbt_model_from_json(to_json(m));
    CHECK(back == m);
    CHECK(gbt_params_from_json(to_json(p)).n_trees == 10);
}
