#include <cmath>

#include "doctest.h"

#include "drlids/common/error.hpp"
#include "drlids/common/rng.hpp"
#include "drlids/data/labels.hpp"
#include "drlids/data/split.hpp"
#include "drlids/data/synthetic.hpp"
#include "drlids/pipeline/pipeline.hpp"
#include "oracles.hpp"

using namespace drlids;
using namespace drlids::pipeline;

namespace {

std::vector<TrafficClass> repeat(TrafficClass c, std::size_t n) { return std::vector<TrafficClass>(n, c); }

void append(std::vector<TrafficClass>& v, const std::vector<TrafficClass>& more) { v.insert(v.end(), more.begin(), more.end()); }

PipelineConfig quick_config() {
    PipelineConfig cfg;
    cfg.gbt.n_trees = 30;
    cfg.gbt.max_depth = 4;
    cfg.k_features = 5;
    cfg.drl.hidden = {16};
    cfg.drl_episodes = 400;
    cfg.seed = 3;
    return cfg;
}

struct Trained {
    data::Dataset train_set, test_set;
    IdsModel model;
};

const Trained& trained() {
    static const Trained t = [] {
        const auto all = data::encode_labels(data::make_separable({.rows = 600}), data::default_label_table());
        auto [tr, te] = data::split(all, 0.8, 1);
        IdsModel m = train(tr, quick_config());
        return Trained{std::move(tr), std::move(te), std::move(m)};
    }();
    return t;
}

}  // namespace

TEST_CASE("confusion matrix matches exhaustive counting") {
    Rng rng(4);
    std::vector<TrafficClass> pred(1000), truth(1000);
    for (std::size_t i = 0; i < 1000; ++i) {
        pred[i] = class_from_index(rng.uniform_index(3));
        truth[i] = rng.bernoulli(0.5) ? TrafficClass::Intrusion : TrafficClass::Healthy;
    }
    const ConfusionMatrix cm = confusion_matrix(pred, truth);
    const auto o = oracle::count_pairs(pred, truth);
    CHECK(cm.tp == o.tp);
    CHECK(cm.tn == o.tn);
    CHECK(cm.fp == o.fp);
    CHECK(cm.fn == o.fn);
    CHECK(cm.total() == 1000);
    CHECK(std::abs(accuracy(cm) - 100.0 * static_cast<double>(o.tp + o.tn) / 1000.0) <= 1e-12);
    CHECK_THROWS_AS(confusion_matrix(pred, std::vector<TrafficClass>{}), LengthMismatch);
}

TEST_CASE("metric values on a 200-record hand count") {
    std::vector<TrafficClass> pred, truth;
    append(pred, repeat(TrafficClass::Intrusion, 90));
    append(truth, repeat(TrafficClass::Intrusion, 90));
    append(pred, repeat(TrafficClass::Healthy, 85));
    append(truth, repeat(TrafficClass::Healthy, 85));
    append(pred, repeat(TrafficClass::Suspicious, 15));
    append(truth, repeat(TrafficClass::Healthy, 15));
    append(pred, repeat(TrafficClass::Healthy, 10));
    append(truth, repeat(TrafficClass::Intrusion, 10));
    const ConfusionMatrix cm = confusion_matrix(pred, truth);
    CHECK(cm == ConfusionMatrix{90, 85, 15, 10});
    CHECK(accuracy(cm) == 87.5);
    CHECK(sensitivity(cm) == 90.0);
    CHECK(specificity(cm) == 85.0);
    CHECK(accuracy(ConfusionMatrix{1, 1, 0, 0}) == 100.0);
    CHECK_THROWS_AS(sensitivity(ConfusionMatrix{0, 5, 1, 0}), ZeroDenominator);
    CHECK_THROWS_AS(specificity(ConfusionMatrix{5, 0, 0, 1}), ZeroDenominator);
    CHECK_THROWS_AS(accuracy(ConfusionMatrix{}), ZeroDenominator);
}

TEST_CASE("metrics stay in range and accuracy is symmetric in the positive class") {
    Rng rng(8);
    for (int i = 0; i < 500; ++i) {
        ConfusionMatrix cm{rng.uniform_index(50) + 1, rng.uniform_index(50) + 1, rng.uniform_index(50), rng.uniform_index(50)};
        const ConfusionMatrix swapped{cm.tn, cm.tp, cm.fn, cm.fp};
        CHECK(accuracy(cm) == accuracy(swapped));
        for (double v : {accuracy(cm), sensitivity(cm), specificity(cm)}) CHECK((v >= 0.0 && v <= 100.0));
    }
}

TEST_CASE("probability MSE is zero exactly for one-hot predictions") {
    const std::vector<TrafficClass> truth{TrafficClass::Healthy, TrafficClass::Intrusion};
    CHECK(probability_mse(truth, {{1, 0, 0}, {0, 0, 1}}) == 0.0);
    CHECK(probability_mse(truth, {{0.9, 0.1, 0}, {0, 0, 1}}) > 0.0);
    CHECK(probability_mse(truth, {{0, 0, 1}, {1, 0, 0}}) == doctest::Approx(4.0 / 6.0));
}

TEST_CASE("metrics report JSON and CSV") {
    const std::vector<TrafficClass> truth{TrafficClass::Healthy, TrafficClass::Healthy};
    const MetricsReport r = score_predictions(truth, truth, {{1, 0, 0}, {1, 0, 0}});
    CHECK_FALSE(r.sensitivity.has_value());
    CHECK(r.specificity.value() == 100.0);
    CHECK(metrics_report_from_json(to_json(r)) == r);
    CHECK(to_json(r).at("sensitivity_pct").is_null());
    CHECK(metrics_csv_row("test", r) == "test,2,0,2,0,0,100,,100,0");
}

TEST_CASE("trained pipeline separates the synthetic set") {
    const Trained& t = trained();
    const MetricsReport r = evaluate(t.model, t.test_set);
    CHECK(r.records == t.test_set.size());
    CHECK(r.accuracy >= 95.0);
    CHECK(r.mse < 0.05);
    CHECK(t.model.selected.size() == 5);
    CHECK(evaluate(t.model, t.test_set) == r);
}

TEST_CASE("classify is pure, follows confident training records and checks width") {
    const Trained& t = trained();
    std::size_t agree = 0;
    for (std::size_t r = 0; r < t.train_set.size(); ++r) {
        const auto d1 = classify(t.model, t.train_set.row(r));
        const auto d2 = classify(t.model, t.train_set.row(r));
        CHECK(d1 == d2);
        agree += d1.cls == t.train_set.labels()[r].value ? 1 : 0;
    }
    CHECK(static_cast<double>(agree) / static_cast<double>(t.train_set.size()) >= 0.95);
    const std::vector<data::Cell> short_record{0.5, 0.5};
    CHECK_THROWS_AS(classify(t.model, short_record), DimensionMismatch);
    CHECK_THROWS_AS(evaluate(t.model, t.test_set.subset(std::vector<std::size_t>{})), EmptyDataset);
}

TEST_CASE("model JSON round-trip reproduces bytes and decisions") {
    const Trained& t = trained();
    const std::string text = to_json(t.model).dump();
    const IdsModel back = ids_model_from_json(nlohmann::json::parse(text));
    CHECK(to_json(back).dump() == text);
    for (std::size_t r = 0; r < t.test_set.size(); ++r) {
        CHECK(classify_detail(back, t.test_set.row(r)).probs == classify_detail(t.model, t.test_set.row(r)).probs);
    }
    nlohmann::json old = nlohmann::json::parse(text);
    old["format_version"] = 99;
    CHECK_THROWS_AS(ids_model_from_json(old), ArtifactError);
    old.erase("format_version");
    CHECK_THROWS_AS(ids_model_from_json(old), ArtifactError);
}

TEST_CASE("training is deterministic and accepts every feature") {
    const auto all = data::encode_labels(data::make_separable({.rows = 200, .features = 4, .informative = 2}),
                                         data::default_label_table());
    PipelineConfig cfg = quick_config();
    cfg.k_features = 4;
    cfg.drl_episodes = 50;
    const IdsModel a = train(all, cfg);
    const IdsModel b = train(all, cfg);
    CHECK(to_json(a).dump() == to_json(b).dump());
    auto sel = a.selected;
    std::sort(sel.begin(), sel.end());
    CHECK(sel == std::vector<std::size_t>{0, 1, 2, 3});
    cfg.k_features = 5;
    CHECK_THROWS_AS(train(all, cfg), ConfigError);
}

TEST_CASE("pipeline handles categorical and missing cells") {
    const auto all = data::encode_labels(data::make_bot_iot_like({.rows = 300, .missing_rate = 0.05}),
                                         data::default_label_table());
    PipelineConfig cfg = quick_config();
    cfg.drl_episodes = 100;
    const IdsModel m = train(all, cfg);
    const MetricsReport r = evaluate(m, all);
    CHECK(r.records == 300);
    CHECK(pipeline_config_from_json(to_json(cfg)).k_features == cfg.k_features);
}
