#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>

#include "drlids/common/error.hpp"
#include "drlids/common/rng.hpp"
#include "drlids/pipeline/pipeline.hpp"

namespace drlids::pipeline {

namespace {

constexpr std::uint64_t kPolicyInitStream = 3;
constexpr std::uint64_t kPolicyActionStream = 4;
constexpr std::uint64_t kEpisodeSampleStream = 5;
constexpr std::size_t kRewardWindow = 100;

data::Matrix select_columns(const data::Matrix& x, std::span<const std::size_t> cols) {
    data::Matrix out(x.rows, cols.size());
    for (std::size_t r = 0; r < x.rows; ++r) {
        for (std::size_t c = 0; c < cols.size(); ++c) out(r, c) = x(r, cols[c]);
    }
    return out;
}

std::vector<TrafficClass> truth_of(const data::Dataset& d) {
    if (!d.has_labels()) throw EmptyDataset("dataset carries no encoded labels");
    std::vector<TrafficClass> truth;
    truth.reserve(d.size());
    for (const auto& l : d.labels()) truth.push_back(l.value);
    return truth;
}

}  // namespace

void PipelineConfig::validate() const {
    preprocess.validate();
    gbt.validate();
    triage.validate();
    drl.validate();
    if (k_features < 1) throw ConfigError("pipeline.k_features must be >= 1");
    if (drl_episodes < 1) throw ConfigError("pipeline.drl_episodes must be >= 1");
}

std::vector<double> build_state(std::span<const double> selected_features, double gbt_score, int priority) {
    std::vector<double> state(selected_features.begin(), selected_features.end());
    state.push_back(gbt_score);
    state.push_back(static_cast<double>(priority) / 2.0);
    return state;
}

IdsModel train(const data::Dataset& train_data, const PipelineConfig& cfg) {
    cfg.validate();
    if (train_data.empty()) throw EmptyDataset("training set is empty");
    const std::vector<TrafficClass> truth = truth_of(train_data);

    IdsModel model;
    model.feature_names = train_data.feature_names();
    model.preprocessor = data::Preprocessor::fit(train_data, cfg.preprocess);
    const data::Matrix x = model.preprocessor.apply(train_data).numeric_matrix();
    if (cfg.k_features > x.cols) {
        throw ConfigError("pipeline.k_features (" + std::to_string(cfg.k_features) + ") exceeds the feature count (" +
                          std::to_string(x.cols) + ")");
    }

    std::vector<double> target(truth.size());
    for (std::size_t i = 0; i < truth.size(); ++i) target[i] = truth[i] == TrafficClass::Intrusion ? 1.0 : 0.0;
    model.gbt = gbt::boost(x, target, cfg.gbt);
    model.selected = gbt::select_features(model.gbt, cfg.k_features);

    const data::Matrix xs = select_columns(x, model.selected);
    model.triage = cfg.triage;
    model.stats = triage::estimate_class_stats(xs, truth);
    model.reference = triage::TriageReference::build(xs, truth, model.stats, cfg.triage.rule_bins);

    const std::vector<double> scores = model.gbt.predict(x);
    std::vector<drl::EpisodeStep> steps(x.rows);
    for (std::size_t i = 0; i < x.rows; ++i) {
        const auto vote = triage::knn_vote(xs.row(i), cfg.triage.k_neighbors, model.reference, model.stats, i);
        steps[i].state = build_state(xs.row(i), scores[i], vote.priority);
        steps[i].truth = index_of(truth[i]);
    }

    model.drl = cfg.drl;
    Rng init_rng(derive_seed(cfg.seed, kPolicyInitStream));
    Rng action_rng(derive_seed(cfg.seed, kPolicyActionStream));
    Rng sample_rng(derive_seed(cfg.seed, kEpisodeSampleStream));
    model.policy = drl::PolicyPair::create(steps.front().state.size(), kDecisionCount, cfg.drl, init_rng);

    std::deque<double> recent;
    std::vector<drl::EpisodeStep> episode(cfg.drl.episode_length);
    for (std::size_t e = 0; e < cfg.drl_episodes; ++e) {
        for (auto& step : episode) step = steps[sample_rng.uniform_index(steps.size())];
        const auto report = drl::train_episode(model.policy, episode, cfg.drl, action_rng);
        recent.push_back(report.mean_reward);
        if (recent.size() > kRewardWindow) recent.pop_front();
    }
    model.final_mean_reward = std::accumulate(recent.begin(), recent.end(), 0.0) / static_cast<double>(recent.size());
    return model;
}

Classification classify_detail(const IdsModel& model, std::span<const data::Cell> cells,
                               std::span<const std::uint8_t> missing) {
    if (cells.size() != model.preprocessor.dimension()) {
        throw DimensionMismatch("record has " + std::to_string(cells.size()) + " features, model expects " +
                                std::to_string(model.preprocessor.dimension()));
    }
    const std::vector<double> x = model.preprocessor.transform(cells, missing);
    std::vector<double> xs(model.selected.size());
    for (std::size_t c = 0; c < xs.size(); ++c) xs[c] = x[model.selected[c]];
    const auto vote = triage::knn_vote(xs, model.triage.k_neighbors, model.reference, model.stats);

    Classification out;
    out.triage_priority = vote.priority;
    out.probs = drl::forward(model.policy.target, build_state(xs, model.gbt.predict(x), vote.priority));
    Rng unused(0);
    out.decision = triage::TriageDecision::of(class_from_index(drl::act(out.probs, drl::ActMode::Greedy, unused)));
    return out;
}

triage::TriageDecision classify(const IdsModel& model, std::span<const data::Cell> cells,
                                std::span<const std::uint8_t> missing) {
    return classify_detail(model, cells, missing).decision;
}

MetricsReport evaluate(const IdsModel& model, const data::Dataset& test) {
    if (test.empty()) throw EmptyDataset("evaluation set is empty");
    const std::vector<TrafficClass> truth = truth_of(test);
    std::vector<TrafficClass> predicted;
    std::vector<std::vector<double>> probs;
    predicted.reserve(test.size());
    probs.reserve(test.size());
    for (std::size_t r = 0; r < test.size(); ++r) {
        auto c = classify_detail(model, test.row(r), test.missing_row(r));
        predicted.push_back(c.decision.cls);
        probs.push_back(std::move(c.probs));
    }
    return score_predictions(predicted, truth, probs);
}

}  // namespace drlids::pipeline
