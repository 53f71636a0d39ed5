#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "drlids/common/classes.hpp"
#include "drlids/data/dataset.hpp"
#include "drlids/data/preprocess.hpp"
#include "drlids/drl/drl.hpp"
#include "drlids/gbt/gbt.hpp"
#include "drlids/triage/triage.hpp"

namespace drlids::pipeline {

// ---- metrics ----

/// Binary counts with Intrusion as the positive class. A Suspicious
/// prediction counts as positive.
struct ConfusionMatrix {
    std::size_t tp = 0;
    std::size_t tn = 0;
    std::size_t fp = 0;
    std::size_t fn = 0;

    std::size_t total() const { return tp + tn + fp + fn; }
    friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

/// Throws LengthMismatch when the sequences differ in length.
ConfusionMatrix confusion_matrix(std::span<const TrafficClass> predicted, std::span<const TrafficClass> truth);

/// Percentages in [0, 100]. Each throws ZeroDenominator naming the metric.
double accuracy(const ConfusionMatrix& cm);
double sensitivity(const ConfusionMatrix& cm);
double specificity(const ConfusionMatrix& cm);

/// Mean over records and components of (onehot(truth) - probs)^2.
double probability_mse(std::span<const TrafficClass> truth, const std::vector<std::vector<double>>& probs);

struct MetricsReport {
    std::size_t records = 0;
    ConfusionMatrix cm;
    /// three_way[truth][prediction] over the three decision levels.
    std::array<std::array<std::size_t, kDecisionCount>, kDecisionCount> three_way{};
    double accuracy = 0.0;
    std::optional<double> sensitivity;
    std::optional<double> specificity;
    double mse = 0.0;
    friend bool operator==(const MetricsReport&, const MetricsReport&) = default;
};

MetricsReport score_predictions(std::span<const TrafficClass> predicted, std::span<const TrafficClass> truth,
                                const std::vector<std::vector<double>>& probs);

nlohmann::json to_json(const MetricsReport& r);
MetricsReport metrics_report_from_json(const nlohmann::json& j);
std::string metrics_csv_header();
std::string metrics_csv_row(const std::string& split_name, const MetricsReport& r);

// ---- model ----

struct PipelineConfig {
    data::PreprocessConfig preprocess;
    gbt::GbtParams gbt;
    std::size_t k_features = 8;
    triage::TriageParams triage;
    drl::DrlParams drl;
    std::size_t drl_episodes = 2000;
    std::uint64_t seed = 42;

    void validate() const;
};

nlohmann::json to_json(const PipelineConfig& c);
PipelineConfig pipeline_config_from_json(const nlohmann::json& j, PipelineConfig defaults = {});

struct IdsModel {
    std::vector<std::string> feature_names;
    data::Preprocessor preprocessor;
    gbt::GbtModel gbt;
    std::vector<std::size_t> selected;  ///< indices into the preprocessed features
    triage::ClassStats stats;
    triage::TriageReference reference;
    triage::TriageParams triage;
    drl::PolicyPair policy;
    drl::DrlParams drl;
    double final_mean_reward = 0.0;  ///< over the last training episodes
};

/// Fits preprocessing, boosting, feature selection, triage and the policy
/// on a labeled raw dataset. Deterministic under cfg.seed.
IdsModel train(const data::Dataset& train_data, const PipelineConfig& cfg);

/// Policy state: selected features, then the boosted score, then priority / 2.
std::vector<double> build_state(std::span<const double> selected_features, double gbt_score, int priority);

struct Classification {
    triage::TriageDecision decision;
    std::vector<double> probs;  ///< target-net action distribution
    int triage_priority = 0;
};

/// Preprocesses one raw record and acts greedily with the target net.
/// Throws DimensionMismatch when the record width differs from training.
Classification classify_detail(const IdsModel& model, std::span<const data::Cell> cells,
                               std::span<const std::uint8_t> missing = {});
triage::TriageDecision classify(const IdsModel& model, std::span<const data::Cell> cells,
                                std::span<const std::uint8_t> missing = {});

/// Throws EmptyDataset on an empty set.
MetricsReport evaluate(const IdsModel& model, const data::Dataset& test);

inline constexpr int kModelFormatVersion = 1;

nlohmann::json to_json(const IdsModel& m);
/// Throws ArtifactError on a missing or unsupported format_version.
IdsModel ids_model_from_json(const nlohmann::json& j);
void save_model(const IdsModel& m, const std::filesystem::path& path);
IdsModel load_model(const std::filesystem::path& path);

}  // namespace drlids::pipeline
