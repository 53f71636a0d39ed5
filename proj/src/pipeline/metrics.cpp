#include <sstream>

#include "drlids/common/error.hpp"
#include "drlids/common/text.hpp"
#include "drlids/pipeline/pipeline.hpp"

namespace drlids::pipeline {

using nlohmann::json;

ConfusionMatrix confusion_matrix(std::span<const TrafficClass> predicted, std::span<const TrafficClass> truth) {
    if (predicted.size() != truth.size()) throw LengthMismatch("predictions and labels differ in length");
    ConfusionMatrix cm;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        const bool pos = predicted[i] != TrafficClass::Healthy;
        const bool actual = truth[i] == TrafficClass::Intrusion;
        if (pos && actual) ++cm.tp;
        else if (pos) ++cm.fp;
        else if (actual) ++cm.fn;
        else ++cm.tn;
    }
    return cm;
}

double accuracy(const ConfusionMatrix& cm) {
    if (cm.total() == 0) throw ZeroDenominator("accuracy: no scored records");
    return 100.0 * static_cast<double>(cm.tp + cm.tn) / static_cast<double>(cm.total());
}

double sensitivity(const ConfusionMatrix& cm) {
    if (cm.tp + cm.fn == 0) throw ZeroDenominator("sensitivity: TP + FN is zero");
    return 100.0 * static_cast<double>(cm.tp) / static_cast<double>(cm.tp + cm.fn);
}

double specificity(const ConfusionMatrix& cm) {
    if (cm.tn + cm.fp == 0) throw ZeroDenominator("specificity: TN + FP is zero");
    return 100.0 * static_cast<double>(cm.tn) / static_cast<double>(cm.tn + cm.fp);
}

double probability_mse(std::span<const TrafficClass> truth, const std::vector<std::vector<double>>& probs) {
    if (truth.size() != probs.size()) throw LengthMismatch("labels and probability vectors differ in length");
    if (truth.empty()) throw EmptyDataset("mse over zero records");
    double sum = 0.0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        if (probs[i].size() != kDecisionCount) throw DimensionMismatch("probability vector must have 3 entries");
        for (std::size_t a = 0; a < kDecisionCount; ++a) {
            const double target = a == index_of(truth[i]) ? 1.0 : 0.0;
            sum += (target - probs[i][a]) * (target - probs[i][a]);
        }
    }
    return sum / static_cast<double>(truth.size() * kDecisionCount);
}

MetricsReport score_predictions(std::span<const TrafficClass> predicted, std::span<const TrafficClass> truth,
                                const std::vector<std::vector<double>>& probs) {
    if (truth.empty()) throw EmptyDataset("no records to score");
    MetricsReport r;
    r.records = truth.size();
    r.cm = confusion_matrix(predicted, truth);
    for (std::size_t i = 0; i < truth.size(); ++i) ++r.three_way[index_of(truth[i])][index_of(predicted[i])];
    r.accuracy = accuracy(r.cm);
    if (r.cm.tp + r.cm.fn > 0) r.sensitivity = sensitivity(r.cm);
    if (r.cm.tn + r.cm.fp > 0) r.specificity = specificity(r.cm);
    r.mse = probability_mse(truth, probs);
    return r;
}

namespace {

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> optional_from(const json& j) {
    if (j.is_null()) return std::nullopt;
    return j.get<double>();
}

}  // namespace

json to_json(const MetricsReport& r) {
    json three = json::object();
    for (auto t : kAllDecisions) {
        json row = json::object();
        for (auto p : kAllDecisions) row[std::string(to_string(p))] = r.three_way[index_of(t)][index_of(p)];
        three[std::string(to_string(t))] = row;
    }
    return {{"records", r.records},
            {"confusion", {{"tp", r.cm.tp}, {"tn", r.cm.tn}, {"fp", r.cm.fp}, {"fn", r.cm.fn}}},
            {"three_way", three},
            {"accuracy_pct", r.accuracy},
            {"sensitivity_pct", optional_json(r.sensitivity)},
            {"specificity_pct", optional_json(r.specificity)},
            {"mse", r.mse}};
}

MetricsReport metrics_report_from_json(const json& j) {
    MetricsReport r;
    r.records = j.at("records").get<std::size_t>();
    const auto& c = j.at("confusion");
    r.cm = {c.at("tp").get<std::size_t>(), c.at("tn").get<std::size_t>(), c.at("fp").get<std::size_t>(),
            c.at("fn").get<std::size_t>()};
    for (auto t : kAllDecisions) {
        for (auto p : kAllDecisions) {
            r.three_way[index_of(t)][index_of(p)] =
                j.at("three_way").at(std::string(to_string(t))).at(std::string(to_string(p))).get<std::size_t>();
        }
    }
    r.accuracy = j.at("accuracy_pct").get<double>();
    r.sensitivity = optional_from(j.at("sensitivity_pct"));
    r.specificity = optional_from(j.at("specificity_pct"));
    r.mse = j.at("mse").get<double>();
    return r;
}

std::string metrics_csv_header() {
    return "split,records,tp,tn,fp,fn,accuracy_pct,sensitivity_pct,specificity_pct,mse";
}

std::string metrics_csv_row(const std::string& split_name, const MetricsReport& r) {
    auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string(); };
    std::ostringstream out;
    out << escape_csv_field(split_name) << ',' << r.records << ',' << r.cm.tp << ',' << r.cm.tn << ',' << r.cm.fp
        << ',' << r.cm.fn << ',' << format_double(r.accuracy) << ',' << opt(r.sensitivity) << ','
        << opt(r.specificity) << ',' << format_double(r.mse);
    return out.str();
}

}  // namespace drlids::pipeline
