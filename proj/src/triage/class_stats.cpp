#include <cmath>
#include <map>
#include <numbers>

#include "drlids/common/error.hpp"
#include "drlids/triage/triage.hpp"

namespace drlids::triage {

using nlohmann::json;

double ClassModel::log_density(std::span<const double> x) const {
    if (x.size() != mean.size()) throw DimensionMismatch("record width does not match class statistics");
    double s = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
        const double d = x[j] - mean[j];
        s += std::log(2.0 * std::numbers::pi * variance[j]) + d * d / variance[j];
    }
    return -0.5 * s;
}

ClassStats estimate_class_stats(const data::Matrix& x, std::span<const TrafficClass> labels, double variance_floor) {
    if (x.rows == 0) throw EmptyDataset("cannot estimate class statistics from an empty dataset");
    if (labels.size() != x.rows) throw LengthMismatch("label count does not match row count");

    std::map<TrafficClass, std::vector<std::size_t>> members;
    for (std::size_t i = 0; i < labels.size(); ++i) members[labels[i]].push_back(i);

    ClassStats stats;
    stats.variance_floor = variance_floor;
    for (const auto& [cls, rows] : members) {
        ClassModel m;
        m.cls = cls;
        m.prior = static_cast<double>(rows.size()) / static_cast<double>(x.rows);
        m.mean.assign(x.cols, 0.0);
        m.variance.assign(x.cols, 0.0);
        for (auto r : rows) {
            for (std::size_t j = 0; j < x.cols; ++j) m.mean[j] += x(r, j);
        }
        for (auto& v : m.mean) v /= static_cast<double>(rows.size());
        for (auto r : rows) {
            for (std::size_t j = 0; j < x.cols; ++j) {
                const double d = x(r, j) - m.mean[j];
                m.variance[j] += d * d;
            }
        }
        for (auto& v : m.variance) v = std::max(v / static_cast<double>(rows.size()), variance_floor);
        stats.classes.push_back(std::move(m));
    }
    return stats;
}

ClassStats estimate_class_stats(const data::Dataset& train, double variance_floor) {
    if (train.empty()) throw EmptyDataset("cannot estimate class statistics from an empty dataset");
    if (!train.has_labels()) throw SchemaError("class statistics need encoded labels");
    std::vector<TrafficClass> labels;
    for (const auto& l : train.labels()) labels.push_back(l.value);
    return estimate_class_stats(train.numeric_matrix(), labels, variance_floor);
}

TriageDecision likelihood_ratio_decision(std::span<const double> log_densities, std::span<const double> priors,
                                         std::span<const TrafficClass> classes) {
    const std::size_t n = classes.size();
    if (log_densities.size() != n || priors.size() != n) throw LengthMismatch("class score arrays differ in length");
    if (n == 0) return TriageDecision::of(TrafficClass::Suspicious);
    if (n == 1) return TriageDecision::of(classes[0]);
    for (std::size_t c = 0; c < n; ++c) {
        bool beats_all = true;
        for (std::size_t r = 0; r < n && beats_all; ++r) {
            if (r == c) continue;
            // log p(x|c) - log p(x|r) > log p(r) - log p(c)
            beats_all = (log_densities[c] - log_densities[r]) > (std::log(priors[r]) - std::log(priors[c]));
        }
        if (beats_all) return TriageDecision::of(classes[c]);
    }
    return TriageDecision::of(TrafficClass::Suspicious);
}

TriageDecision classify_likelihood_ratio(std::span<const double> x, const ClassStats& stats) {
    std::vector<double> logd, priors;
    std::vector<TrafficClass> classes;
    for (const auto& m : stats.classes) {
        logd.push_back(m.log_density(x));
        priors.push_back(m.prior);
        classes.push_back(m.cls);
    }
    return likelihood_ratio_decision(logd, priors, classes);
}

json to_json(const ClassStats& s) {
    json classes = json::array();
    for (const auto& m : s.classes) {
        classes.push_back({{"class", std::string(to_string(m.cls))},
                           {"prior", m.prior},
                           {"mean", m.mean},
                           {"variance", m.variance}});
    }
    return {{"variance_floor", s.variance_floor}, {"classes", classes}};
}

ClassStats class_stats_from_json(const json& j) {
    ClassStats s;
    s.variance_floor = j.at("variance_floor").get<double>();
    for (const auto& c : j.at("classes")) {
        ClassModel m;
        auto cls = parse_traffic_class(c.at("class").get<std::string>());
        if (!cls) throw ArtifactError("class statistics: unknown class name");
        m.cls = *cls;
        m.prior = c.at("prior").get<double>();
        m.mean = c.at("mean").get<std::vector<double>>();
        m.variance = c.at("variance").get<std::vector<double>>();
        s.classes.push_back(std::move(m));
    }
    return s;
}

}  // namespace drlids::triage
