#pragma once

// Independent reference computations shared by the unit and acceptance tests.

#include <cmath>
#include <cstddef>
#include <vector>

#include "drlids/common/classes.hpp"
#include "drlids/drl/drl.hpp"
#include "drlids/triage/triage.hpp"

namespace oracle {

/// R_t as the explicit double sum over the suffix.
inline std::vector<double> returns_double_sum(const std::vector<double>& r, double gamma) {
    std::vector<double> out(r.size(), 0.0);
    for (std::size_t t = 0; t < r.size(); ++t) {
        for (std::size_t i = t; i < r.size(); ++i) out[t] += std::pow(gamma, static_cast<double>(i - t)) * r[i];
    }
    return out;
}

struct Counts {
    std::size_t tp = 0, tn = 0, fp = 0, fn = 0;
};

/// Counts each (truth, prediction) cell of the 2x3 table, then folds the
/// non-Healthy predictions into the positive column.
inline Counts count_pairs(const std::vector<drlids::TrafficClass>& pred, const std::vector<drlids::TrafficClass>& truth) {
    std::size_t table[3][3] = {};
    for (std::size_t i = 0; i < pred.size(); ++i) ++table[drlids::index_of(truth[i])][drlids::index_of(pred[i])];
    const std::size_t h = drlids::index_of(drlids::TrafficClass::Healthy);
    const std::size_t x = drlids::index_of(drlids::TrafficClass::Intrusion);
    Counts c;
    for (std::size_t p = 0; p < 3; ++p) {
        if (p == h) {
            c.fn += table[x][p];
            c.tn += table[h][p];
        } else {
            c.tp += table[x][p];
            c.fp += table[h][p];
        }
    }
    return c;
}

struct RuleCounts {
    std::size_t x = 0, xy = 0, total = 0;
};

/// Counts rule matches over `rows` of `data` by comparing whole records.
inline RuleCounts count_rule(const drlids::triage::Rule& rule, const drlids::triage::RuleData& data,
                             const std::vector<std::size_t>& rows) {
    RuleCounts c;
    c.total = rows.size();
    for (auto i : rows) {
        bool all = true;
        for (const auto& [f, bin] : rule.antecedent) all = all && data.features[i][f] == bin;
        if (all) {
            ++c.x;
            if (data.decisions[i] == rule.consequent) ++c.xy;
        }
    }
    return c;
}

/// Fixed 10-record discretized dataset with mixed decisions.
inline drlids::triage::RuleData ten_records() {
    using drlids::TrafficClass;
    drlids::triage::RuleData d;
    d.features = {{0, 1, 2}, {0, 1, 2}, {0, 1, 2}, {1, 1, 0}, {1, 1, 0},
                  {2, 0, 1}, {0, 1, 2}, {1, 1, 0}, {2, 2, 2}, {2, 0, 1}};
    d.decisions = {TrafficClass::Intrusion, TrafficClass::Intrusion, TrafficClass::Healthy,  TrafficClass::Healthy,
                   TrafficClass::Suspicious, TrafficClass::Intrusion, TrafficClass::Intrusion, TrafficClass::Healthy,
                   TrafficClass::Healthy,  TrafficClass::Intrusion};
    return d;
}

/// Central finite-difference gradient of the policy objective over all parameters.
inline std::vector<double> numeric_gradient(const drlids::drl::Mlp& net,
                                            const std::vector<drlids::drl::Trajectory>& paths, double lambda,
                                            double step) {
    drlids::drl::Mlp probe = net;
    std::vector<double> theta = net.flat_parameters();
    std::vector<double> grad(theta.size());
    for (std::size_t i = 0; i < theta.size(); ++i) {
        const double saved = theta[i];
        theta[i] = saved + step;
        probe.set_flat_parameters(theta);
        const double up = drlids::drl::policy_objective(probe, paths, lambda);
        theta[i] = saved - step;
        probe.set_flat_parameters(theta);
        const double down = drlids::drl::policy_objective(probe, paths, lambda);
        theta[i] = saved;
        grad[i] = (up - down) / (2.0 * step);
    }
    return grad;
}

}  // namespace oracle
