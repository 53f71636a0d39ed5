#include <cmath>

#include "drlids/common/error.hpp"
#include "drlids/drl/drl.hpp"

namespace drlids::drl {

std::size_t act(std::span<const double> probs, ActMode mode, Rng& rng) {
    if (probs.empty()) throw InvalidDistribution("empty probability vector");
    double total = 0.0;
    for (double p : probs) {
        if (!std::isfinite(p) || p < 0.0) throw InvalidDistribution("probability vector has an invalid entry");
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-9) throw InvalidDistribution("probability vector does not sum to 1");
    if (mode == ActMode::Greedy) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < probs.size(); ++i) {
            if (probs[i] > probs[best]) best = i;
        }
        return best;
    }
    return rng.categorical(probs);
}

std::vector<double> reward_sequence(std::span<const std::size_t> predicted, std::span<const std::size_t> truth) {
    if (predicted.size() != truth.size()) throw LengthMismatch("predicted and truth action sequences differ in length");
    std::vector<double> r(predicted.size());
    for (std::size_t t = 0; t < r.size(); ++t) r[t] = predicted[t] == truth[t] ? 1.0 : 0.0;
    return r;
}

std::vector<double> discounted_returns(std::span<const double> rewards, double gamma_discount) {
    if (!(gamma_discount >= 0.0 && gamma_discount < 1.0)) throw ConfigError("gamma_discount must lie in [0, 1)");
    std::vector<double> out(rewards.size());
    double running = 0.0;
    for (std::size_t t = rewards.size(); t-- > 0;) {
        running = rewards[t] + gamma_discount * running;
        out[t] = running;
    }
    return out;
}

AdvantageBatch advantages(const std::vector<std::vector<double>>& returns, BaselineMode mode) {
    if (returns.empty()) throw EmptyDataset("advantages need at least one path");
    const std::size_t T = returns.front().size();
    for (const auto& path : returns) {
        if (path.size() != T) throw LengthMismatch("paths in a batch must share one length");
    }
    AdvantageBatch out;
    if (mode == BaselineMode::BatchMean) {
        std::vector<double> b(T, 0.0);
        for (const auto& path : returns) {
            for (std::size_t t = 0; t < T; ++t) b[t] += path[t];
        }
        for (auto& v : b) v /= static_cast<double>(returns.size());
        out.baseline.assign(returns.size(), b);
    } else {
        for (const auto& path : returns) {
            double m = 0.0;
            for (double v : path) m += v;
            m = T ? m / static_cast<double>(T) : 0.0;
            out.baseline.emplace_back(T, m);
        }
    }
    for (std::size_t p = 0; p < returns.size(); ++p) {
        std::vector<double> a(T);
        for (std::size_t t = 0; t < T; ++t) a[t] = returns[p][t] - out.baseline[p][t];
        out.advantages.push_back(std::move(a));
    }
    return out;
}

}  // namespace drlids::drl
