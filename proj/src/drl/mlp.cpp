#include <algorithm>
#include <cmath>

#include "drlids/common/error.hpp"
#include "drlids/drl/drl.hpp"

namespace drlids::drl {

Mlp::Mlp(std::vector<std::size_t> layer_sizes) : sizes_(std::move(layer_sizes)) {
    if (sizes_.size() < 2) throw ConfigError("an MLP needs at least an input and an output layer");
    for (auto s : sizes_) {
        if (s == 0) throw ConfigError("MLP layer sizes must be positive");
    }
    for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
        weights_.emplace_back(sizes_[l + 1] * sizes_[l], 0.0);
        biases_.emplace_back(sizes_[l + 1], 0.0);
    }
}

Mlp Mlp::he_init(std::vector<std::size_t> layer_sizes, Rng& rng) {
    Mlp net(std::move(layer_sizes));
    for (std::size_t l = 0; l < net.layer_count(); ++l) {
        const double stddev = std::sqrt(2.0 / static_cast<double>(net.sizes_[l]));
        for (auto& w : net.weights_[l]) w = stddev * rng.normal();
    }
    return net;
}

std::size_t Mlp::parameter_count() const {
    std::size_t n = 0;
    for (std::size_t l = 0; l < layer_count(); ++l) n += weights_[l].size() + biases_[l].size();
    return n;
}

std::vector<double> Mlp::flat_parameters() const {
    std::vector<double> out;
    out.reserve(parameter_count());
    for (std::size_t l = 0; l < layer_count(); ++l) {
        out.insert(out.end(), weights_[l].begin(), weights_[l].end());
        out.insert(out.end(), biases_[l].begin(), biases_[l].end());
    }
    return out;
}

void Mlp::set_flat_parameters(std::span<const double> flat) {
    if (flat.size() != parameter_count()) throw DimensionMismatch("flat parameter vector has the wrong length");
    std::size_t i = 0;
    for (std::size_t l = 0; l < layer_count(); ++l) {
        for (auto& w : weights_[l]) w = flat[i++];
        for (auto& b : biases_[l]) b = flat[i++];
    }
}

double Mlp::weight_sum_of_squares() const {
    double s = 0.0;
    for (const auto& layer : weights_) {
        for (double w : layer) s += w * w;
    }
    return s;
}

MlpGradient::MlpGradient(const Mlp& net) {
    for (std::size_t l = 0; l < net.layer_count(); ++l) {
        weights.emplace_back(net.weights(l).size(), 0.0);
        biases.emplace_back(net.biases(l).size(), 0.0);
    }
}

std::vector<double> MlpGradient::flat() const {
    std::vector<double> out;
    for (std::size_t l = 0; l < weights.size(); ++l) {
        out.insert(out.end(), weights[l].begin(), weights[l].end());
        out.insert(out.end(), biases[l].begin(), biases[l].end());
    }
    return out;
}

double MlpGradient::norm() const {
    double s = 0.0;
    for (std::size_t l = 0; l < weights.size(); ++l) {
        for (double g : weights[l]) s += g * g;
        for (double g : biases[l]) s += g * g;
    }
    return std::sqrt(s);
}

void MlpGradient::scale(double factor) {
    for (std::size_t l = 0; l < weights.size(); ++l) {
        for (double& g : weights[l]) g *= factor;
        for (double& g : biases[l]) g *= factor;
    }
}

ForwardCache forward_cached(const Mlp& net, std::span<const double> state) {
    if (state.size() != net.input_size()) {
        throw DimensionMismatch("state has " + std::to_string(state.size()) + " entries, policy expects " +
                                std::to_string(net.input_size()));
    }
    const auto& sizes = net.layer_sizes();
    ForwardCache cache;
    cache.activations.emplace_back(state.begin(), state.end());
    for (std::size_t l = 0; l < net.layer_count(); ++l) {
        const auto& in = cache.activations.back();
        const auto& w = net.weights(l);
        const auto& b = net.biases(l);
        std::vector<double> z(sizes[l + 1]);
        for (std::size_t o = 0; o < z.size(); ++o) {
            double s = b[o];
            const double* row = w.data() + o * sizes[l];
            for (std::size_t i = 0; i < sizes[l]; ++i) s += row[i] * in[i];
            z[o] = s;
        }
        if (l + 1 < net.layer_count()) {
            for (auto& v : z) v = std::max(v, 0.0);
            cache.activations.push_back(std::move(z));
        } else {
            cache.logits = std::move(z);
        }
    }
    const double zmax = *std::max_element(cache.logits.begin(), cache.logits.end());
    cache.probs.resize(cache.logits.size());
    double total = 0.0;
    for (std::size_t i = 0; i < cache.logits.size(); ++i) {
        cache.probs[i] = std::exp(cache.logits[i] - zmax);
        total += cache.probs[i];
    }
    for (auto& p : cache.probs) p /= total;
    return cache;
}

std::vector<double> forward(const Mlp& net, std::span<const double> state) {
    return forward_cached(net, state).probs;
}

void backward(const Mlp& net, const ForwardCache& cache, std::span<const double> dlogits, MlpGradient& grad) {
    const auto& sizes = net.layer_sizes();
    std::vector<double> delta(dlogits.begin(), dlogits.end());
    for (std::size_t l = net.layer_count(); l-- > 0;) {
        const auto& in = cache.activations[l];
        auto& gw = grad.weights[l];
        auto& gb = grad.biases[l];
        for (std::size_t o = 0; o < sizes[l + 1]; ++o) {
            gb[o] += delta[o];
            double* row = gw.data() + o * sizes[l];
            for (std::size_t i = 0; i < sizes[l]; ++i) row[i] += delta[o] * in[i];
        }
        if (l == 0) break;
        const auto& w = net.weights(l);
        std::vector<double> prev(sizes[l], 0.0);
        for (std::size_t o = 0; o < sizes[l + 1]; ++o) {
            const double* row = w.data() + o * sizes[l];
            for (std::size_t i = 0; i < sizes[l]; ++i) prev[i] += row[i] * delta[o];
        }
        // ReLU derivative, taken as 0 at the kink
        for (std::size_t i = 0; i < prev.size(); ++i) {
            if (in[i] <= 0.0) prev[i] = 0.0;
        }
        delta = std::move(prev);
    }
}

}  // namespace drlids::drl
