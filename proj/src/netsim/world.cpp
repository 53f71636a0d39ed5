#include <cmath>

#include "drlids/common/error.hpp"
#include "drlids/netsim/netsim.hpp"

namespace drlids::netsim {

namespace {
constexpr std::uint64_t kDeployStream = 1;
}

void NetworkConfig::validate() const {
    if (!(field_x > 0 && field_y > 0)) throw ConfigError("network.field dimensions must be positive");
    if (!(node_energy > 0)) throw ConfigError("network.node_energy must be positive");
    if (!(distribution_rate >= 0 && distribution_rate <= 1)) throw ConfigError("network.distribution_rate must lie in [0, 1]");
    if (!(radio_range > 0)) throw ConfigError("network.radio_range must be positive");
    if (packet_bits == 0) throw ConfigError("network.packet_bits must be positive");
    if (rounds == 0) throw ConfigError("network.rounds must be >= 1");
    if (!(base_energy >= 0)) throw ConfigError("network.base_energy must be >= 0");
}

double SimWorld::node_energy_total() const {
    double total = 0.0;
    for (const auto& n : nodes) total += n.energy;
    return total;
}

double SimWorld::energy_total() const { return node_energy_total() + base_energy; }

std::size_t SimWorld::alive_count() const {
    std::size_t alive = 0;
    for (const auto& n : nodes) alive += n.alive ? 1 : 0;
    return alive;
}

double SimWorld::ledger_total() const {
    double total = 0.0;
    for (const auto& e : ledger) total += e.amount;
    return total;
}

SimWorld deploy(const NetworkConfig& cfg, const RadioParams& radio) {
    cfg.validate();
    radio.validate();
    Rng rng(derive_seed(cfg.seed, kDeployStream));
    SimWorld world;
    world.radio = radio;
    world.base = {cfg.field_x / 2.0, cfg.field_y / 2.0};
    world.base_energy = cfg.base_energy;
    world.nodes.reserve(cfg.n_nodes);
    for (std::size_t i = 0; i < cfg.n_nodes; ++i) {
        Node n;
        n.position.x = rng.uniform(0.0, cfg.field_x);
        n.position.y = rng.uniform(0.0, cfg.field_y);
        n.energy = cfg.node_energy;
        world.nodes.push_back(n);
    }
    return world;
}

std::vector<std::vector<std::size_t>> neighbors(const SimWorld& world, double radio_range) {
    const std::size_t n = world.nodes.size();
    std::vector<std::vector<std::size_t>> adj(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (distance(world.nodes[i].position, world.nodes[j].position) <= radio_range) {
                adj[i].push_back(j);
                adj[j].push_back(i);
            }
        }
    }
    return adj;
}

DatasetSampler::DatasetSampler(const data::Dataset& dataset, double attack_fraction, std::uint64_t seed)
    : dataset_(&dataset), attack_fraction_(attack_fraction), rng_(seed) {
    if (!dataset.has_labels()) throw EmptyDataset("traffic sampler needs a labeled dataset");
    if (!(attack_fraction >= 0 && attack_fraction <= 1)) throw ConfigError("attack_fraction must lie in [0, 1]");
    for (std::size_t r = 0; r < dataset.size(); ++r) {
        (dataset.labels()[r].is_intrusion() ? attack_ : benign_).push_back(r);
    }
    if (attack_fraction_ > 0 && attack_.empty()) throw EmptyDataset("scenario needs attack records but none are labeled");
    if (attack_fraction_ < 1 && benign_.empty()) throw EmptyDataset("scenario needs benign records but none are labeled");
}

TrafficSample DatasetSampler::operator()() {
    const bool attack = rng_.bernoulli(attack_fraction_);
    const auto& pool = attack ? attack_ : benign_;
    const std::size_t r = pool[rng_.uniform_index(pool.size())];
    TrafficSample s;
    auto cells = dataset_->row(r);
    auto missing = dataset_->missing_row(r);
    s.cells.assign(cells.begin(), cells.end());
    s.missing.assign(missing.begin(), missing.end());
    s.record_index = r;
    s.intrusion = attack;
    return s;
}

}  // namespace drlids::netsim
