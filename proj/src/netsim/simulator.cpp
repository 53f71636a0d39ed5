#include <algorithm>

#include "drlids/common/error.hpp"
#include "drlids/netsim/netsim.hpp"

namespace drlids::netsim {

namespace {

constexpr std::uint64_t kEmissionStream = 2;

// Debits at most what remains so the ledger mirrors the energy actually spent.
double debit(double& energy, double cost) {
    const double taken = std::min(cost, energy);
    energy -= taken;
    return taken;
}

}  // namespace

RoundReport step_round(SimWorld& world, const NetworkConfig& cfg, std::size_t round, const TrafficSampler& traffic,
                       const Detector& ids, Rng& rng) {
    if (world.alive_count() == 0) throw AllNodesDead("no alive node at round " + std::to_string(round));
    RoundReport report;
    report.round = round;
    const std::size_t bits = cfg.packet_bits;
    for (std::size_t i = 0; i < world.nodes.size(); ++i) {
        Node& node = world.nodes[i];
        if (!node.alive) continue;
        if (!rng.bernoulli(cfg.distribution_rate)) continue;
        ++report.packets;
        TrafficSample sample = traffic();
        const TrafficClass decision = ids(sample);
        Event event{round, i, sample.record_index, decision, sample.intrusion, decision == TrafficClass::Intrusion};
        world.events.push_back(event);
        if (decision != TrafficClass::Healthy) ++report.detections;
        if (event.halted) {
            ++report.halted;
            continue;
        }
        const double spent = debit(node.energy, tx_energy(bits, distance(node.position, world.base), world.radio));
        world.ledger.push_back({round, static_cast<long>(i), -spent});
        const double base_spent = debit(world.base_energy, rx_energy(bits, world.radio) + agg_energy(bits, world.radio));
        if (base_spent > 0) world.ledger.push_back({round, kBaseStationAccount, -base_spent});
        if (node.energy <= 0.0) {
            node.energy = 0.0;
            node.alive = false;
            ++report.deaths;
        }
    }
    report.total_energy = world.node_energy_total();
    report.base_energy = world.base_energy;
    return report;
}

SimTrace run(SimWorld& world, const NetworkConfig& cfg, const TrafficSampler& traffic, const Detector& ids) {
    cfg.validate();
    Rng rng(derive_seed(cfg.seed, kEmissionStream));
    SimTrace trace;
    trace.initial_energy = world.node_energy_total();
    trace.lifetime = cfg.rounds + 1;
    if (!world.nodes.empty()) {
        std::size_t degree_sum = 0;
        for (const auto& adj : neighbors(world, cfg.radio_range)) degree_sum += adj.size();
        trace.mean_degree = static_cast<double>(degree_sum) / static_cast<double>(world.nodes.size());
    }
    for (std::size_t round = 1; round <= cfg.rounds; ++round) {
        RoundReport report;
        if (world.alive_count() == 0) {
            report.round = round;
            report.total_energy = world.node_energy_total();
            report.base_energy = world.base_energy;
        } else {
            report = step_round(world, cfg, round, traffic, ids, rng);
        }
        if (report.deaths > 0 && trace.lifetime == cfg.rounds + 1) trace.lifetime = round;
        trace.packets += report.packets;
        trace.detections += report.detections;
        trace.halted += report.halted;
        trace.deaths += report.deaths;
        trace.rounds.push_back(report);
    }
    trace.final_energy = world.node_energy_total();
    return trace;
}

}  // namespace drlids::netsim
