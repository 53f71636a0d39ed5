#include <cmath>
#include <sstream>

#include "doctest.h"

#include "drlids/common/error.hpp"
#include "drlids/data/labels.hpp"
#include "drlids/data/synthetic.hpp"
#include "drlids/netsim/netsim.hpp"

using namespace drlids;
using namespace drlids::netsim;

namespace {

TrafficSampler benign_traffic() {
    return [] { return TrafficSample{}; };
}

Detector always(TrafficClass c) {
    return [c](const TrafficSample&) { return c; };
}

}  // namespace

TEST_CASE("radio energies follow the first-order model") {
    const RadioParams r;
    CHECK(tx_energy(4000, 50.0, r) == doctest::Approx(3.0e-4).epsilon(1e-15));
    CHECK(rx_energy(4000, r) == doctest::Approx(2.0e-4).epsilon(1e-15));
    CHECK(agg_energy(4000, r) == doctest::Approx(2.0e-5).epsilon(1e-15));
    CHECK(rx_energy(1, r) == r.e_elec);
    CHECK(agg_energy(1, r) == r.e_da);
    CHECK(tx_energy(0, 120.0, r) == 0.0);
    CHECK(rx_energy(0, r) == 0.0);
    CHECK(r.d0() == doctest::Approx(87.7058).epsilon(1e-5));
    // beyond d0 the multipath term applies
    CHECK(tx_energy(4000, 100.0, r) == doctest::Approx(4000 * 50e-9 + 4000 * 0.0013e-12 * 1e8).epsilon(1e-15));
}

TEST_CASE("transmit energy is continuous at the crossover distance") {
    const RadioParams r;
    const double d0 = r.d0();
    const double below = 4000 * r.e_elec + 4000 * r.eps_fs * d0 * d0;
    const double above = 4000 * r.e_elec + 4000 * r.eps_mp * d0 * d0 * d0 * d0;
    CHECK(std::abs(below - above) <= 1e-15 * above);
    CHECK(std::abs(tx_energy(4000, d0, r) - below) <= 1e-15 * below);
    CHECK(std::abs(tx_energy(4000, std::nextafter(d0, 0.0), r) - above) <= 1e-14 * above);
}

TEST_CASE("deployment stays in the field and is reproducible") {
    NetworkConfig cfg;
    const SimWorld w = deploy(cfg);
    REQUIRE(w.nodes.size() == 200);
    for (const auto& n : w.nodes) {
        CHECK((n.position.x >= 0 && n.position.x <= 100));
        CHECK((n.position.y >= 0 && n.position.y <= 100));
        CHECK(n.energy == 0.5);
        CHECK(n.alive);
    }
    CHECK(w.base == Point{50, 50});
    CHECK(deploy(cfg).nodes == w.nodes);
    cfg.seed = 2;
    CHECK_FALSE(deploy(cfg).nodes == w.nodes);
    cfg.n_nodes = 0;
    CHECK(deploy(cfg).nodes.empty());
    cfg.distribution_rate = 1.5;
    CHECK_THROWS_AS(deploy(cfg), ConfigError);
}

TEST_CASE("neighborhoods use a closed ball and are symmetric") {
    SimWorld w;
    w.nodes = {Node{{0, 0}, 1, true}, Node{{50, 0}, 1, true}, Node{{110, 0}, 1, true}, Node{{200, 0}, 1, true}};
    const auto adj = neighbors(w, 60.0);
    CHECK(adj[0] == std::vector<std::size_t>{1});
    CHECK(adj[1] == std::vector<std::size_t>{0, 2});  // 60 m exactly
    CHECK(adj[3].empty());

    const SimWorld big = deploy(NetworkConfig{});
    const auto a = neighbors(big, 60.0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < a.size(); ++j) {
            const bool listed = std::find(a[i].begin(), a[i].end(), j) != a[i].end();
            const bool expected = i != j && distance(big.nodes[i].position, big.nodes[j].position) <= 60.0;
            CHECK(listed == expected);
        }
    }
}

TEST_CASE("packet emissions replay the seeded Bernoulli draws") {
    NetworkConfig cfg;
    SimWorld w = deploy(cfg);
    Rng rng(123), replay(123);
    const RoundReport r = step_round(w, cfg, 1, benign_traffic(), always(TrafficClass::Healthy), rng);
    std::size_t expected = 0;
    for (std::size_t i = 0; i < cfg.n_nodes; ++i) expected += replay.bernoulli(cfg.distribution_rate) ? 1 : 0;
    CHECK(r.packets == expected);
    CHECK(w.events.size() == expected);
}

TEST_CASE("dead nodes are silent and halted packets cost nothing") {
    NetworkConfig cfg;
    cfg.distribution_rate = 1.0;
    SimWorld w;
    w.base = {50, 50};
    w.base_energy = 20;
    w.nodes = {Node{{10, 10}, 0.0, false}, Node{{20, 20}, 0.5, true}};
    Rng rng(1);
    const RoundReport r = step_round(w, cfg, 1, benign_traffic(), always(TrafficClass::Intrusion), rng);
    CHECK(r.packets == 1);
    CHECK(r.halted == 1);
    CHECK(r.detections == 1);
    CHECK(w.nodes[0].energy == 0.0);
    CHECK(w.nodes[1].energy == 0.5);
    CHECK(w.base_energy == 20.0);
    REQUIRE(w.events.size() == 1);
    CHECK(w.events[0].halted);
    CHECK(w.events[0].source == 1);

    const RoundReport s = step_round(w, cfg, 2, benign_traffic(), always(TrafficClass::Suspicious), rng);
    CHECK(s.detections == 1);
    CHECK(s.halted == 0);
    CHECK(w.nodes[1].energy < 0.5);

    w.nodes[1].alive = false;
    CHECK_THROWS_AS(step_round(w, cfg, 3, benign_traffic(), always(TrafficClass::Healthy), rng), AllNodesDead);
}

TEST_CASE("a single always-transmitting node dies at the closed-form round") {
    NetworkConfig cfg;
    cfg.distribution_rate = 1.0;
    cfg.rounds = 2500;
    SimWorld w;
    w.base = {50, 50};
    w.base_energy = 20;
    w.nodes = {Node{{50, 80}, 0.5, true}};
    const double cost = tx_energy(cfg.packet_bits, 30.0, RadioParams{});
    const SimTrace t = run(w, cfg, benign_traffic(), always(TrafficClass::Healthy));
    CHECK(t.lifetime == static_cast<std::size_t>(std::ceil(0.5 / cost)));
    CHECK(t.rounds.size() == 2500);
    CHECK(t.deaths == 1);
    CHECK(t.rounds.back().packets == 0);
}

TEST_CASE("energy ledger balances and runs are deterministic") {
    NetworkConfig cfg;
    cfg.rounds = 300;
    cfg.node_energy = 0.01;
    cfg.distribution_rate = 0.3;
    const auto data = data::encode_labels(data::make_bot_iot_like({.rows = 200}), data::default_label_table());
    auto run_once = [&](SimWorld& w) {
        DatasetSampler sampler(data, 0.2, 9);
        const TrafficSampler traffic = [&sampler] { return sampler(); };
        const Detector ids = [](const TrafficSample& s) {
            return s.intrusion && s.record_index % 2 == 0 ? TrafficClass::Intrusion : TrafficClass::Healthy;
        };
        return run(w, cfg, traffic, ids);
    };
    SimWorld a = deploy(cfg), b = deploy(cfg);
    const double initial = a.energy_total();
    const SimTrace ta = run_once(a);
    const SimTrace tb = run_once(b);
    CHECK(ta == tb);
    CHECK(a.events == b.events);
    CHECK(a.ledger == b.ledger);
    CHECK(std::abs(-a.ledger_total() - (initial - a.energy_total())) <= 1e-9);
    CHECK(ta.lifetime <= cfg.rounds);
    CHECK(ta.halted > 0);
    CHECK(ta.halted <= ta.detections);
    for (const auto& e : a.ledger) CHECK(e.amount <= 0.0);
    std::size_t deaths_seen = 0;
    for (const auto& n : a.nodes) {
        CHECK(n.energy >= 0.0);
        CHECK(n.alive == (n.energy > 0.0));
        deaths_seen += n.alive ? 0 : 1;
    }
    CHECK(deaths_seen == ta.deaths);
    for (std::size_t i = 1; i < ta.rounds.size(); ++i) CHECK(ta.rounds[i].total_energy <= ta.rounds[i - 1].total_energy);
}

TEST_CASE("trace CSV has one row per round and the summary reports totals") {
    NetworkConfig cfg;
    cfg.rounds = 100;
    SimWorld w = deploy(cfg);
    const SimTrace t = run(w, cfg, benign_traffic(), always(TrafficClass::Healthy));
    std::ostringstream out;
    write_trace_csv(out, t);
    const std::string csv = out.str();
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 101);
    CHECK(csv.rfind("round,total_energy,packets,detections,halted,deaths\n", 0) == 0);
    const auto s = summary_json(t);
    CHECK(s.at("halted") == 0);
    CHECK(s.at("lifetime") == 101);
    CHECK(network_config_from_json(to_json(cfg)).rounds == 100);
    CHECK(radio_params_from_json(to_json(RadioParams{})).eps_mp == RadioParams{}.eps_mp);
}
