#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <vector>

#include "json.hpp"

#include "drlids/common/classes.hpp"
#include "drlids/common/rng.hpp"
#include "drlids/data/dataset.hpp"

namespace drlids::netsim {

struct NetworkConfig {
    double field_x = 100.0;  ///< meters
    double field_y = 100.0;
    std::size_t n_nodes = 200;
    double node_energy = 0.5;         ///< joules per node
    double distribution_rate = 0.05;  ///< per-node per-round emission probability
    double radio_range = 60.0;
    std::size_t packet_bits = 4000;
    std::size_t rounds = 500;
    double base_energy = 20.0;  ///< base-station receive/aggregate budget
    std::uint64_t seed = 1;

    void validate() const;
};

/// First-order radio constants, per bit.
struct RadioParams {
    double e_elec = 50e-9;
    double eps_fs = 10e-12;
    double eps_mp = 0.0013e-12;
    double e_da = 5e-9;
    double alpha = 2.0;  ///< path-loss exponent below d0
    double xi = 4.0;     ///< path-loss exponent at or above d0

    /// Crossover distance sqrt(eps_fs / eps_mp).
    double d0() const;
    void validate() const;
};

double tx_energy(std::size_t bits, double distance, const RadioParams& radio);
double rx_energy(std::size_t bits, const RadioParams& radio);
double agg_energy(std::size_t bits, const RadioParams& radio);

struct Point {
    double x = 0.0;
    double y = 0.0;
    friend bool operator==(const Point&, const Point&) = default;
};

double distance(Point a, Point b);

struct Node {
    Point position;
    double energy = 0.0;
    bool alive = true;
    friend bool operator==(const Node&, const Node&) = default;
};

inline constexpr long kBaseStationAccount = -1;

/// One debit; amount is negative. account is a node index or kBaseStationAccount.
struct LedgerEntry {
    std::size_t round = 0;
    long account = 0;
    double amount = 0.0;
    friend bool operator==(const LedgerEntry&, const LedgerEntry&) = default;
};

struct Event {
    std::size_t round = 0;
    std::size_t source = 0;
    std::size_t record = 0;
    TrafficClass decision = TrafficClass::Healthy;
    bool truth_intrusion = false;
    bool halted = false;
    friend bool operator==(const Event&, const Event&) = default;
};

struct SimWorld {
    std::vector<Node> nodes;
    Point base;
    double base_energy = 0.0;
    RadioParams radio;
    std::vector<LedgerEntry> ledger;
    std::vector<Event> events;

    double node_energy_total() const;
    /// Nodes plus base station.
    double energy_total() const;
    std::size_t alive_count() const;
    double ledger_total() const;
};

/// Uniform placement from a stream derived from cfg.seed; base at the field center.
SimWorld deploy(const NetworkConfig& cfg, const RadioParams& radio = {});

/// Adjacency lists under the closed-ball rule d <= radio_range.
std::vector<std::vector<std::size_t>> neighbors(const SimWorld& world, double radio_range);

/// One flow record as carried by a packet, in raw (unpreprocessed) form.
struct TrafficSample {
    std::vector<data::Cell> cells;
    std::vector<std::uint8_t> missing;
    std::size_t record_index = 0;
    bool intrusion = false;
};

using TrafficSampler = std::function<TrafficSample()>;
using Detector = std::function<TrafficClass(const TrafficSample&)>;

/// Draws records from a labeled dataset: attack with probability
/// attack_fraction, then uniformly within the chosen pool.
class DatasetSampler {
public:
    DatasetSampler(const data::Dataset& dataset, double attack_fraction, std::uint64_t seed);
    TrafficSample operator()();

private:
    const data::Dataset* dataset_;
    std::vector<std::size_t> benign_;
    std::vector<std::size_t> attack_;
    double attack_fraction_;
    Rng rng_;
};

struct RoundReport {
    std::size_t round = 0;  ///< 1-based
    double total_energy = 0.0;  ///< remaining node energy after the round
    double base_energy = 0.0;
    std::size_t packets = 0;
    std::size_t detections = 0;  ///< non-Healthy decisions
    std::size_t halted = 0;      ///< Intrusion decisions
    std::size_t deaths = 0;
    friend bool operator==(const RoundReport&, const RoundReport&) = default;
};

/// Throws AllNodesDead when no node is alive. rng only drives the emission draws.
RoundReport step_round(SimWorld& world, const NetworkConfig& cfg, std::size_t round, const TrafficSampler& traffic,
                       const Detector& ids, Rng& rng);

struct SimTrace {
    std::vector<RoundReport> rounds;
    std::size_t lifetime = 0;  ///< first round with a death, else rounds + 1
    double initial_energy = 0.0;
    double final_energy = 0.0;
    std::size_t packets = 0;
    std::size_t detections = 0;
    std::size_t halted = 0;
    std::size_t deaths = 0;
    double mean_degree = 0.0;
    friend bool operator==(const SimTrace&, const SimTrace&) = default;
};

/// Runs cfg.rounds rounds; rounds after every node has died are recorded idle.
SimTrace run(SimWorld& world, const NetworkConfig& cfg, const TrafficSampler& traffic, const Detector& ids);

void write_trace_csv(std::ostream& out, const SimTrace& trace);
nlohmann::json summary_json(const SimTrace& trace);

nlohmann::json to_json(const NetworkConfig& cfg);
NetworkConfig network_config_from_json(const nlohmann::json& j, NetworkConfig defaults = {});
nlohmann::json to_json(const RadioParams& radio);
RadioParams radio_params_from_json(const nlohmann::json& j, RadioParams defaults = {});

}  // namespace drlids::netsim
