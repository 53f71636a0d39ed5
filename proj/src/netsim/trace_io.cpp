#include <ostream>

#include "drlids/common/text.hpp"
#include "drlids/netsim/netsim.hpp"

namespace drlids::netsim {

using nlohmann::json;

void write_trace_csv(std::ostream& out, const SimTrace& trace) {
    out << "round,total_energy,packets,detections,halted,deaths\n";
    for (const auto& r : trace.rounds) {
        out << r.round << ',' << format_double(r.total_energy) << ',' << r.packets << ',' << r.detections << ','
            << r.halted << ',' << r.deaths << '\n';
    }
}

json summary_json(const SimTrace& trace) {
    return {{"rounds", trace.rounds.size()},
            {"lifetime", trace.lifetime},
            {"initial_energy", trace.initial_energy},
            {"final_energy", trace.final_energy},
            {"consumed_energy", trace.initial_energy - trace.final_energy},
            {"packets", trace.packets},
            {"detections", trace.detections},
            {"halted", trace.halted},
            {"deaths", trace.deaths},
            {"mean_degree", trace.mean_degree}};
}

json to_json(const NetworkConfig& c) {
    return {{"field_x", c.field_x},         {"field_y", c.field_y},
            {"n_nodes", c.n_nodes},         {"node_energy", c.node_energy},
            {"distribution_rate", c.distribution_rate}, {"radio_range", c.radio_range},
            {"packet_bits", c.packet_bits}, {"rounds", c.rounds},
            {"base_energy", c.base_energy}, {"seed", c.seed}};
}

NetworkConfig network_config_from_json(const json& j, NetworkConfig c) {
    c.field_x = j.value("field_x", c.field_x);
    c.field_y = j.value("field_y", c.field_y);
    c.n_nodes = j.value("n_nodes", c.n_nodes);
    c.node_energy = j.value("node_energy", c.node_energy);
    c.distribution_rate = j.value("distribution_rate", c.distribution_rate);
    c.radio_range = j.value("radio_range", c.radio_range);
    c.packet_bits = j.value("packet_bits", c.packet_bits);
    c.rounds = j.value("rounds", c.rounds);
    c.base_energy = j.value("base_energy", c.base_energy);
    c.seed = j.value("seed", c.seed);
    c.validate();
    return c;
}

json to_json(const RadioParams& r) {
    return {{"e_elec", r.e_elec}, {"eps_fs", r.eps_fs}, {"eps_mp", r.eps_mp},
            {"e_da", r.e_da},     {"alpha", r.alpha},   {"xi", r.xi}};
}

RadioParams radio_params_from_json(const json& j, RadioParams r) {
    r.e_elec = j.value("e_elec", r.e_elec);
    r.eps_fs = j.value("eps_fs", r.eps_fs);
    r.eps_mp = j.value("eps_mp", r.eps_mp);
    r.e_da = j.value("e_da", r.e_da);
    r.alpha = j.value("alpha", r.alpha);
    r.xi = j.value("xi", r.xi);
    r.validate();
    return r;
}

}  // namespace drlids::netsim
