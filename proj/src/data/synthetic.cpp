#include "drlids/data/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "drlids/common/error.hpp"
#include "drlids/common/rng.hpp"
#include "drlids/common/text.hpp"
#include "drlids/data/csv.hpp"

namespace drlids::data {

namespace {

double hyperplane_weight(std::size_t i) { return i % 2 == 0 ? 1.0 : -1.0; }

double hyperplane_offset(std::size_t informative) {
    double s = 0.0;
    for (std::size_t i = 0; i < informative; ++i) s += hyperplane_weight(i);
    return 0.5 * s;
}

double hyperplane_value(std::span<const double> x, std::size_t informative) {
    double v = -hyperplane_offset(informative);
    for (std::size_t i = 0; i < informative; ++i) v += hyperplane_weight(i) * x[i];
    return v;
}

}  // namespace

int separable_label(std::span<const double> features, std::size_t informative) {
    if (features.size() < informative) throw DimensionMismatch("record shorter than informative feature count");
    return hyperplane_value(features, informative) > 0.0 ? 1 : 0;
}

Dataset make_separable(const SeparableSpec& spec) {
    if (spec.informative == 0 || spec.informative > spec.features) {
        throw ConfigError("informative feature count must be in [1, features]");
    }
    FeatureSchema schema;
    for (std::size_t j = 0; j < spec.features; ++j) schema.columns.push_back({"f" + std::to_string(j), ColumnKind::Numeric});
    schema.columns.push_back({"label", ColumnKind::Numeric});
    schema.label_column = "label";

    Dataset out(schema);
    Rng rng(spec.seed);
    std::vector<double> x(spec.features);
    for (std::size_t r = 0; r < spec.rows; ++r) {
        do {
            for (auto& v : x) v = rng.uniform01();
        } while (std::abs(hyperplane_value(x, spec.informative)) < spec.margin);
        std::vector<Cell> cells(x.begin(), x.end());
        out.add_row(std::move(cells), {}, std::to_string(separable_label(x, spec.informative)));
    }
    return out;
}

std::size_t expected_attack_rows(const BotIotSpec& spec) {
    return static_cast<std::size_t>(std::llround(static_cast<double>(spec.rows) * spec.attack_fraction));
}

namespace {

// Largest-remainder apportionment of `total` rows over weighted categories.
std::vector<std::string> apportion(const std::map<std::string, double>& weights, std::size_t total) {
    double sum = 0.0;
    for (const auto& [_, w] : weights) sum += w;
    if (weights.empty() || sum <= 0.0) throw ConfigError("attack category weights must be positive");
    std::vector<std::pair<std::string, std::size_t>> counts;
    std::vector<std::pair<double, std::size_t>> remainders;
    std::size_t assigned = 0;
    for (const auto& [name, w] : weights) {
        const double exact = static_cast<double>(total) * w / sum;
        const auto base = static_cast<std::size_t>(std::floor(exact));
        remainders.emplace_back(exact - static_cast<double>(base), counts.size());
        counts.emplace_back(name, base);
        assigned += base;
    }
    std::stable_sort(remainders.begin(), remainders.end(), [](auto a, auto b) { return a.first > b.first; });
    for (std::size_t i = 0; assigned < total; ++i, ++assigned) ++counts[remainders[i % remainders.size()].second].second;
    std::vector<std::string> out;
    for (const auto& [name, n] : counts) out.insert(out.end(), n, name);
    return out;
}

std::string pick(Rng& rng, std::initializer_list<const char*> options) {
    return *(options.begin() + static_cast<std::ptrdiff_t>(rng.uniform_index(options.size())));
}

}  // namespace

void write_bot_iot_like_csv(const BotIotSpec& spec, std::ostream& out) {
    if (!(spec.attack_fraction >= 0.0 && spec.attack_fraction <= 1.0)) {
        throw ConfigError("attack_fraction must lie in [0, 1]");
    }
    Rng rng(spec.seed);
    const std::size_t n_attack = expected_attack_rows(spec);
    std::vector<std::string> kinds = apportion(spec.attack_categories, n_attack);
    kinds.resize(spec.rows, "Normal");
    rng.shuffle(kinds);

    const auto schema = FeatureSchema::bot_iot();
    for (std::size_t i = 0; i < schema.columns.size(); ++i) out << (i ? "," : "") << schema.columns[i].name;
    out << '\n';

    auto num = [](double v) { return format_double(std::round(v * 1e6) / 1e6); };
    for (std::size_t r = 0; r < spec.rows; ++r) {
        const std::string& cat = kinds[r];
        const bool attack = cat != "Normal";
        std::vector<std::string> f;
        f.push_back(std::to_string(r + 1));
        std::string proto, sub;
        if (attack) {
            proto = rng.bernoulli(0.55) ? "udp" : (rng.bernoulli(0.9) ? "tcp" : "icmp");
            sub = cat == "Reconnaissance" ? "Service_Scanning" : (proto == "udp" ? "UDP" : (proto == "tcp" ? "TCP" : "HTTP"));
        } else {
            proto = rng.bernoulli(0.6) ? "tcp" : (rng.bernoulli(0.75) ? "udp" : "arp");
            sub = "Normal";
        }
        f.push_back(proto);
        f.push_back(attack ? "192.168.100." + std::to_string(147 + rng.uniform_index(4))
                           : "192.168.100." + std::to_string(1 + rng.uniform_index(10)));
        f.push_back(std::to_string(1024 + rng.uniform_index(64000)));
        f.push_back(attack ? (rng.bernoulli(0.8) ? "192.168.100.3" : "192.168.100.5")
                           : pick(rng, {"192.168.100.1", "8.8.8.8", "192.168.100.27", "205.251.197.106"}));
        f.push_back(attack ? (rng.bernoulli(0.7) ? "80" : pick(rng, {"21", "22", "8080"}))
                           : pick(rng, {"53", "443", "123", "80", "5353"}));
        f.push_back(std::to_string(1 + rng.uniform_index(262000)));
        // stddev, N_IN_Conn_P_SrcIP, min, state_number, mean, N_IN_Conn_P_DstIP, drate, srate, max
        const double stddev = attack ? std::abs(0.15 + 0.1 * rng.normal()) : std::abs(0.9 + 0.5 * rng.normal());
        const double mean = attack ? 2.0 + 0.8 * rng.normal() : 1.5 + 1.2 * rng.normal();
        const double mn = std::max(0.0, mean - 2.0 * stddev - rng.uniform01());
        const double mx = std::max(mn, mean) + 2.0 * stddev + rng.uniform01();
        f.push_back(num(stddev));
        f.push_back(std::to_string(attack ? 70 + rng.uniform_index(31) : 1 + rng.uniform_index(40)));
        f.push_back(num(mn));
        f.push_back(std::to_string(attack ? 1 + rng.uniform_index(4) : 1 + rng.uniform_index(11)));
        f.push_back(num(std::max(mn, mean)));
        f.push_back(std::to_string(attack ? 60 + rng.uniform_index(41) : 1 + rng.uniform_index(60)));
        f.push_back(num(attack ? 0.05 * rng.uniform01() : 2.5 * rng.uniform01()));
        f.push_back(num(attack ? 0.3 + 1.5 * rng.uniform01() : 0.6 * rng.uniform01()));
        f.push_back(num(mx));
        f.push_back(attack ? "1" : "0");
        f.push_back(cat);
        f.push_back(sub);

        for (std::size_t i = 0; i < f.size(); ++i) {
            // Feature columns only: never blank the row id or the label columns.
            const bool feature = i >= 1 && i <= 15;
            if (feature && spec.missing_rate > 0.0 && rng.bernoulli(spec.missing_rate)) f[i].clear();
            out << (i ? "," : "") << f[i];
        }
        out << '\n';
    }
}

Dataset make_bot_iot_like(const BotIotSpec& spec) {
    std::stringstream ss;
    write_bot_iot_like_csv(spec, ss);
    return read_csv(ss, FeatureSchema::bot_iot(), "<bot-iot-like>");
}

}  // namespace drlids::data
