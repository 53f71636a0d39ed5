#include <fstream>

#include "drlids/cli/cli.hpp"
#include "drlids/common/error.hpp"
#include "drlids/common/rng.hpp"

namespace drlids::cli {

using nlohmann::json;

namespace {

constexpr std::uint64_t kSplitStream = 101;
constexpr std::uint64_t kPipelineStream = 102;
constexpr std::uint64_t kNetworkStream = 103;

json separable_to_json(const data::SeparableSpec& s) {
    return {{"rows", s.rows}, {"features", s.features}, {"informative", s.informative}, {"margin", s.margin},
            {"seed", s.seed}};
}

data::SeparableSpec separable_from_json(const json& j, data::SeparableSpec s) {
    s.rows = j.value("rows", s.rows);
    s.features = j.value("features", s.features);
    s.informative = j.value("informative", s.informative);
    s.margin = j.value("margin", s.margin);
    s.seed = j.value("seed", s.seed);
    return s;
}

json bot_iot_to_json(const data::BotIotSpec& s) {
    return {{"rows", s.rows}, {"attack_fraction", s.attack_fraction}, {"attack_categories", s.attack_categories},
            {"missing_rate", s.missing_rate}, {"seed", s.seed}};
}

data::BotIotSpec bot_iot_from_json(const json& j, data::BotIotSpec s) {
    s.rows = j.value("rows", s.rows);
    s.attack_fraction = j.value("attack_fraction", s.attack_fraction);
    if (j.contains("attack_categories")) s.attack_categories = j.at("attack_categories").get<std::map<std::string, double>>();
    s.missing_rate = j.value("missing_rate", s.missing_rate);
    s.seed = j.value("seed", s.seed);
    return s;
}

json dataset_to_json(const DatasetConfig& d) {
    return {{"source", d.source},
            {"path", d.path.generic_string()},
            {"schema", d.schema},
            {"label_column", d.label_column},
            {"category_column", d.category_column ? json(*d.category_column) : json(nullptr)},
            {"generator", d.generator},
            {"separable", separable_to_json(d.separable)},
            {"bot_iot", bot_iot_to_json(d.bot_iot)},
            {"label_map", d.label_map},
            {"train_fraction", d.train_fraction}};
}

DatasetConfig dataset_from_json(const json& j) {
    DatasetConfig d;
    d.source = j.value("source", d.source);
    if (d.source != "csv" && d.source != "synthetic") throw ConfigError("dataset.source must be csv or synthetic");
    d.path = j.value("path", std::string());
    d.schema = j.value("schema", d.schema);
    if (d.schema != "bot_iot" && d.schema != "infer") throw ConfigError("dataset.schema must be bot_iot or infer");
    d.label_column = j.value("label_column", d.label_column);
    if (j.contains("category_column") && !j.at("category_column").is_null()) {
        d.category_column = j.at("category_column").get<std::string>();
    }
    d.generator = j.value("generator", d.generator);
    if (d.generator != "separable" && d.generator != "bot_iot") {
        throw ConfigError("dataset.generator must be separable or bot_iot");
    }
    if (j.contains("separable")) d.separable = separable_from_json(j.at("separable"), d.separable);
    if (j.contains("bot_iot")) d.bot_iot = bot_iot_from_json(j.at("bot_iot"), d.bot_iot);
    if (j.contains("label_map")) d.label_map = j.at("label_map").get<std::map<std::string, std::string>>();
    d.train_fraction = j.value("train_fraction", d.train_fraction);
    if (!(d.train_fraction > 0 && d.train_fraction < 1)) throw ConfigError("dataset.train_fraction must lie in (0, 1)");
    return d;
}

}  // namespace

std::uint64_t RunConfig::split_seed() const { return derive_seed(seed, kSplitStream); }
std::uint64_t RunConfig::pipeline_seed() const { return derive_seed(seed, kPipelineStream); }
std::uint64_t RunConfig::network_seed() const { return derive_seed(seed, kNetworkStream); }

void apply_override(json& config, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("--set expects KEY=VALUE, got '" + assignment + "'");
    const std::string key = assignment.substr(0, eq);
    const std::string raw = assignment.substr(eq + 1);
    json value = json::parse(raw, nullptr, false);
    if (value.is_discarded()) value = raw;

    json* node = &config;
    std::size_t start = 0;
    while (true) {
        const auto dot = key.find('.', start);
        const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        if (part.empty()) throw ConfigError("--set key has an empty segment: '" + key + "'");
        if (!node->is_object()) throw ConfigError("--set key '" + key + "' descends into a non-object");
        if (dot == std::string::npos) {
            (*node)[part] = value;
            return;
        }
        node = &(*node)[part];
        if (node->is_null()) *node = json::object();
        start = dot + 1;
    }
}

RunConfig run_config_from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    const int version = j.value("format_version", kConfigFormatVersion);
    if (version != kConfigFormatVersion) throw ConfigError("unsupported config format_version " + std::to_string(version));
    try {
        RunConfig c;
        c.seed = j.value("seed", c.seed);
        c.out_dir = j.value("out_dir", c.out_dir.generic_string());
        if (j.contains("dataset")) c.dataset = dataset_from_json(j.at("dataset"));
        if (j.contains("pipeline")) c.pipeline = pipeline::pipeline_config_from_json(j.at("pipeline"));
        if (j.contains("network")) c.network = netsim::network_config_from_json(j.at("network"));
        if (j.contains("radio")) c.radio = netsim::radio_params_from_json(j.at("radio"));
        if (j.contains("scenario")) {
            const auto& sc = j.at("scenario");
            c.scenario_attack_fraction = sc.value("attack_fraction", c.scenario_attack_fraction);
            c.scenario_traffic_split = sc.value("traffic_split", c.scenario_traffic_split);
        }
        if (c.scenario_traffic_split != "test" && c.scenario_traffic_split != "train" && c.scenario_traffic_split != "all") {
            throw ConfigError("scenario.traffic_split must be test, train or all");
        }
        if (!(c.scenario_attack_fraction >= 0 && c.scenario_attack_fraction <= 1)) {
            throw ConfigError("scenario.attack_fraction must lie in [0, 1]");
        }
        c.pipeline.seed = c.pipeline_seed();
        c.network.seed = c.network_seed();
        return c;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
}

json to_json(const RunConfig& c) {
    json pipeline = pipeline::to_json(c.pipeline);
    pipeline.erase("seed");
    json network = netsim::to_json(c.network);
    network.erase("seed");
    return {{"format_version", kConfigFormatVersion},
            {"seed", c.seed},
            {"out_dir", c.out_dir.generic_string()},
            {"dataset", dataset_to_json(c.dataset)},
            {"pipeline", pipeline},
            {"network", network},
            {"radio", netsim::to_json(c.radio)},
            {"scenario", {{"attack_fraction", c.scenario_attack_fraction}, {"traffic_split", c.scenario_traffic_split}}}};
}

json load_config_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config " + path.string());
    json j = json::parse(in, nullptr, false, true);
    if (j.is_discarded()) throw ConfigError("config " + path.string() + " is not valid JSON");
    return j;
}

json to_json(const data::FeatureSchema& s) {
    json cols = json::array();
    for (const auto& c : s.columns) {
        cols.push_back({{"name", c.name}, {"kind", c.kind == data::ColumnKind::Numeric ? "numeric" : "categorical"}});
    }
    return {{"columns", cols},
            {"label_column", s.label_column},
            {"category_column", s.category_column ? json(*s.category_column) : json(nullptr)},
            {"ignored_columns", s.ignored_columns}};
}

data::FeatureSchema feature_schema_from_json(const json& j) {
    data::FeatureSchema s;
    for (const auto& c : j.at("columns")) {
        const auto kind = c.at("kind").get<std::string>();
        if (kind != "numeric" && kind != "categorical") throw SchemaError("unknown column kind '" + kind + "'");
        s.columns.push_back({c.at("name").get<std::string>(),
                             kind == "numeric" ? data::ColumnKind::Numeric : data::ColumnKind::Categorical});
    }
    s.label_column = j.at("label_column").get<std::string>();
    if (!j.at("category_column").is_null()) s.category_column = j.at("category_column").get<std::string>();
    s.ignored_columns = j.value("ignored_columns", std::vector<std::string>{});
    s.validate();
    return s;
}

}  // namespace drlids::cli
