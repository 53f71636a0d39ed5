#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "drlids/data/dataset.hpp"
#include "drlids/data/synthetic.hpp"
#include "drlids/netsim/netsim.hpp"
#include "drlids/pipeline/pipeline.hpp"

namespace drlids::cli {

inline constexpr int kConfigFormatVersion = 1;

/// Exit codes, one per failure family.
enum ExitCode : int {
    kOk = 0,
    kUsageError = 1,
    kIngestError = 2,
    kTrainError = 3,
    kSimulateError = 4,
    kReportError = 5,
};

struct DatasetConfig {
    std::string source = "synthetic";  ///< "csv" or "synthetic"
    std::filesystem::path path;        ///< CSV input when source is "csv"
    std::string schema = "bot_iot";    ///< "bot_iot" or "infer"
    std::string label_column = "label";
    std::optional<std::string> category_column;
    std::string generator = "separable";  ///< "separable" or "bot_iot"
    data::SeparableSpec separable;
    data::BotIotSpec bot_iot;
    /// Extra raw-value mappings layered over the default label table.
    std::map<std::string, std::string> label_map;
    double train_fraction = 0.8;
};

struct RunConfig {
    DatasetConfig dataset;
    pipeline::PipelineConfig pipeline;
    netsim::NetworkConfig network;
    netsim::RadioParams radio;
    double scenario_attack_fraction = 0.1;  ///< share of emitted packets drawn from attack records
    std::string scenario_traffic_split = "test";  ///< records packets carry: "test", "train" or "all"
    std::filesystem::path out_dir = "out";
    std::uint64_t seed = 42;

    /// Seeds of the split, pipeline and network streams, all derived from `seed`.
    std::uint64_t split_seed() const;
    std::uint64_t pipeline_seed() const;
    std::uint64_t network_seed() const;
};

/// Applies one dotted KEY=VALUE override; VALUE is read as JSON, else as a string.
void apply_override(nlohmann::json& config, const std::string& assignment);

/// Throws ConfigError on a bad format_version or invalid section.
RunConfig run_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const RunConfig& c);
nlohmann::json load_config_json(const std::filesystem::path& path);

nlohmann::json to_json(const data::FeatureSchema& s);
data::FeatureSchema feature_schema_from_json(const nlohmann::json& j);

int cmd_generate(const RunConfig& cfg, const std::filesystem::path& target, std::ostream& log);
int cmd_ingest(const RunConfig& cfg, std::ostream& log);
int cmd_train(const RunConfig& cfg, std::ostream& log);
int cmd_evaluate(const RunConfig& cfg, std::ostream& log);
int cmd_simulate(const RunConfig& cfg, std::ostream& log);
int cmd_report(const RunConfig& cfg, std::ostream& log);

/// Full command line without the program name, e.g. {"train", "--config", "run.json"}.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace drlids::cli
