#include <algorithm>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"

#include "drlids/cli/cli.hpp"
#include "drlids/common/error.hpp"
#include "drlids/common/text.hpp"
#include "drlids/data/csv.hpp"
#include "drlids/data/labels.hpp"
#include "drlids/data/preprocess.hpp"
#include "drlids/data/split.hpp"

namespace drlids::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kTrafficStream = 7;

const char* const kDatasetFile = "dataset.csv";
const char* const kSchemaFile = "dataset_schema.json";
const char* const kSummaryFile = "ingest_summary.json";
const char* const kPreprocessedFile = "preprocessed.csv";
const char* const kModelFile = "model.json";
const char* const kMetricsFile = "metrics.json";
const char* const kMetricsCsvFile = "metrics.csv";
const char* const kEvaluationFile = "evaluation.json";
const char* const kTraceFile = "trace.csv";
const char* const kSimSummaryFile = "sim_summary.json";
const char* const kEventsFile = "events.csv";
const char* const kReportText = "report.txt";
const char* const kReportJson = "report.json";

const char* const kPercentNote =
    "accuracy, sensitivity and specificity are percentages (ratios x 100); Suspicious predictions count as positive";

void write_text(const fs::path& path, const std::string& text) {
    fs::create_directories(path.parent_path().empty() ? fs::path(".") : path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ArtifactError("cannot write " + path.string());
    out << text;
}

void write_json(const fs::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

json read_json(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ArtifactError("missing artifact " + path.string());
    json j = json::parse(in, nullptr, false);
    if (j.is_discarded()) throw ArtifactError(path.string() + " is not valid JSON");
    return j;
}

data::LabelTable label_table(const RunConfig& cfg) {
    data::LabelTable table = data::default_label_table();
    for (const auto& [raw, cls] : cfg.dataset.label_map) {
        const auto parsed = parse_traffic_class(cls);
        if (!parsed) throw ConfigError("dataset.label_map: unknown class '" + cls + "' for '" + raw + "'");
        table[raw] = *parsed;
    }
    return table;
}

data::Dataset load_raw(const RunConfig& cfg) {
    const auto& d = cfg.dataset;
    if (d.source == "synthetic") {
        return d.generator == "separable" ? data::make_separable(d.separable) : data::make_bot_iot_like(d.bot_iot);
    }
    if (d.path.empty()) throw ConfigError("dataset.path is required when dataset.source is csv");
    if (!fs::exists(d.path)) throw ParseError("dataset file not found: " + d.path.string());
    const data::FeatureSchema schema = d.schema == "bot_iot"
                                           ? data::FeatureSchema::bot_iot()
                                           : data::infer_schema(d.path, d.label_column, d.category_column);
    return data::load_csv(d.path, schema);
}

/// Labeled dataset from the ingest artifacts in out_dir.
data::Dataset load_ingested(const RunConfig& cfg) {
    const fs::path csv = cfg.out_dir / kDatasetFile;
    const fs::path schema_path = cfg.out_dir / kSchemaFile;
    if (!fs::exists(csv) || !fs::exists(schema_path)) {
        throw ArtifactError("ingest artifacts not found in " + cfg.out_dir.string() + " (run ingest first)");
    }
    const data::FeatureSchema schema = feature_schema_from_json(read_json(schema_path));
    return data::encode_labels(data::load_csv(csv, schema), label_table(cfg));
}

std::pair<data::Dataset, data::Dataset> train_test(const RunConfig& cfg) {
    return data::split(load_ingested(cfg), cfg.dataset.train_fraction, cfg.split_seed());
}

pipeline::IdsModel load_model_artifact(const RunConfig& cfg) {
    return pipeline::load_model(cfg.out_dir / kModelFile);
}

std::string pct(const json& v) {
    if (v.is_null()) return "n/a";
    std::ostringstream s;
    s << std::fixed << std::setprecision(4) << v.get<double>();
    return s.str();
}

template <typename F>
int guarded(std::ostream& log, int code, const char* name, F&& body) {
    try {
        return body();
    } catch (const std::exception& e) {
        log << name << ": " << e.what() << '\n';
        return code;
    }
}

}  // namespace

int cmd_generate(const RunConfig& cfg, const fs::path& target, std::ostream& log) {
    return guarded(log, kUsageError, "generate", [&] {
        std::ostringstream text;
        if (cfg.dataset.generator == "bot_iot") {
            data::write_bot_iot_like_csv(cfg.dataset.bot_iot, text);
        } else {
            data::write_csv(data::make_separable(cfg.dataset.separable), text);
        }
        write_text(target, text.str());
        log << "generate: wrote " << target.string() << '\n';
        return int{kOk};
    });
}

int cmd_ingest(const RunConfig& cfg, std::ostream& log) {
    return guarded(log, kIngestError, "ingest", [&] {
        const data::Dataset encoded = data::encode_labels(load_raw(cfg), label_table(cfg));
        std::ostringstream raw_csv, pre_csv;
        data::write_csv(encoded, raw_csv);
        data::write_csv(data::preprocess(encoded, cfg.pipeline.preprocess), pre_csv);

        std::map<std::string, std::size_t> balance{{"Healthy", 0}, {"Intrusion", 0}};
        std::map<std::string, std::size_t> categories;
        for (const auto& l : encoded.labels()) {
            ++balance[std::string(to_string(l.value))];
            if (l.category) ++categories[*l.category];
        }
        const json summary{{"rows", encoded.size()},
                           {"features", encoded.dimension()},
                           {"class_balance", balance},
                           {"attack_categories", categories},
                           {"missing_cells", encoded.missing_count()},
                           {"source", cfg.dataset.source == "csv" ? cfg.dataset.path.generic_string()
                                                                   : "synthetic:" + cfg.dataset.generator}};
        write_text(cfg.out_dir / kDatasetFile, raw_csv.str());
        write_text(cfg.out_dir / kPreprocessedFile, pre_csv.str());
        write_json(cfg.out_dir / kSchemaFile, to_json(encoded.schema()));
        write_json(cfg.out_dir / kSummaryFile, summary);
        log << "ingest: " << encoded.size() << " rows, " << balance["Intrusion"] << " intrusion, "
            << encoded.missing_count() << " missing cells\n";
        return int{kOk};
    });
}

int cmd_train(const RunConfig& cfg, std::ostream& log) {
    return guarded(log, kTrainError, "train", [&] {
        const auto [train_set, test_set] = train_test(cfg);
        const pipeline::IdsModel model = pipeline::train(train_set, cfg.pipeline);
        pipeline::save_model(model, cfg.out_dir / kModelFile);
        const auto train_metrics = pipeline::evaluate(model, train_set);
        json metrics{{"note", kPercentNote},
                     {"train", pipeline::to_json(train_metrics)},
                     {"final_mean_reward", model.final_mean_reward},
                     {"selected_features", model.selected}};
        std::string csv = pipeline::metrics_csv_header() + "\n" + pipeline::metrics_csv_row("train", train_metrics) + "\n";
        if (!test_set.empty()) {
            const auto test_metrics = pipeline::evaluate(model, test_set);
            metrics["test"] = pipeline::to_json(test_metrics);
            csv += pipeline::metrics_csv_row("test", test_metrics) + "\n";
            log << "train: test accuracy " << format_double(test_metrics.accuracy) << "%\n";
        }
        write_json(cfg.out_dir / kMetricsFile, metrics);
        write_text(cfg.out_dir / kMetricsCsvFile, csv);
        return int{kOk};
    });
}

int cmd_evaluate(const RunConfig& cfg, std::ostream& log) {
    return guarded(log, kTrainError, "evaluate", [&] {
        const pipeline::IdsModel model = load_model_artifact(cfg);
        const auto [train_set, test_set] = train_test(cfg);
        const auto report = pipeline::evaluate(model, test_set);
        write_json(cfg.out_dir / kEvaluationFile, {{"note", kPercentNote}, {"test", pipeline::to_json(report)}});
        log << "evaluate: accuracy " << format_double(report.accuracy) << "%, mse " << format_double(report.mse) << '\n';
        return int{kOk};
    });
}

int cmd_simulate(const RunConfig& cfg, std::ostream& log) {
    return guarded(log, kSimulateError, "simulate", [&] {
        const pipeline::IdsModel model = load_model_artifact(cfg);
        data::Dataset traffic_set;
        if (cfg.scenario_traffic_split == "all") {
            traffic_set = load_ingested(cfg);
        } else {
            auto [train_set, test_set] = train_test(cfg);
            traffic_set = cfg.scenario_traffic_split == "train" || test_set.empty() ? std::move(train_set)
                                                                                     : std::move(test_set);
        }
        netsim::SimWorld world = netsim::deploy(cfg.network, cfg.radio);
        netsim::DatasetSampler sampler(traffic_set, cfg.scenario_attack_fraction,
                                       derive_seed(cfg.network_seed(), kTrafficStream));
        const netsim::TrafficSampler traffic = [&sampler] { return sampler(); };
        const netsim::Detector ids = [&model](const netsim::TrafficSample& s) {
            return pipeline::classify(model, s.cells, s.missing).cls;
        };
        const netsim::SimTrace trace = netsim::run(world, cfg.network, traffic, ids);
        std::ostringstream csv, events;
        netsim::write_trace_csv(csv, trace);
        events << "round,source,record,decision,truth,halted\n";
        for (const auto& e : world.events) {
            events << e.round << ',' << e.source << ',' << e.record << ',' << to_string(e.decision) << ','
                   << (e.truth_intrusion ? "Intrusion" : "Healthy") << ',' << (e.halted ? 1 : 0) << '\n';
        }
        json summary = netsim::summary_json(trace);
        summary["attack_fraction"] = cfg.scenario_attack_fraction;
        summary["traffic_split"] = cfg.scenario_traffic_split;
        summary["nodes"] = cfg.network.n_nodes;
        write_text(cfg.out_dir / kTraceFile, csv.str());
        write_text(cfg.out_dir / kEventsFile, events.str());
        write_json(cfg.out_dir / kSimSummaryFile, summary);
        log << "simulate: lifetime " << trace.lifetime << ", detections " << trace.detections << ", halted "
            << trace.halted << '\n';
        return int{kOk};
    });
}

int cmd_report(const RunConfig& cfg, std::ostream& log) {
    return guarded(log, kReportError, "report", [&] {
        const json metrics = read_json(cfg.out_dir / kMetricsFile);
        const json sim = read_json(cfg.out_dir / kSimSummaryFile);
        const json& scored = metrics.contains("test") ? metrics.at("test") : metrics.at("train");
        const std::string split_name = metrics.contains("test") ? "test" : "train";

        std::ostringstream text;
        text << "DRL-XGBoost intrusion detection report\n"
             << "Note: " << kPercentNote << ".\n\n"
             << std::left << std::setw(14) << "method" << std::setw(10) << "split" << std::setw(14) << "accuracy"
             << std::setw(14) << "sensitivity" << std::setw(14) << "specificity" << "mse\n"
             << std::setw(14) << "DRL-XGBoost" << std::setw(10) << split_name << std::setw(14)
             << pct(scored.at("accuracy_pct")) << std::setw(14) << pct(scored.at("sensitivity_pct")) << std::setw(14)
             << pct(scored.at("specificity_pct")) << format_double(scored.at("mse").get<double>()) << "\n\n"
             << "Network simulation\n"
             << "  rounds           " << sim.at("rounds").get<std::size_t>() << '\n'
             << "  lifetime         " << sim.at("lifetime").get<std::size_t>() << '\n'
             << "  packets          " << sim.at("packets").get<std::size_t>() << '\n'
             << "  detections       " << sim.at("detections").get<std::size_t>() << '\n'
             << "  halted           " << sim.at("halted").get<std::size_t>() << '\n'
             << "  consumed energy  " << format_double(sim.at("consumed_energy").get<double>()) << " J\n";
        const json report{{"method", "DRL-XGBoost"},
                          {"split", split_name},
                          {"accuracy_pct", scored.at("accuracy_pct")},
                          {"sensitivity_pct", scored.at("sensitivity_pct")},
                          {"specificity_pct", scored.at("specificity_pct")},
                          {"mse", scored.at("mse")},
                          {"lifetime", sim.at("lifetime")},
                          {"detections", sim.at("detections")},
                          {"halted", sim.at("halted")},
                          {"note", kPercentNote},
                          {"simulation", sim}};
        write_text(cfg.out_dir / kReportText, text.str());
        write_json(cfg.out_dir / kReportJson, report);
        log << text.str();
        return int{kOk};
    });
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Intrusion detection with boosted features and a policy-gradient classifier"};
    app.name("drlids");
    app.require_subcommand(1);
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out_dir;
    std::vector<std::string> overrides;
    app.add_option("--config", config_path, "JSON run config");
    app.add_option("--seed", seed, "Override the run seed");
    app.add_option("--out", out_dir, "Override the output directory");
    app.add_option("--set", overrides, "Override a config key: dotted.key=value")->take_all()->expected(1);

    std::string target;
    auto* generate = app.add_subcommand("generate", "Write the synthetic dataset as CSV");
    generate->add_option("target", target, "Output CSV path")->required();
    app.add_subcommand("config", "Print the resolved run config as JSON");
    app.add_subcommand("ingest", "Load, label and preprocess the dataset; write a summary");
    app.add_subcommand("train", "Train the detector and write the model and metrics");
    app.add_subcommand("evaluate", "Score the saved model on the test split");
    app.add_subcommand("simulate", "Run the network simulation with the saved detector");
    app.add_subcommand("report", "Merge metrics and simulation results into one report");
    for (auto* sub : app.get_subcommands({})) sub->fallthrough();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsageError;
    }

    RunConfig cfg;
    try {
        json j = config_path.empty() ? json::object() : load_config_json(config_path);
        for (const auto& o : overrides) apply_override(j, o);
        if (seed) j["seed"] = *seed;
        if (!out_dir.empty()) j["out_dir"] = out_dir;
        cfg = run_config_from_json(j);
    } catch (const std::exception& e) {
        err << "config: " << e.what() << '\n';
        return kUsageError;
    }

    const std::string name = app.get_subcommands().front()->get_name();
    if (name == "config") {
        out << to_json(cfg).dump(2) << '\n';
        return kOk;
    }
    if (name == "generate") return cmd_generate(cfg, target, err);
    if (name == "ingest") return cmd_ingest(cfg, out);
    if (name == "train") return cmd_train(cfg, out);
    if (name == "evaluate") return cmd_evaluate(cfg, out);
    if (name == "simulate") return cmd_simulate(cfg, out);
    return cmd_report(cfg, out);
}

}  // namespace drlids::cli
