#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"

#include "drlids/cli/cli.hpp"
#include "drlids/common/error.hpp"

using namespace drlids;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::path(DRLIDS_TEST_TMP) / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

nlohmann::json read_json(const fs::path& p) { return nlohmann::json::parse(slurp(p)); }

int run_cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    if (code != 0) {
        const std::string log = err.str() + out.str();
        MESSAGE(log);
    }
    return code;
}

std::vector<std::string> quick(const fs::path& out, std::vector<std::string> extra = {}) {
    std::vector<std::string> a{"--out",   out.string(), "--set", "dataset.separable.rows=600",
                               "--set",   "pipeline.drl_episodes=300", "--set", "pipeline.gbt.n_trees=30",
                               "--set",   "network.rounds=100"};
    a.insert(a.end(), extra.begin(), extra.end());
    return a;
}

std::vector<std::string> cmd(const std::string& name, std::vector<std::string> rest) {
    rest.insert(rest.begin(), name);
    return rest;
}

}  // namespace

TEST_CASE("overrides reach nested keys and parse JSON scalars") {
    nlohmann::json j = nlohmann::json::object();
    cli::apply_override(j, "network.rounds=7");
    cli::apply_override(j, "dataset.source=csv");
    cli::apply_override(j, "pipeline.drl.hidden=[4,2]");
    CHECK(j["network"]["rounds"] == 7);
    CHECK(j["dataset"]["source"] == "csv");
    CHECK(j["pipeline"]["drl"]["hidden"] == nlohmann::json::array({4, 2}));
    CHECK_THROWS_AS(cli::apply_override(j, "novalue"), ConfigError);
    CHECK_THROWS_AS(cli::apply_override(j, "network.rounds.x=1"), ConfigError);
}

TEST_CASE("run config round-trips and derives its seeds") {
    cli::RunConfig c = cli::run_config_from_json(nlohmann::json::object());
    const cli::RunConfig back = cli::run_config_from_json(cli::to_json(c));
    CHECK(cli::to_json(back) == cli::to_json(c));
    CHECK(c.pipeline.seed == c.pipeline_seed());
    CHECK(c.split_seed() != c.network_seed());
    CHECK_THROWS_AS(cli::run_config_from_json({{"format_version", 2}}), ConfigError);
    CHECK_THROWS_AS(cli::run_config_from_json({{"dataset", {{"source", "ftp"}}}}), ConfigError);
}

TEST_CASE("ingest reads a tiny CSV and summarizes it") {
    const fs::path dir = fresh_dir("ingest_tiny");
    std::ofstream(dir / "tiny.csv") << "a,b,label\n1,2,0\n3,,1\n5,6,0\n";
    const int code = run_cli({"ingest", "--out", (dir / "out").string(), "--set", "dataset.source=csv", "--set",
                              "dataset.schema=infer", "--set", "dataset.path=" + (dir / "tiny.csv").string()});
    REQUIRE(code == 0);
    const auto s = read_json(dir / "out" / "ingest_summary.json");
    CHECK(s["rows"] == 3);
    CHECK(s["missing_cells"] == 1);
    CHECK(s["class_balance"]["Intrusion"] == 1);
    CHECK(fs::exists(dir / "out" / "preprocessed.csv"));
}

TEST_CASE("ingest of the Bot-IoT-like generator reports its configured mix") {
    const fs::path dir = fresh_dir("ingest_botiot");
    REQUIRE(run_cli({"ingest", "--out", dir.string(), "--set", "dataset.generator=bot_iot", "--set",
                     "dataset.bot_iot.rows=400", "--set", "dataset.bot_iot.attack_fraction=0.25"}) == 0);
    const auto s = read_json(dir / "ingest_summary.json");
    CHECK(s["class_balance"]["Intrusion"] == 100);
    CHECK(s["class_balance"]["Healthy"] == 300);
    CHECK(s["attack_categories"]["DDoS"] == 40);
    CHECK(s["attack_categories"]["DoS"] == 40);
    CHECK(s["attack_categories"]["Reconnaissance"] == 20);
}

TEST_CASE("generate writes a CSV that ingest accepts") {
    const fs::path dir = fresh_dir("generate");
    REQUIRE(run_cli({"generate", (dir / "bot.csv").string(), "--set", "dataset.generator=bot_iot", "--set",
                     "dataset.bot_iot.rows=50"}) == 0);
    REQUIRE(run_cli({"ingest", "--out", dir.string(), "--set", "dataset.source=csv", "--set",
                     "dataset.path=" + (dir / "bot.csv").string()}) == 0);
    CHECK(read_json(dir / "ingest_summary.json")["rows"] == 50);
}

TEST_CASE("failure families map to distinct exit codes") {
    const fs::path dir = fresh_dir("failures");
    CHECK(run_cli({"ingest", "--out", dir.string(), "--set", "dataset.source=csv", "--set",
                   "dataset.path=" + (dir / "absent.csv").string()}) == cli::kIngestError);
    std::ofstream(dir / "bad.csv") << "a,label\nx1,0\n";
    CHECK(run_cli({"ingest", "--out", dir.string(), "--set", "dataset.source=csv", "--set", "dataset.schema=bot_iot",
                   "--set", "dataset.path=" + (dir / "bad.csv").string()}) == cli::kIngestError);
    CHECK(run_cli({"train", "--out", dir.string()}) == cli::kTrainError);
    CHECK(run_cli({"evaluate", "--out", dir.string()}) == cli::kTrainError);
    CHECK(run_cli({"simulate", "--out", dir.string()}) == cli::kSimulateError);
    CHECK(run_cli({"report", "--out", dir.string()}) == cli::kReportError);
    CHECK(run_cli({"bogus"}) == cli::kUsageError);
    CHECK(run_cli({"train", "--config", (dir / "none.json").string()}) == cli::kUsageError);
    CHECK(run_cli({"train", "--set", "network.rounds=0"}) == cli::kUsageError);
}

TEST_CASE("full command flow is reproducible byte for byte") {
    const fs::path a = fresh_dir("flow_a"), b = fresh_dir("flow_b");
    for (const auto& dir : {a, b}) {
        for (const char* c : {"ingest", "train", "evaluate", "simulate", "report"}) {
            REQUIRE(run_cli(cmd(c, quick(dir))) == 0);
        }
    }
    for (const char* f : {"dataset.csv", "model.json", "metrics.json", "metrics.csv", "evaluation.json", "trace.csv",
                          "sim_summary.json", "report.txt", "report.json"}) {
        CHECK_MESSAGE(slurp(a / f) == slurp(b / f), f);
    }
    const auto metrics = read_json(a / "metrics.json");
    CHECK(metrics["test"]["accuracy_pct"].get<double>() >= 95.0);

    const std::string trace = slurp(a / "trace.csv");
    CHECK(std::count(trace.begin(), trace.end(), '\n') == 101);

    const std::string report = slurp(a / "report.txt");
    for (const char* word : {"accuracy", "sensitivity", "specificity", "mse", "lifetime"}) {
        CHECK(report.find(word) != std::string::npos);
    }
    const std::string first = slurp(a / "report.json");
    REQUIRE(run_cli(cmd("report", quick(a))) == 0);
    CHECK(slurp(a / "report.json") == first);

    // with benign-only traffic every halt is a false positive of the detector
    REQUIRE(run_cli(cmd("simulate", quick(a, {"--set", "scenario.attack_fraction=0"}))) == 0);
    std::istringstream events(slurp(a / "events.csv"));
    std::string line;
    std::getline(events, line);
    std::size_t false_alarms = 0;
    while (std::getline(events, line)) {
        CHECK(line.find(",Healthy,") != std::string::npos);
        false_alarms += line.find(",Intrusion,Healthy,1") != std::string::npos ? 1 : 0;
    }
    CHECK(read_json(a / "sim_summary.json")["halted"] == false_alarms);

    // the training split is classified without false alarms, so nothing halts
    REQUIRE(metrics["train"]["specificity_pct"] == 100.0);
    REQUIRE(run_cli(cmd("simulate", quick(a, {"--set", "scenario.attack_fraction=0", "--set",
                                              "scenario.traffic_split=train"}))) == 0);
    CHECK(read_json(a / "sim_summary.json")["halted"] == 0);

    REQUIRE(run_cli(cmd("train", quick(a, {"--seed", "5"}))) == 0);
    CHECK(slurp(a / "model.json") != slurp(b / "model.json"));
}

TEST_CASE("config file is honored and flags override it") {
    const fs::path dir = fresh_dir("config");
    std::ofstream(dir / "run.json") << R"({"format_version": 1, "seed": 9, "out_dir": "ignored",
        "dataset": {"separable": {"rows": 300}}})";
    REQUIRE(run_cli({"ingest", "--config", (dir / "run.json").string(), "--out", (dir / "o").string()}) == 0);
    CHECK(read_json(dir / "o" / "ingest_summary.json")["rows"] == 300);
}

TEST_CASE("config subcommand prints the resolved config, matching the shipped default") {
    std::ostringstream out, err;
    REQUIRE(cli::run({"config"}, out, err) == 0);
    const auto printed = nlohmann::json::parse(out.str());
    CHECK(printed == read_json(fs::path(DRLIDS_CONFIG_DIR) / "default.json"));
    CHECK(cli::to_json(cli::run_config_from_json(printed)) == printed);
}

TEST_CASE("bundled Bot-IoT style sample ingests with the shipped CSV config") {
    const fs::path dir = fresh_dir("bundled");
    const std::string sample = (fs::path(DRLIDS_DATA_DIR) / "bot_iot_sample.csv").string();
    REQUIRE(run_cli({"ingest", "--config", (fs::path(DRLIDS_CONFIG_DIR) / "bot_iot_csv.json").string(), "--set",
                     "dataset.path=" + sample, "--out", dir.string()}) == 0);
    const auto summary = read_json(dir / "ingest_summary.json");
    CHECK(summary["rows"] == 1000);
    CHECK(summary["class_balance"]["Intrusion"] == 500);
    CHECK(summary["attack_categories"]["DoS"] == 200);
}

TEST_CASE("bundled CSVs are exactly what the generator emits") {
    const fs::path dir = fresh_dir("generate");
    REQUIRE(run_cli({"generate", (dir / "separable.csv").string()}) == 0);
    CHECK(slurp(dir / "separable.csv") == slurp(fs::path(DRLIDS_DATA_DIR) / "separable_2000.csv"));
    REQUIRE(run_cli({"generate", (dir / "bot_iot.csv").string(), "--set", "dataset.generator=bot_iot"}) == 0);
    CHECK(slurp(dir / "bot_iot.csv") == slurp(fs::path(DRLIDS_DATA_DIR) / "bot_iot_sample.csv"));
}
