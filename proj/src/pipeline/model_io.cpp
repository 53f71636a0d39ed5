#include <fstream>

#include "drlids/common/error.hpp"
#include "drlids/pipeline/pipeline.hpp"

namespace drlids::pipeline {

using nlohmann::json;

namespace {

json preprocess_to_json(const data::PreprocessConfig& c) {
    std::string impute = c.impute == data::ImputeMode::MedianMode ? "median_mode" : "mode";
    std::string norm = c.normalize == data::Normalization::MinMax   ? "minmax"
                       : c.normalize == data::Normalization::ZScore ? "zscore"
                                                                    : "none";
    return {{"impute", impute},
            {"normalize", norm},
            {"hash_buckets", c.hash_buckets},
            {"discretize_thresholds", c.discretize_thresholds}};
}

data::PreprocessConfig preprocess_from_json(const json& j, data::PreprocessConfig c) {
    if (j.contains("impute")) {
        const auto v = j.at("impute").get<std::string>();
        if (v == "median_mode") c.impute = data::ImputeMode::MedianMode;
        else if (v == "mode") c.impute = data::ImputeMode::Mode;
        else throw ConfigError("preprocess.impute must be median_mode or mode, got '" + v + "'");
    }
    if (j.contains("normalize")) {
        const auto v = j.at("normalize").get<std::string>();
        if (v == "minmax") c.normalize = data::Normalization::MinMax;
        else if (v == "zscore") c.normalize = data::Normalization::ZScore;
        else if (v == "none") c.normalize = data::Normalization::None;
        else throw ConfigError("preprocess.normalize must be minmax, zscore or none, got '" + v + "'");
    }
    c.hash_buckets = j.value("hash_buckets", c.hash_buckets);
    if (j.contains("discretize_thresholds")) {
        c.discretize_thresholds = j.at("discretize_thresholds").get<std::map<std::string, std::vector<double>>>();
    }
    c.validate();
    return c;
}

json triage_params_to_json(const triage::TriageParams& p) {
    return {{"k_neighbors", p.k_neighbors}, {"rule_bins", p.rule_bins}};
}

triage::TriageParams triage_params_from_json(const json& j, triage::TriageParams p) {
    p.k_neighbors = j.value("k_neighbors", p.k_neighbors);
    p.rule_bins = j.value("rule_bins", p.rule_bins);
    p.validate();
    return p;
}

}  // namespace

json to_json(const PipelineConfig& c) {
    return {{"preprocess", preprocess_to_json(c.preprocess)},
            {"gbt", gbt::to_json(c.gbt)},
            {"k_features", c.k_features},
            {"triage", triage_params_to_json(c.triage)},
            {"drl", drl::to_json(c.drl)},
            {"drl_episodes", c.drl_episodes},
            {"seed", c.seed}};
}

PipelineConfig pipeline_config_from_json(const json& j, PipelineConfig c) {
    if (j.contains("preprocess")) c.preprocess = preprocess_from_json(j.at("preprocess"), c.preprocess);
    if (j.contains("gbt")) c.gbt = gbt::gbt_params_from_json(j.at("gbt"), c.gbt);
    c.k_features = j.value("k_features", c.k_features);
    if (j.contains("triage")) c.triage = triage_params_from_json(j.at("triage"), c.triage);
    if (j.contains("drl")) c.drl = drl::drl_params_from_json(j.at("drl"), c.drl);
    c.drl_episodes = j.value("drl_episodes", c.drl_episodes);
    c.seed = j.value("seed", c.seed);
    c.validate();
    return c;
}

json to_json(const IdsModel& m) {
    return {{"format_version", kModelFormatVersion},
            {"feature_names", m.feature_names},
            {"preprocessor", m.preprocessor.to_json()},
            {"gbt", gbt::to_json(m.gbt)},
            {"selected", m.selected},
            {"class_stats", triage::to_json(m.stats)},
            {"triage_reference", m.reference.to_json()},
            {"triage_params", triage_params_to_json(m.triage)},
            {"policy", drl::to_json(m.policy, m.drl)},
            {"drl_params", drl::to_json(m.drl)},
            {"final_mean_reward", m.final_mean_reward}};
}

IdsModel ids_model_from_json(const json& j) {
    if (!j.is_object() || !j.contains("format_version")) throw ArtifactError("model artifact has no format_version");
    const int version = j.at("format_version").get<int>();
    if (version != kModelFormatVersion) {
        throw ArtifactError("unsupported model format_version " + std::to_string(version));
    }
    try {
        IdsModel m;
        m.feature_names = j.at("feature_names").get<std::vector<std::string>>();
        m.preprocessor = data::Preprocessor::from_json(j.at("preprocessor"));
        m.gbt = gbt::gbt_model_from_json(j.at("gbt"));
        m.selected = j.at("selected").get<std::vector<std::size_t>>();
        m.stats = triage::class_stats_from_json(j.at("class_stats"));
        m.reference = triage::TriageReference::from_json(j.at("triage_reference"));
        m.triage = triage_params_from_json(j.at("triage_params"), {});
        m.policy = drl::policy_pair_from_json(j.at("policy"));
        m.drl = drl::drl_params_from_json(j.at("drl_params"));
        m.final_mean_reward = j.at("final_mean_reward").get<double>();
        for (auto s : m.selected) {
            if (s >= m.preprocessor.dimension()) throw ArtifactError("selected feature index out of range");
        }
        return m;
    } catch (const json::exception& e) {
        throw ArtifactError(std::string("malformed model artifact: ") + e.what());
    }
}

void save_model(const IdsModel& m, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ArtifactError("cannot write model to " + path.string());
    out << to_json(m).dump(1) << '\n';
}

IdsModel load_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ArtifactError("model artifact not found: " + path.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw ArtifactError("model artifact " + path.string() + " is not valid JSON: " + e.what());
    }
    return ids_model_from_json(j);
}

}  // namespace drlids::pipeline
