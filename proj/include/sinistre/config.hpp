#pragma once

// Declarative run configuration: one JSON file drives the whole pipeline,
// with command-line flags layered on top. Unknown keys are rejected so a
// typo cannot silently fall back to a default.

#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "sinistre/encode.hpp"
#include "sinistre/ingest.hpp"
#include "sinistre/knn.hpp"
#include "sinistre/logreg.hpp"
#include "sinistre/scaling.hpp"
#include "sinistre/stats.hpp"

namespace sinistre {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    struct Paths {
        std::string policy_csv;
        std::string claim_csv;
        std::string geojson;
        std::string out_dir = "out";
    } paths;

    struct Ingest {
        std::string id_policy_format = std::string(kDefaultPolicyIdFormat);
        std::string impute_strategy = "median"; // external_value | median | drop
        std::string impute_policy_id;
        std::optional<int> impute_vh_age;
    } ingest;

    struct Preprocess {
        std::vector<std::string> features = default_model_features();
        std::vector<std::string> categorical = default_categorical_features();
        std::string scaling = "zscore"; // zscore | minmax
        bool fit_on_train = false;      // default replicates fit-before-split
        double test_fraction = 0.25;
        std::uint64_t seed = 0;
    } preprocess;

    struct Knn {
        std::size_t k = 20;
        std::string metric = "minkowski"; // minkowski | chebyshev
        double order = 2.0;
        std::string weighting = "inverse_distance"; // uniform | inverse_distance
    } knn;

    struct Logreg {
        std::string penalty = "ridge"; // none | lasso | ridge | elastic_net
        double mix = 0.5;
        double C = 1.0; // lambda = 1/C
        std::size_t max_iterations = 5000;
        double tolerance = 1e-8;
        double learning_rate = 0.0; // 0 = backtracking
    } logreg;

    struct Evaluation {
        std::string positive_class = "no-claims"; // claims | no-claims
    } evaluation;

    struct Explore {
        std::vector<std::string> heatmap_columns = default_heatmap_columns();
        double ci_level = 0.95;
        std::string ci_method = "wald"; // wald | wilson
        std::string proportion_numerator = "claiming_policies"; // or total_claims
        std::string geojson_code_property = "code";
    } explore;

    // --- derived accessors -------------------------------------------------

    ScalingKind scaling_kind() const {
        if (preprocess.scaling == "zscore") return ScalingKind::zscore;
        if (preprocess.scaling == "minmax") return ScalingKind::minmax;
        throw ConfigError("preprocess.scaling must be 'zscore' or 'minmax'");
    }

    DistanceMetric knn_metric() const {
        if (knn.metric == "chebyshev") return DistanceMetric::chebyshev();
        if (knn.metric == "minkowski") return DistanceMetric::minkowski(knn.order);
        throw ConfigError("knn.metric must be 'minkowski' or 'chebyshev'");
    }

    VoteWeighting knn_weighting() const {
        if (knn.weighting == "uniform") return VoteWeighting::uniform;
        if (knn.weighting == "inverse_distance") return VoteWeighting::inverse_distance;
        throw ConfigError("knn.weighting must be 'uniform' or 'inverse_distance'");
    }

    PenaltySpec logreg_penalty() const {
        if (logreg.penalty == "none") return PenaltySpec::none();
        if (logreg.penalty == "lasso") return PenaltySpec::lasso();
        if (logreg.penalty == "ridge") return PenaltySpec::ridge();
        if (logreg.penalty == "elastic_net") return PenaltySpec::elastic_net(logreg.mix);
        throw ConfigError("logreg.penalty must be none|lasso|ridge|elastic_net");
    }

    FitConfig logreg_fit_config() const {
        FitConfig fc;
        fc.max_iterations = logreg.max_iterations;
        fc.tolerance = logreg.tolerance;
        fc.learning_rate = logreg.learning_rate;
        fc.seed = preprocess.seed;
        return fc;
    }

    double logreg_lambda() const {
        if (!(logreg.C > 0.0)) throw ConfigError("logreg.C must be positive");
        return 1.0 / logreg.C;
    }

    /// Label value of the configured positive class: claims = 1, no-claims = 0.
    int positive_label() const {
        if (evaluation.positive_class == "claims") return 1;
        if (evaluation.positive_class == "no-claims") return 0;
        throw ConfigError("evaluation.positive_class must be 'claims' or 'no-claims'");
    }

    ImputeStrategy impute_strategy() const {
        if (ingest.impute_strategy == "external_value") return ImputeStrategy::external_value;
        if (ingest.impute_strategy == "median") return ImputeStrategy::median;
        if (ingest.impute_strategy == "drop") return ImputeStrategy::drop;
        throw ConfigError("ingest.impute_strategy must be external_value|median|drop");
    }

    std::optional<ExternalImputeValue> impute_external() const {
        if (ingest.impute_policy_id.empty() || !ingest.impute_vh_age) return std::nullopt;
        return ExternalImputeValue{ingest.impute_policy_id, *ingest.impute_vh_age};
    }

    IntervalMethod ci_method() const {
        if (explore.ci_method == "wald") return IntervalMethod::wald;
        if (explore.ci_method == "wilson") return IntervalMethod::wilson;
        throw ConfigError("explore.ci_method must be 'wald' or 'wilson'");
    }

    ProportionNumerator proportion_numerator() const {
        if (explore.proportion_numerator == "claiming_policies") {
            return ProportionNumerator::claiming_policies;
        }
        if (explore.proportion_numerator == "total_claims") {
            return ProportionNumerator::total_claims;
        }
        throw ConfigError(
            "explore.proportion_numerator must be claiming_policies|total_claims");
    }

    void validate() const {
        scaling_kind();
        knn_metric();
        knn_weighting();
        logreg_penalty();
        logreg_lambda();
        positive_label();
        impute_strategy();
        ci_method();
        proportion_numerator();
        if (!(preprocess.test_fraction > 0.0 && preprocess.test_fraction < 1.0)) {
            throw ConfigError("preprocess.test_fraction must be in (0,1)");
        }
        if (knn.k < 1) throw ConfigError("knn.k must be >= 1");
        if (!(explore.ci_level > 0.0 && explore.ci_level < 1.0)) {
            throw ConfigError("explore.ci_level must be in (0,1)");
        }
        if (impute_strategy() == ImputeStrategy::external_value && !impute_external()) {
            throw ConfigError(
                "ingest.impute_strategy=external_value needs impute_policy_id and impute_vh_age");
        }
    }
};

namespace config_detail {

inline void reject_unknown_keys(const nlohmann::json& j, const std::set<std::string>& known,
                                const std::string& section) {
    if (!j.is_object()) throw ConfigError("config section '" + section + "' must be an object");
    for (const auto& [key, _] : j.items()) {
        if (!known.count(key)) {
            throw ConfigError("unknown config key '" + section + "." + key + "'");
        }
    }
}

} // namespace config_detail

inline RunConfig config_from_json(const nlohmann::json& j) {
    RunConfig cfg;
    config_detail::reject_unknown_keys(
        j, {"paths", "ingest", "preprocess", "knn", "logreg", "evaluation", "explore"}, "<root>");

    if (j.contains("paths")) {
        const auto& p = j["paths"];
        config_detail::reject_unknown_keys(p, {"policy_csv", "claim_csv", "geojson", "out_dir"},
                                           "paths");
        cfg.paths.policy_csv = p.value("policy_csv", cfg.paths.policy_csv);
        cfg.paths.claim_csv = p.value("claim_csv", cfg.paths.claim_csv);
        cfg.paths.geojson = p.value("geojson", cfg.paths.geojson);
        cfg.paths.out_dir = p.value("out_dir", cfg.paths.out_dir);
    }
    if (j.contains("ingest")) {
        const auto& p = j["ingest"];
        config_detail::reject_unknown_keys(
            p, {"id_policy_format", "impute_strategy", "impute_policy_id", "impute_vh_age"},
            "ingest");
        cfg.ingest.id_policy_format = p.value("id_policy_format", cfg.ingest.id_policy_format);
        cfg.ingest.impute_strategy = p.value("impute_strategy", cfg.ingest.impute_strategy);
        cfg.ingest.impute_policy_id = p.value("impute_policy_id", cfg.ingest.impute_policy_id);
        if (p.contains("impute_vh_age") && !p["impute_vh_age"].is_null()) {
            cfg.ingest.impute_vh_age = p["impute_vh_age"].get<int>();
        }
    }
    if (j.contains("preprocess")) {
        const auto& p = j["preprocess"];
        config_detail::reject_unknown_keys(p,
                                           {"features", "categorical_features", "scaling",
                                            "fit_on_train", "test_fraction", "seed"},
                                           "preprocess");
        if (p.contains("features")) {
            cfg.preprocess.features = p["features"].get<std::vector<std::string>>();
        }
        if (p.contains("categorical_features")) {
            cfg.preprocess.categorical =
                p["categorical_features"].get<std::vector<std::string>>();
        }
        cfg.preprocess.scaling = p.value("scaling", cfg.preprocess.scaling);
        cfg.preprocess.fit_on_train = p.value("fit_on_train", cfg.preprocess.fit_on_train);
        cfg.preprocess.test_fraction = p.value("test_fraction", cfg.preprocess.test_fraction);
        cfg.preprocess.seed = p.value("seed", cfg.preprocess.seed);
    }
    if (j.contains("knn")) {
        const auto& p = j["knn"];
        config_detail::reject_unknown_keys(p, {"k", "metric", "order", "weighting"}, "knn");
        cfg.knn.k = p.value("k", cfg.knn.k);
        cfg.knn.metric = p.value("metric", cfg.knn.metric);
        cfg.knn.order = p.value("order", cfg.knn.order);
        cfg.knn.weighting = p.value("weighting", cfg.knn.weighting);
    }
    if (j.contains("logreg")) {
        const auto& p = j["logreg"];
        config_detail::reject_unknown_keys(
            p, {"penalty", "mix", "C", "lambda", "max_iterations", "tolerance", "learning_rate"},
            "logreg");
        cfg.logreg.penalty = p.value("penalty", cfg.logreg.penalty);
        cfg.logreg.mix = p.value("mix", cfg.logreg.mix);
        if (p.contains("lambda") && p.contains("C")) {
            throw ConfigError("logreg: specify either C or lambda, not both");
        }
        if (p.contains("lambda")) {
            const double lambda = p["lambda"].get<double>();
            if (!(lambda > 0.0)) throw ConfigError("logreg.lambda must be positive");
            cfg.logreg.C = 1.0 / lambda;
        } else {
            cfg.logreg.C = p.value("C", cfg.logreg.C);
        }
        cfg.logreg.max_iterations = p.value("max_iterations", cfg.logreg.max_iterations);
        cfg.logreg.tolerance = p.value("tolerance", cfg.logreg.tolerance);
        if (p.contains("learning_rate")) {
            if (p["learning_rate"].is_string()) {
                if (p["learning_rate"].get<std::string>() != "backtracking") {
                    throw ConfigError("logreg.learning_rate must be a number or 'backtracking'");
                }
                cfg.logreg.learning_rate = 0.0;
            } else {
                cfg.logreg.learning_rate = p["learning_rate"].get<double>();
            }
        }
    }
    if (j.contains("evaluation")) {
        const auto& p = j["evaluation"];
        config_detail::reject_unknown_keys(p, {"positive_class"}, "evaluation");
        cfg.evaluation.positive_class = p.value("positive_class", cfg.evaluation.positive_class);
    }
    if (j.contains("explore")) {
        const auto& p = j["explore"];
        config_detail::reject_unknown_keys(p,
                                           {"heatmap_columns", "ci_level", "ci_method",
                                            "proportion_numerator", "geojson_code_property"},
                                           "explore");
        if (p.contains("heatmap_columns")) {
            cfg.explore.heatmap_columns = p["heatmap_columns"].get<std::vector<std::string>>();
        }
        cfg.explore.ci_level = p.value("ci_level", cfg.explore.ci_level);
        cfg.explore.ci_method = p.value("ci_method", cfg.explore.ci_method);
        cfg.explore.proportion_numerator =
            p.value("proportion_numerator", cfg.explore.proportion_numerator);
        cfg.explore.geojson_code_property =
            p.value("geojson_code_property", cfg.explore.geojson_code_property);
    }

    cfg.validate();
    return cfg;
}

inline RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("malformed config '" + path.string() + "': " + e.what());
    }
    return config_from_json(j);
}

/// Snapshot of the effective configuration, embedded in run manifests.
inline nlohmann::json config_to_json(const RunConfig& cfg) {
    return nlohmann::json{
        {"paths",
         {{"policy_csv", cfg.paths.policy_csv},
          {"claim_csv", cfg.paths.claim_csv},
          {"geojson", cfg.paths.geojson},
          {"out_dir", cfg.paths.out_dir}}},
        {"ingest",
         {{"id_policy_format", cfg.ingest.id_policy_format},
          {"impute_strategy", cfg.ingest.impute_strategy},
          {"impute_policy_id", cfg.ingest.impute_policy_id},
          {"impute_vh_age",
           cfg.ingest.impute_vh_age ? nlohmann::json(*cfg.ingest.impute_vh_age)
                                    : nlohmann::json()}}},
        {"preprocess",
         {{"features", cfg.preprocess.features},
          {"categorical_features", cfg.preprocess.categorical},
          {"scaling", cfg.preprocess.scaling},
          {"fit_on_train", cfg.preprocess.fit_on_train},
          {"test_fraction", cfg.preprocess.test_fraction},
          {"seed", cfg.preprocess.seed}}},
        {"knn",
         {{"k", cfg.knn.k},
          {"metric", cfg.knn.metric},
          {"order", cfg.knn.order},
          {"weighting", cfg.knn.weighting}}},
        {"logreg",
         {{"penalty", cfg.logreg.penalty},
          {"mix", cfg.logreg.mix},
          {"C", cfg.logreg.C},
          {"max_iterations", cfg.logreg.max_iterations},
          {"tolerance", cfg.logreg.tolerance},
          {"learning_rate", cfg.logreg.learning_rate}}},
        {"evaluation", {{"positive_class", cfg.evaluation.positive_class}}},
        {"explore",
         {{"heatmap_columns", cfg.explore.heatmap_columns},
          {"ci_level", cfg.explore.ci_level},
          {"ci_method", cfg.explore.ci_method},
          {"proportion_numerator", cfg.explore.proportion_numerator},
          {"geojson_code_property", cfg.explore.geojson_code_property}}}};
}

} // namespace sinistre
