#include <catch2/catch_amalgamated.hpp>

#include "sinistre/config.hpp"

using namespace sinistre;

TEST_CASE("defaults mirror the reference pipeline") {
    RunConfig cfg;
    cfg.validate();
    CHECK(cfg.preprocess.test_fraction == 0.25);
    CHECK(cfg.preprocess.fit_on_train == false);
    CHECK(cfg.knn.k == 20);
    CHECK(cfg.knn_weighting() == VoteWeighting::inverse_distance);
    CHECK(cfg.knn_metric() == DistanceMetric::euclidean());
    CHECK(cfg.positive_label() == 0); // "no-claims" is the reported positive class
    CHECK(cfg.logreg_lambda() == 1.0);

    // identifier-like columns stay out of the design matrix
    for (const auto& excluded : {"vh_make", "vh_model", "pol_insee_code"}) {
        CHECK(std::find(cfg.preprocess.features.begin(), cfg.preprocess.features.end(),
                        excluded) == cfg.preprocess.features.end());
    }
    CHECK(cfg.preprocess.categorical.size() == 9);
}

TEST_CASE("a full config file parses") {
    const auto j = nlohmann::json::parse(R"({
      "paths": {"policy_csv": "p.csv", "claim_csv": "c.csv", "out_dir": "results"},
      "ingest": {"id_policy_format": "{client}-{vehicle}", "impute_strategy": "external_value",
                 "impute_policy_id": "A00000765", "impute_vh_age": 9},
      "preprocess": {"scaling": "minmax", "fit_on_train": true, "test_fraction": 0.2, "seed": 7},
      "knn": {"k": 5, "metric": "chebyshev", "weighting": "uniform"},
      "logreg": {"penalty": "elastic_net", "mix": 0.3, "C": 10.0, "max_iterations": 100},
      "evaluation": {"positive_class": "claims"},
      "explore": {"ci_level": 0.9, "ci_method": "wilson", "proportion_numerator": "total_claims"}
    })");
    const auto cfg = config_from_json(j);
    CHECK(cfg.paths.out_dir == "results");
    CHECK(cfg.ingest.id_policy_format == "{client}-{vehicle}");
    CHECK(cfg.impute_strategy() == ImputeStrategy::external_value);
    CHECK(cfg.impute_external()->id_policy == "A00000765");
    CHECK(cfg.scaling_kind() == ScalingKind::minmax);
    CHECK(cfg.preprocess.fit_on_train);
    CHECK(cfg.knn_metric() == DistanceMetric::chebyshev());
    CHECK(cfg.logreg_penalty() == PenaltySpec::elastic_net(0.3));
    CHECK(cfg.logreg_lambda() == 0.1);
    CHECK(cfg.positive_label() == 1);
    CHECK(cfg.ci_method() == IntervalMethod::wilson);
    CHECK(cfg.proportion_numerator() == ProportionNumerator::total_claims);
}

TEST_CASE("unknown keys are rejected everywhere") {
    CHECK_THROWS_WITH(config_from_json(nlohmann::json::parse(R"({"pathz": {}})")),
                      Catch::Matchers::ContainsSubstring("pathz"));
    CHECK_THROWS_WITH(
        config_from_json(nlohmann::json::parse(R"({"knn": {"neighbours": 3}})")),
        Catch::Matchers::ContainsSubstring("knn.neighbours"));
    CHECK_THROWS_WITH(
        config_from_json(nlohmann::json::parse(R"({"preprocess": {"scalng": "zscore"}})")),
        Catch::Matchers::ContainsSubstring("preprocess.scalng"));
}

TEST_CASE("invalid values are rejected") {
    CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(
                        R"({"preprocess": {"test_fraction": 1.5}})")),
                    ConfigError);
    CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"knn": {"metric": "cosine"}})")),
                    ConfigError);
    CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(
                        R"({"evaluation": {"positive_class": "maybe"}})")),
                    ConfigError);
    CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(
                        R"({"ingest": {"impute_strategy": "external_value"}})")),
                    ConfigError);
    CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(
                        R"({"logreg": {"C": 1.0, "lambda": 1.0}})")),
                    ConfigError);
}

TEST_CASE("lambda is accepted as the inverse of C") {
    const auto cfg =
        config_from_json(nlohmann::json::parse(R"({"logreg": {"lambda": 0.25}})"));
    CHECK(cfg.logreg.C == 4.0);
    CHECK(cfg.logreg_lambda() == 0.25);
    const auto bt = config_from_json(
        nlohmann::json::parse(R"({"logreg": {"learning_rate": "backtracking"}})"));
    CHECK(bt.logreg.learning_rate == 0.0);
    CHECK_THROWS_AS(
        config_from_json(nlohmann::json::parse(R"({"logreg": {"learning_rate": "fast"}})")),
        ConfigError);
}

TEST_CASE("config snapshot survives a JSON round trip") {
    RunConfig cfg;
    cfg.paths.policy_csv = "a.csv";
    cfg.preprocess.seed = 99;
    cfg.knn.k = 7;
    const auto round = config_from_json(config_to_json(cfg));
    CHECK(round.paths.policy_csv == "a.csv");
    CHECK(round.preprocess.seed == 99);
    CHECK(round.knn.k == 7);
    CHECK(config_to_json(round) == config_to_json(cfg));
}
