#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>

#include "sinistre/encode.hpp"
#include "sinistre/ingest.hpp"
#include "sinistre/model_io.hpp"
#include "support/oracles.hpp"

using namespace sinistre;

namespace {

const std::filesystem::path kFixtures{SINISTRE_FIXTURE_DIR};

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("sinistre_test_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter()++));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
    static int& counter() {
        static int c = 0;
        return c;
    }
};

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

SavedKnnModel make_saved_knn() {
    auto policies = parse_policy_csv(kFixtures / "policies_small.csv");
    auto claims = parse_claim_csv(kFixtures / "claims_small.csv");
    auto dataset =
        impute_vh_age(merge(policies, aggregate_claims(claims)), ImputeStrategy::median);
    auto encoded = one_hot_encode(dataset);
    auto params = fit_scaling(encoded, ScalingKind::zscore);
    auto scaled = apply_scaling(encoded, params);

    SavedKnnModel saved;
    saved.model.train = scaled.values;
    saved.model.labels = scaled.labels;
    saved.model.k = 3;
    saved.model.weighting = VoteWeighting::inverse_distance;
    saved.schema = scaled.schema;
    saved.scaling = params;
    return saved;
}

} // namespace

TEST_CASE("knn model round-trips byte for byte") {
    TempDir dir;
    const auto saved = make_saved_knn();
    const auto file = dir.path / "knn.json";
    save_knn_model(saved, file);
    const auto loaded = load_knn_model(file);

    CHECK(loaded.model.train == saved.model.train);
    CHECK(loaded.model.labels == saved.model.labels);
    CHECK(loaded.model.k == saved.model.k);
    CHECK(loaded.model.metric == saved.model.metric);
    CHECK(loaded.model.weighting == saved.model.weighting);
    CHECK(loaded.schema == saved.schema);
    CHECK(loaded.scaling == saved.scaling);

    // same predictions through the reloaded model
    CHECK(predict(saved.model.train, loaded.model) == predict(saved.model.train, saved.model));

    // identical bytes on a second save
    const auto file2 = dir.path / "knn2.json";
    save_knn_model(loaded, file2);
    CHECK(slurp(file) == slurp(file2));
}

TEST_CASE("logreg model round-trips and keeps its schema honest") {
    TempDir dir;
    const auto X = oracle::random_matrix(40, 3, 17u);
    std::vector<int> y(40);
    for (std::size_t i = 0; i < 40; ++i) y[i] = (X(i, 0) > 0.0) ? 1 : 0;
    if (std::count(y.begin(), y.end(), 1) == 0) y[0] = 1;
    auto model = fit(X, y, PenaltySpec::ridge(), 0.01);
    model.schema.columns = {{"f0", "f0", ColumnKind::numeric, ""},
                            {"f1", "f1", ColumnKind::numeric, ""},
                            {"f2", "f2", ColumnKind::numeric, ""}};
    ScalingParams scaling = fit_scaling(X, ScalingKind::zscore);

    const auto file = dir.path / "logreg.json";
    save_logreg_model(model, scaling, file);
    const auto loaded = load_logreg_model(file);
    CHECK(loaded.model.weights == model.weights);
    CHECK(loaded.model.intercept == model.intercept);
    CHECK(loaded.model.penalty == model.penalty);
    CHECK(loaded.model.lambda == model.lambda);
    CHECK(loaded.model.schema == model.schema);
    CHECK(loaded.scaling == scaling);
    CHECK(predict(X, loaded.model) == predict(X, model));
}

TEST_CASE("tampered schema hash is rejected") {
    TempDir dir;
    const auto X = oracle::random_matrix(10, 2, 3u);
    const std::vector<int> y{0, 1, 0, 1, 0, 1, 0, 1, 0, 1};
    auto model = fit(X, y, PenaltySpec::none(), 0.0);
    model.schema.columns = {{"a", "a", ColumnKind::numeric, ""},
                            {"b", "b", ColumnKind::numeric, ""}};
    const auto file = dir.path / "m.json";
    save_logreg_model(model, fit_scaling(X, ScalingKind::zscore), file);

    auto j = nlohmann::json::parse(slurp(file));
    j["schema"]["columns"][0]["name"] = "tampered";
    std::ofstream(file) << j.dump(2);
    CHECK_THROWS_WITH(load_logreg_model(file),
                      Catch::Matchers::ContainsSubstring("hash"));
}

TEST_CASE("wrong format and missing files produce clear errors") {
    TempDir dir;
    const auto file = dir.path / "other.json";
    std::ofstream(file) << R"({"format": "something-else"})";
    CHECK_THROWS_WITH(load_knn_model(file), Catch::Matchers::ContainsSubstring("sinistre-knn"));
    CHECK_THROWS_AS(load_logreg_model(dir.path / "missing.json"), ModelIoError);
    std::ofstream(dir.path / "bad.json") << "not json";
    CHECK_THROWS_AS(load_knn_model(dir.path / "bad.json"), ModelIoError);
}
