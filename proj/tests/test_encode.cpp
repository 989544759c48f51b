#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <set>
#include <sstream>

#include "sinistre/encode.hpp"
#include "sinistre/ingest.hpp"

using namespace sinistre;

namespace {

const std::filesystem::path kFixtures{SINISTRE_FIXTURE_DIR};

LabeledDataset imputed_fixture() {
    auto policies = parse_policy_csv(kFixtures / "policies_small.csv");
    auto claims = parse_claim_csv(kFixtures / "claims_small.csv");
    return impute_vh_age(merge(policies, aggregate_claims(claims)), ImputeStrategy::median);
}

} // namespace

TEST_CASE("default schema: numerics in table order, then dummy groups") {
    const auto dataset = imputed_fixture();
    const auto schema = build_schema(dataset);
    REQUIRE(schema.size() == 41);

    // numeric block first, in policy-table order
    const std::vector<std::string> expected_numeric{
        "pol_bonus",    "pol_duration", "pol_sit_duration", "drv_age1",    "drv_age2",
        "drv_age_lic1", "drv_age_lic2", "vh_age",           "vh_cyl",      "vh_din",
        "vh_sale_begin", "vh_sale_end", "vh_speed",         "vh_value",    "vh_weight"};
    for (std::size_t i = 0; i < expected_numeric.size(); ++i) {
        CHECK(schema.columns[i].name == expected_numeric[i]);
        CHECK(schema.columns[i].kind == ColumnKind::numeric);
    }
    // first dummy group: pol_coverage with categories sorted lexically
    CHECK(schema.columns[15].name == "pol_coverage_Maxi");
    CHECK(schema.columns[16].name == "pol_coverage_Median1");
    CHECK(schema.columns[17].name == "pol_coverage_Median2");
    CHECK(schema.columns[18].name == "pol_coverage_Mini");
    // drv_sex2 group carries the dedicated None category
    CHECK(schema.column_index("drv_sex2_None").has_value());
    // column names unique
    std::set<std::string> names;
    for (const auto& c : schema.columns) names.insert(c.name);
    CHECK(names.size() == schema.size());
}

TEST_CASE("coverage expands to four indicators summing to one per row") {
    const auto dataset = imputed_fixture();
    const auto m = one_hot_encode(dataset);
    const auto base = m.schema.column_index("pol_coverage_Maxi").value();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        double sum = 0.0;
        for (std::size_t c = base; c < base + 4; ++c) sum += m.values(r, c);
        CHECK(sum == 1.0);
    }
    // row 0 has coverage Maxi: indicator vector (1,0,0,0) in lexical order
    CHECK(m.values(0, base) == 1.0);
    CHECK(m.values(0, base + 1) == 0.0);
    CHECK(m.values(0, base + 2) == 0.0);
    CHECK(m.values(0, base + 3) == 0.0);
}

TEST_CASE("one-hot row sums equal one for every source feature") {
    const auto dataset = imputed_fixture();
    const auto m = one_hot_encode(dataset);
    std::map<std::string, std::vector<std::size_t>> groups;
    for (std::size_t c = 0; c < m.schema.size(); ++c) {
        if (m.schema.columns[c].kind == ColumnKind::dummy) {
            groups[m.schema.columns[c].source_feature].push_back(c);
        }
    }
    REQUIRE(groups.size() == 9);
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (const auto& [feature, cols] : groups) {
            double sum = 0.0;
            for (auto c : cols) sum += m.values(r, c);
            CHECK(sum == 1.0);
        }
    }
}

TEST_CASE("a single-category feature becomes one constant column of ones") {
    auto dataset = imputed_fixture();
    for (auto& row : dataset.rows) row.policy.vh_type = VehicleType::Tourism;
    const auto m = one_hot_encode(dataset);
    const auto idx = m.schema.column_index("vh_type_Tourism");
    REQUIRE(idx.has_value());
    CHECK_FALSE(m.schema.column_index("vh_type_Commercial").has_value());
    for (std::size_t r = 0; r < m.rows(); ++r) CHECK(m.values(r, *idx) == 1.0);
}

TEST_CASE("frozen schema rejects unseen categories at transform time") {
    auto dataset = imputed_fixture();
    auto all_tourism = dataset;
    for (auto& row : all_tourism.rows) row.policy.vh_type = VehicleType::Tourism;
    const auto schema = build_schema(all_tourism);
    CHECK_THROWS_WITH(encode_with_schema(dataset, schema),
                      Catch::Matchers::ContainsSubstring("unseen category"));
}

TEST_CASE("labels ride along with the matrix") {
    const auto dataset = imputed_fixture();
    const auto m = one_hot_encode(dataset);
    REQUIRE(m.labels.size() == dataset.size());
    for (std::size_t i = 0; i < dataset.size(); ++i) CHECK(m.labels[i] == dataset.rows[i].label);
}

TEST_CASE("categorical feature outside the dummy list label-encodes") {
    auto spec = EncodeSpec{};
    spec.categorical = {"pol_coverage", "pol_pay_freq", "pol_payd", "pol_usage",
                        "drv_drv2",     "drv_sex1",     "vh_fuel",  "vh_type"};
    const auto dataset = imputed_fixture();
    const auto m = one_hot_encode(dataset, spec);
    const auto idx = m.schema.column_index("drv_sex2");
    REQUIRE(idx.has_value());
    CHECK(m.schema.columns[*idx].kind == ColumnKind::numeric);
    CHECK(m.values(0, *idx) == 0.0); // no second driver
    CHECK(m.values(2, *idx) == 2.0); // F
    CHECK(m.values(6, *idx) == 1.0); // M
}

TEST_CASE("numeric features cannot be dummied") {
    EncodeSpec spec;
    spec.categorical.push_back("vh_speed");
    CHECK_THROWS_AS(build_schema(imputed_fixture(), spec), EncodeError);
}

TEST_CASE("missing vh_age blocks encoding until imputed") {
    auto policies = parse_policy_csv(kFixtures / "policies_small.csv");
    const auto dataset = merge(policies, {});
    CHECK_THROWS_WITH(one_hot_encode(dataset),
                      Catch::Matchers::ContainsSubstring("impute"));
}

TEST_CASE("schema JSON round-trips and hashes stably") {
    const auto schema = build_schema(imputed_fixture());
    const auto round = schema_from_json(schema_to_json(schema));
    CHECK(round == schema);
    CHECK(schema_hash(round) == schema_hash(schema));
    auto mutated = schema;
    mutated.columns[0].name = "renamed";
    CHECK(schema_hash(mutated) != schema_hash(schema));
}

TEST_CASE("encoded CSV export has one column per schema entry plus label") {
    const auto m = one_hot_encode(imputed_fixture());
    std::ostringstream out;
    write_encoded_csv(m, out);
    const auto table = parse_csv(out.str(), "encoded");
    CHECK(table.header.size() == m.cols() + 1);
    CHECK(table.rows.size() == m.rows());
}
