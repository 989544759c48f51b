#include <catch2/catch_amalgamated.hpp>

#include <filesystem>

#include "sinistre/choropleth.hpp"
#include "sinistre/svg.hpp"
#include "support/xml_lint.hpp"

using namespace sinistre;

namespace {

const std::filesystem::path kFixtures{SINISTRE_FIXTURE_DIR};

void check_svg(const std::string& svg) {
    REQUIRE_NOTHROW(xml_lint::check_well_formed(svg));
    CHECK(xml_lint::count_occurrences(svg, "<g class=\"legend\"") == 1);
}

std::vector<ProportionRow> toy_rows(std::size_t n) {
    std::vector<ProportionRow> rows;
    for (std::size_t i = 0; i < n; ++i) {
        ProportionRow r;
        r.level = "L" + std::to_string(i);
        r.sort_key = static_cast<double>(i);
        r.policy_count = 10 * (i + 1);
        r.claim_count = i;
        r.proportion = static_cast<double>(i) / (10.0 * (i + 1));
        r.ci_low = r.proportion * 0.5;
        r.ci_high = r.proportion * 1.5 + 0.01;
        rows.push_back(r);
    }
    return rows;
}

} // namespace

TEST_CASE("single bar renders a rect, axes and one legend") {
    const auto svg = render_bar_with_ci(toy_rows(1), "one level");
    check_svg(svg);
    CHECK(xml_lint::count_occurrences(svg, "<rect") >= 2); // background + bar + swatches
    CHECK(svg.find("one level") != std::string::npos);
    CHECK_THROWS_AS(render_bar_with_ci({}, "empty"), std::invalid_argument);
}

TEST_CASE("many-level bar chart thins its labels but stays well-formed") {
    const auto svg = render_bar_with_ci(toy_rows(40), "many levels");
    check_svg(svg);
}

TEST_CASE("two-point line series yields one path with two vertices") {
    LineSeries s;
    s.name = "test";
    s.points = {{1.0, 0.8}, {2.0, 0.9}};
    const auto svg = render_line({s}, "line", "k", "accuracy");
    check_svg(svg);
    const auto d_start = svg.find("<path d=\"M");
    REQUIRE(d_start != std::string::npos);
    const auto d_end = svg.find('"', d_start + 9 + 1);
    const auto d = svg.substr(d_start, d_end - d_start);
    CHECK(xml_lint::count_occurrences(d, "L") == 1);
}

TEST_CASE("k-sweep figure carries the two labelled series") {
    LineSeries train{"train", {{1, 1.0}, {5, 0.95}, {20, 0.9}}};
    LineSeries test{"test", {{1, 0.8}, {5, 0.85}, {20, 0.87}}};
    const auto svg = render_line({train, test}, "accuracy against k", "k", "accuracy");
    check_svg(svg);
    CHECK(svg.find(">train</text>") != std::string::npos);
    CHECK(svg.find(">test</text>") != std::string::npos);
    CHECK(xml_lint::count_occurrences(svg, "<path d=\"M") == 2);
}

TEST_CASE("log-x line chart survives decade-spanning inputs") {
    LineSeries s{"w0", {{1e-3, 0.0}, {1e0, 0.5}, {1e3, 0.2}}};
    const auto svg = render_line({s}, "path", "C", "coefficient", true);
    check_svg(svg);
    CHECK(svg.find("log scale") != std::string::npos);
    CHECK_THROWS_AS(render_line({}, "no series", "x", "y"), std::invalid_argument);
    CHECK_THROWS_AS(render_line({LineSeries{"empty", {}}}, "t", "x", "y"),
                    std::invalid_argument);
}

TEST_CASE("titles with XML specials are escaped") {
    const auto svg = render_bar_with_ci(toy_rows(2), "claims < 1 & \"quotes\"");
    check_svg(svg);
    CHECK(svg.find("claims &lt; 1 &amp; &quot;quotes&quot;") != std::string::npos);
}

TEST_CASE("heatmap renders cells, grey NaNs and a ramp legend") {
    Matrix m = Matrix::from_rows({{1.0, 2.0, 5.0}, {2.0, 1.0, 5.0}, {3.0, 7.0, 5.0}});
    const auto corr = pearson_correlation_matrix(m, {"a", "b", "const"});
    const auto svg = render_heatmap(corr, "correlations");
    check_svg(svg);
    CHECK(svg.find("#bbbbbb") != std::string::npos); // undefined cells
    CHECK(svg.find(">a</text>") != std::string::npos);
    CHECK_THROWS_AS(render_heatmap(CorrelationMatrix{}, "empty"), std::invalid_argument);
}

TEST_CASE("choropleth fills endpoints of the scale and neutral for missing") {
    const auto shapes = load_department_geojson(kFixtures / "departments_toy.geojson");
    REQUIRE(shapes.size() == 3);

    std::vector<DepartmentAggregate> aggs;
    aggs.push_back({"75", 10, 0, 0.0});
    aggs.push_back({"2A", 50, 10, 0.0});
    // department 69 intentionally absent
    const auto svg = render_choropleth(shapes, aggs, ChoroplethField::policy_count, "policies");
    check_svg(svg);
    CHECK(svg.find("#e8f0fe") != std::string::npos); // scale minimum
    CHECK(svg.find("#08306b") != std::string::npos); // scale maximum
    CHECK(svg.find("#cccccc") != std::string::npos); // missing department
    CHECK(xml_lint::count_occurrences(svg, "class=\"department\"") == 3);
}

TEST_CASE("equal values paint a uniform midpoint fill") {
    const auto shapes = load_department_geojson(kFixtures / "departments_toy.geojson");
    std::vector<DepartmentAggregate> aggs;
    for (const auto& code : {"75", "2A", "69"}) aggs.push_back({code, 7, 0, 0.0});
    const auto svg = render_choropleth(shapes, aggs, ChoroplethField::policy_count, "uniform");
    check_svg(svg);
    const auto mid_fill = svg::lerp_color("#e8f0fe", "#08306b", 0.5);
    CHECK(xml_lint::count_occurrences(svg, mid_fill) >= 4); // 4 rings across 3 departments
}

TEST_CASE("malformed geojson and unknown fields are rejected") {
    CHECK_THROWS_AS(parse_department_geojson(nlohmann::json{{"type", "Feature"}}), GeoJsonError);
    CHECK_THROWS_AS(parse_department_geojson(nlohmann::json{{"type", "FeatureCollection"}}),
                    GeoJsonError);
    nlohmann::json no_code{{"type", "FeatureCollection"},
                           {"features",
                            {{{"type", "Feature"},
                              {"properties", nlohmann::json::object()},
                              {"geometry",
                               {{"type", "Polygon"},
                                {"coordinates", {{{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}}}}}}}}}};
    CHECK_THROWS_AS(parse_department_geojson(no_code), GeoJsonError);
    CHECK_THROWS_AS(choropleth_field_from_name("bogus"), std::invalid_argument);
    CHECK_THROWS_AS(load_department_geojson(kFixtures / "missing.geojson"), GeoJsonError);
}
