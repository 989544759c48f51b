#pragma once

// Choropleth rendering: department polygons from an RFC 7946 GeoJSON
// FeatureCollection, filled on a linear color scale by an aggregate value.
// Coordinates are treated as planar lon/lat with a cos(mid-latitude)
// aspect correction; departments present in the map but absent from the
// aggregates render in a neutral grey.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "sinistre/stats.hpp"
#include "sinistre/svg.hpp"

namespace sinistre {

class GeoJsonError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct DepartmentShape {
    std::string code;
    // one entry per ring; each ring is a closed lon/lat polyline
    std::vector<std::vector<std::pair<double, double>>> rings;
};

namespace geo_detail {

inline std::vector<std::pair<double, double>> parse_ring(const nlohmann::json& ring) {
    std::vector<std::pair<double, double>> out;
    if (!ring.is_array()) throw GeoJsonError("geojson: ring is not an array");
    for (const auto& pt : ring) {
        if (!pt.is_array() || pt.size() < 2) {
            throw GeoJsonError("geojson: coordinate is not a [lon, lat] pair");
        }
        out.emplace_back(pt[0].get<double>(), pt[1].get<double>());
    }
    return out;
}

} // namespace geo_detail

/// Loads department outlines from a GeoJSON FeatureCollection. The
/// property holding the department code defaults to "code".
inline std::vector<DepartmentShape> parse_department_geojson(
    const nlohmann::json& root, const std::string& code_property = "code") {
    if (!root.is_object() || root.value("type", "") != "FeatureCollection") {
        throw GeoJsonError("geojson: expected a FeatureCollection");
    }
    if (!root.contains("features") || !root["features"].is_array()) {
        throw GeoJsonError("geojson: FeatureCollection without features array");
    }

    std::vector<DepartmentShape> shapes;
    for (const auto& feature : root["features"]) {
        DepartmentShape shape;
        if (!feature.contains("properties") || !feature["properties"].contains(code_property)) {
            throw GeoJsonError("geojson: feature missing property '" + code_property + "'");
        }
        const auto& prop = feature["properties"][code_property];
        shape.code = prop.is_string() ? prop.get<std::string>() : prop.dump();

        if (!feature.contains("geometry") || !feature["geometry"].is_object()) {
            throw GeoJsonError("geojson: feature '" + shape.code + "' missing geometry");
        }
        const auto& geom = feature["geometry"];
        const std::string type = geom.value("type", "");
        const auto& coords = geom.at("coordinates");
        if (type == "Polygon") {
            for (const auto& ring : coords) shape.rings.push_back(geo_detail::parse_ring(ring));
        } else if (type == "MultiPolygon") {
            for (const auto& poly : coords) {
                for (const auto& ring : poly) shape.rings.push_back(geo_detail::parse_ring(ring));
            }
        } else {
            throw GeoJsonError("geojson: unsupported geometry type '" + type + "' for '" +
                               shape.code + "'");
        }
        shapes.push_back(std::move(shape));
    }
    return shapes;
}

inline std::vector<DepartmentShape> load_department_geojson(
    const std::filesystem::path& path, const std::string& code_property = "code") {
    std::ifstream in(path);
    if (!in) throw GeoJsonError("cannot open '" + path.string() + "'");
    nlohmann::json root;
    try {
        in >> root;
    } catch (const nlohmann::json::exception& e) {
        throw GeoJsonError("malformed geojson '" + path.string() + "': " + e.what());
    }
    return parse_department_geojson(root, code_property);
}

enum class ChoroplethField { policy_count, claim_count, claim_amount };

inline ChoroplethField choropleth_field_from_name(std::string_view name) {
    if (name == "policy_count") return ChoroplethField::policy_count;
    if (name == "claim_count") return ChoroplethField::claim_count;
    if (name == "claim_amount") return ChoroplethField::claim_amount;
    throw std::invalid_argument("unknown choropleth value field '" + std::string(name) + "'");
}

/**
 * @brief Renders one filled group per department, scaled light-to-dark
 * between the minimum and maximum of the chosen field, plus a min/mid/max
 * legend.
 */
inline std::string render_choropleth(const std::vector<DepartmentShape>& shapes,
                                     const std::vector<DepartmentAggregate>& aggregates,
                                     ChoroplethField field, const std::string& title) {
    if (shapes.empty()) throw GeoJsonError("render_choropleth: no shapes");

    std::map<std::string, double> value_by_code;
    for (const auto& agg : aggregates) {
        double v = 0.0;
        switch (field) {
            case ChoroplethField::policy_count: v = static_cast<double>(agg.policy_count); break;
            case ChoroplethField::claim_count: v = static_cast<double>(agg.claim_count); break;
            case ChoroplethField::claim_amount: v = agg.claim_amount; break;
        }
        value_by_code[agg.code] = v;
    }

    double vmin = std::numeric_limits<double>::infinity(), vmax = -vmin;
    for (const auto& [_, v] : value_by_code) {
        vmin = std::min(vmin, v);
        vmax = std::max(vmax, v);
    }
    if (value_by_code.empty()) { vmin = 0.0; vmax = 1.0; }

    // planar bounding box with aspect correction
    double lon_min = std::numeric_limits<double>::infinity(), lon_max = -lon_min;
    double lat_min = lon_min, lat_max = -lon_min;
    for (const auto& s : shapes) {
        for (const auto& ring : s.rings) {
            for (const auto& [lon, lat] : ring) {
                lon_min = std::min(lon_min, lon);
                lon_max = std::max(lon_max, lon);
                lat_min = std::min(lat_min, lat);
                lat_max = std::max(lat_max, lat);
            }
        }
    }
    const double mid_lat = (lat_min + lat_max) / 2.0;
    const double kx = std::cos(mid_lat * std::numbers::pi / 180.0);

    const double margin = 40.0;
    const double usable_w = kCanvasWidth - 240.0 - margin; // keep room for the legend
    const double usable_h = kCanvasHeight - 2 * margin;
    const double span_x = std::max((lon_max - lon_min) * kx, 1e-12);
    const double span_y = std::max(lat_max - lat_min, 1e-12);
    const double scale = std::min(usable_w / span_x, usable_h / span_y);

    auto px = [&](double lon) { return margin + (lon - lon_min) * kx * scale; };
    auto py = [&](double lat) { return margin + (lat_max - lat) * scale; };

    auto fill_for = [&](double t) { return svg::lerp_color("#e8f0fe", "#08306b", t); };

    svg::Document doc;
    doc.text(kCanvasWidth / 2.0, 24, title, 16.0, "middle");
    for (const auto& s : shapes) {
        std::string fill = "#cccccc"; // department absent from the aggregates
        if (auto it = value_by_code.find(normalize_department_code(s.code));
            it != value_by_code.end()) {
            const double t = vmax > vmin ? (it->second - vmin) / (vmax - vmin) : 0.5;
            fill = fill_for(t);
        }
        doc.group("class=\"department\" data-code=\"" + svg::escape(s.code) + "\"");
        for (const auto& ring : s.rings) {
            std::string d;
            for (std::size_t i = 0; i < ring.size(); ++i) {
                d += (i == 0 ? "M" : "L") + svg::num(px(ring[i].first)) + " " +
                     svg::num(py(ring[i].second));
            }
            d += "Z";
            doc.path(d, fill, "#666666", 0.5);
        }
        doc.close_group();
    }

    // legend: color ramp with min / mid / max ticks
    doc.group("class=\"legend\"");
    const double lx = kCanvasWidth - 180.0, ly = 80.0, lh = 240.0, lw = 18.0;
    const int steps = 48;
    for (int i = 0; i < steps; ++i) {
        doc.rect(lx, ly + lh - lh * (i + 1) / steps, lw, lh / steps + 0.5,
                 fill_for((i + 0.5) / steps));
    }
    doc.text(lx + lw + 6, ly + lh + 4, format_double(vmin), 11.0);
    doc.text(lx + lw + 6, ly + lh / 2 + 4, format_double((vmin + vmax) / 2.0), 11.0);
    doc.text(lx + lw + 6, ly + 8, format_double(vmax), 11.0);
    doc.close_group();
    return doc.str();
}

} // namespace sinistre
