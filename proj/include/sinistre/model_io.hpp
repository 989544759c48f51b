#pragma once

// Model persistence. Both classifiers save as self-describing JSON. The
// KNN file embeds everything needed to score raw queries later: the
// training matrix and labels plus the feature schema and scaling
// parameters they were encoded with. The logistic file stores the
// coefficient vector and a schema fingerprint; scoring re-encodes the
// data and refuses a mismatched schema.

#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>

#include "json.hpp"

#include "sinistre/encode.hpp"
#include "sinistre/knn.hpp"
#include "sinistre/logreg.hpp"
#include "sinistre/scaling.hpp"

namespace sinistre {

class ModelIoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace model_io_detail {

inline nlohmann::json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ModelIoError("cannot open model file '" + path.string() + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ModelIoError("malformed model file '" + path.string() + "': " + e.what());
    }
    return j;
}

inline void write_json_file(const std::filesystem::path& path, const nlohmann::json& j) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ModelIoError("cannot open '" + path.string() + "' for writing");
    out << j.dump(2) << '\n';
    if (!out) throw ModelIoError("write failure on '" + path.string() + "'");
}

inline void check_format(const nlohmann::json& j, const std::string& expected) {
    if (j.value("format", "") != expected) {
        throw ModelIoError("expected a '" + expected + "' file, found format '" +
                           j.value("format", "<none>") + "'");
    }
}

inline std::string weighting_name(VoteWeighting w) {
    return w == VoteWeighting::uniform ? "uniform" : "inverse_distance";
}

inline std::string penalty_name(Penalty p) {
    switch (p) {
        case Penalty::none: return "none";
        case Penalty::lasso: return "lasso";
        case Penalty::ridge: return "ridge";
        case Penalty::elastic_net: return "elastic_net";
    }
    return "none";
}

inline Penalty penalty_from_name(const std::string& name) {
    if (name == "none") return Penalty::none;
    if (name == "lasso") return Penalty::lasso;
    if (name == "ridge") return Penalty::ridge;
    if (name == "elastic_net") return Penalty::elastic_net;
    throw ModelIoError("unknown penalty '" + name + "'");
}

} // namespace model_io_detail

/// KNN model plus the encoding state needed to score raw policy rows.
struct SavedKnnModel {
    KnnModel model;
    FeatureSchema schema;
    ScalingParams scaling;
};

inline nlohmann::json knn_to_json(const SavedKnnModel& saved) {
    const KnnModel& m = saved.model;
    nlohmann::json j{
        {"format", "sinistre-knn"},
        {"version", 1},
        {"k", m.k},
        {"metric",
         {{"kind", m.metric.kind == DistanceMetric::Kind::chebyshev ? "chebyshev" : "minkowski"},
          {"order", m.metric.order}}},
        {"weighting", model_io_detail::weighting_name(m.weighting)},
        {"labels", m.labels},
        {"matrix",
         {{"rows", m.train.rows()}, {"cols", m.train.cols()}, {"data", m.train.data()}}},
        {"schema", schema_to_json(saved.schema)},
        {"scaling", scaling_to_json(saved.scaling)}};
    return j;
}

inline SavedKnnModel knn_from_json(const nlohmann::json& j) {
    model_io_detail::check_format(j, "sinistre-knn");
    SavedKnnModel saved;
    KnnModel& m = saved.model;
    m.k = j.at("k").get<std::size_t>();
    const auto& metric = j.at("metric");
    if (metric.at("kind").get<std::string>() == "chebyshev") {
        m.metric = DistanceMetric::chebyshev();
    } else {
        m.metric = DistanceMetric::minkowski(metric.at("order").get<double>());
    }
    const auto weighting = j.at("weighting").get<std::string>();
    if (weighting == "uniform") {
        m.weighting = VoteWeighting::uniform;
    } else if (weighting == "inverse_distance") {
        m.weighting = VoteWeighting::inverse_distance;
    } else {
        throw ModelIoError("unknown weighting '" + weighting + "'");
    }
    m.labels = j.at("labels").get<std::vector<int>>();
    const auto& mat = j.at("matrix");
    m.train = Matrix(mat.at("rows").get<std::size_t>(), mat.at("cols").get<std::size_t>(),
                     mat.at("data").get<std::vector<double>>());
    saved.schema = schema_from_json(j.at("schema"));
    saved.scaling = scaling_from_json(j.at("scaling"));
    m.validate();
    return saved;
}

inline void save_knn_model(const SavedKnnModel& saved, const std::filesystem::path& path) {
    model_io_detail::write_json_file(path, knn_to_json(saved));
}

inline SavedKnnModel load_knn_model(const std::filesystem::path& path) {
    return knn_from_json(model_io_detail::read_json_file(path));
}

inline nlohmann::json logreg_to_json(const LogregModel& m, const ScalingParams& scaling) {
    return nlohmann::json{{"format", "sinistre-logreg"},
                          {"version", 1},
                          {"weights", m.weights},
                          {"intercept", m.intercept},
                          {"penalty",
                           {{"kind", model_io_detail::penalty_name(m.penalty.kind)},
                            {"mix", m.penalty.mix}}},
                          {"lambda", m.lambda},
                          {"schema_hash", hash_hex(schema_hash(m.schema))},
                          {"schema", schema_to_json(m.schema)},
                          {"scaling", scaling_to_json(scaling)},
                          {"converged", m.converged}};
}

struct SavedLogregModel {
    LogregModel model;
    ScalingParams scaling;
};

inline SavedLogregModel logreg_from_json(const nlohmann::json& j) {
    model_io_detail::check_format(j, "sinistre-logreg");
    SavedLogregModel saved;
    LogregModel& m = saved.model;
    m.weights = j.at("weights").get<std::vector<double>>();
    m.intercept = j.at("intercept").get<double>();
    m.penalty.kind = model_io_detail::penalty_from_name(
        j.at("penalty").at("kind").get<std::string>());
    m.penalty.mix = j.at("penalty").at("mix").get<double>();
    m.lambda = j.at("lambda").get<double>();
    m.schema = schema_from_json(j.at("schema"));
    m.converged = j.value("converged", false);
    if (j.at("schema_hash").get<std::string>() != hash_hex(schema_hash(m.schema))) {
        throw ModelIoError("logreg model: embedded schema does not match its hash");
    }
    if (m.weights.size() != m.schema.size()) {
        throw ModelIoError("logreg model: weight count does not match schema");
    }
    saved.scaling = scaling_from_json(j.at("scaling"));
    return saved;
}

inline void save_logreg_model(const LogregModel& m, const ScalingParams& scaling,
                              const std::filesystem::path& path) {
    model_io_detail::write_json_file(path, logreg_to_json(m, scaling));
}

inline SavedLogregModel load_logreg_model(const std::filesystem::path& path) {
    return logreg_from_json(model_io_detail::read_json_file(path));
}

} // namespace sinistre
