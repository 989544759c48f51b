// Command-line front end for the claim-classification pipeline:
//   ingest    parse, join and label the policy/claim tables
//   explore   exploratory figures and department statistics
//   train     fit and save a knn or logreg model
//   evaluate  confusion matrix and metrics on the held-out split
//   sweep     accuracy against k, or coefficient paths against C
//   plot      re-render a sweep/path CSV as SVG
//
// Exit codes: 0 success, 1 computation error, 2 usage/config error.

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "sinistre/choropleth.hpp"
#include "sinistre/config.hpp"
#include "sinistre/encode.hpp"
#include "sinistre/ingest.hpp"
#include "sinistre/knn.hpp"
#include "sinistre/logreg.hpp"
#include "sinistre/manifest.hpp"
#include "sinistre/metrics.hpp"
#include "sinistre/model_io.hpp"
#include "sinistre/scaling.hpp"
#include "sinistre/split.hpp"
#include "sinistre/stats.hpp"
#include "sinistre/svg.hpp"

namespace fs = std::filesystem;
using namespace sinistre;

namespace {

/// Thrown for violated preconditions the user can fix (missing files,
/// absent artifacts); mapped to exit code 2.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CommonOptions {
    std::string config_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    unsigned threads = 1;
    std::optional<std::size_t> subsample;
    std::string positive_class;

    void attach(CLI::App* cmd) {
        cmd->add_option("--config", config_path, "JSON configuration file");
        cmd->add_option("--out", out_dir, "output directory (overrides config)");
        cmd->add_option("--seed", seed, "split seed (overrides config)");
        cmd->add_option("--threads", threads, "worker threads for knn queries")
            ->check(CLI::Range(1u, 256u));
        cmd->add_option("--subsample", subsample,
                        "cap the training set at N rows for desk-scale runs");
        cmd->add_option("--positive-class", positive_class,
                        "positive class for metrics: claims | no-claims")
            ->check(CLI::IsMember({"claims", "no-claims"}));
    }

    RunConfig resolve() const {
        RunConfig cfg;
        if (!config_path.empty()) {
            if (!fs::exists(config_path)) {
                throw UsageError("config file not found: " + config_path);
            }
            cfg = load_config(config_path);
        }
        if (!out_dir.empty()) cfg.paths.out_dir = out_dir;
        if (seed) cfg.preprocess.seed = *seed;
        if (!positive_class.empty()) cfg.evaluation.positive_class = positive_class;
        cfg.validate();
        return cfg;
    }
};

void write_text(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out << content;
}

void write_json(const fs::path& path, const nlohmann::json& j) {
    write_text(path, j.dump(2) + "\n");
}

fs::path ensure_out_dir(const RunConfig& cfg) {
    const fs::path out(cfg.paths.out_dir);
    fs::create_directories(out);
    return out;
}

void require_input(const std::string& path, const char* what) {
    if (path.empty()) throw UsageError(std::string("config gives no path for the ") + what);
    if (!fs::exists(path)) throw UsageError(std::string(what) + " not found: " + path);
}

// --- ingest ----------------------------------------------------------------

LabeledDataset run_ingest_pipeline(const RunConfig& cfg) {
    require_input(cfg.paths.policy_csv, "policy table");
    require_input(cfg.paths.claim_csv, "claim table");
    const auto policies = parse_policy_csv(cfg.paths.policy_csv);
    const auto claims = parse_claim_csv(cfg.paths.claim_csv);
    const auto aggregates = aggregate_claims(claims, cfg.ingest.id_policy_format);
    auto dataset = merge(policies, aggregates);
    return impute_vh_age(dataset, cfg.impute_strategy(), cfg.impute_external());
}

nlohmann::json summarize_dataset(const LabeledDataset& dataset) {
    const auto hist = claim_frequency_histogram(dataset);
    std::size_t with_claims = 0;
    long long total_claims = 0;
    double total_amount = 0.0;
    for (const auto& row : dataset.rows) {
        with_claims += row.label;
        total_claims += row.claim_nb;
        total_amount += row.claim_amount;
    }
    nlohmann::json hist_json = nlohmann::json::object();
    for (const auto& [claim_nb, count] : hist) hist_json[std::to_string(claim_nb)] = count;
    const double n = static_cast<double>(dataset.size());
    return nlohmann::json{
        {"rows", dataset.size()},
        {"policies_with_claims", with_claims},
        {"policies_without_claims", dataset.size() - with_claims},
        {"share_without_claims", dataset.empty() ? 0.0 : (n - with_claims) / n},
        {"total_claim_count", total_claims},
        {"total_claim_amount", total_amount},
        {"claim_frequency_histogram", hist_json}};
}

int cmd_ingest(const CommonOptions& opts) {
    const auto cfg = opts.resolve();
    const auto out = ensure_out_dir(cfg);
    const auto dataset = run_ingest_pipeline(cfg);

    const auto merged_path = out / "merged.csv";
    {
        std::ofstream f(merged_path, std::ios::binary);
        dump_merged_csv(dataset, f);
    }
    const auto summary = summarize_dataset(dataset);
    write_json(out / "ingest_summary.json", summary);

    RunManifest manifest;
    manifest.add_input(cfg.paths.policy_csv);
    manifest.add_input(cfg.paths.claim_csv);
    manifest.add_artifact(merged_path);
    manifest.add_artifact(out / "ingest_summary.json");
    manifest.config = config_to_json(cfg);
    manifest.write(out / "manifest.json");

    std::cout << "rows: " << summary["rows"] << "\n"
              << "with claims:    " << summary["policies_with_claims"] << " ("
              << format_double(100.0 * (1.0 - summary["share_without_claims"].get<double>()))
              << "%)\n"
              << "without claims: " << summary["policies_without_claims"] << " ("
              << format_double(100.0 * summary["share_without_claims"].get<double>()) << "%)\n"
              << "claims total: " << summary["total_claim_count"] << " amounting to "
              << format_double(summary["total_claim_amount"].get<double>()) << "\n"
              << "claim frequency histogram:\n";
    for (const auto& [freq, count] : summary["claim_frequency_histogram"].items()) {
        std::cout << "  " << freq << ": " << count << "\n";
    }
    std::cout << "artifacts in " << out.string() << "\n";
    return 0;
}

// --- shared preprocessing ----------------------------------------------------

struct Prepared {
    FeatureSchema schema;
    ScalingParams scaling;
    SplitIndices split;
    Matrix train_x;
    std::vector<int> train_y;
    Matrix test_x;
    std::vector<int> test_y;
};

LabeledDataset load_ingest_artifact(const RunConfig& cfg) {
    const fs::path out(cfg.paths.out_dir);
    const auto merged = out / "merged.csv";
    const auto manifest_path = out / "manifest.json";
    if (!fs::exists(merged) || !fs::exists(manifest_path)) {
        throw UsageError("no ingest artifact under '" + out.string() + "'; run ingest first");
    }
    const auto manifest = RunManifest::read(manifest_path);
    const auto it = manifest.artifacts.find("merged.csv");
    if (it == manifest.artifacts.end() || it->second != hash_hex(fnv1a64_file(merged))) {
        throw std::runtime_error("merged.csv does not match the manifest hash; re-run ingest");
    }
    return load_merged_csv(merged);
}

Prepared prepare(const LabeledDataset& dataset, const RunConfig& cfg,
                 std::optional<std::size_t> subsample) {
    EncodeSpec spec;
    spec.features = cfg.preprocess.features;
    spec.categorical = cfg.preprocess.categorical;

    auto encoded = one_hot_encode(dataset, spec);
    auto split = train_test_split(encoded.rows(), cfg.preprocess.test_fraction,
                                  cfg.preprocess.seed);
    if (subsample && *subsample < split.train.size()) {
        split.train.resize(*subsample);
    }

    Prepared prep;
    prep.schema = encoded.schema;
    if (cfg.preprocess.fit_on_train) {
        prep.scaling = fit_scaling(encoded.values.take_rows(split.train), cfg.scaling_kind());
    } else {
        // reference behaviour: scaler fitted on the full table before splitting
        prep.scaling = fit_scaling(encoded.values, cfg.scaling_kind());
    }
    const Matrix scaled = apply_scaling(encoded.values, prep.scaling);

    prep.train_x = scaled.take_rows(split.train);
    prep.test_x = scaled.take_rows(split.test);
    for (auto i : split.train) prep.train_y.push_back(encoded.labels[i]);
    for (auto i : split.test) prep.test_y.push_back(encoded.labels[i]);
    prep.split = std::move(split);
    return prep;
}

// --- train -------------------------------------------------------------------

int cmd_train(const CommonOptions& opts, const std::string& kind) {
    const auto cfg = opts.resolve();
    const auto out = ensure_out_dir(cfg);
    const auto dataset = load_ingest_artifact(cfg);
    const auto prep = prepare(dataset, cfg, opts.subsample);

    std::vector<int> train_pred;
    fs::path model_path;
    std::string descriptor;

    if (kind == "knn") {
        SavedKnnModel saved;
        saved.model.train = prep.train_x;
        saved.model.labels = prep.train_y;
        saved.model.k = cfg.knn.k;
        saved.model.metric = cfg.knn_metric();
        saved.model.weighting = cfg.knn_weighting();
        saved.model.validate();
        saved.schema = prep.schema;
        saved.scaling = prep.scaling;
        model_path = out / "knn_model.json";
        save_knn_model(saved, model_path);
        descriptor = "knn k=" + std::to_string(cfg.knn.k) + " " + cfg.knn.weighting;
        train_pred = predict(prep.train_x, saved.model, opts.threads);
    } else {
        auto model = fit(prep.train_x, prep.train_y, cfg.logreg_penalty(), cfg.logreg_lambda(),
                         cfg.logreg_fit_config());
        model.schema = prep.schema;
        model_path = out / "logreg_model.json";
        save_logreg_model(model, prep.scaling, model_path);
        descriptor = "logreg penalty=" + cfg.logreg.penalty +
                     " C=" + format_double(cfg.logreg.C);
        train_pred = predict(prep.train_x, model);
        std::cout << "optimizer: " << model.trace.size() - 1 << " iterations, "
                  << (model.converged ? "converged" : "stopped at the iteration cap")
                  << ", objective " << format_double(model.trace.back().objective) << "\n";
    }

    const auto report =
        make_report(prep.train_y, train_pred, cfg.positive_label(), descriptor + " [train]");
    write_json(out / ("train_metrics_" + kind + ".json"), report_to_json(report));
    std::cout << format_report(report) << "model saved to " << model_path.string() << "\n";
    return 0;
}

// --- evaluate ------------------------------------------------------------------

int cmd_evaluate(const CommonOptions& opts, const std::string& model_file) {
    const auto cfg = opts.resolve();
    const auto out = ensure_out_dir(cfg);
    if (!fs::exists(model_file)) throw UsageError("model file not found: " + model_file);

    const auto dataset = load_ingest_artifact(cfg);

    nlohmann::json header;
    {
        std::ifstream in(model_file);
        in >> header;
    }
    const std::string format = header.value("format", "");

    std::vector<int> predictions;
    std::vector<int> truth;
    std::string descriptor;

    if (format == "sinistre-knn") {
        const auto saved = knn_from_json(header);
        auto encoded = encode_with_schema(dataset, saved.schema);
        const Matrix scaled = apply_scaling(encoded.values, saved.scaling);
        auto split = train_test_split(encoded.rows(), cfg.preprocess.test_fraction,
                                      cfg.preprocess.seed);
        predictions = predict(scaled.take_rows(split.test), saved.model, opts.threads);
        for (auto i : split.test) truth.push_back(encoded.labels[i]);
        descriptor = "knn k=" + std::to_string(saved.model.k);
    } else if (format == "sinistre-logreg") {
        const auto saved = load_logreg_model(model_file);
        auto encoded = encode_with_schema(dataset, saved.model.schema);
        if (schema_hash(encoded.schema) != schema_hash(saved.model.schema)) {
            throw std::runtime_error("dataset schema does not match the trained model");
        }
        const Matrix scaled = apply_scaling(encoded.values, saved.scaling);
        auto split = train_test_split(encoded.rows(), cfg.preprocess.test_fraction,
                                      cfg.preprocess.seed);
        predictions = predict(scaled.take_rows(split.test), saved.model);
        for (auto i : split.test) truth.push_back(encoded.labels[i]);
        descriptor = "logreg penalty=" + cfg.logreg.penalty;
    } else {
        throw UsageError("unrecognised model format in " + model_file);
    }

    const auto report = make_report(truth, predictions, cfg.positive_label(), descriptor);
    write_json(out / "evaluation.json", report_to_json(report));
    std::cout << format_report(report);
    return 0;
}

// --- sweep ----------------------------------------------------------------------

std::vector<double> parse_value_list(const std::string& csv) {
    std::vector<double> values;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto v = parse_double_cell(item);
        if (!v) throw UsageError("bad numeric value in --values: '" + item + "'");
        values.push_back(*v);
    }
    return values;
}

int cmd_sweep(const CommonOptions& opts, const std::string& parameter,
              const std::string& values_csv) {
    const auto cfg = opts.resolve();
    const auto out = ensure_out_dir(cfg);
    const auto dataset = load_ingest_artifact(cfg);
    const auto prep = prepare(dataset, cfg, opts.subsample);

    if (parameter == "k") {
        std::vector<std::size_t> ks;
        if (values_csv.empty()) {
            for (std::size_t k = 1; k <= 30; ++k) ks.push_back(k);
        } else {
            for (double v : parse_value_list(values_csv)) {
                if (v < 1.0 || v != std::floor(v)) {
                    throw UsageError("k values must be positive integers");
                }
                ks.push_back(static_cast<std::size_t>(v));
            }
        }
        const auto sweep =
            accuracy_vs_k_sweep(prep.train_x, prep.train_y, prep.test_x, prep.test_y, ks,
                                cfg.knn_metric(), cfg.knn_weighting(), opts.threads);

        std::ostringstream csv;
        csv << "k,train_accuracy,test_accuracy\n";
        LineSeries train_series{"train", {}}, test_series{"test", {}};
        for (const auto& p : sweep) {
            csv << p.k << ',' << format_double(p.train_accuracy) << ','
                << format_double(p.test_accuracy) << '\n';
            train_series.points.emplace_back(static_cast<double>(p.k), p.train_accuracy);
            test_series.points.emplace_back(static_cast<double>(p.k), p.test_accuracy);
        }
        write_text(out / "k_sweep.csv", csv.str());
        write_text(out / "k_sweep.svg",
                   render_line({train_series, test_series}, "accuracy against k", "k",
                               "accuracy"));
        std::cout << "wrote " << (out / "k_sweep.csv").string() << " and k_sweep.svg ("
                  << sweep.size() << " grid points)\n";
        return 0;
    }

    if (parameter == "C") {
        std::vector<double> cs = values_csv.empty()
                                     ? std::vector<double>{1e-3, 1e-2, 1e-1, 1.0, 1e1, 1e2, 1e3}
                                     : parse_value_list(values_csv);
        const auto path = regularization_path(prep.train_x, prep.train_y, cfg.logreg_penalty(),
                                              cs, cfg.logreg_fit_config());

        std::ostringstream csv;
        csv << "C";
        for (const auto& col : prep.schema.columns) csv << ',' << csv_escape(col.name);
        csv << '\n';
        std::vector<LineSeries> series(prep.schema.size());
        for (std::size_t j = 0; j < prep.schema.size(); ++j) {
            series[j].name = prep.schema.columns[j].name;
        }
        for (const auto& point : path) {
            csv << format_double(point.C);
            for (std::size_t j = 0; j < point.weights.size(); ++j) {
                csv << ',' << format_double(point.weights[j]);
                series[j].points.emplace_back(point.C, point.weights[j]);
            }
            csv << '\n';
        }
        write_text(out / "c_path.csv", csv.str());
        write_text(out / "c_path.svg",
                   render_line(series, "coefficients against C", "C", "coefficient", true));
        std::cout << "wrote " << (out / "c_path.csv").string() << " and c_path.svg ("
                  << path.size() << " grid points, " << prep.schema.size()
                  << " coefficients)\n";
        return 0;
    }

    throw UsageError("sweep parameter must be 'k' or 'C'");
}

// --- explore --------------------------------------------------------------------

int cmd_explore(const CommonOptions& opts) {
    const auto cfg = opts.resolve();
    const auto out = ensure_out_dir(cfg);
    const auto dataset = run_ingest_pipeline(cfg);

    // policy/claim frequency figures, one per feature as in the reference
    // exploration: categoricals directly, numerics through their bin widths
    struct FigureSpec {
        std::string feature;
        Binning binning;
    };
    const std::vector<FigureSpec> figures{
        {"pol_bonus", Binning::uniform(0.05)},
        {"pol_coverage", {}},
        {"drv_age1", default_binning_for("drv_age1")},
        {"pol_pay_freq", {}},
        {"vh_fuel", {}},
        {"pol_payd", {}},
        {"pol_duration", default_binning_for("pol_duration")},
        {"pol_sit_duration", default_binning_for("pol_sit_duration")},
        {"vh_speed", default_binning_for("vh_speed")},
        {"pol_usage", {}},
        {"vh_age", default_binning_for("vh_age")},
        {"vh_type", {}},
    };
    for (const auto& fig : figures) {
        const auto rows =
            claim_proportion_by_level(dataset, fig.feature, fig.binning,
                                      cfg.proportion_numerator(), cfg.explore.ci_level,
                                      cfg.ci_method());
        write_text(out / ("frequency_" + fig.feature + ".svg"),
                   render_bar_with_ci(rows, "policy and claim frequency per " + fig.feature));
        std::ostringstream csv;
        csv << "level,policy_count,claim_count,proportion,ci_low,ci_high\n";
        for (const auto& r : rows) {
            csv << csv_escape(r.level) << ',' << r.policy_count << ',' << r.claim_count << ','
                << format_double(r.proportion) << ',' << format_double(r.ci_low) << ','
                << format_double(r.ci_high) << '\n';
        }
        write_text(out / ("frequency_" + fig.feature + ".csv"), csv.str());
    }

    // correlation heatmap over the configured numeric columns
    const auto numeric = numeric_feature_matrix(dataset, cfg.explore.heatmap_columns);
    const auto corr = pearson_correlation_matrix(numeric, cfg.explore.heatmap_columns);
    write_text(out / "heatmap.svg", render_heatmap(corr, "correlation heatmap"));

    // department aggregation: stats table plus choropleths
    const auto aggregates = aggregate_by_department(dataset);
    {
        std::ostringstream csv;
        csv << "department,policy_count,claim_count,claim_amount\n";
        for (const auto& a : aggregates) {
            csv << a.code << ',' << a.policy_count << ',' << a.claim_count << ','
                << format_double(a.claim_amount) << '\n';
        }
        write_text(out / "department_aggregates.csv", csv.str());
    }
    {
        std::vector<double> claim_counts, claim_amounts, policy_counts;
        for (const auto& a : aggregates) {
            claim_counts.push_back(static_cast<double>(a.claim_count));
            claim_amounts.push_back(a.claim_amount);
            policy_counts.push_back(static_cast<double>(a.policy_count));
        }
        std::ostringstream csv;
        csv << "statistic,mean,stddev,min,q1,median,q3,max\n";
        auto emit = [&](const char* name, const std::vector<double>& values) {
            const auto s = summary_stats(values);
            csv << name << ',' << format_double(s.mean) << ','
                << (s.stddev ? format_double(*s.stddev) : "undefined") << ','
                << format_double(s.min) << ',' << format_double(s.q1) << ','
                << format_double(s.median) << ',' << format_double(s.q3) << ','
                << format_double(s.max) << '\n';
        };
        emit("claim_number", claim_counts);
        emit("claim_amount", claim_amounts);
        emit("policy_count", policy_counts);
        write_text(out / "department_stats.csv", csv.str());
    }

    if (cfg.paths.geojson.empty() || !fs::exists(cfg.paths.geojson)) {
        std::cerr << "warning: no geojson map supplied; skipping the choropleths\n";
    } else {
        const auto shapes =
            load_department_geojson(cfg.paths.geojson, cfg.explore.geojson_code_property);
        write_text(out / "choropleth_claim_count.svg",
                   render_choropleth(shapes, aggregates, ChoroplethField::claim_count,
                                     "total claims per department"));
        write_text(out / "choropleth_claim_amount.svg",
                   render_choropleth(shapes, aggregates, ChoroplethField::claim_amount,
                                     "total claim amount per department"));
        write_text(out / "choropleth_policy_count.svg",
                   render_choropleth(shapes, aggregates, ChoroplethField::policy_count,
                                     "policies per department"));
    }

    std::cout << "explore artifacts in " << out.string() << "\n";
    return 0;
}

// --- plot -----------------------------------------------------------------------

int cmd_plot(const CommonOptions& opts, const std::string& csv_file) {
    const auto cfg = opts.resolve();
    if (!fs::exists(csv_file)) throw UsageError("csv file not found: " + csv_file);
    const auto table = read_csv(csv_file);
    fs::path svg_path = opts.out_dir.empty()
                            ? fs::path(csv_file).replace_extension(".svg")
                            : ensure_out_dir(cfg) / fs::path(csv_file)
                                  .filename()
                                  .replace_extension(".svg");

    if (!table.header.empty() && table.header.front() == "k") {
        LineSeries train{"train", {}}, test{"test", {}};
        const auto tr = table.require_column("train_accuracy");
        const auto te = table.require_column("test_accuracy");
        for (const auto& row : table.rows) {
            const double k = parse_double_cell(row[0]).value();
            train.points.emplace_back(k, parse_double_cell(row[tr]).value());
            test.points.emplace_back(k, parse_double_cell(row[te]).value());
        }
        write_text(svg_path, render_line({train, test}, "accuracy against k", "k", "accuracy"));
    } else if (!table.header.empty() && table.header.front() == "C") {
        std::vector<LineSeries> series(table.header.size() - 1);
        for (std::size_t j = 1; j < table.header.size(); ++j) {
            series[j - 1].name = table.header[j];
        }
        for (const auto& row : table.rows) {
            const double c = parse_double_cell(row[0]).value();
            for (std::size_t j = 1; j < row.size(); ++j) {
                series[j - 1].points.emplace_back(c, parse_double_cell(row[j]).value());
            }
        }
        write_text(svg_path,
                   render_line(series, "coefficients against C", "C", "coefficient", true));
    } else {
        throw UsageError("unrecognised sweep CSV (expected a leading 'k' or 'C' column)");
    }
    std::cout << "wrote " << svg_path.string() << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"French motor-TPL claim classification toolkit"};
    app.require_subcommand(1);

    CommonOptions opts;
    std::string train_kind;
    std::string model_file;
    std::string sweep_parameter;
    std::string sweep_values;
    std::string plot_csv;

    auto* ingest = app.add_subcommand("ingest", "parse, join and label the input tables");
    opts.attach(ingest);

    auto* explore = app.add_subcommand("explore", "exploratory statistics and figures");
    opts.attach(explore);

    auto* train = app.add_subcommand("train", "fit a classifier on the training split");
    train->add_option("kind", train_kind, "model kind: knn | logreg")
        ->required()
        ->check(CLI::IsMember({"knn", "logreg"}));
    opts.attach(train);

    auto* evaluate = app.add_subcommand("evaluate", "score a saved model on the test split");
    evaluate->add_option("model", model_file, "path to a saved model file")->required();
    opts.attach(evaluate);

    auto* sweep = app.add_subcommand("sweep", "hyperparameter sweeps (k or C)");
    sweep->add_option("parameter", sweep_parameter, "k | C")
        ->required()
        ->check(CLI::IsMember({"k", "C"}));
    sweep->add_option("--values", sweep_values, "comma-separated grid values");
    opts.attach(sweep);

    auto* plot = app.add_subcommand("plot", "re-render a sweep CSV as SVG");
    plot->add_option("csv", plot_csv, "k_sweep.csv or c_path.csv produced by sweep")
        ->required();
    opts.attach(plot);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (ingest->parsed()) return cmd_ingest(opts);
        if (explore->parsed()) return cmd_explore(opts);
        if (train->parsed()) return cmd_train(opts, train_kind);
        if (evaluate->parsed()) return cmd_evaluate(opts, model_file);
        if (sweep->parsed()) return cmd_sweep(opts, sweep_parameter, sweep_values);
        if (plot->parsed()) return cmd_plot(opts, plot_csv);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
