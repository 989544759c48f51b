#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "json.hpp"

#include "sinistre/csv.hpp"
#include "sinistre/model_io.hpp"
#include "support/xml_lint.hpp"

namespace fs = std::filesystem;

namespace {

const fs::path kFixtures{SINISTRE_FIXTURE_DIR};

std::string cli_path() {
    const char* env = std::getenv("SINISTRE_CLI");
    REQUIRE(env != nullptr); // set by ctest
    return env;
}

struct RunResult {
    int exit_code;
    std::string output;
};

RunResult run_cli(const std::string& args, const fs::path& cwd) {
    const std::string cmd =
        "cd '" + cwd.string() + "' && '" + cli_path() + "' " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string output;
    char buf[4096];
    while (std::size_t n = std::fread(buf, 1, sizeof(buf), pipe)) output.append(buf, n);
    const int status = pclose(pipe);
    return {WEXITSTATUS(status), output};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

/// Scratch workspace holding a synthetic portfolio: 120 policies, ~30 with
/// claims, plus a config wired to it.
struct Workspace {
    fs::path dir;

    Workspace() {
        dir = fs::temp_directory_path() /
              ("sinistre_cli_" + std::to_string(::getpid()) + "_" + std::to_string(next()));
        fs::create_directories(dir);
        write_tables();
        write_config();
    }
    ~Workspace() { fs::remove_all(dir); }

    static int next() {
        static int c = 0;
        return c++;
    }

    void write_tables() {
        std::mt19937 rng(99);
        auto pick = [&](const std::vector<std::string>& xs) {
            return xs[rng() % xs.size()];
        };
        std::ostringstream pol, cla;
        pol << "id_policy,pol_bonus,pol_coverage,pol_duration,pol_sit_duration,pol_pay_freq,"
               "pol_payd,pol_usage,pol_insee_code,drv_drv2,drv_age1,drv_age2,drv_sex1,drv_sex2,"
               "drv_age_lic1,drv_age_lic2,vh_age,vh_cyl,vh_din,vh_fuel,vh_make,vh_model,"
               "vh_sale_begin,vh_sale_end,vh_speed,vh_type,vh_value,vh_weight\n";
        cla << "id_client,id_vehicle,claim_nb,claim_amount\n";
        for (int i = 0; i < 120; ++i) {
            char cid[8];
            std::snprintf(cid, sizeof(cid), "K%03d", i);
            const bool drv2 = rng() % 5 == 0;
            const int age1 = 20 + static_cast<int>(rng() % 50);
            pol << cid << "V01," << pick({"0.5", "0.72", "0.9", "1", "1.25"}) << ','
                << pick({"Mini", "Median1", "Median2", "Maxi"}) << ',' << rng() % 20 << ','
                << rng() % 10 << ',' << pick({"Annual", "Biannual", "Quarterly", "Monthly"})
                << ',' << pick({"Yes", "No"}) << ','
                << pick({"WorkPrivate", "Retired", "Professional", "AllTrips"}) << ','
                << pick({"75056", "2A004", "69123", "13055"}) << ','
                << (drv2 ? "Yes" : "No") << ',' << age1 << ','
                << (drv2 ? 20 + static_cast<int>(rng() % 40) : 0) << ',' << pick({"M", "F"})
                << ',' << (drv2 ? pick({"M", "F"}) : "") << ',' << age1 - 18 << ','
                << (drv2 ? 2 + static_cast<int>(rng() % 30) : 0) << ',' << rng() % 15 << ','
                << pick({"1149", "1398", "1997"}) << ',' << 60 + static_cast<int>(rng() % 100)
                << ',' << pick({"Diesel", "Gasoline", "Hybrid"}) << ",MAKE,MODEL,2010,2015,"
                << pick({"160", "175", "190", "210"}) << ',' << pick({"Tourism", "Commercial"})
                << ',' << 5000 + static_cast<int>(rng() % 25000) << ','
                << 900 + static_cast<int>(rng() % 700) << '\n';
            if (rng() % 4 == 0) {
                cla << cid << ",V01,1," << 100 + static_cast<int>(rng() % 4000) << ".5\n";
            }
        }
        std::ofstream(dir / "policies.csv") << pol.str();
        std::ofstream(dir / "claims.csv") << cla.str();
    }

    void write_config(int knn_k = 3) {
        nlohmann::json cfg{
            {"paths",
             {{"policy_csv", (dir / "policies.csv").string()},
              {"claim_csv", (dir / "claims.csv").string()},
              {"geojson", (kFixtures / "departments_toy.geojson").string()},
              {"out_dir", (dir / "out").string()}}},
            {"knn", {{"k", knn_k}}},
            {"logreg", {{"penalty", "ridge"}, {"C", 1.0}}}};
        std::ofstream(dir / "config.json") << cfg.dump(2);
    }

    std::string config_arg() const { return "--config '" + (dir / "config.json").string() + "'"; }
    fs::path out() const { return dir / "out"; }
};

} // namespace

TEST_CASE("the pipeline runs end to end") {
    Workspace ws;

    SECTION("ingest writes the artifact set and a coherent summary") {
        const auto r = run_cli("ingest " + ws.config_arg(), ws.dir);
        INFO(r.output);
        REQUIRE(r.exit_code == 0);
        CHECK(fs::exists(ws.out() / "merged.csv"));
        CHECK(fs::exists(ws.out() / "manifest.json"));

        const auto summary =
            nlohmann::json::parse(slurp(ws.out() / "ingest_summary.json"));
        CHECK(summary["rows"] == 120);
        const auto with = summary["policies_with_claims"].get<int>();
        const auto without = summary["policies_without_claims"].get<int>();
        CHECK(with + without == 120);
        CHECK(with > 0);

        // histogram counts partition the table
        std::size_t total = 0;
        for (const auto& [_, v] : summary["claim_frequency_histogram"].items()) {
            total += v.get<std::size_t>();
        }
        CHECK(total == 120);

        // rerunning produces identical bytes
        const auto merged_before = slurp(ws.out() / "merged.csv");
        const auto manifest_before = slurp(ws.out() / "manifest.json");
        REQUIRE(run_cli("ingest " + ws.config_arg(), ws.dir).exit_code == 0);
        CHECK(slurp(ws.out() / "merged.csv") == merged_before);
        CHECK(slurp(ws.out() / "manifest.json") == manifest_before);
    }

    SECTION("train, evaluate and sweep consume the artifact") {
        REQUIRE(run_cli("ingest " + ws.config_arg(), ws.dir).exit_code == 0);

        const auto train_knn = run_cli("train knn " + ws.config_arg(), ws.dir);
        INFO(train_knn.output);
        REQUIRE(train_knn.exit_code == 0);
        REQUIRE(fs::exists(ws.out() / "knn_model.json"));
        CHECK_NOTHROW(sinistre::load_knn_model(ws.out() / "knn_model.json"));

        // deterministic retrain: byte-identical model
        const auto model_bytes = slurp(ws.out() / "knn_model.json");
        REQUIRE(run_cli("train knn " + ws.config_arg(), ws.dir).exit_code == 0);
        CHECK(slurp(ws.out() / "knn_model.json") == model_bytes);

        const auto train_lr = run_cli("train logreg " + ws.config_arg(), ws.dir);
        INFO(train_lr.output);
        REQUIRE(train_lr.exit_code == 0);
        CHECK(train_lr.output.find("optimizer:") != std::string::npos);
        CHECK_NOTHROW(sinistre::load_logreg_model(ws.out() / "logreg_model.json"));

        const auto eval_knn = run_cli(
            "evaluate '" + (ws.out() / "knn_model.json").string() + "' " + ws.config_arg(),
            ws.dir);
        INFO(eval_knn.output);
        REQUIRE(eval_knn.exit_code == 0);
        CHECK(eval_knn.output.find("accuracy") != std::string::npos);
        const auto report = nlohmann::json::parse(slurp(ws.out() / "evaluation.json"));
        CHECK(report["positive_label"] == 0);
        const auto cm = report["confusion"];
        CHECK(cm["tp"].get<int>() + cm["fn"].get<int>() + cm["fp"].get<int>() +
                  cm["tn"].get<int>() ==
              30); // quarter of 120

        const auto sweep = run_cli("sweep k --values 1,3,5 " + ws.config_arg(), ws.dir);
        INFO(sweep.output);
        REQUIRE(sweep.exit_code == 0);
        const auto sweep_table = sinistre::read_csv(ws.out() / "k_sweep.csv");
        CHECK(sweep_table.rows.size() == 3);
        xml_lint::check_well_formed(slurp(ws.out() / "k_sweep.svg"));

        const auto path = run_cli("sweep C --values 0.1,1 " + ws.config_arg(), ws.dir);
        INFO(path.output);
        REQUIRE(path.exit_code == 0);
        const auto path_table = sinistre::read_csv(ws.out() / "c_path.csv");
        CHECK(path_table.rows.size() == 2);
        CHECK(path_table.header.size() > 30); // one column per coefficient
        xml_lint::check_well_formed(slurp(ws.out() / "c_path.svg"));

        const auto single = run_cli("sweep k --values 7 " + ws.config_arg(), ws.dir);
        REQUIRE(single.exit_code == 0);
        CHECK(sinistre::read_csv(ws.out() / "k_sweep.csv").rows.size() == 1);
        xml_lint::check_well_formed(slurp(ws.out() / "k_sweep.svg"));

        const auto replot = run_cli(
            "plot '" + (ws.out() / "c_path.csv").string() + "' " + ws.config_arg(), ws.dir);
        REQUIRE(replot.exit_code == 0);
    }

    SECTION("explore emits figures; missing geojson only downgrades to a warning") {
        const auto r = run_cli("explore " + ws.config_arg(), ws.dir);
        INFO(r.output);
        REQUIRE(r.exit_code == 0);
        for (const auto* name :
             {"heatmap.svg", "frequency_pol_coverage.svg", "frequency_drv_age1.svg",
              "choropleth_claim_count.svg", "choropleth_claim_amount.svg",
              "choropleth_policy_count.svg"}) {
            INFO(name);
            REQUIRE(fs::exists(ws.out() / name));
            xml_lint::check_well_formed(slurp(ws.out() / name));
        }
        const auto stats_table = sinistre::read_csv(ws.out() / "department_stats.csv");
        REQUIRE(stats_table.rows.size() == 3);
        CHECK(stats_table.rows[0][0] == "claim_number");

        // no geojson: choropleths skipped with a warning, still exit 0
        nlohmann::json cfg = nlohmann::json::parse(slurp(ws.dir / "config.json"));
        cfg["paths"].erase("geojson");
        cfg["paths"]["out_dir"] = (ws.dir / "out2").string();
        std::ofstream(ws.dir / "config2.json") << cfg.dump(2);
        const auto r2 =
            run_cli("explore --config '" + (ws.dir / "config2.json").string() + "'", ws.dir);
        INFO(r2.output);
        REQUIRE(r2.exit_code == 0);
        CHECK(r2.output.find("skipping the choropleths") != std::string::npos);
        CHECK_FALSE(fs::exists(ws.dir / "out2" / "choropleth_claim_count.svg"));
        CHECK(fs::exists(ws.dir / "out2" / "heatmap.svg"));
    }
}

TEST_CASE("usage errors exit with code 2") {
    Workspace ws;
    // missing claim file
    nlohmann::json cfg = nlohmann::json::parse(slurp(ws.dir / "config.json"));
    cfg["paths"]["claim_csv"] = (ws.dir / "absent.csv").string();
    std::ofstream(ws.dir / "bad.json") << cfg.dump(2);
    const auto r = run_cli("ingest --config '" + (ws.dir / "bad.json").string() + "'", ws.dir);
    CHECK(r.exit_code == 2);
    CHECK(r.output.find("not found") != std::string::npos);

    // train before ingest
    const auto r2 = run_cli("train knn " + ws.config_arg(), ws.dir);
    CHECK(r2.exit_code == 2);
    CHECK(r2.output.find("run ingest first") != std::string::npos);

    // unknown config key
    std::ofstream(ws.dir / "typo.json") << R"({"pathz": {}})";
    const auto r3 =
        run_cli("ingest --config '" + (ws.dir / "typo.json").string() + "'", ws.dir);
    CHECK(r3.exit_code == 2);

    // unknown subcommand / flag
    CHECK(run_cli("frobnicate", ws.dir).exit_code == 2);
    CHECK(run_cli("ingest --frobnicate", ws.dir).exit_code == 2);
}

TEST_CASE("a tampered artifact is refused") {
    Workspace ws;
    REQUIRE(run_cli("ingest " + ws.config_arg(), ws.dir).exit_code == 0);
    std::ofstream(ws.out() / "merged.csv", std::ios::app) << "tampered\n";
    const auto r = run_cli("train knn " + ws.config_arg(), ws.dir);
    CHECK(r.exit_code == 1);
    CHECK(r.output.find("manifest") != std::string::npos);
}
