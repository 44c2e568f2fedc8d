#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "lab/experiments.hpp"
#include "lab/io.hpp"
#include "lab/measures.hpp"

using namespace lab;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const char* name) {
    fs::path dir = fs::temp_directory_path() / "lab-tests" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("measure csv: bitwise round trip") {
    fs::path dir = scratch_dir("csv");
    CantorSpec spec;
    spec.depth = 3;
    AtomicMeasure m = build_cantor_measure(spec);
    write_measure_csv(dir / "m.csv", m);
    AtomicMeasure back = read_measure_csv(dir / "m.csv");

    REQUIRE(back.atoms.size() == m.atoms.size());
    for (std::size_t i = 0; i < m.atoms.size(); ++i) {
        CHECK(back.atoms[i].position.x == m.atoms[i].position.x);
        CHECK(back.atoms[i].position.y == m.atoms[i].position.y);
        CHECK(back.atoms[i].weight == m.atoms[i].weight);
    }
    CHECK(back.declared_alpha == m.declared_alpha);
    CHECK(back.provenance == m.provenance);
}

TEST_CASE("measure csv: malformed inputs are named with line numbers") {
    fs::path dir = scratch_dir("csv-bad");
    {
        std::ofstream out(dir / "bad.csv");
        out << "# atomic-measure v1, alpha=1, provenance=custom\n";
        out << "0,0,1,0\n";
        out << "0.5,0,oops,0\n";
    }
    CHECK_THROWS_AS(read_measure_csv(dir / "bad.csv"), ConfigError);
    {
        std::ofstream out(dir / "short.csv");
        out << "# atomic-measure v1, alpha=1, provenance=custom\n";
        out << "0,0,1\n";
    }
    try {
        read_measure_csv(dir / "short.csv");
        CHECK(false);
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find(":2:") != std::string::npos);
    }
    CHECK_THROWS_AS(read_measure_csv(dir / "missing.csv"), ConfigError);
    {
        std::ofstream out(dir / "noheader.csv");
        out << "0,0,1,0\n";
    }
    CHECK_THROWS_AS(read_measure_csv(dir / "noheader.csv"), ConfigError);
}

TEST_CASE("spec json: round trips and dispatch") {
    CantorSpec c;
    c.branches_x = 3, c.ratio_x = 0.2, c.depth = 4;
    CantorSpec c2 = cantor_spec_from_json(to_json(c));
    CHECK(c2.branches_x == c.branches_x);
    CHECK(c2.ratio_x == c.ratio_x);
    CHECK(c2.depth == c.depth);

    SharpExampleSpec s;
    s.alpha = 1.4, s.R = 128.0, s.case_id = SharpCase::case_i;
    SharpExampleSpec s2 = sharp_spec_from_json(to_json(s));
    CHECK(s2.alpha == s.alpha);
    CHECK(s2.case_id == s.case_id);

    AtomicMeasure m = build_measure_from_json(to_json(c), kDefaultAtomBudget);
    CHECK(m.provenance == Provenance::cantor);
    CHECK_THROWS_AS(build_measure_from_json({{"type", "salem"}}, kDefaultAtomBudget),
                    ConfigError);
    CHECK_THROWS_AS(sharp_spec_from_json({{"type", "sharp_example"}}), ConfigError);
}

TEST_CASE("format_full round trips doubles") {
    for (double v : {0.1, -3.0, 1.0 / 3.0, 6.02e23, -1.6e-19}) {
        CHECK(std::stod(format_full(v)) == v);
    }
}

TEST_CASE("experiment config: parsing and validation") {
    ExperimentConfig cfg = ExperimentConfig::from_json(
        {{"experiment", "decay"}, {"parameters", {{"alpha", 1.5}}}, {"seed", 42}});
    CHECK(cfg.experiment == "decay");
    CHECK(cfg.seed == 42);
    CHECK(cfg.atom_budget == kDefaultAtomBudget);

    CHECK_THROWS_AS(ExperimentConfig::from_json({{"parameters", {{"alpha", 1.5}}}}),
                    ConfigError);

    ExperimentConfig unknown;
    unknown.experiment = "frobnicate";
    unknown.output_dir = scratch_dir("unknown");
    CHECK_THROWS_AS(lab::run(unknown), ConfigError);
}

TEST_CASE("run: whitney experiment writes the full artifact set, reproducibly") {
    ExperimentConfig cfg;
    cfg.experiment = "whitney";
    cfg.parameters = {{"n_max", 10}, {"points", 500}};
    cfg.seed = 99;
    cfg.output_dir = scratch_dir("whitney-a");
    RunManifest manifest = lab::run(cfg);

    CHECK(manifest.pass);
    CHECK(fs::exists(cfg.output_dir / "results.csv"));
    CHECK(fs::exists(cfg.output_dir / "summary.json"));
    CHECK(fs::exists(cfg.output_dir / "manifest.json"));
    CHECK(manifest.summary["histogram"]["1"] == 500);

    ExperimentConfig again = cfg;
    again.output_dir = scratch_dir("whitney-b");
    lab::run(again);
    CHECK(slurp(cfg.output_dir / "results.csv") == slurp(again.output_dir / "results.csv"));
}

TEST_CASE("run: rect experiment passes its budget check") {
    ExperimentConfig cfg;
    cfg.experiment = "rect";
    cfg.output_dir = scratch_dir("rect");
    RunManifest manifest = lab::run(cfg);
    CHECK(manifest.pass);
    CHECK(manifest.summary["verdict"] == "pass");
}

TEST_CASE("run: invalid parameters fail before compute and leave an error manifest") {
    ExperimentConfig cfg;
    cfg.experiment = "threshold";
    cfg.parameters = {{"alpha", 1.5}, {"p", 2.0}, {"gamma", -1.5}};
    cfg.output_dir = scratch_dir("bad-threshold");
    CHECK_THROWS_AS(lab::run(cfg), ConfigError);
    CHECK(!fs::exists(cfg.output_dir / "results.csv"));
    CHECK(fs::exists(cfg.output_dir / "manifest.json"));
    CHECK(slurp(cfg.output_dir / "manifest.json").find("error") != std::string::npos);
}

TEST_CASE("report: rows, missing manifests, version warnings") {
    CHECK(report({}).find("experiment") == 0);

    ExperimentConfig cfg;
    cfg.experiment = "rect";
    cfg.output_dir = scratch_dir("report-rect");
    lab::run(cfg);
    std::string table = report({cfg.output_dir});
    CHECK(table.find("rect") != std::string::npos);
    CHECK(table.find("pass") != std::string::npos);

    fs::path stale = scratch_dir("report-stale");
    {
        std::ofstream out(stale / "manifest.json");
        out << R"({"version":"0.0.1","config":{"experiment":"rect","parameters":{}},)"
            << R"("pass":true,"summary":{}})";
    }
    std::string warned = report({stale});
    CHECK(warned.find("version-mismatch") != std::string::npos);
    CHECK(warned.find("error") == std::string::npos);

    CHECK_THROWS_AS(report({scratch_dir("report-empty")}), ConfigError);
}
