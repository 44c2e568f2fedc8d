// lab: experiment runner for the restriction laboratory.
//
// Exit codes: 0 pass, 1 verdict fail, 2 config error, 3 resource exhaustion.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lab/experiments.hpp"
#include "lab/io.hpp"
#include "lab/measures.hpp"

namespace {

int cmd_run(const std::string& config_path) {
    lab::ExperimentConfig cfg = lab::ExperimentConfig::load(config_path);
    lab::RunManifest manifest = lab::run(cfg);
    std::cout << cfg.experiment << ": " << (manifest.pass ? "pass" : "fail") << " ("
              << manifest.wall_seconds << "s, results in " << cfg.output_dir.string() << ")\n";
    return manifest.pass ? 0 : 1;
}

int cmd_report(const std::vector<std::string>& dirs) {
    std::vector<std::filesystem::path> paths(dirs.begin(), dirs.end());
    std::cout << lab::report(paths);
    return 0;
}

int cmd_synth(const std::string& spec_path, const std::string& out_path,
              std::size_t atom_budget) {
    std::ifstream in(spec_path);
    if (!in) throw lab::ConfigError("cannot open " + spec_path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw lab::ConfigError(spec_path + ": " + e.what());
    }
    lab::AtomicMeasure m = lab::build_measure_from_json(j, atom_budget);
    lab::write_measure_csv(out_path, m);
    std::cout << out_path << ": " << m.atoms.size() << " atoms, alpha=" << m.declared_alpha
              << ", provenance=" << lab::to_string(m.provenance) << "\n";
    return 0;
}

int cmd_audit(const std::string& measure_path, double alpha, int grid_dim) {
    lab::AtomicMeasure m = lab::read_measure_csv(measure_path);
    lab::AuditPlan plan;
    plan.grid_dim = grid_dim;
    lab::DimensionReport r = lab::audit_dimension(m, alpha, lab::default_audit_radii(m), plan);
    nlohmann::json out = {{"alpha", r.alpha},
                          {"worst_ratio", r.worst_ratio},
                          {"worst_center", {r.worst_center.x, r.worst_center.y}},
                          {"worst_radius", r.worst_radius},
                          {"radii_tested", r.radii.size()},
                          {"atoms", m.atoms.size()}};
    std::cout << out.dump(2) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for Fourier restriction to curves"};
    app.require_subcommand(1);

    std::string config_path;
    auto* run = app.add_subcommand("run", "execute an experiment from a JSON config");
    run->add_option("config", config_path, "experiment config (JSON)")->required();

    std::vector<std::string> report_dirs;
    auto* report = app.add_subcommand("report", "consolidated table over run directories");
    report->add_option("dirs", report_dirs, "run output directories");

    std::string spec_path, out_path;
    std::size_t atom_budget = lab::kDefaultAtomBudget;
    auto* synth = app.add_subcommand("synth-measure", "build a measure from a JSON spec");
    synth->add_option("spec", spec_path, "measure spec (JSON)")->required();
    synth->add_option("-o,--output", out_path, "output CSV path")->required();
    synth->add_option("--atom-budget", atom_budget, "atom count cap");

    std::string measure_path;
    double alpha = 0.0;
    int grid_dim = 64;
    auto* audit = app.add_subcommand("audit-dim", "ball-mass dimension audit of a measure CSV");
    audit->add_option("measure", measure_path, "measure CSV")->required();
    audit->add_option("--alpha", alpha, "dimension to audit against")->required();
    audit->add_option("--grid-dim", grid_dim, "audit center grid resolution");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) return cmd_run(config_path);
        if (*report) return cmd_report(report_dirs);
        if (*synth) return cmd_synth(spec_path, out_path, atom_budget);
        if (*audit) return cmd_audit(measure_path, alpha, grid_dim);
    } catch (const lab::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const lab::PreconditionError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const lab::ResourceError& e) {
        std::cerr << "resource exhaustion: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "verdict fail: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
