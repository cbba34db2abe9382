// Command-line front end: run scenario files (or bundled scenarios by
// name), list the bundled set, and export the reference data.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <string>

#include "CLI11.hpp"

#include "qclab/runner.hpp"
#include "qclab/scenarios_builtin.hpp"

namespace {

qclab::ScenarioConfig load(const std::string& ref) {
    namespace fs = std::filesystem;
    if (fs::exists(ref)) return qclab::ScenarioConfig::parse_file(ref);
    if (const auto* b = qclab::find_bundled(ref)) return qclab::ScenarioConfig::parse(b->text, ref);
    throw qclab::config_error("no such scenario file or bundled scenario: " + ref);
}

void print_summary(const qclab::RunSummary& s, bool verbose) {
    if (verbose) {
        std::printf("scenario %s (%s)\n", s.scenario_name.c_str(), s.kind.c_str());
        for (const auto& c : s.checks)
            std::printf("  [%s] %-32s measured %.6g %s threshold %.6g\n",
                        c.pass ? "PASS" : "FAIL", c.name.c_str(), c.measured, c.relation.c_str(),
                        c.threshold);
        for (const auto& o : s.outputs) std::printf("  wrote %s\n", o.c_str());
        std::printf("  wall time %.3f s\n", s.wall_time_s);
    }
    std::printf("%s: %s\n", s.scenario_name.c_str(), s.all_pass() ? "PASS" : "FAIL");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"quantum-classical correspondence laboratory"};
    app.require_subcommand(1);

    std::string scenario_ref, out_dir = "out";
    auto* run_cmd = app.add_subcommand("run", "run a scenario and write its outputs");
    run_cmd->add_option("scenario", scenario_ref, "scenario file or bundled name")->required();
    run_cmd->add_option("--out", out_dir, "output directory (default: out)");

    std::string check_ref;
    auto* check_cmd = app.add_subcommand("check", "run a scenario, reporting status only");
    check_cmd->add_option("scenario", check_ref, "scenario file or bundled name")->required();

    auto* list_cmd = app.add_subcommand("list", "list the bundled scenarios");

    std::string export_dir = "reference";
    auto* export_cmd =
        app.add_subcommand("export-reference", "write bundled scenarios and reference data");
    export_cmd->add_option("dir", export_dir, "destination directory (default: reference)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) {
            qclab::RunOptions opts;
            opts.output_dir = out_dir;
            const auto summary = qclab::run_scenario(load(scenario_ref), opts);
            print_summary(summary, true);
            return summary.all_pass() ? 0 : 1;
        }
        if (check_cmd->parsed()) {
            qclab::RunOptions opts;
            opts.write_outputs = false;
            const auto summary = qclab::run_scenario(load(check_ref), opts);
            print_summary(summary, false);
            return summary.all_pass() ? 0 : 1;
        }
        if (list_cmd->parsed()) {
            for (const auto& b : qclab::bundled_scenarios())
                std::printf("%-28s %s\n", b.name.c_str(), b.annotation.c_str());
            return 0;
        }
        if (export_cmd->parsed()) {
            for (const auto& path : qclab::export_reference(export_dir))
                std::printf("wrote %s\n", path.c_str());
            return 0;
        }
    } catch (const qclab::config_error& e) {
        std::fprintf(stderr, "configuration error: %s\n", e.what());
        return 2;
    } catch (const qclab::numerical_error& e) {
        std::fprintf(stderr, "numerical error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
    return 0;
}
