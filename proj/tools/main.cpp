// Command-line front end: scenario runs, sweeps, band tables, and the
// validation suite.  Exit codes: 0 ok, 1 validation failure, 2 config error,
// 3 numerical-tolerance failure.
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "xstitch/lattice.hpp"
#include "xstitch/runner.hpp"
#include "xstitch/scenario.hpp"
#include "xstitch/validation.hpp"
#include "xstitch/version.hpp"

namespace {

int do_run(const std::string& config_name, const std::string& out_dir, int jobs) {
    const auto config = xstitch::load_named_scenario(config_name);
    const auto paths = xstitch::run_to_files(config, out_dir, jobs);
    for (const auto& p : paths) std::cout << p << "\n";
    return 0;
}

int do_list() {
    for (const auto& name : xstitch::list_presets()) std::cout << name << "\n";
    return 0;
}

int do_bands(const std::string& config_name) {
    const auto config = xstitch::load_named_scenario(config_name);
    const auto band = xstitch::band_structure(config.lattice, 256);
    std::printf("# flat_energy\t%.17g\n", band.flat_energy);
    std::printf("# dispersive_min\t%.17g\n",
                *std::min_element(band.dispersive_energies.begin(),
                                  band.dispersive_energies.end()));
    std::printf("# dispersive_max\t%.17g\n",
                *std::max_element(band.dispersive_energies.begin(),
                                  band.dispersive_energies.end()));
    std::printf("# gap_present\t%d\n", band.gap_present ? 1 : 0);
    if (band.gap_present) {
        std::printf("# band_edge_min\t%.17g\n", band.band_edge_min);
        std::printf("# curvature\t%.17g\n", band.curvature);
    }
    std::printf("k\tdispersive\tflat\n");
    for (size_t j = 0; j < band.k_grid.size(); ++j)
        std::printf("%.17g\t%.17g\t%.17g\n", band.k_grid[j],
                    band.dispersive_energies[j], band.flat_energy);
    return 0;
}

std::vector<int> parse_criteria(const std::string& list) {
    std::vector<int> ids;
    std::stringstream in(list);
    std::string token;
    while (std::getline(in, token, ',')) {
        if (token.empty()) continue;
        size_t used = 0;
        const int id = std::stoi(token, &used);
        if (used != token.size() || id < 1 || id > 10)
            throw xstitch::ConfigError("--only entries must be criterion numbers 1..10");
        ids.push_back(id);
    }
    return ids;
}

int do_validate(const std::string& suite, bool only_given,
                const std::string& only_list) {
    using xstitch::validation::Session;
    std::vector<int> ids;
    if (only_given)
        ids = parse_criteria(only_list);
    else
        ids = suite == "fast" ? Session::suite_fast() : Session::suite_all();

    Session session;
    const auto report = session.run_suite(ids);
    int passed = 0;
    for (const auto& check : report.checks) {
        std::cout << xstitch::validation::format_line(check) << "\n";
        if (check.passed) ++passed;
    }
    std::cout << passed << "/" << report.checks.size() << " checks passed\n";
    return report.all_passed() ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"two-level emitters coupled to a cross-stitch photonic lattice"};
    app.set_version_flag("--version", xstitch::version());
    app.require_subcommand(0, 1);

    std::string out_dir = "out";
    int jobs = 1;
    bool seedless = false;
    app.add_option("--out", out_dir, "output directory for run artifacts")
        ->capture_default_str();
    app.add_option("--jobs", jobs, "sweep points evaluated concurrently")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_flag("--seedless", seedless,
                 "assert that no randomness is used (the engine is fully "
                 "deterministic, so this always holds)");

    auto* run_cmd = app.add_subcommand("run", "execute a preset or config file");
    std::string run_config;
    run_cmd->add_option("config", run_config, "preset name or path to a .cfg file")
        ->required();

    auto* validate_cmd =
        app.add_subcommand("validate", "run the oracle-comparison suite");
    std::string suite = "all";
    validate_cmd->add_option("--suite", suite, "which suite to run")
        ->check(CLI::IsMember({"all", "fast"}))
        ->capture_default_str();
    std::string only_list;
    auto* only_opt = validate_cmd->add_option(
        "--only", only_list,
        "comma-separated criterion numbers; an empty list runs nothing");

    app.add_subcommand("list-scenarios", "list the available presets");
    auto* bands_cmd =
        app.add_subcommand("bands", "print the band structure for a config");
    std::string bands_config;
    bands_cmd->add_option("config", bands_config, "preset name or path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (run_cmd->parsed()) return do_run(run_config, out_dir, jobs);
        if (validate_cmd->parsed())
            return do_validate(suite, only_opt->count() > 0, only_list);
        if (app.get_subcommand("list-scenarios")->parsed()) return do_list();
        if (bands_cmd->parsed()) return do_bands(bands_config);
        std::cout << app.help();
        return 0;
    } catch (const xstitch::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const xstitch::ToleranceError& e) {
        std::cerr << "tolerance failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
