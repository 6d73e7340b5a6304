// runner.hpp -- execute scenario configs and write plot-ready output bundles
#ifndef XSTITCH_RUNNER_HPP
#define XSTITCH_RUNNER_HPP

#include <string>
#include <vector>

#include "xstitch/dynamics.hpp"
#include "xstitch/scenario.hpp"

namespace xstitch {

// Config turned into concrete simulation inputs: separation applied, initial
// state built, anchor cell (emitter 0 attachment) tracked for populations.
struct MaterializedScenario {
    SystemHamiltonian system;
    SystemState initial;
    int anchor_cell = 0;
    TimeGrid grid;
    EvolveOptions options;
};

MaterializedScenario materialize(const ScenarioConfig& config);

struct RunResult {
    ScenarioConfig config;
    SystemHamiltonian system;
    int anchor_cell = 0;
    Trajectory trajectory;
    PopulationSeries populations;
};

RunResult run_scenario(const ScenarioConfig& config);

// Writes config.cfg, trajectory.tsv, snapshot_<t>.tsv, spectrum_e<q>.tsv into
// `dir`; returns the paths.  Files carry a commented metadata preamble and are
// written atomically; reruns are byte-identical.
std::vector<std::string> write_run_outputs(const RunResult& result,
                                           const std::string& dir);

// Runs the scenario (expanding a sweep into one subdirectory per value, up to
// `jobs` points in flight) under out_dir/<scenario name>/.
std::vector<std::string> run_to_files(const ScenarioConfig& config,
                                      const std::string& out_dir, int jobs = 1);

} // namespace xstitch

#endif
