#include "xstitch/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <sstream>

#include "xstitch/spectral.hpp"
#include "xstitch/version.hpp"

namespace xstitch {

namespace fs = std::filesystem;

namespace {

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string format_short(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

SystemState build_initial(const SystemHamiltonian& system,
                          const std::string& spec) {
    if (spec.rfind("emitter:", 0) == 0) {
        int q = 0;
        try {
            q = std::stoi(spec.substr(8));
        } catch (...) {
            throw ConfigError("bad initial state '" + spec + "'");
        }
        if (q < 0 || q >= static_cast<int>(system.emitters.size()))
            throw ConfigError("initial state names a missing emitter");
        return excited_emitter_state(system, q);
    }
    if (spec.rfind("site:", 0) == 0) {
        const std::string rest = spec.substr(5);
        const auto colon = rest.find(':');
        if (colon == std::string::npos)
            throw ConfigError("bad initial state '" + spec + "'");
        int cell = 0;
        try {
            cell = std::stoi(rest.substr(0, colon));
        } catch (...) {
            throw ConfigError("bad initial state '" + spec + "'");
        }
        const std::string sub = rest.substr(colon + 1);
        if (sub != "a" && sub != "b")
            throw ConfigError("initial site sublattice must be a or b");
        if (cell < 0 || cell >= system.lattice.n_cells)
            throw ConfigError("initial site cell out of range");
        return site_excited_state(
            system, {cell, sub == "a" ? Sublattice::A : Sublattice::B});
    }
    throw ConfigError("bad initial state '" + spec + "'");
}

// Atomic file write: fill a temporary, then rename over the target.
void write_file(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write '" + tmp + "'");
        out << content;
        if (!out) throw std::runtime_error("write failed for '" + tmp + "'");
    }
    fs::rename(tmp, path);
}

std::string preamble(const ScenarioConfig& config,
                     const std::vector<std::pair<std::string, std::string>>& extra) {
    std::ostringstream out;
    out << "# version = " << XSTITCH_VERSION << "\n";
    std::istringstream cfg(serialize_scenario(config));
    std::string line;
    while (std::getline(cfg, line)) out << "# " << line << "\n";
    for (const auto& [k, v] : extra) out << "# " << k << " = " << v << "\n";
    return out.str();
}

spectral::Window window_from_name(const std::string& name) {
    return name == "rectangular" ? spectral::Window::Rectangular
                                 : spectral::Window::Hann;
}

} // namespace

// ----- materialization -----

MaterializedScenario materialize(const ScenarioConfig& config) {
    config.validate();
    std::vector<EmitterSpec> emitters = config.emitters;
    if (config.separation) {
        int cell = emitters[0].attach_a.cell + *config.separation;
        if (cell >= config.lattice.n_cells) {
            if (config.lattice.boundary == Boundary::Periodic)
                cell -= config.lattice.n_cells;
            else
                throw ConfigError("separation places emitter outside an open lattice");
        }
        emitters[1].attach_a = {cell, Sublattice::A};
        emitters[1].attach_b = {cell, Sublattice::B};
    }

    MaterializedScenario m;
    m.system = assemble_system(config.lattice, emitters);
    m.initial = build_initial(m.system, config.initial);
    m.anchor_cell = emitters[0].attach_a.cell;
    m.grid = config.time_grid();
    m.options.snapshot_times = config.snapshot_times;
    m.options.tracked_sites = {
        config.lattice.flat_index({m.anchor_cell, Sublattice::A}),
        config.lattice.flat_index({m.anchor_cell, Sublattice::B})};
    return m;
}

RunResult run_scenario(const ScenarioConfig& config) {
    MaterializedScenario m = materialize(config);
    RunResult result;
    result.config = config;
    result.anchor_cell = m.anchor_cell;
    result.trajectory = evolve(m.system, m.initial, m.grid, m.options);
    result.populations = populations(result.trajectory, m.system, m.anchor_cell);
    result.system = std::move(m.system);
    return result;
}

// ----- output files -----

std::vector<std::string> write_run_outputs(const RunResult& result,
                                           const std::string& dir) {
    fs::create_directories(dir);
    std::vector<std::string> files;
    const ScenarioConfig& config = result.config;
    const Trajectory& traj = result.trajectory;
    const int n_emitters = static_cast<int>(traj.emitter_populations.cols());

    {
        const std::string path = (fs::path(dir) / "config.cfg").string();
        write_file(path, serialize_scenario(config));
        files.push_back(path);
    }

    {
        std::ostringstream out;
        out << preamble(config,
                        {{"max_norm_drift", format_number(traj.max_norm_drift)},
                         {"max_energy_drift", format_number(traj.max_energy_drift)},
                         {"anchor_cell", std::to_string(result.anchor_cell)}});
        out << "time";
        for (int q = 0; q < n_emitters; ++q) out << "\tp_e" << q;
        out << "\tp_0\tp_d\n";
        for (size_t j = 0; j < traj.times.size(); ++j) {
            out << format_number(traj.times[j]);
            for (int q = 0; q < n_emitters; ++q)
                out << "\t" << format_number(traj.emitter_populations(j, q));
            out << "\t" << format_number(result.populations.anchor[j]);
            out << "\t" << format_number(result.populations.remainder[j]);
            out << "\n";
        }
        const std::string path = (fs::path(dir) / "trajectory.tsv").string();
        write_file(path, out.str());
        files.push_back(path);
    }

    for (const SystemState& snap : traj.snapshots) {
        const FieldProfile profile = field_profile(result.system, snap);
        std::ostringstream out;
        out << preamble(config,
                        {{"snapshot_time", format_number(snap.time)},
                         {"emitter_weight", format_number(profile.emitter_weight)}});
        out << "cell\tsite_a\tsite_b\tflat\tdispersive\n";
        for (size_t x = 0; x < profile.site_a_weight.size(); ++x) {
            out << x << "\t" << format_number(profile.site_a_weight[x]) << "\t"
                << format_number(profile.site_b_weight[x]) << "\t"
                << format_number(profile.flat_weight[x]) << "\t"
                << format_number(profile.dispersive_weight[x]) << "\n";
        }
        const std::string path =
            (fs::path(dir) / ("snapshot_" + format_short(snap.time) + ".tsv"))
                .string();
        write_file(path, out.str());
        files.push_back(path);
    }

    if (config.spectrum != "none") {
        const spectral::Window window = window_from_name(config.spectrum);
        for (int q = 0; q < n_emitters; ++q) {
            std::vector<double> series(traj.times.size());
            for (size_t j = 0; j < series.size(); ++j)
                series[j] = traj.emitter_populations(j, q);
            const spectral::PowerSpectrum spec =
                spectral::population_spectrum(traj.times, series, window);
            std::ostringstream out;
            out << preamble(config,
                            {{"series", "p_e" + std::to_string(q)},
                             {"window", config.spectrum},
                             {"resolution", format_number(spec.resolution)}});
            out << "frequency\tpower\n";
            for (size_t j = 0; j < spec.frequency.size(); ++j)
                out << format_number(spec.frequency[j]) << "\t"
                    << format_number(spec.power[j]) << "\n";
            const std::string path =
                (fs::path(dir) / ("spectrum_e" + std::to_string(q) + ".tsv"))
                    .string();
            write_file(path, out.str());
            files.push_back(path);
        }
    }
    return files;
}

// ----- sweep engine -----

std::vector<std::string> run_to_files(const ScenarioConfig& config,
                                      const std::string& out_dir, int jobs) {
    config.validate();
    const fs::path base = fs::path(out_dir) / config.name;
    std::vector<std::string> files;

    if (!config.sweep) {
        const RunResult result = run_scenario(config);
        return write_run_outputs(result, base.string());
    }

    const SweepSpec sweep = *config.sweep;
    const int n_points = static_cast<int>(sweep.values.size());
    if (jobs < 1) jobs = 1;

    struct PointSummary {
        double value;
        std::vector<double> max_excited;
        double dominant_frequency; // NaN when no spectrum was requested
        std::vector<std::string> files;
    };
    std::vector<PointSummary> summaries(n_points);

    auto run_point = [&](int i) {
        ScenarioConfig point = config;
        point.sweep.reset();
        set_scenario_value(point, sweep.parameter, sweep.values[i]);
        point.validate();
        const RunResult result = run_scenario(point);

        PointSummary summary;
        summary.value = sweep.values[i];
        const int n_emitters =
            static_cast<int>(result.trajectory.emitter_populations.cols());
        for (int q = 0; q < n_emitters; ++q)
            summary.max_excited.push_back(
                result.trajectory.emitter_populations.col(q).maxCoeff());
        summary.dominant_frequency = std::nan("");
        if (point.spectrum != "none") {
            const int q = n_emitters - 1;
            std::vector<double> series(result.trajectory.times.size());
            for (size_t j = 0; j < series.size(); ++j)
                series[j] = result.trajectory.emitter_populations(j, q);
            const auto spec = spectral::population_spectrum(
                result.trajectory.times, series,
                window_from_name(point.spectrum));
            const auto peaks = spectral::extract_peaks(spec, 0.05);
            if (!peaks.peaks.empty()) {
                const auto strongest = std::max_element(
                    peaks.peaks.begin(), peaks.peaks.end(),
                    [](const auto& a, const auto& b) { return a.power < b.power; });
                summary.dominant_frequency = strongest->frequency;
            }
        }
        const fs::path dir =
            base / (sweep.parameter + "_" + format_short(sweep.values[i]));
        summary.files = write_run_outputs(result, dir.string());
        summaries[i] = std::move(summary);
    };

    for (int start = 0; start < n_points; start += jobs) {
        std::vector<std::future<void>> batch;
        const int end = std::min(start + jobs, n_points);
        for (int i = start; i < end; ++i)
            batch.push_back(std::async(std::launch::async, run_point, i));
        for (auto& f : batch) f.get();
    }

    for (const auto& s : summaries)
        files.insert(files.end(), s.files.begin(), s.files.end());

    std::ostringstream out;
    out << preamble(config, {{"sweep_parameter", sweep.parameter}});
    out << "value";
    const int n_emitters = static_cast<int>(config.emitters.size());
    for (int q = 0; q < n_emitters; ++q) out << "\tmax_p_e" << q;
    out << "\tdominant_frequency\n";
    for (const auto& s : summaries) {
        out << format_number(s.value);
        for (double m : s.max_excited) out << "\t" << format_number(m);
        out << "\t" << format_number(s.dominant_frequency) << "\n";
    }
    fs::create_directories(base);
    const std::string summary_path = (base / "sweep_summary.tsv").string();
    write_file(summary_path, out.str());
    files.push_back(summary_path);
    return files;
}

} // namespace xstitch
