// scenario.hpp -- declarative scenario configs: parse, serialize, presets
#ifndef XSTITCH_SCENARIO_HPP
#define XSTITCH_SCENARIO_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "xstitch/dynamics.hpp"
#include "xstitch/lattice.hpp"

namespace xstitch {

// Parse or semantic failure in a config document; line is 0 when the error is
// not tied to a specific line.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what, int line_ = 0)
        : std::runtime_error(line_ > 0 ? "line " + std::to_string(line_) + ": " + what
                                       : what),
          line(line_) {}
    int line;
};

struct SweepSpec {
    std::string parameter; // dotted config key, e.g. "separation"
    std::vector<double> values;
    bool operator==(const SweepSpec&) const = default;
};

// One scenario = lattice + emitters + run controls.  Stored in plain-text
// files of `dotted.key = value` lines; see the presets directory.
struct ScenarioConfig {
    std::string name = "custom";
    LatticeConfig lattice;
    std::vector<EmitterSpec> emitters;
    std::optional<int> separation; // cells between emitter 0 and emitter 1
    double horizon = 100.0;
    double sample_spacing = 0.1;
    std::vector<double> snapshot_times;
    std::string initial = "emitter:0"; // or "site:<cell>:a" / "site:<cell>:b"
    std::string spectrum = "none";     // none | hann | rectangular
    std::optional<SweepSpec> sweep;

    bool operator==(const ScenarioConfig&) const = default;

    // Semantic checks beyond parsing (run controls, emitter count, bounds).
    void validate() const;
    TimeGrid time_grid() const;
};

ScenarioConfig parse_scenario(const std::string& text);
ScenarioConfig load_scenario_file(const std::string& path);
std::string serialize_scenario(const ScenarioConfig& config);

// Assign a numeric value to a dotted key (sweep support).
void set_scenario_value(ScenarioConfig& config, const std::string& key,
                        double value);

// Preset discovery: $XSTITCH_PRESETS, ./presets, then the installed share dir.
std::vector<std::string> preset_search_paths();
std::vector<std::string> list_presets();
// Accepts a preset name or a path to a config file.
std::string find_preset(const std::string& name_or_path);
ScenarioConfig load_named_scenario(const std::string& name_or_path);

} // namespace xstitch

#endif
