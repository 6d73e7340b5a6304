#include "xstitch/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

namespace xstitch {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split_words(const std::string& s) {
    std::istringstream in(s);
    std::vector<std::string> out;
    std::string w;
    while (in >> w) out.push_back(w);
    return out;
}

// Numbers may carry a "pi" suffix: pi, -pi, 0.5pi, 2pi.
double parse_number(const std::string& token, int line) {
    std::string body = token;
    double factor = 1.0;
    if (body.size() >= 2 && body.substr(body.size() - 2) == "pi") {
        factor = std::numbers::pi;
        body = body.substr(0, body.size() - 2);
        if (body.empty()) body = "1";
        if (body == "-") body = "-1";
    }
    char* end = nullptr;
    const double v = std::strtod(body.c_str(), &end);
    if (end == body.c_str() || *end != '\0' || !std::isfinite(v * factor))
        throw ConfigError("cannot parse number '" + token + "'", line);
    return v * factor;
}

int parse_int(const std::string& token, int line) {
    const double v = parse_number(token, line);
    const double r = std::round(v);
    if (std::abs(v - r) > 1e-9 || std::abs(r) > 1e9)
        throw ConfigError("expected an integer, got '" + token + "'", line);
    return static_cast<int>(r);
}

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct EmitterDraft {
    std::optional<std::string> kind;
    std::optional<int> cell;
    std::optional<double> frequency;
    std::optional<double> coupling;
    std::optional<double> phase;
    int first_line = 0;
};

} // namespace

// ----- config semantics -----

void ScenarioConfig::validate() const {
    try {
        lattice.validate();
    } catch (const std::invalid_argument& err) {
        throw ConfigError(err.what());
    }
    if (emitters.empty())
        throw ConfigError("scenario needs at least one emitter");
    for (const auto& e : emitters) {
        try {
            e.validate(lattice);
        } catch (const std::invalid_argument& err) {
            throw ConfigError(err.what());
        }
    }
    if (separation) {
        if (emitters.size() != 2)
            throw ConfigError("separation requires exactly two emitters");
        if (*separation < 0 || *separation >= lattice.n_cells)
            throw ConfigError("separation out of range");
    }
    if (!(horizon > 0.0) || !std::isfinite(horizon))
        throw ConfigError("horizon must be positive");
    if (!(sample_spacing > 0.0) || !std::isfinite(sample_spacing))
        throw ConfigError("sample_spacing must be positive");
    if (horizon / sample_spacing > 5e7)
        throw ConfigError("horizon/sample_spacing is unreasonably large");
    if (spectrum != "none" && spectrum != "hann" && spectrum != "rectangular")
        throw ConfigError("spectrum must be none, hann, or rectangular");
    if (initial.rfind("emitter:", 0) != 0 && initial.rfind("site:", 0) != 0)
        throw ConfigError("initial must be emitter:<q> or site:<cell>:<a|b>");
    if (sweep) {
        if (sweep->parameter.empty() || sweep->values.empty())
            throw ConfigError("sweep needs both a parameter and values");
        ScenarioConfig probe = *this;
        probe.sweep.reset();
        for (double v : sweep->values) {
            set_scenario_value(probe, sweep->parameter, v);
            probe.validate(); // every sweep point must itself be a valid config
        }
    }
}

TimeGrid ScenarioConfig::time_grid() const {
    TimeGrid grid;
    grid.spacing = sample_spacing;
    grid.count = static_cast<int>(std::ceil(horizon / sample_spacing - 1e-9));
    if (grid.count < 1) grid.count = 1;
    return grid;
}

// ----- parsing -----

ScenarioConfig parse_scenario(const std::string& text) {
    ScenarioConfig config;
    std::map<int, EmitterDraft> drafts;
    std::set<std::string> seen;
    std::optional<std::string> sweep_parameter;
    std::optional<std::vector<double>> sweep_values;

    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        const std::string stripped = trim(raw);
        if (stripped.empty()) continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw ConfigError("expected 'key = value'", line);
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (key.empty()) throw ConfigError("empty key", line);
        if (value.empty()) throw ConfigError("empty value for '" + key + "'", line);
        if (!seen.insert(key).second)
            throw ConfigError("duplicate key '" + key + "'", line);

        if (key == "scenario") {
            config.name = value;
        } else if (key == "lattice.n_cells") {
            config.lattice.n_cells = parse_int(value, line);
        } else if (key == "lattice.inter_hop") {
            config.lattice.inter_hop = parse_number(value, line);
        } else if (key == "lattice.intra_hop") {
            config.lattice.intra_hop = parse_number(value, line);
        } else if (key == "lattice.onsite") {
            config.lattice.onsite = parse_number(value, line);
        } else if (key == "lattice.boundary") {
            if (value == "periodic") config.lattice.boundary = Boundary::Periodic;
            else if (value == "open") config.lattice.boundary = Boundary::Open;
            else throw ConfigError("boundary must be periodic or open", line);
        } else if (key.rfind("emitter.", 0) == 0) {
            const std::string rest = key.substr(8);
            const auto dot = rest.find('.');
            if (dot == std::string::npos)
                throw ConfigError("expected emitter.<index>.<field>", line);
            int index = 0;
            try {
                size_t used = 0;
                index = std::stoi(rest.substr(0, dot), &used);
                if (used != dot || index < 0) throw std::invalid_argument("");
            } catch (...) {
                throw ConfigError("bad emitter index in '" + key + "'", line);
            }
            EmitterDraft& d = drafts[index];
            if (d.first_line == 0) d.first_line = line;
            const std::string field = rest.substr(dot + 1);
            if (field == "kind") d.kind = value;
            else if (field == "cell") d.cell = parse_int(value, line);
            else if (field == "frequency") d.frequency = parse_number(value, line);
            else if (field == "coupling") d.coupling = parse_number(value, line);
            else if (field == "phase") d.phase = parse_number(value, line);
            else throw ConfigError("unknown emitter field '" + field + "'", line);
        } else if (key == "separation") {
            config.separation = parse_int(value, line);
        } else if (key == "horizon") {
            config.horizon = parse_number(value, line);
        } else if (key == "sample_spacing") {
            config.sample_spacing = parse_number(value, line);
        } else if (key == "snapshots") {
            for (const auto& w : split_words(value))
                config.snapshot_times.push_back(parse_number(w, line));
        } else if (key == "initial") {
            config.initial = value;
        } else if (key == "spectrum") {
            config.spectrum = value;
        } else if (key == "sweep.parameter") {
            sweep_parameter = value;
        } else if (key == "sweep.values") {
            std::vector<double> vals;
            for (const auto& w : split_words(value))
                vals.push_back(parse_number(w, line));
            sweep_values = std::move(vals);
        } else {
            throw ConfigError("unknown key '" + key + "'", line);
        }
    }

    if (sweep_parameter.has_value() != sweep_values.has_value())
        throw ConfigError("sweep.parameter and sweep.values must appear together");
    if (sweep_parameter)
        config.sweep = SweepSpec{*sweep_parameter, *sweep_values};

    for (const auto& [index, draft] : drafts) {
        if (index != static_cast<int>(config.emitters.size()))
            throw ConfigError("emitter indices must be contiguous from 0",
                              draft.first_line);
        if (!draft.kind || !draft.cell || !draft.frequency || !draft.coupling)
            throw ConfigError("emitter needs kind, cell, frequency, coupling",
                              draft.first_line);
        EmitterSpec e;
        if (*draft.kind == "small") e.kind = EmitterKind::Small;
        else if (*draft.kind == "giant") e.kind = EmitterKind::Giant;
        else throw ConfigError("emitter kind must be small or giant", draft.first_line);
        e.frequency = *draft.frequency;
        e.coupling = *draft.coupling;
        e.phase = draft.phase.value_or(0.0);
        e.attach_a = {*draft.cell, Sublattice::A};
        e.attach_b = {*draft.cell, Sublattice::B};
        config.emitters.push_back(e);
    }
    return config;
}

ScenarioConfig load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    try {
        return parse_scenario(buffer.str());
    } catch (ConfigError& e) {
        throw ConfigError(path + ": " + e.what(), 0);
    }
}

// ----- serialization -----

std::string serialize_scenario(const ScenarioConfig& config) {
    std::ostringstream out;
    out << "scenario = " << config.name << "\n";
    out << "lattice.n_cells = " << config.lattice.n_cells << "\n";
    out << "lattice.inter_hop = " << format_number(config.lattice.inter_hop) << "\n";
    out << "lattice.intra_hop = " << format_number(config.lattice.intra_hop) << "\n";
    out << "lattice.onsite = " << format_number(config.lattice.onsite) << "\n";
    out << "lattice.boundary = "
        << (config.lattice.boundary == Boundary::Periodic ? "periodic" : "open")
        << "\n";
    for (size_t q = 0; q < config.emitters.size(); ++q) {
        const EmitterSpec& e = config.emitters[q];
        if (e.attach_b.cell != e.attach_a.cell)
            throw ConfigError("config format cannot express split-cell attachments");
        const std::string p = "emitter." + std::to_string(q) + ".";
        out << p << "kind = " << (e.kind == EmitterKind::Small ? "small" : "giant")
            << "\n";
        out << p << "cell = " << e.attach_a.cell << "\n";
        out << p << "frequency = " << format_number(e.frequency) << "\n";
        out << p << "coupling = " << format_number(e.coupling) << "\n";
        out << p << "phase = " << format_number(e.phase) << "\n";
    }
    if (config.separation) out << "separation = " << *config.separation << "\n";
    out << "horizon = " << format_number(config.horizon) << "\n";
    out << "sample_spacing = " << format_number(config.sample_spacing) << "\n";
    if (!config.snapshot_times.empty()) {
        out << "snapshots =";
        for (double t : config.snapshot_times) out << " " << format_number(t);
        out << "\n";
    }
    out << "initial = " << config.initial << "\n";
    out << "spectrum = " << config.spectrum << "\n";
    if (config.sweep) {
        out << "sweep.parameter = " << config.sweep->parameter << "\n";
        out << "sweep.values =";
        for (double v : config.sweep->values) out << " " << format_number(v);
        out << "\n";
    }
    return out.str();
}

// ----- sweep key assignment -----

void set_scenario_value(ScenarioConfig& config, const std::string& key,
                        double value) {
    auto as_int = [&key, value]() {
        const double r = std::round(value);
        if (std::abs(value - r) > 1e-9)
            throw ConfigError("key '" + key + "' needs an integer value");
        return static_cast<int>(r);
    };
    if (key == "separation") {
        config.separation = as_int();
    } else if (key == "horizon") {
        config.horizon = value;
    } else if (key == "sample_spacing") {
        config.sample_spacing = value;
    } else if (key == "lattice.n_cells") {
        config.lattice.n_cells = as_int();
    } else if (key == "lattice.inter_hop") {
        config.lattice.inter_hop = value;
    } else if (key == "lattice.intra_hop") {
        config.lattice.intra_hop = value;
    } else if (key == "lattice.onsite") {
        config.lattice.onsite = value;
    } else if (key.rfind("emitter.", 0) == 0) {
        const std::string rest = key.substr(8);
        const auto dot = rest.find('.');
        if (dot == std::string::npos)
            throw ConfigError("unknown sweep key '" + key + "'");
        size_t index = 0;
        try {
            index = std::stoul(rest.substr(0, dot));
        } catch (...) {
            throw ConfigError("bad emitter index in '" + key + "'");
        }
        if (index >= config.emitters.size())
            throw ConfigError("sweep key '" + key + "' addresses a missing emitter");
        EmitterSpec& e = config.emitters[index];
        const std::string field = rest.substr(dot + 1);
        if (field == "cell") {
            e.attach_a.cell = as_int();
            e.attach_b.cell = e.attach_a.cell;
        } else if (field == "frequency") {
            e.frequency = value;
        } else if (field == "coupling") {
            e.coupling = value;
        } else if (field == "phase") {
            e.phase = value;
        } else {
            throw ConfigError("unknown sweep key '" + key + "'");
        }
    } else {
        throw ConfigError("unknown sweep key '" + key + "'");
    }
}

// ----- preset discovery -----

std::vector<std::string> preset_search_paths() {
    std::vector<std::string> paths;
    if (const char* env = std::getenv("XSTITCH_PRESETS"); env && *env)
        paths.push_back(env);
    paths.push_back("presets");
#ifdef XSTITCH_INSTALL_PRESETS
    paths.push_back(XSTITCH_INSTALL_PRESETS);
#endif
    return paths;
}

std::vector<std::string> list_presets() {
    std::set<std::string> names;
    for (const auto& dir : preset_search_paths()) {
        std::error_code ec;
        for (const auto& entry : std::filesystem::directory_iterator(dir, ec)) {
            if (entry.path().extension() == ".cfg")
                names.insert(entry.path().stem().string());
        }
    }
    return {names.begin(), names.end()};
}

std::string find_preset(const std::string& name_or_path) {
    namespace fs = std::filesystem;
    std::error_code ec;
    const bool looks_like_path =
        name_or_path.find('/') != std::string::npos ||
        (name_or_path.size() > 4 &&
         name_or_path.substr(name_or_path.size() - 4) == ".cfg");
    if (looks_like_path) {
        if (fs::exists(name_or_path, ec)) return name_or_path;
        throw ConfigError("no such config file '" + name_or_path + "'");
    }
    for (const auto& dir : preset_search_paths()) {
        const fs::path candidate = fs::path(dir) / (name_or_path + ".cfg");
        if (fs::exists(candidate, ec)) return candidate.string();
    }
    throw ConfigError("unknown scenario '" + name_or_path +
                      "' (searched the preset directories)");
}

ScenarioConfig load_named_scenario(const std::string& name_or_path) {
    return load_scenario_file(find_preset(name_or_path));
}

} // namespace xstitch
