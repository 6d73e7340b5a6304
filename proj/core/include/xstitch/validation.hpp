// validation.hpp -- acceptance checks: simulation vs closed-form predictions
#ifndef XSTITCH_VALIDATION_HPP
#define XSTITCH_VALIDATION_HPP

#include <map>
#include <string>
#include <vector>

#include "xstitch/runner.hpp"

namespace xstitch::validation {

struct CheckResult {
    int id = 0;              // criterion number, 1..10
    std::string name;
    bool passed = false;
    double simulated = 0.0;  // headline measured quantity
    double expected = 0.0;   // headline reference value
    double tolerance = 0.0;  // headline tolerance (semantics in detail)
    std::string detail;
};

// One line: "[PASS] C3 band-intersection decay law: ..."
std::string format_line(const CheckResult& result);

struct Report {
    std::vector<CheckResult> checks;
    bool all_passed() const;
};

// Windowed summary of a steadily oscillating series: refined interior maxima
// and minima from window_start_time onward.
struct OscillationSummary {
    double mean_maxima = 0.0;
    double mean_minima = 0.0;
    double peak_to_trough = 0.0; // mean_maxima - mean_minima
    double maxima_spread = 0.0;  // max - min over the refined maxima
    int n_maxima = 0;
    int n_minima = 0;
};

OscillationSummary summarize_oscillation(const std::vector<double>& times,
                                         const std::vector<double>& values,
                                         double window_start_time);

// Runs criteria against cached scenario runs.  Criterion 10 audits the
// conservation records of every run executed in this session, so run it last
// for full coverage.
class Session {
public:
    Session() = default;

    CheckResult run_criterion(int id); // 1..10
    Report run_suite(const std::vector<int>& ids);

    static std::vector<int> suite_all();
    static std::vector<int> suite_fast(); // skips the long exchange sweeps

    // Cached preset execution (fig2, fig4a, fig4b, fig5, ...); records
    // conservation drift for the hygiene criterion.
    const RunResult& preset_run(const std::string& name);

private:
    CheckResult check_steady_population();
    CheckResult check_oscillation_amplitude();
    CheckResult check_intersection_decay();
    CheckResult check_giant_dispersive_decay();
    CheckResult check_giant_flat_rabi();
    CheckResult check_dispersive_exchange_law();
    CheckResult check_flat_rabi_law();
    CheckResult check_flat_locality();
    CheckResult check_localization_length();
    CheckResult check_numerical_hygiene();

    RunResult run_and_record(const std::string& label, const ScenarioConfig& config);
    void record(const std::string& label, const Trajectory& trajectory);

    std::map<std::string, RunResult> cache_;
    struct DriftRecord {
        std::string label;
        double norm_deviation;   // max |  ||psi|| - 1  |
        double energy_deviation; // relative to max(1, |E(0)|)
    };
    std::vector<DriftRecord> drift_log_;
};

} // namespace xstitch::validation

#endif
