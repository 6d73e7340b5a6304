// Acceptance gate: one pass/fail line per criterion, oracle values pinned in
// the validation session, plus a few supplementary end-to-end checks (labelled
// S1..S5).  Exit status is nonzero if anything fails.
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>
#include <vector>

#include "xstitch/analytic.hpp"
#include "xstitch/runner.hpp"
#include "xstitch/scenario.hpp"
#include "xstitch/spectral.hpp"
#include "xstitch/validation.hpp"

using namespace xstitch;

namespace {

bool report(const std::string& name, bool ok, const std::string& detail) {
    std::printf("[%s] %s -- %s\n", ok ? "PASS" : "FAIL", name.c_str(),
                detail.c_str());
    return ok;
}

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::vector<double> column(const Trajectory& t, int q) {
    std::vector<double> out(t.times.size());
    for (size_t j = 0; j < out.size(); ++j)
        out[j] = t.emitter_populations(static_cast<int>(j), q);
    return out;
}

// Farthest cell (ring metric) carrying more photonic weight than `threshold`.
int front_radius(const FieldProfile& p, int anchor, int n_cells,
                 double threshold) {
    int best = 0;
    for (int x = 0; x < n_cells; ++x) {
        if (p.site_a_weight[x] + p.site_b_weight[x] > threshold) {
            int d = std::abs(x - anchor);
            d = std::min(d, n_cells - d);
            best = std::max(best, d);
        }
    }
    return best;
}

// S1: the fig2 snapshots catch the emitted wavefront travelling at the
// resonant group velocity (4 cells per unit time between t=148 and t=155).
bool wavefront_check(validation::Session& session) {
    const RunResult& run = session.preset_run("fig2");
    if (run.trajectory.snapshots.size() != 2)
        return report("S1 wavefront", false, "expected two snapshots");
    const auto early =
        field_profile(run.system, run.trajectory.snapshots[0]);
    const auto late = field_profile(run.system, run.trajectory.snapshots[1]);
    const int n = run.config.lattice.n_cells;
    const int r0 = front_radius(early, run.anchor_cell, n, 1e-8);
    const int r1 = front_radius(late, run.anchor_cell, n, 1e-8);
    const int moved = r1 - r0;
    const bool ok = moved >= 24 && moved <= 32;
    return report("S1 wavefront speed", ok,
                  "front moved " + std::to_string(moved) +
                      " cells in 7 time units (expect 28 +- 4)");
}

// S2: the fig7 spectrum shows both scales: slow gap-mediated exchange and the
// per-atom flat-band Rabi line.  The preset runs at g = 0.3 where the
// dispersive Lamb shift drags both lines a few percent below the bare
// formulas, so these sanity bounds are looser than the small-coupling law
// checks C6/C7.
bool fig7_spectrum_check(validation::Session& session) {
    const RunResult& run = session.preset_run("fig7");
    const auto spectrum = spectral::population_spectrum(
        run.trajectory.times, column(run.trajectory, 1), spectral::Window::Hann);
    const auto peaks = spectral::extract_peaks(spectrum, 0.01);
    if (peaks.peaks.size() < 3)
        return report("S2 two-scale spectrum", false,
                      "expected at least 3 peaks, got " +
                          std::to_string(peaks.peaks.size()));
    const double exchange = peaks.peaks.front().frequency;
    const spectral::Peak* rabi = nullptr;
    for (const auto& p : peaks.peaks)
        if (p.frequency > 0.15 && (!rabi || p.power > rabi->power)) rabi = &p;
    if (!rabi)
        return report("S2 two-scale spectrum", false, "no flat-band Rabi line");
    const double exchange_dev = std::abs(exchange / 0.03216956019653037 - 1.0);
    const double rabi_dev = std::abs(rabi->frequency / 0.5830951894845301 - 1.0);
    const bool ok = exchange_dev <= 0.10 && rabi_dev <= 0.05;
    return report("S2 two-scale spectrum", ok,
                  "exchange " + num(exchange) + " (dev " + num(exchange_dev) +
                      ", tol 0.10), flat Rabi " + num(rabi->frequency) +
                      " (dev " + num(rabi_dev) + ", tol 0.05) over " +
                      std::to_string(peaks.peaks.size()) + " peaks");
}

// S3: fig8a giant-pair exchange stays lossless and oscillates at the predicted
// gap-mediated frequency.  The envelope is scored on the per-period returns of
// the first emitter: the population rides fast in-gap jitter, so raw local
// maxima are meaningless -- instead take the best revival inside a window
// around each multiple of the measured swap period and require those returns
// to agree to 1e-3.
bool fig8a_check(validation::Session& session) {
    const RunResult& run = session.preset_run("fig8a");
    const auto p0 = column(run.trajectory, 0);
    const auto spectrum = spectral::population_spectrum(
        run.trajectory.times, column(run.trajectory, 1), spectral::Window::Hann);
    const auto peaks = spectral::extract_peaks(spectrum, 0.05);
    if (peaks.peaks.empty())
        return report("S3 giant-pair swap", false, "no exchange line");
    const double swap_freq = peaks.peaks.front().frequency;
    const double dev = std::abs(swap_freq / 0.0011855617136941265 - 1.0);

    const double period = 2.0 * std::numbers::pi / swap_freq;
    std::vector<double> returns;
    for (int k = 1; (k + 0.25) * period <= run.config.horizon; ++k) {
        double best = 0.0;
        for (size_t j = 0; j < p0.size(); ++j)
            if (std::abs(run.trajectory.times[j] - k * period) <= 0.25 * period)
                best = std::max(best, p0[j]);
        returns.push_back(best);
    }
    if (returns.size() < 3)
        return report("S3 giant-pair swap", false,
                      "fewer than 3 complete swap periods in the horizon");
    const auto [lo, hi] = std::minmax_element(returns.begin(), returns.end());
    const double spread = *hi - *lo;
    const bool ok = spread <= 1e-3 && dev <= 0.05;
    return report("S3 giant-pair swap", ok,
                  "return spread " + num(spread) + " (tol 1e-3) over " +
                      std::to_string(returns.size()) +
                      " periods, exchange dev " + num(dev) + " (tol 0.05)");
}

// S4: perturbing the intra-cell hopping by +0.1 must push the fig5 steady
// population out of the accepted window — the suite is sensitive to the
// parameters it claims to pin down.
bool sensitivity_check() {
    auto config = load_named_scenario("fig5");
    config.lattice.intra_hop += 0.1;
    const RunResult run = run_scenario(config);
    const auto summary = validation::summarize_oscillation(
        run.trajectory.times, column(run.trajectory, 0), 0.8 * config.horizon);
    const bool outside =
        summary.mean_maxima < 0.984 || summary.mean_maxima > 0.992;
    return report("S4 parameter sensitivity", outside,
                  "perturbed steady value " + num(summary.mean_maxima) +
                      " escapes [0.984, 0.992]");
}

// S5: an empty scenario set yields an empty, passing report.
bool empty_suite_check() {
    validation::Session session;
    const auto empty = session.run_suite({});
    const bool ok = empty.checks.empty() && empty.all_passed();
    return report("S5 empty validation set", ok, "empty report passes");
}

} // namespace

int main() {
    validation::Session session;
    bool all = true;

    for (int id : validation::Session::suite_all()) {
        validation::CheckResult check;
        try {
            check = session.run_criterion(id);
        } catch (const std::exception& e) {
            check.id = id;
            check.name = "criterion " + std::to_string(id);
            check.passed = false;
            check.detail = std::string("exception: ") + e.what();
        }
        std::puts(validation::format_line(check).c_str());
        std::fflush(stdout);
        all = check.passed && all;
    }

    try {
        all = wavefront_check(session) && all;
        all = fig7_spectrum_check(session) && all;
        all = fig8a_check(session) && all;
        all = sensitivity_check() && all;
        all = empty_suite_check() && all;
    } catch (const std::exception& e) {
        report("supplementary", false, std::string("exception: ") + e.what());
        all = false;
    }

    std::printf("%s\n", all ? "ACCEPTANCE: all checks passed"
                            : "ACCEPTANCE: FAILURES present");
    return all ? 0 : 1;
}
