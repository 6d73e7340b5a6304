#include "xstitch/validation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "xstitch/analytic.hpp"
#include "xstitch/propagator.hpp"
#include "xstitch/spectral.hpp"

namespace xstitch::validation {

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> column(const Trajectory& trajectory, int q) {
    std::vector<double> out(trajectory.times.size());
    for (size_t j = 0; j < out.size(); ++j)
        out[j] = trajectory.emitter_populations(static_cast<int>(j), q);
    return out;
}

double relative_deviation(double measured, double reference) {
    return std::abs(measured - reference) / std::abs(reference);
}

std::string format_value(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

// Two-emitter scenario on a gapped lattice (flat band below the dispersive
// band), first emitter at the middle cell and excited.
ScenarioConfig exchange_config(EmitterKind kind, double coupling, double phase,
                               double frequency, int separation, double spacing,
                               double horizon, double intra_hop,
                               const std::string& label) {
    ScenarioConfig c;
    c.name = label;
    c.lattice.n_cells = 1500;
    c.lattice.inter_hop = 1.0;
    c.lattice.intra_hop = intra_hop;
    EmitterSpec e = kind == EmitterKind::Small
                        ? small_emitter(750, frequency, coupling)
                        : giant_emitter(750, frequency, coupling, phase);
    c.emitters = {e, e};
    c.separation = separation;
    c.sample_spacing = spacing;
    c.horizon = horizon;
    return c;
}

double lowest_peak_frequency(const spectral::PowerSpectrum& spectrum,
                             double threshold_fraction) {
    const auto peaks = spectral::extract_peaks(spectrum, threshold_fraction);
    if (peaks.peaks.empty())
        throw std::runtime_error("validation: no spectral peak found");
    return peaks.peaks.front().frequency;
}

double strongest_peak_frequency(const spectral::PowerSpectrum& spectrum,
                                double threshold_fraction, double min_frequency) {
    const auto peaks = spectral::extract_peaks(spectrum, threshold_fraction);
    const spectral::Peak* best = nullptr;
    for (const auto& p : peaks.peaks) {
        if (p.frequency <= min_frequency) continue;
        if (!best || p.power > best->power) best = &p;
    }
    if (!best)
        throw std::runtime_error("validation: no spectral peak above the cut");
    return best->frequency;
}

// Power centroid of the spectrum restricted to [lo, hi].  The right estimator
// when a line is split into a narrow comb (e.g. by a weak pair interaction):
// the centroid of the cluster is stable where any single-peak pick is not.
double band_power_centroid(const spectral::PowerSpectrum& spectrum, double lo,
                           double hi) {
    double power_sum = 0.0, weighted = 0.0, strongest = 0.0, global_max = 0.0;
    for (size_t j = 0; j < spectrum.frequency.size(); ++j) {
        global_max = std::max(global_max, spectrum.power[j]);
        if (spectrum.frequency[j] < lo || spectrum.frequency[j] > hi) continue;
        power_sum += spectrum.power[j];
        weighted += spectrum.frequency[j] * spectrum.power[j];
        strongest = std::max(strongest, spectrum.power[j]);
    }
    if (!(power_sum > 0.0) || strongest < 1e-4 * global_max)
        throw std::runtime_error("validation: no spectral line inside the window");
    return weighted / power_sum;
}

struct LineFit {
    double slope;
    double intercept;
};

LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t j = 0; j < x.size(); ++j) {
        sx += x[j];
        sy += y[j];
        sxx += x[j] * x[j];
        sxy += x[j] * y[j];
    }
    const double denom = n * sxx - sx * sx;
    return {(n * sxy - sx * sy) / denom, (sxx * sy - sx * sxy) / denom};
}

// Worst per-component deviation of the sparse propagator against a dense
// eigendecomposition reference.
double dense_propagation_deviation(const SystemHamiltonian& system,
                                   const SystemState& initial,
                                   const TimeGrid& grid) {
    const Eigen::MatrixXcd dense(system.matrix);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(dense);
    const Eigen::MatrixXcd& vectors = solver.eigenvectors();
    const Eigen::VectorXd& values = solver.eigenvalues();
    const Eigen::VectorXcd modes = vectors.adjoint() * initial.amplitudes;

    ChebyshevPropagator prop(system.matrix, grid.spacing);
    Eigen::VectorXcd psi = initial.amplitudes;
    double worst = 0.0;
    for (int j = 1; j <= grid.count; ++j) {
        prop.step(psi);
        const double t = grid.spacing * j;
        Eigen::VectorXcd phased(modes.size());
        for (int m = 0; m < modes.size(); ++m)
            phased[m] = modes[m] * std::exp(Complex(0.0, -values[m] * t));
        const Eigen::VectorXcd reference = vectors * phased;
        worst = std::max(worst, (psi - reference).cwiseAbs().maxCoeff());
    }
    return worst;
}

} // namespace

// ----- report plumbing -----

std::string format_line(const CheckResult& r) {
    std::ostringstream out;
    out << (r.passed ? "[PASS]" : "[FAIL]") << " C" << r.id << " " << r.name
        << ": value=" << format_value(r.simulated)
        << " ref=" << format_value(r.expected)
        << " tol=" << format_value(r.tolerance);
    if (!r.detail.empty()) out << " -- " << r.detail;
    return out.str();
}

bool Report::all_passed() const {
    return std::all_of(checks.begin(), checks.end(),
                       [](const CheckResult& c) { return c.passed; });
}

OscillationSummary summarize_oscillation(const std::vector<double>& times,
                                         const std::vector<double>& values,
                                         double window_start_time) {
    std::vector<double> t, v;
    for (size_t j = 0; j < times.size(); ++j) {
        if (times[j] >= window_start_time) {
            t.push_back(times[j]);
            v.push_back(values[j]);
        }
    }
    const auto maxima = spectral::local_maxima_refined(t, v);
    const auto minima = spectral::local_minima_refined(t, v);
    OscillationSummary s;
    s.n_maxima = static_cast<int>(maxima.size());
    s.n_minima = static_cast<int>(minima.size());
    if (!maxima.empty()) {
        double sum = 0, lo = maxima.front().value, hi = maxima.front().value;
        for (const auto& m : maxima) {
            sum += m.value;
            lo = std::min(lo, m.value);
            hi = std::max(hi, m.value);
        }
        s.mean_maxima = sum / maxima.size();
        s.maxima_spread = hi - lo;
    }
    if (!minima.empty()) {
        double sum = 0;
        for (const auto& m : minima) sum += m.value;
        s.mean_minima = sum / minima.size();
    }
    s.peak_to_trough = s.mean_maxima - s.mean_minima;
    return s;
}

// ----- session -----

std::vector<int> Session::suite_all() { return {1, 2, 3, 4, 5, 6, 7, 8, 9, 10}; }
std::vector<int> Session::suite_fast() { return {1, 2, 3, 4, 5, 7, 8, 9, 10}; }

void Session::record(const std::string& label, const Trajectory& trajectory) {
    double norm_dev = 0.0;
    for (double s : trajectory.norm_sq)
        norm_dev = std::max(norm_dev, std::abs(std::sqrt(s) - 1.0));
    drift_log_.push_back({label, norm_dev, trajectory.max_energy_drift});
}

RunResult Session::run_and_record(const std::string& label,
                                  const ScenarioConfig& config) {
    RunResult result = run_scenario(config);
    record(label, result.trajectory);
    return result;
}

const RunResult& Session::preset_run(const std::string& name) {
    auto it = cache_.find(name);
    if (it != cache_.end()) return it->second;
    RunResult result = run_and_record(name, load_named_scenario(name));
    return cache_.emplace(name, std::move(result)).first->second;
}

CheckResult Session::run_criterion(int id) {
    switch (id) {
    case 1: return check_steady_population();
    case 2: return check_oscillation_amplitude();
    case 3: return check_intersection_decay();
    case 4: return check_giant_dispersive_decay();
    case 5: return check_giant_flat_rabi();
    case 6: return check_dispersive_exchange_law();
    case 7: return check_flat_rabi_law();
    case 8: return check_flat_locality();
    case 9: return check_localization_length();
    case 10: return check_numerical_hygiene();
    default: throw std::invalid_argument("criterion id must be 1..10");
    }
}

Report Session::run_suite(const std::vector<int>& ids) {
    Report report;
    for (int id : ids) report.checks.push_back(run_criterion(id));
    return report;
}

// ----- criteria -----

// C1: long-horizon run with the emitter inside the gap settles onto the
// bound state; the oscillation's upper envelope equals the squared pole
// residue.  (The quoted steady value rides the envelope: the literal time
// average additionally carries the flat-channel oscillation.)
CheckResult Session::check_steady_population() {
    const RunResult& run = preset_run("fig5");
    const EmitterSpec& e = run.config.emitters.at(0);
    const auto band = band_structure(run.config.lattice, 1024);
    const double delta0 = band.band_edge_min - e.frequency;
    const double weight = analytic::small_coupling_weight(e.coupling);
    const auto bound = analytic::bound_state(weight, band.curvature, delta0);

    const auto summary = summarize_oscillation(
        run.trajectory.times, column(run.trajectory, 0), 0.8 * run.config.horizon);
    const double simulated = summary.mean_maxima;
    const double oracle = bound.steady_population;

    CheckResult r;
    r.id = 1;
    r.name = "bound-state steady population";
    r.simulated = simulated;
    r.expected = oracle;
    r.tolerance = 0.005;
    const bool sim_ok = std::abs(simulated - 0.988) <= 0.004;
    const bool oracle_ok = std::abs(oracle - 0.989) <= 0.001;
    const bool cross_ok = std::abs(simulated - oracle) <= 0.005;
    r.passed = sim_ok && oracle_ok && cross_ok && summary.n_maxima >= 3;
    r.detail = "sim in 0.988+-0.004: " + std::string(sim_ok ? "yes" : "no") +
               ", oracle in 0.989+-0.001: " + std::string(oracle_ok ? "yes" : "no") +
               ", maxima=" + std::to_string(summary.n_maxima);
    return r;
}

// C2: flat-channel Rabi oscillation depth of the same run.
CheckResult Session::check_oscillation_amplitude() {
    const RunResult& run = preset_run("fig5");
    const auto summary = summarize_oscillation(
        run.trajectory.times, column(run.trajectory, 0), 0.8 * run.config.horizon);
    CheckResult r;
    r.id = 2;
    r.name = "bound-state oscillation amplitude";
    r.simulated = summary.peak_to_trough;
    r.expected = 0.074;
    r.tolerance = 0.008;
    r.passed = std::abs(summary.peak_to_trough - 0.074) <= 0.008 &&
               summary.n_maxima >= 3 && summary.n_minima >= 3;
    return r;
}

// C3: emitter resonant with the band intersection decays as
// exp(-Gamma t) cos^2(Omega t / 2).
CheckResult Session::check_intersection_decay() {
    const RunResult& run = preset_run("fig2");
    const EmitterSpec& e = run.config.emitters.at(0);
    const auto k_r = resonant_k(run.config.lattice, e.frequency);
    if (!k_r) throw std::runtime_error("fig2 emitter must be inside the band");
    const double v = std::abs(group_velocity(run.config.lattice, *k_r));
    const double gamma = analytic::small_intersection_gamma(e.coupling, v);
    const double rabi = analytic::small_intersection_rabi(e.coupling);

    const auto series = column(run.trajectory, 0);
    double sum_sq = 0.0;
    for (size_t j = 0; j < series.size(); ++j) {
        const double t = run.trajectory.times[j];
        const double c = std::cos(0.5 * rabi * t);
        const double reference = std::exp(-gamma * t) * c * c;
        sum_sq += (series[j] - reference) * (series[j] - reference);
    }
    const double rms = std::sqrt(sum_sq / static_cast<double>(series.size()));
    const auto fit = spectral::fit_decay_envelope(run.trajectory.times, series);
    const double rate_dev = relative_deviation(fit.rate, gamma);

    CheckResult r;
    r.id = 3;
    r.name = "band-intersection decay law";
    r.simulated = rms;
    r.expected = 0.0;
    r.tolerance = 0.02;
    r.passed = rms <= 0.02 && rate_dev <= 0.05;
    r.detail = "fitted rate " + format_value(fit.rate) + " vs " +
               format_value(gamma) + " (dev " + format_value(rate_dev) +
               ", tol 0.05)";
    return r;
}

// C4: giant emitter with in-phase legs couples only to the dispersive band
// and decays monotonically at 4 g^2 / v_g.
CheckResult Session::check_giant_dispersive_decay() {
    const RunResult& run = preset_run("fig4a");
    const EmitterSpec& e = run.config.emitters.at(0);
    const auto k_r = resonant_k(run.config.lattice, e.frequency);
    if (!k_r) throw std::runtime_error("fig4a emitter must be inside the band");
    const double v = std::abs(group_velocity(run.config.lattice, *k_r));
    const double gamma = analytic::giant_dispersive_gamma(e.coupling, v);

    const auto series = column(run.trajectory, 0);
    const auto fit = spectral::fit_decay_envelope(run.trajectory.times, series);
    const double rate_dev = relative_deviation(fit.rate, gamma);

    std::vector<double> residual(series.size());
    for (size_t j = 0; j < series.size(); ++j)
        residual[j] =
            series[j] - fit.amplitude * std::exp(-fit.rate * run.trajectory.times[j]);
    const auto spec_full = spectral::population_spectrum(
        run.trajectory.times, series, spectral::Window::Rectangular);
    const auto spec_residual = spectral::population_spectrum(
        run.trajectory.times, residual, spectral::Window::Rectangular);
    double total = 0.0, leftover = 0.0;
    for (double p : spec_full.power) total += p;
    for (double p : spec_residual.power) leftover += p;
    const double fraction = leftover / total;

    CheckResult r;
    r.id = 4;
    r.name = "giant-atom dispersive decay";
    r.simulated = fit.rate;
    r.expected = gamma;
    r.tolerance = 0.03;
    r.passed = rate_dev <= 0.03 && fraction <= 0.01;
    r.detail = "rate dev " + format_value(rate_dev) +
               "; residual oscillation power fraction " + format_value(fraction) +
               " (tol 0.01)";
    return r;
}

// C5: giant emitter with opposite-phase legs talks only to the flat band:
// lossless Rabi at sqrt(Delta_f^2 + 4 G^2).
CheckResult Session::check_giant_flat_rabi() {
    const RunResult& run = preset_run("fig4b");
    const EmitterSpec& e = run.config.emitters.at(0);
    const double delta_f = flat_detuning(run.config.lattice, e.frequency);
    const double g_flat =
        analytic::giant_flat_channel_coupling(e.coupling, e.phase);
    const double rabi = analytic::giant_flat_rabi(g_flat, delta_f);

    const auto series = column(run.trajectory, 0);
    const auto summary =
        summarize_oscillation(run.trajectory.times, series, 0.0);
    const auto spectrum = spectral::population_spectrum(
        run.trajectory.times, series, spectral::Window::Hann);
    const double peak = strongest_peak_frequency(spectrum, 0.05, 0.0);
    const double freq_dev = relative_deviation(peak, rabi);

    CheckResult r;
    r.id = 5;
    r.name = "giant-atom flat-band Rabi";
    r.simulated = peak;
    r.expected = rabi;
    r.tolerance = 0.01;
    r.passed = freq_dev <= 0.01 && summary.maxima_spread <= 1e-3 &&
               summary.n_maxima >= 10;
    r.detail = "freq dev " + format_value(freq_dev) + "; envelope spread " +
               format_value(summary.maxima_spread) + " over " +
               std::to_string(summary.n_maxima) + " peaks (tol 1e-3)";
    return r;
}

// C6: exchange frequency 2|J_d| of gap-mediated interactions, swept over the
// band-edge detuning (small pair) and over the separation (in-phase giant
// pair).  The couplings are free parameters of the criterion and are kept
// small so pole dressing stays inside the 5% budget.  The small-pair sweep
// runs on a deepened flat band: small emitters also touch the flat channel,
// which is not part of the law under test, and pushing it far below keeps its
// level repulsion negligible at every detuning.  (In-phase giants do not
// couple to the flat band at all, so they use the standard lattice.)
CheckResult Session::check_dispersive_exchange_law() {
    struct Point {
        std::string label;
        double measured, predicted;
    };
    std::vector<Point> points;

    auto run_point = [this, &points](EmitterKind kind, double g, double delta0,
                                     int separation, double spacing,
                                     double intra_hop, const std::string& label) {
        ScenarioConfig probe = exchange_config(kind, g, 0.0, 0.0, separation,
                                               spacing, 100.0, intra_hop, label);
        const auto band = band_structure(probe.lattice, 1024);
        for (auto& e : probe.emitters) e.frequency = band.band_edge_min - delta0;
        const double g_eff = kind == EmitterKind::Small
                                 ? analytic::small_channel_coupling(g)
                                 : analytic::giant_dispersive_channel_coupling(g, 0.0);
        const auto coupling = analytic::dipole_coupling_dispersive(
            g_eff, band.curvature, delta0, separation);
        const double predicted = coupling.exchange_frequency;
        probe.horizon = 5.0 * (2.0 * kPi / predicted);
        const RunResult result = run_and_record(label, probe);
        const auto spectrum = spectral::population_spectrum(
            result.trajectory.times, column(result.trajectory, 1),
            spectral::Window::Hann);
        points.push_back({label, lowest_peak_frequency(spectrum, 0.05), predicted});
    };

    for (int i = 1; i <= 6; ++i) {
        const double delta0 = i / 10.0;
        run_point(EmitterKind::Small, 0.05, delta0, 1, 2.5, -6.0,
                  "exchange-detuning-" + format_value(delta0));
    }
    for (int d = 1; d <= 6; ++d) {
        run_point(EmitterKind::Giant, 0.04, 0.2, d, 5.0, -2.4,
                  "exchange-separation-" + std::to_string(d));
    }

    double worst = 0.0;
    std::string worst_label;
    for (const auto& p : points) {
        const double dev = relative_deviation(p.measured, p.predicted);
        if (dev > worst) {
            worst = dev;
            worst_label = p.label;
        }
    }

    CheckResult r;
    r.id = 6;
    r.name = "dispersive exchange frequency law";
    r.simulated = worst;
    r.expected = 0.0;
    r.tolerance = 0.05;
    r.passed = worst <= 0.05;
    r.detail = "worst relative deviation over " +
               std::to_string(points.size()) + " points at " + worst_label;
    return r;
}

// C7: flat-band Rabi sideband at sqrt(2 g^2 + Delta_f^2) for a small-atom
// pair.  The emitters sit below the flat band (the frequency is otherwise
// free), which keeps every sweep point well clear of the dispersive edge.
// The pair exchange splits the sideband into a closely spaced comb whose
// teeth shift with Delta_f, so the line position is scored as the power
// centroid of a window around the prediction instead of a single peak pick.
CheckResult Session::check_flat_rabi_law() {
    double worst = 0.0;
    std::string worst_label;
    for (int i = 2; i <= 8; ++i) {
        const double delta_f = i / 10.0;
        const double g = 0.3;
        const std::string label = "flat-rabi-" + format_value(delta_f);
        ScenarioConfig probe = exchange_config(EmitterKind::Small, g, 0.0,
                                               -2.4 - delta_f, 1, 0.5, 800.0,
                                               -2.4, label);
        const RunResult result = run_and_record(label, probe);
        const auto spectrum = spectral::population_spectrum(
            result.trajectory.times, column(result.trajectory, 0),
            spectral::Window::Hann);
        const double predicted = analytic::small_flat_rabi(g, delta_f);
        const double measured =
            band_power_centroid(spectrum, 0.7 * predicted, 1.3 * predicted);
        const double dev = relative_deviation(measured, predicted);
        if (dev > worst) {
            worst = dev;
            worst_label = label;
        }
    }

    CheckResult r;
    r.id = 7;
    r.name = "flat-band Rabi frequency law";
    r.simulated = worst;
    r.expected = 0.0;
    r.tolerance = 0.03;
    r.passed = worst <= 0.03;
    r.detail = "worst relative deviation over 7 points at " + worst_label;
    return r;
}

// C8: opposite-phase giant pair couples only to single-cell flat-band states:
// no exchange at any nonzero separation, and at zero separation the exchange
// frequency is 2 G_eff^2 / |Delta_f|.
CheckResult Session::check_flat_locality() {
    const double g = 0.05, frequency = -1.9;

    ScenarioConfig shared = exchange_config(EmitterKind::Giant, g, kPi, frequency,
                                            0, 0.5, 2600.0, -2.4,
                                            "flat-shared-cell");
    const RunResult shared_run = run_and_record("flat-shared-cell", shared);
    const double delta_f = flat_detuning(shared.lattice, frequency);
    const double g_eff = analytic::giant_flat_channel_coupling(g, kPi);
    const auto coupling = analytic::dipole_coupling_flat(g_eff, delta_f, 0);
    const auto spectrum = spectral::population_spectrum(
        shared_run.trajectory.times, column(shared_run.trajectory, 1),
        spectral::Window::Hann);
    const double measured = strongest_peak_frequency(spectrum, 0.05, 0.0);
    const double freq_dev =
        relative_deviation(measured, coupling.exchange_frequency);

    double worst_leak = 0.0;
    for (int d = 1; d <= 5; ++d) {
        ScenarioConfig probe =
            exchange_config(EmitterKind::Giant, g, kPi, frequency, d, 0.5, 1300.0,
                            -2.4, "flat-separated-" + std::to_string(d));
        const RunResult result = run_and_record(probe.name, probe);
        worst_leak =
            std::max(worst_leak, result.trajectory.emitter_populations.col(1).maxCoeff());
    }

    CheckResult r;
    r.id = 8;
    r.name = "flat-band exchange locality";
    r.simulated = measured;
    r.expected = coupling.exchange_frequency;
    r.tolerance = 0.05;
    r.passed = freq_dev <= 0.05 && worst_leak <= 1e-3;
    r.detail = "shared-cell freq dev " + format_value(freq_dev) +
               "; worst separated-pair transfer " + format_value(worst_leak) +
               " (tol 1e-3)";
    return r;
}

// C9: photonic cloud of the bound state decays as exp(-x / L_eff) with
// 1/L_eff = sqrt(Delta0 / alpha); fitted on cells 1..12 beside the emitter.
// A raw late-time snapshot cannot resolve the far tail: the ~1% of the
// excitation radiated during formation circulates on the ring forever, and
// its quasi-uniform floor (~1e-6 weight per site) buries the bound cloud
// beyond cell 7 (bound weight at cell 12 is ~1e-8).  A phase-sensitive
// average fixes this: demodulating every site against the anchor-cell phase
// and averaging over the second half of the run leaves the phase-locked
// bound cloud intact while each radiative component, detuned from the bound
// pole by at least Delta0, averages toward zero.
CheckResult Session::check_localization_length() {
    const ScenarioConfig config = load_named_scenario("fig5");
    auto scenario = materialize(config);
    constexpr int kCells = 12;
    scenario.options.tracked_sites.clear();
    for (int d = 0; d <= kCells; ++d)
        scenario.options.tracked_sites.push_back(scenario.system.lattice.flat_index(
            {scenario.anchor_cell + d, Sublattice::A}));
    const Trajectory traj =
        evolve(scenario.system, scenario.initial, scenario.grid, scenario.options);
    record("bound-profile", traj);

    const double t_begin = 0.5 * config.horizon;
    const double t_span = config.horizon - t_begin;
    Eigen::VectorXcd acc = Eigen::VectorXcd::Zero(kCells + 1);
    double weight_sum = 0.0;
    for (size_t j = 0; j < traj.times.size(); ++j) {
        if (traj.times[j] < t_begin) continue;
        const int row = static_cast<int>(j);
        const Complex ref = traj.tracked_amplitudes(row, 0);
        if (!(std::abs(ref) > 0.0)) continue;
        // Hann taper sharpens the rejection of the detuned background.
        const double w =
            0.5 - 0.5 * std::cos(2.0 * kPi * (traj.times[j] - t_begin) / t_span);
        const Complex demod = w * std::conj(ref) / std::abs(ref);
        for (int d = 0; d <= kCells; ++d)
            acc(d) += demod * traj.tracked_amplitudes(row, d);
        weight_sum += w;
    }
    if (!(weight_sum > 0.0))
        throw std::runtime_error("localization fit has no usable samples");

    std::vector<double> distance, log_amp;
    for (int d = 1; d <= kCells; ++d) {
        const double amp = std::abs(acc(d)) / weight_sum;
        if (!(amp > 0.0))
            throw std::runtime_error("empty profile cell in localization fit");
        distance.push_back(static_cast<double>(d));
        log_amp.push_back(std::log(amp));
    }
    const LineFit fit = least_squares(distance, log_amp);
    const double measured = -fit.slope;

    const EmitterSpec& e = config.emitters.at(0);
    const auto band = band_structure(config.lattice, 1024);
    const double delta0 = band.band_edge_min - e.frequency;
    const double predicted = std::sqrt(delta0 / band.curvature);
    const double dev = relative_deviation(measured, predicted);

    CheckResult r;
    r.id = 9;
    r.name = "bound-state localization length";
    r.simulated = measured;
    r.expected = predicted;
    r.tolerance = 0.05;
    r.passed = dev <= 0.05;
    r.detail = "demodulated profile averaged over t in [" +
               format_value(t_begin) + ", " + format_value(config.horizon) + "]";
    return r;
}

// C10: conservation audit over every run recorded in this session plus a
// dense-oracle check of the propagator at small N.
CheckResult Session::check_numerical_hygiene() {
    // Make sure the cheap preset runs exist even in a minimal session.
    preset_run("fig2");
    preset_run("fig4a");
    preset_run("fig4b");
    preset_run("fig5");

    double worst_norm = 0.0, worst_energy = 0.0;
    std::string norm_label, energy_label;
    for (const auto& rec : drift_log_) {
        if (rec.norm_deviation > worst_norm) {
            worst_norm = rec.norm_deviation;
            norm_label = rec.label;
        }
        if (rec.energy_deviation > worst_energy) {
            worst_energy = rec.energy_deviation;
            energy_label = rec.label;
        }
    }

    double dense_dev = 0.0;
    {
        LatticeConfig lattice;
        lattice.n_cells = 6;
        lattice.inter_hop = 1.0;
        lattice.intra_hop = 0.5;
        const auto system =
            assemble_system(lattice, {small_emitter(2, 0.3, 0.2)});
        dense_dev = std::max(
            dense_dev, dense_propagation_deviation(
                           system, excited_emitter_state(system, 0), {0.5, 100}));
    }
    {
        LatticeConfig lattice;
        lattice.n_cells = 8;
        lattice.inter_hop = 0.7;
        lattice.intra_hop = -1.1;
        const auto system =
            assemble_system(lattice, {giant_emitter(3, -0.4, 0.15, 0.7)});
        dense_dev = std::max(
            dense_dev, dense_propagation_deviation(
                           system, excited_emitter_state(system, 0), {0.4, 100}));
    }

    CheckResult r;
    r.id = 10;
    r.name = "numerical hygiene";
    r.simulated = worst_norm;
    r.expected = 0.0;
    r.tolerance = 1e-8;
    r.passed = worst_norm <= 1e-8 && worst_energy <= 1e-8 && dense_dev <= 1e-9;
    r.detail = "norm dev " + format_value(worst_norm) + " (" + norm_label +
               "); energy dev " + format_value(worst_energy) + " (" + energy_label +
               "); small-lattice dense-oracle dev " + format_value(dense_dev) +
               " (tol 1e-9) over " + std::to_string(drift_log_.size()) + " runs";
    return r;
}

} // namespace xstitch::validation
