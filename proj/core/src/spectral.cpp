#include "xstitch/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include <fftw3.h>

namespace xstitch::spectral {

namespace {

// FFTW planner calls are not thread-safe; executes on distinct plans are.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

void check_uniform(const std::vector<double>& times, double spacing) {
    const double tol = 1e-9 * std::max(1.0, std::abs(spacing));
    for (size_t j = 1; j < times.size(); ++j)
        if (std::abs((times[j] - times[j - 1]) - spacing) > tol)
            throw std::invalid_argument("spectrum: time grid is not uniform");
}

// Vertex of the parabola through (-1,ym),(0,y0),(1,yp) in bin offsets.
struct Vertex {
    double offset;
    double value;
    double curvature; // second derivative per bin^2 (negative at a maximum)
};

Vertex parabola_vertex(double ym, double y0, double yp) {
    const double denom = ym - 2.0 * y0 + yp;
    if (denom >= 0.0) return {0.0, y0, denom}; // numerically flat; keep the bin
    double d = 0.5 * (ym - yp) / denom;
    d = std::clamp(d, -0.5, 0.5);
    return {d, y0 - 0.25 * (ym - yp) * d, denom};
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
    if (denom == 0.0)
        throw std::invalid_argument("fit: degenerate abscissae");
    return {(n * sxy - sx * sy) / denom, (sxx * sy - sx * sxy) / denom};
}

std::vector<RefinedExtremum> refined_extrema(const std::vector<double>& times,
                                             const std::vector<double>& values,
                                             double sign) {
    if (times.size() != values.size())
        throw std::invalid_argument("extrema: size mismatch");
    std::vector<RefinedExtremum> out;
    if (times.size() < 3) return out;
    const double dt = times[1] - times[0];
    for (size_t j = 1; j + 1 < values.size(); ++j) {
        const double ym = sign * values[j - 1];
        const double y0 = sign * values[j];
        const double yp = sign * values[j + 1];
        if (y0 > ym && y0 > yp) {
            const Vertex v = parabola_vertex(ym, y0, yp);
            out.push_back({times[j] + v.offset * dt, sign * v.value});
        }
    }
    return out;
}

} // namespace

PowerSpectrum population_spectrum(const std::vector<double>& times,
                                  const std::vector<double>& values,
                                  Window window) {
    if (times.size() != values.size())
        throw std::invalid_argument("spectrum: size mismatch");
    const size_t n = values.size();
    if (n < 64)
        throw std::invalid_argument("spectrum: need at least 64 samples");
    const double dt = times[1] - times[0];
    if (!(dt > 0.0))
        throw std::invalid_argument("spectrum: non-increasing time grid");
    check_uniform(times, dt);

    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(n);

    std::vector<double> in(n);
    double window_norm = 0.0; // sum of squared window, for power normalisation
    for (size_t j = 0; j < n; ++j) {
        double w = 1.0;
        if (window == Window::Hann)
            w = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi *
                                      static_cast<double>(j) /
                                      static_cast<double>(n - 1)));
        in[j] = w * (values[j] - mean);
        window_norm += w * w;
    }

    const size_t n_half = n / 2 + 1;
    std::vector<double> real(n_half), imag(n_half);
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        fftw_complex* out =
            static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n_half));
        fftw_plan plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), in.data(), out,
                                              FFTW_ESTIMATE);
        fftw_execute(plan);
        for (size_t j = 0; j < n_half; ++j) {
            real[j] = out[j][0];
            imag[j] = out[j][1];
        }
        fftw_destroy_plan(plan);
        fftw_free(out);
    }

    PowerSpectrum spec;
    spec.sample_spacing = dt;
    spec.resolution = 2.0 * std::numbers::pi / (static_cast<double>(n) * dt);
    spec.window = window;
    spec.frequency.resize(n_half);
    spec.power.resize(n_half);
    // Normalised so the rectangular-window bins sum to the series variance.
    const double scale = 1.0 / (window_norm * static_cast<double>(n));
    for (size_t j = 0; j < n_half; ++j) {
        spec.frequency[j] = spec.resolution * static_cast<double>(j);
        const double mag2 = real[j] * real[j] + imag[j] * imag[j];
        const bool unpaired = (j == 0) || (n % 2 == 0 && j == n_half - 1);
        spec.power[j] = (unpaired ? 1.0 : 2.0) * mag2 * scale;
    }
    return spec;
}

PeakSet extract_peaks(const PowerSpectrum& spectrum, double threshold_fraction) {
    if (!(threshold_fraction >= 0.0 && threshold_fraction <= 1.0))
        throw std::invalid_argument("peaks: threshold fraction outside [0, 1]");
    PeakSet out;
    const auto& p = spectrum.power;
    if (p.size() < 3) return out;
    out.max_power = *std::max_element(p.begin(), p.end());
    out.threshold = threshold_fraction * out.max_power;

    constexpr double floor_power = 1e-300;
    for (size_t j = 1; j + 1 < p.size(); ++j) {
        if (!(p[j] > p[j - 1] && p[j] > p[j + 1] && p[j] >= out.threshold))
            continue;
        const double ym = std::log(std::max(p[j - 1], floor_power));
        const double y0 = std::log(std::max(p[j], floor_power));
        const double yp = std::log(std::max(p[j + 1], floor_power));
        const Vertex v = parabola_vertex(ym, y0, yp);
        Peak peak;
        peak.frequency = spectrum.frequency[j] + v.offset * spectrum.resolution;
        peak.power = std::exp(v.value);
        if (v.curvature < 0.0) {
            // log P ~ -(w - w0)^2 / (2 sigma^2): half-power width from sigma.
            const double sigma_bins = std::sqrt(-1.0 / v.curvature);
            peak.width = 2.0 * std::sqrt(2.0 * std::numbers::ln2) * sigma_bins *
                         spectrum.resolution;
        } else {
            peak.width = spectrum.resolution;
        }
        out.peaks.push_back(peak);
    }
    return out;
}

std::vector<RefinedExtremum> local_maxima_refined(const std::vector<double>& times,
                                                  const std::vector<double>& values) {
    return refined_extrema(times, values, +1.0);
}

std::vector<RefinedExtremum> local_minima_refined(const std::vector<double>& times,
                                                  const std::vector<double>& values) {
    return refined_extrema(times, values, -1.0);
}

DecayFit fit_decay_envelope(const std::vector<double>& times,
                            const std::vector<double>& values) {
    if (times.size() != values.size() || times.size() < 4)
        throw std::invalid_argument("decay fit: need matching series, >= 4 samples");

    std::vector<double> fit_t, fit_logv;
    const auto maxima = local_maxima_refined(times, values);
    const bool use_envelope = maxima.size() >= 5;
    if (use_envelope) {
        for (const auto& m : maxima) {
            if (!(m.value > 0.0))
                throw std::invalid_argument("decay fit: non-positive envelope value");
            fit_t.push_back(m.time);
            fit_logv.push_back(std::log(m.value));
        }
    } else {
        for (size_t j = 0; j < values.size(); ++j) {
            if (!(values[j] > 0.0))
                throw std::invalid_argument("decay fit: non-positive sample");
            fit_t.push_back(times[j]);
            fit_logv.push_back(std::log(values[j]));
        }
    }

    const LineFit line = least_squares(fit_t, fit_logv);
    DecayFit out;
    out.rate = -line.slope;
    out.amplitude = std::exp(line.intercept);
    out.n_points = static_cast<int>(fit_t.size());
    out.used_envelope = use_envelope;
    if (!(out.rate > 0.0))
        throw std::runtime_error("decay fit: fitted rate is not positive");
    return out;
}

} // namespace xstitch::spectral
