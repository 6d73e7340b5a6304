// spectral.hpp -- power spectra, peak extraction, envelope fits for population
// time series
#ifndef XSTITCH_SPECTRAL_HPP
#define XSTITCH_SPECTRAL_HPP

#include <vector>

namespace xstitch::spectral {

enum class Window { Rectangular, Hann };

// One-sided power spectrum on the angular-frequency axis.  With a rectangular
// window the bin powers sum to the variance of the input.
struct PowerSpectrum {
    std::vector<double> frequency; // angular, ascending from 0
    std::vector<double> power;
    double resolution = 0.0;      // bin spacing 2*pi / (n * dt)
    double sample_spacing = 0.0;
    Window window = Window::Hann;
};

// The series is detrended by its mean before transforming; requires at least
// 64 uniformly spaced samples.
PowerSpectrum population_spectrum(const std::vector<double>& times,
                                  const std::vector<double>& values,
                                  Window window = Window::Hann);

// ----- peaks -----

struct Peak {
    double frequency = 0.0; // parabola-refined
    double power = 0.0;
    double width = 0.0;     // half-power width estimate from the local curvature
};

struct PeakSet {
    std::vector<Peak> peaks; // ascending frequency
    double max_power = 0.0;
    double threshold = 0.0;  // absolute power floor that was applied
};

// Interior local maxima above threshold_fraction of the strongest bin,
// refined with a three-point quadratic fit in log power.
PeakSet extract_peaks(const PowerSpectrum& spectrum,
                      double threshold_fraction = 0.01);

// ----- time-domain extrema and envelopes -----

struct RefinedExtremum {
    double time = 0.0;
    double value = 0.0;
};

// Strict interior local maxima/minima, positions refined by a quadratic fit
// through the neighbouring samples.
std::vector<RefinedExtremum> local_maxima_refined(const std::vector<double>& times,
                                                  const std::vector<double>& values);
std::vector<RefinedExtremum> local_minima_refined(const std::vector<double>& times,
                                                  const std::vector<double>& values);

struct DecayFit {
    double rate = 0.0;      // decay constant of value ~ amplitude * exp(-rate*t)
    double amplitude = 0.0;
    int n_points = 0;       // samples that entered the log-linear fit
    bool used_envelope = false; // true when fitted through oscillation maxima
};

// Log-linear fit of an exponentially decaying series.  With five or more
// interior maxima the fit runs through the refined maxima (the envelope of an
// oscillating decay); otherwise through every sample.  Throws if the fitted
// rate is not positive or the fitted values are not strictly positive.
DecayFit fit_decay_envelope(const std::vector<double>& times,
                            const std::vector<double>& values);

} // namespace xstitch::spectral

#endif
