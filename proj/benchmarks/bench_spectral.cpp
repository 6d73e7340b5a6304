#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "xstitch/spectral.hpp"

namespace {

using namespace xstitch::spectral;

std::pair<std::vector<double>, std::vector<double>> tone_series(int n) {
    std::vector<double> t(n), x(n);
    for (int j = 0; j < n; ++j) {
        t[j] = 0.25 * j;
        x[j] = std::cos(0.52 * t[j]) + 0.2 * std::cos(0.031 * t[j]);
    }
    return {t, x};
}

void spectrum_hann(benchmark::State& state) {
    const auto [t, x] = tone_series(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        const auto s = population_spectrum(t, x, Window::Hann);
        benchmark::DoNotOptimize(s.power.data());
    }
}
BENCHMARK(spectrum_hann)->Arg(1024)->Arg(8192)->Arg(65536)
    ->Unit(benchmark::kMicrosecond);

void peak_extraction(benchmark::State& state) {
    const auto [t, x] = tone_series(8192);
    const auto s = population_spectrum(t, x, Window::Hann);
    for (auto _ : state) {
        const auto peaks = extract_peaks(s, 0.01);
        benchmark::DoNotOptimize(peaks.peaks.data());
    }
}
BENCHMARK(peak_extraction)->Unit(benchmark::kMicrosecond);

void envelope_fit(benchmark::State& state) {
    const int n = 8192;
    std::vector<double> t(n), x(n);
    for (int j = 0; j < n; ++j) {
        t[j] = 0.1 * j;
        const double c = std::cos(0.9 * t[j]);
        x[j] = std::exp(-0.002 * t[j]) * c * c + 1e-12;
    }
    for (auto _ : state) {
        const auto fit = fit_decay_envelope(t, x);
        benchmark::DoNotOptimize(fit.rate);
    }
}
BENCHMARK(envelope_fit)->Unit(benchmark::kMicrosecond);

} // namespace
