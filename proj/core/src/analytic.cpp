#include "xstitch/analytic.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace xstitch::analytic {

namespace {

constexpr Complex kI{0.0, 1.0};

double require_speed(double v_g) {
    const double v = std::abs(v_g);
    if (v == 0.0)
        throw std::invalid_argument("analytic: group velocity must be nonzero");
    return v;
}

} // namespace

// ----- Decay / Rabi laws -----

double small_intersection_gamma(double g, double v_g) {
    return g * g / (2.0 * require_speed(v_g));
}

double small_intersection_rabi(double g) {
    return std::numbers::sqrt2 * g;
}

Complex small_intersection_amplitude(double g, double v_g, double t) {
    const double gamma = small_intersection_gamma(g, v_g);
    const double rabi = small_intersection_rabi(g);
    return std::exp(-gamma * t / 2.0) * std::cos(rabi * t / 2.0);
}

DecayRabiPrediction predict_small_intersection(double g, double v_g) {
    return {EmissionRegime::SmallIntersection, small_intersection_gamma(g, v_g),
            small_intersection_rabi(g), 1.0, 0.0};
}

double giant_dispersive_gamma(double g, double v_g) {
    return 4.0 * g * g / require_speed(v_g);
}

Complex giant_dispersive_amplitude(double g, double v_g, double t) {
    return std::exp(-giant_dispersive_gamma(g, v_g) * t / 2.0);
}

DecayRabiPrediction predict_giant_dispersive(double g, double v_g) {
    return {EmissionRegime::GiantDispersive, giant_dispersive_gamma(g, v_g), 0.0, 0.0,
            0.0};
}

double giant_flat_rabi(double g_flat, double delta_f) {
    return std::sqrt(delta_f * delta_f + 4.0 * g_flat * g_flat);
}

Complex giant_flat_amplitude(double g_flat, double delta_f, double t) {
    const double omega = giant_flat_rabi(g_flat, delta_f);
    if (omega == 0.0)
        return 1.0;
    return std::exp(kI * (delta_f * t / 2.0)) *
           (std::cos(omega * t / 2.0) - kI * (delta_f / omega) * std::sin(omega * t / 2.0));
}

DecayRabiPrediction predict_giant_flat(double g_flat, double delta_f) {
    const double omega = giant_flat_rabi(g_flat, delta_f);
    const double amp =
        omega == 0.0 ? 0.0 : 4.0 * g_flat * g_flat / (omega * omega);
    return {EmissionRegime::GiantFlat, 0.0, omega, amp, delta_f};
}

double small_flat_amplitude(double g, double delta_f) {
    const double two_g2 = 2.0 * g * g;
    const double denom = two_g2 + delta_f * delta_f;
    if (denom == 0.0)
        return 0.0;
    return two_g2 / denom;
}

double small_flat_rabi(double g, double delta_f) {
    return std::sqrt(2.0 * g * g + delta_f * delta_f);
}

double small_flat_population(double g, double delta_f, double t) {
    const double s = std::sin(small_flat_rabi(g, delta_f) * t / 2.0);
    return 1.0 - small_flat_amplitude(g, delta_f) * s * s;
}

DecayRabiPrediction predict_small_flat(double g, double delta_f) {
    return {EmissionRegime::SmallFlatDetuned, 0.0, small_flat_rabi(g, delta_f),
            small_flat_amplitude(g, delta_f), delta_f};
}

// ----- Channel couplings -----

double small_channel_coupling(double g) {
    return g / std::numbers::sqrt2;
}

double giant_dispersive_channel_coupling(double g, double phase) {
    return std::numbers::sqrt2 * g * std::abs(std::cos(phase / 2.0));
}

double giant_flat_channel_coupling(double g, double phase) {
    return std::numbers::sqrt2 * g * std::abs(std::sin(phase / 2.0));
}

double small_coupling_weight(double g) {
    return g * g / 2.0;
}

double giant_coupling_weight(double g) {
    return 2.0 * g * g;
}

// ----- Self-energy -----

namespace {

void check_self_energy_domain(Complex s, double alpha, double delta0) {
    if (alpha <= 0.0)
        throw std::invalid_argument("self_energy: alpha must be positive");
    if (s.real() == 0.0 && -s.imag() >= delta0)
        throw std::domain_error(
            "self_energy: s lies on the dispersive-band branch cut");
}

// Argument of the square root, nudged onto the physical sheet: the Bromwich
// contour approaches the imaginary s-axis from Re s > 0, where the argument
// acquires +i0.  Signed zeros matter to std::sqrt here.
Complex sqrt_argument(Complex s, double alpha, double delta0) {
    Complex u = -alpha * (delta0 - kI * s);
    if (u.imag() == 0.0)
        u = Complex(u.real(), +0.0);
    return u;
}

} // namespace

Complex self_energy(Complex s, double coupling_weight, double alpha, double delta0) {
    check_self_energy_domain(s, alpha, delta0);
    return coupling_weight / (2.0 * std::sqrt(sqrt_argument(s, alpha, delta0)));
}

Complex self_energy_derivative(Complex s, double coupling_weight, double alpha,
                               double delta0) {
    check_self_energy_domain(s, alpha, delta0);
    const Complex u = sqrt_argument(s, alpha, delta0);
    return -kI * (coupling_weight * alpha / 4.0) / (u * std::sqrt(u));
}

// ----- Bound state -----

BoundStatePrediction bound_state(double coupling_weight, double alpha, double delta0) {
    if (alpha <= 0.0 || delta0 <= 0.0)
        throw std::invalid_argument("bound_state: need alpha > 0 and delta0 > 0");
    if (coupling_weight < 0.0)
        throw std::invalid_argument("bound_state: coupling weight must be >= 0");

    BoundStatePrediction out;
    out.coupling_weight = coupling_weight;
    out.localization_length = std::sqrt(alpha / delta0);
    if (coupling_weight == 0.0) {
        out.pole = 0.0;
        out.bound_shift = 0.0;
        out.residue = 1.0;
        out.steady_population = 1.0;
        return out;
    }

    // Pole condition on the imaginary axis, s = -i nu with nu < 0:
    //   f(nu) = nu + w / (2 sqrt(alpha (delta0 - nu))) = 0.
    // f(0^-) > 0, and f < 0 once |nu| exceeds the nu=0 value of the second
    // term, so [lo, hi] below always brackets; the doubling is a safety net.
    const auto f = [&](double nu) {
        return nu + coupling_weight / (2.0 * std::sqrt(alpha * (delta0 - nu)));
    };
    const double scale = coupling_weight / (2.0 * std::sqrt(alpha * delta0));
    double hi = -1e-14 * std::max(1.0, scale);
    double lo = -(scale * (1.0 + 1e-3) + 1e-12);
    for (int i = 0; f(lo) >= 0.0; ++i) {
        if (i > 60)
            throw std::runtime_error("bound_state: failed to bracket the pole");
        lo *= 2.0;
    }

    for (int i = 0; i < 200 && hi - lo > 1e-18 * std::max(1.0, -lo); ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi)
            break; // interval narrower than spacing of doubles
        (f(mid) > 0.0 ? hi : lo) = mid;
    }
    double nu = 0.5 * (lo + hi);
    for (int i = 0; i < 4; ++i) { // secant polish on the bracketed root
        const double f_lo = f(lo), f_hi = f(hi);
        if (f_lo == f_hi)
            break;
        const double cand = lo - f_lo * (hi - lo) / (f_hi - f_lo);
        if (cand > lo && cand < hi) {
            nu = cand;
            (f(cand) > 0.0 ? hi : lo) = cand;
        }
    }

    out.bound_shift = nu;
    out.pole = -kI * nu;
    // Residue of 1/(s + Sigma_e(s)) at the pole; real and in (0, 1] here.
    const Complex denom = 1.0 + self_energy_derivative(out.pole, coupling_weight,
                                                       alpha, delta0);
    out.residue = 1.0 / denom;
    out.steady_population = std::norm(out.residue);
    return out;
}

// ----- Dipole-dipole couplings -----

DipoleCoupling dipole_coupling_dispersive(double effective_coupling, double alpha,
                                          double delta0, int separation) {
    if (alpha <= 0.0 || delta0 <= 0.0)
        throw std::invalid_argument(
            "dipole_coupling_dispersive: need alpha > 0 and delta0 > 0");
    if (separation < 0)
        throw std::invalid_argument("dipole_coupling_dispersive: separation must be >= 0");
    const double g2 = effective_coupling * effective_coupling;
    const double strength = -(g2 / (2.0 * std::sqrt(delta0 * alpha))) *
                            std::exp(-std::sqrt(delta0 / alpha) * separation);
    return {strength, 2.0 * std::abs(strength), BandChannel::Dispersive,
            effective_coupling};
}

DipoleCoupling dipole_coupling_flat(double effective_coupling, double delta_f,
                                    int separation) {
    if (delta_f == 0.0)
        throw std::invalid_argument("dipole_coupling_flat: delta_f must be nonzero");
    if (separation < 0)
        throw std::invalid_argument("dipole_coupling_flat: separation must be >= 0");
    const double strength =
        separation == 0 ? -effective_coupling * effective_coupling / delta_f : 0.0;
    return {strength, 2.0 * std::abs(strength), BandChannel::Flat, effective_coupling};
}

} // namespace xstitch::analytic
