#include <doctest.h>

#include <cmath>
#include <numbers>

#include "xstitch/analytic.hpp"
#include "xstitch/lattice.hpp"

using namespace xstitch;
using namespace xstitch::analytic;
namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("markovian decay and rabi laws at the reference parameters") {
    // band intersection, g = 0.3, |v_g| = 4
    CHECK(small_intersection_gamma(0.3, 4.0) ==
          doctest::Approx(0.01125).epsilon(1e-15));
    CHECK(small_intersection_rabi(0.3) ==
          doctest::Approx(0.4242640687119285).epsilon(1e-15));
    CHECK(std::abs(small_intersection_amplitude(0.3, 4.0, 0.0) - 1.0) < 1e-15);
    // population law e^{-gamma t} cos^2(rabi t / 2)
    const double t = 37.0;
    const double expected = std::exp(-0.01125 * t) *
                            std::pow(std::cos(0.5 * 0.4242640687119285 * t), 2);
    CHECK(std::norm(small_intersection_amplitude(0.3, 4.0, t)) ==
          doctest::Approx(expected).epsilon(1e-12));

    // giant, phase 0: 4 g^2 / v_g
    CHECK(giant_dispersive_gamma(0.1, 4.0) == doctest::Approx(0.01).epsilon(1e-15));
    CHECK(std::norm(giant_dispersive_amplitude(0.1, 4.0, 50.0)) ==
          doctest::Approx(std::exp(-0.5)).epsilon(1e-12));

    // giant, phase pi, resonant with the flat band: rabi = 2G
    const double g_flat = giant_flat_channel_coupling(0.1, kPi);
    CHECK(g_flat == doctest::Approx(0.1 * std::sqrt(2.0)).epsilon(1e-15));
    CHECK(giant_flat_rabi(g_flat, 0.0) ==
          doctest::Approx(0.28284271247461906).epsilon(1e-15));
    // lossless: unit norm of the two-level amplitude pair is implicit in
    // population 1 - A sin^2; detuned amplitude < 1
    CHECK(predict_giant_flat(g_flat, 0.0).amplitude == doctest::Approx(1.0));
    CHECK(predict_giant_flat(g_flat, 0.5).amplitude < 1.0);

    // small emitter against the flat band only
    CHECK(small_flat_amplitude(0.1, 0.5) ==
          doctest::Approx(0.07407407407407407).epsilon(1e-15));
    CHECK(small_flat_rabi(0.3, 0.4) ==
          doctest::Approx(0.5830951894845301).epsilon(1e-15));
    CHECK(small_flat_rabi(0.1, 0.5) ==
          doctest::Approx(0.5196152422706632).epsilon(1e-15));
    CHECK(small_flat_population(0.1, 0.5, 0.0) == doctest::Approx(1.0));
    const double omega_f = small_flat_rabi(0.1, 0.5);
    CHECK(small_flat_population(0.1, 0.5, kPi / omega_f) ==
          doctest::Approx(1.0 - 0.07407407407407407).epsilon(1e-12));
}

TEST_CASE("channel decomposition of small and giant couplings") {
    CHECK(small_channel_coupling(0.3) ==
          doctest::Approx(0.3 / std::sqrt(2.0)).epsilon(1e-15));
    // phase 0: everything in the dispersive channel
    CHECK(giant_dispersive_channel_coupling(0.1, 0.0) ==
          doctest::Approx(std::sqrt(2.0) * 0.1).epsilon(1e-15));
    CHECK(giant_flat_channel_coupling(0.1, 0.0) == doctest::Approx(0.0));
    // phase pi: everything in the flat channel
    CHECK(giant_dispersive_channel_coupling(0.1, kPi) ==
          doctest::Approx(0.0).epsilon(1e-15));
    CHECK(giant_flat_channel_coupling(0.1, kPi) ==
          doctest::Approx(std::sqrt(2.0) * 0.1).epsilon(1e-15));
    // phase pi/2: even split
    CHECK(giant_dispersive_channel_coupling(0.2, kPi / 2) ==
          doctest::Approx(0.2).epsilon(1e-14));
    CHECK(giant_flat_channel_coupling(0.2, kPi / 2) ==
          doctest::Approx(0.2).epsilon(1e-14));

    CHECK(small_coupling_weight(0.1) == doctest::Approx(0.005).epsilon(1e-15));
    CHECK(giant_coupling_weight(0.05) == doctest::Approx(0.005).epsilon(1e-15));
}

TEST_CASE("gap self-energy: closed form, branch cut, and k-sum oracle") {
    // frozen value at s = 0, w = 0.005, alpha = 2, delta0 = 0.3
    const Complex s0 = self_energy({0.0, 0.0}, 0.005, 2.0, 0.3);
    CHECK(s0.real() == doctest::Approx(0.0));
    CHECK(s0.imag() == doctest::Approx(-0.003227486121839514).epsilon(1e-14));

    // on the cut (s = -i Delta, Delta >= delta0): refuse to evaluate
    CHECK_THROWS(self_energy({0.0, -0.4}, 0.005, 2.0, 0.3));
    CHECK_NOTHROW(self_energy({0.0, 0.2}, 0.005, 2.0, 0.3));

    // independent oracle: discrete k-sum over the actual dispersive band.
    // The closed form is the band-edge expansion, so compare at a small
    // detuning where the quadratic approximation holds to better than 1%.
    LatticeConfig lattice;
    lattice.inter_hop = 1.0;
    lattice.intra_hop = -2.4;
    const double delta0 = 0.1;
    const double omega_e = -1.6 - delta0;
    const double w = small_coupling_weight(0.1);
    for (int n_k : {1024, 4096}) {
        const auto band = band_structure(lattice, n_k);
        double acc = 0.0;
        for (double k : band.k_grid)
            acc += 1.0 / (dispersive_energy(lattice, k) - omega_e);
        const double k_sum = (w / n_k) * acc;
        const double closed = -self_energy({0.0, 0.0}, w, band.curvature, delta0).imag();
        CHECK(k_sum == doctest::Approx(closed).epsilon(0.01));
    }
}

TEST_CASE("self-energy derivative matches a finite difference") {
    const double w = 0.005, alpha = 2.0, delta0 = 0.3;
    const Complex s(0.01, 0.002);
    const Complex h(1e-7, 0.0);
    const Complex fd =
        (self_energy(s + h, w, alpha, delta0) - self_energy(s - h, w, alpha, delta0)) /
        (2.0 * h);
    const Complex an = self_energy_derivative(s, w, alpha, delta0);
    CHECK(std::abs(fd - an) < 1e-8);
}

TEST_CASE("bound state pole, residue, and steady population") {
    // frozen reference: w = 0.005 (small emitter, g = 0.1), alpha = 2,
    // delta0 = 0.3
    const auto b = bound_state(0.005, 2.0, 0.3);
    CHECK(b.bound_shift == doctest::Approx(-0.003210354538157025).epsilon(1e-10));
    CHECK(b.pole.real() == doctest::Approx(0.0));
    CHECK(std::abs(b.pole + self_energy(b.pole, 0.005, 2.0, 0.3)) <= 1e-12);
    CHECK(b.residue.imag() == doctest::Approx(0.0));
    CHECK(b.residue.real() == doctest::Approx(0.9947339387216869).epsilon(1e-10));
    CHECK(b.steady_population == doctest::Approx(0.9894956088447607).epsilon(1e-10));
    CHECK(b.localization_length == doctest::Approx(2.581988897471611).epsilon(1e-12));
    CHECK(b.coupling_weight == doctest::Approx(0.005));

    // decoupled limit
    const auto free = bound_state(0.0, 2.0, 0.3);
    CHECK(free.bound_shift == doctest::Approx(0.0));
    CHECK(free.residue.real() == doctest::Approx(1.0));
    CHECK(free.steady_population == doctest::Approx(1.0));

    // stronger coupling leaks more weight into the cloud
    double previous = 1.0;
    for (double w : {0.002, 0.01, 0.05}) {
        const double r = bound_state(w, 2.0, 0.3).residue.real();
        CHECK(r < previous);
        CHECK(r > 0.0);
        previous = r;
    }
}

TEST_CASE("dispersive dipole coupling: frozen values and the distance law") {
    // two small emitters, g = 0.3, delta0 = 0.4, alpha = 2, one cell apart
    const auto jd = dipole_coupling_dispersive(small_channel_coupling(0.3), 2.0,
                                               0.4, 1);
    CHECK(jd.strength == doctest::Approx(-0.016084780098265184).epsilon(1e-14));
    CHECK(jd.exchange_frequency ==
          doctest::Approx(0.03216956019653037).epsilon(1e-14));
    CHECK(jd.channel == analytic::BandChannel::Dispersive);

    // two in-phase giants, g = 0.05, delta0 = 0.2, six cells apart
    const auto far = dipole_coupling_dispersive(
        giant_dispersive_channel_coupling(0.05, 0.0), 2.0, 0.2, 6);
    CHECK(far.strength == doctest::Approx(-0.0005927808568470632).epsilon(1e-13));

    // exponential distance law with rate sqrt(delta0/alpha)
    const double kappa = std::sqrt(0.2 / 2.0);
    const auto d2 = dipole_coupling_dispersive(0.1, 2.0, 0.2, 2);
    const auto d3 = dipole_coupling_dispersive(0.1, 2.0, 2e-1, 3);
    CHECK(d3.strength / d2.strength == doctest::Approx(std::exp(-kappa)).epsilon(1e-13));
    // magnitude shrinks with detuning
    CHECK(std::abs(dipole_coupling_dispersive(0.1, 2.0, 0.5, 1).strength) <
          std::abs(dipole_coupling_dispersive(0.1, 2.0, 0.2, 1).strength));
    CHECK_THROWS(dipole_coupling_dispersive(0.1, 2.0, 0.0, 1));
}

TEST_CASE("flat dipole coupling is strictly on-cell") {
    // opposite-phase giants sharing a cell, g = 0.05, flat detuning -0.5
    const double g_eff = giant_flat_channel_coupling(0.05, kPi);
    const auto on = dipole_coupling_flat(g_eff, -0.5, 0);
    CHECK(on.strength == doctest::Approx(0.01).epsilon(1e-14));
    CHECK(on.exchange_frequency == doctest::Approx(0.02).epsilon(1e-14));
    CHECK(on.channel == analytic::BandChannel::Flat);

    for (int d : {1, 2, 7}) {
        const auto off = dipole_coupling_flat(g_eff, -0.5, d);
        CHECK(off.strength == 0.0);
        CHECK(off.exchange_frequency == 0.0);
    }
    // sign follows -G^2/delta_f
    CHECK(dipole_coupling_flat(0.1, 0.25, 0).strength ==
          doctest::Approx(-0.04).epsilon(1e-14));
    CHECK_THROWS(dipole_coupling_flat(0.1, 0.0, 0));
}

TEST_CASE("prediction bundles carry consistent fields") {
    const auto p = predict_small_intersection(0.3, 4.0);
    CHECK(p.gamma == doctest::Approx(0.01125).epsilon(1e-15));
    CHECK(p.rabi == doctest::Approx(0.4242640687119285).epsilon(1e-15));
    const auto q = predict_small_flat(0.1, 0.5);
    CHECK(q.rabi == doctest::Approx(0.5196152422706632).epsilon(1e-15));
    CHECK(q.amplitude == doctest::Approx(0.07407407407407407).epsilon(1e-15));
    CHECK(q.gamma == doctest::Approx(0.0));
}
