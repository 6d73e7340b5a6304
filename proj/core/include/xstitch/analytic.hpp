// analytic.hpp — closed-form emitter dynamics: decay/Rabi laws, gap self-energy,
// atom-photon bound states, and band-mediated dipole-dipole couplings.
//
// Conventions: detunings are delta_f = E_f - omega_e (signed) and
// delta0 = min_k E_d - omega_e (> 0 when the emitter sits in the gap below the
// dispersive band).  alpha is the half second derivative of the dispersive band
// at its minimum (2|J| for the cross-stitch lattice).  Rate formulas take the
// group-velocity magnitude.

#pragma once

#include <complex>

namespace xstitch::analytic {

using Complex = std::complex<double>;

// ----- Markovian decay / Rabi laws -----

enum class EmissionRegime {
    SmallIntersection, // single A-site coupling, resonant with both bands
    GiantDispersive,   // A+B coupling, phase 0: dispersive channel only
    GiantFlat,         // A+B coupling, phase pi: flat channel only
    SmallFlatDetuned,  // single A-site coupling, detuned from the flat band
};

struct DecayRabiPrediction {
    EmissionRegime regime;
    double gamma = 0.0;     // exponential decay rate of the population
    double rabi = 0.0;      // oscillation frequency of the population
    double amplitude = 1.0; // peak-to-trough population contrast
    double detuning_flat = 0.0;
};

// Small emitter resonant with the band intersection: amplitude
// e^{-gamma t/2} cos(rabi t/2) with gamma = g^2/(2|v_g|), rabi = sqrt(2) g.
double small_intersection_gamma(double g, double v_g);
double small_intersection_rabi(double g);
Complex small_intersection_amplitude(double g, double v_g, double t);
DecayRabiPrediction predict_small_intersection(double g, double v_g);

// Giant emitter, phase 0: pure exponential decay at 4 g^2/|v_g|.
double giant_dispersive_gamma(double g, double v_g);
Complex giant_dispersive_amplitude(double g, double v_g, double t);
DecayRabiPrediction predict_giant_dispersive(double g, double v_g);

// Giant emitter, phase pi: lossless detuned Rabi with the cell's flat-band
// mode, coupling G, frequency sqrt(delta_f^2 + 4 G^2).
double giant_flat_rabi(double g_flat, double delta_f);
Complex giant_flat_amplitude(double g_flat, double delta_f, double t);
DecayRabiPrediction predict_giant_flat(double g_flat, double delta_f);

// Small emitter vs the flat band only: population
// 1 - A sin^2(omega_f t/2), A = 2g^2/(2g^2+delta_f^2), omega_f = sqrt(2g^2+delta_f^2).
double small_flat_amplitude(double g, double delta_f);
double small_flat_rabi(double g, double delta_f);
double small_flat_population(double g, double delta_f, double t);
DecayRabiPrediction predict_small_flat(double g, double delta_f);

// ----- Channel decomposition of the couplings -----
//
// A single A-site coupling g splits evenly over the two channels (g/sqrt(2)
// each); an A+B pair with relative phase phi couples sqrt(2) g cos(phi/2) to
// the dispersive channel and sqrt(2) g sin(phi/2) to the flat one (magnitudes).

double small_channel_coupling(double g);
double giant_dispersive_channel_coupling(double g, double phase);
double giant_flat_channel_coupling(double g, double phase);

// Summed-over-modes coupling weight w = N * |per-mode coupling|^2 entering the
// self-energy: g^2/2 for a small emitter, 2 g^2 for a giant one at phase 0.
double small_coupling_weight(double g);
double giant_coupling_weight(double g);

// ----- Gap self-energy and bound states -----

// Sigma_e(s) = w / (2 sqrt(-alpha (delta0 - i s))), principal square root with
// the cut along the dispersive band (s = -i Delta, Delta >= delta0); on-axis
// evaluation in the gap takes the limit from Re s > 0.  Throws on cut hits.
Complex self_energy(Complex s, double coupling_weight, double alpha, double delta0);
Complex self_energy_derivative(Complex s, double coupling_weight, double alpha,
                               double delta0);

struct BoundStatePrediction {
    Complex pole;               // s0, purely imaginary
    double bound_shift = 0.0;   // nu < 0: bound energy minus omega_e
    Complex residue;            // 1 / (1 + dSigma/ds) at the pole, real in (0, 1]
    double steady_population = 1.0; // |residue|^2
    double localization_length = 0.0; // sqrt(alpha/delta0), cells
    double coupling_weight = 0.0;
};

// Solves s0 + Sigma_e(s0) = 0 on the imaginary axis below the band edge.
// Bracketed bisection plus a secant polish; |s0 + Sigma_e(s0)| <= 1e-12.
BoundStatePrediction bound_state(double coupling_weight, double alpha, double delta0);

// ----- Dipole-dipole couplings -----

enum class BandChannel { Dispersive, Flat };

struct DipoleCoupling {
    double strength = 0.0;           // J_d, signed
    double exchange_frequency = 0.0; // 2 |J_d|
    BandChannel channel = BandChannel::Dispersive;
    double effective_coupling = 0.0;
};

// Gap-mediated exchange through the dispersive band:
// J_d = -(g_eff^2 / (2 sqrt(delta0 alpha))) exp(-sqrt(delta0/alpha) D).
DipoleCoupling dipole_coupling_dispersive(double effective_coupling, double alpha,
                                          double delta0, int separation);

// Flat-channel exchange is strictly on-cell: -G_eff^2/delta_f when the cells
// coincide, zero otherwise.
DipoleCoupling dipole_coupling_flat(double effective_coupling, double delta_f,
                                    int separation);

} // namespace xstitch::analytic
