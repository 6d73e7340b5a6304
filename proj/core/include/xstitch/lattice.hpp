// lattice.hpp — cross-stitch lattice: Hamiltonian blocks, band structure, F/D basis.
//
// Geometry: N unit cells, two sites per cell (sublattices A and B).  Intra-cell
// hopping -t links a_x <-> b_x; inter-cell hopping -J links every site of cell x
// to every site of cell x+1 (four bonds per cell pair).  In momentum space this
// yields a flat band E_f = t and a dispersive band E_d(k) = -4 J cos k - t.

#pragma once

#include <complex>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/SparseCore>

namespace xstitch {

using Complex = std::complex<double>;
using SparseMatrix = Eigen::SparseMatrix<Complex>;

enum class Sublattice { A, B };
enum class Boundary { Periodic, Open };

struct SiteIndex {
    int cell = 0;
    Sublattice sublattice = Sublattice::A;
    friend bool operator==(const SiteIndex&, const SiteIndex&) = default;
};

struct LatticeConfig {
    int n_cells = 1500;
    double inter_hop = 1.0;   // J, cell-to-cell (both sublattices, criss-crossed)
    double intra_hop = 0.0;   // t, A-B within a cell; also sets the flat-band energy
    double onsite = 0.0;      // common site energy; zero puts the bands in the frame above
    Boundary boundary = Boundary::Periodic;

    friend bool operator==(const LatticeConfig&, const LatticeConfig&) = default;

    // Throws std::invalid_argument on nonsense (n_cells < 2, non-finite hops).
    void validate() const;

    int n_sites() const { return 2 * n_cells; }

    // Flattened position in the A-block / B-block ordering used everywhere:
    // A sites occupy [0, N), B sites [N, 2N).  Bounds-checked.
    int flat_index(SiteIndex site) const;
};

// ----- Real-space Hamiltonian -----

// 2N x 2N single-photon lattice Hamiltonian in the A/B block ordering.
// Entries accumulate, so at n_cells == 2 the periodic wrap doubles the
// inter-cell elements; Hermiticity is exact by construction.
SparseMatrix build_lattice_hamiltonian(const LatticeConfig& config);

// ----- Band structure -----

struct BandStructure {
    std::vector<double> k_grid;              // 2*pi*n/n_k, n in (-n_k/2, n_k/2], ascending
    double flat_energy = 0.0;                // E_f = t, k-independent
    std::vector<double> dispersive_energies; // E_d(k) along k_grid
    bool gap_present = false;                // strict gap between flat and dispersive bands
    double band_edge_min = 0.0;              // min_k E_d(k)
    double band_edge_k = 0.0;                // argmin (0 or pi, decided by sign of J)
    double curvature = 0.0;                  // (1/2) d^2 E_d / dk^2 at the band minimum
};

BandStructure band_structure(const LatticeConfig& config, int n_k);

double flat_band_energy(const LatticeConfig& config);            // t + onsite
double dispersive_energy(const LatticeConfig& config, double k); // -4 J cos k - t + onsite

// Slope of the dispersive band in the -4 J sin k convention used by the decay
// rates; the rate formulas only consume its magnitude.
double group_velocity(const LatticeConfig& config, double k);

// Wavenumber in (0, pi) where the dispersive band crosses omega_e; absent when
// omega_e lies outside the band (or the band is degenerate, J == 0).
std::optional<double> resonant_k(const LatticeConfig& config, double omega_e);

// Detunings used throughout: gap-side distance to the dispersive band edge and
// signed distance to the flat band.
double band_edge_detuning(const LatticeConfig& config, double omega_e); // min_k E_d - omega_e
double flat_detuning(const LatticeConfig& config, double omega_e);      // E_f - omega_e

// ----- Flat/dispersive (F/D) basis -----
//
// Per cell: c_f = (a - b)/sqrt(2), c_d = (a + b)/sqrt(2).  The F channel hosts
// the compact localized flat-band states; the D channel carries the hopping.

struct FDPair {
    Complex flat;
    Complex dispersive;
};

FDPair ab_to_fd(Complex a, Complex b);
std::pair<Complex, Complex> fd_to_ab(const FDPair& fd); // returns (a, b)

std::vector<FDPair> ab_to_fd(std::span<const Complex> a_amps,
                             std::span<const Complex> b_amps);

} // namespace xstitch
