#include "xstitch/lattice.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace xstitch {

namespace {
constexpr double kPi = std::numbers::pi;
}

void LatticeConfig::validate() const {
    if (n_cells < 2)
        throw std::invalid_argument("lattice: n_cells must be >= 2, got " +
                                    std::to_string(n_cells));
    if (!std::isfinite(inter_hop) || !std::isfinite(intra_hop) || !std::isfinite(onsite))
        throw std::invalid_argument("lattice: hopping/onsite parameters must be finite");
}

int LatticeConfig::flat_index(SiteIndex site) const {
    if (site.cell < 0 || site.cell >= n_cells)
        throw std::invalid_argument("lattice: cell index " + std::to_string(site.cell) +
                                    " outside [0, " + std::to_string(n_cells) + ")");
    return site.sublattice == Sublattice::A ? site.cell : n_cells + site.cell;
}

SparseMatrix build_lattice_hamiltonian(const LatticeConfig& config) {
    config.validate();
    const int n = config.n_cells;
    const double j = config.inter_hop;
    const double t = config.intra_hop;

    std::vector<Eigen::Triplet<Complex>> entries;
    entries.reserve(static_cast<size_t>(12 * n));

    auto idx = [&](int cell, Sublattice s) {
        return config.flat_index({cell, s});
    };
    auto bond = [&](int i, int k, double amplitude) {
        // -amplitude * (|i><k| + |k><i|); triplets accumulate on duplicates.
        entries.emplace_back(i, k, Complex(-amplitude, 0.0));
        entries.emplace_back(k, i, Complex(-amplitude, 0.0));
    };

    for (int x = 0; x < n; ++x) {
        if (config.onsite != 0.0) {
            entries.emplace_back(idx(x, Sublattice::A), idx(x, Sublattice::A),
                                 Complex(config.onsite, 0.0));
            entries.emplace_back(idx(x, Sublattice::B), idx(x, Sublattice::B),
                                 Complex(config.onsite, 0.0));
        }
        bond(idx(x, Sublattice::A), idx(x, Sublattice::B), t);

        const bool has_next = x + 1 < n || config.boundary == Boundary::Periodic;
        if (!has_next)
            continue;
        const int next = (x + 1) % n;
        bond(idx(x, Sublattice::A), idx(next, Sublattice::A), j);
        bond(idx(x, Sublattice::B), idx(next, Sublattice::B), j);
        bond(idx(x, Sublattice::A), idx(next, Sublattice::B), j);
        bond(idx(x, Sublattice::B), idx(next, Sublattice::A), j);
    }

    SparseMatrix h(2 * n, 2 * n);
    h.setFromTriplets(entries.begin(), entries.end());
    h.makeCompressed();
    return h;
}

BandStructure band_structure(const LatticeConfig& config, int n_k) {
    config.validate();
    if (n_k < 2)
        throw std::invalid_argument("band_structure: need at least 2 k points");

    BandStructure bands;
    bands.flat_energy = flat_band_energy(config);
    bands.k_grid.reserve(static_cast<size_t>(n_k));
    // n in (-n_k/2, n_k/2], ascending in k.
    const int lo = -(n_k / 2) + (n_k % 2 == 0 ? 1 : 0);
    for (int n = lo; n < lo + n_k; ++n)
        bands.k_grid.push_back(2.0 * kPi * n / n_k);
    bands.dispersive_energies.reserve(bands.k_grid.size());
    for (double k : bands.k_grid)
        bands.dispersive_energies.push_back(dispersive_energy(config, k));

    const double j = config.inter_hop;
    // Band minimum at k=0 for J>0, k=pi for J<0; never assumed downstream.
    bands.band_edge_k = j >= 0.0 ? 0.0 : kPi;
    bands.band_edge_min = dispersive_energy(config, bands.band_edge_k);
    // (1/2) E_d'' = 2 J cos k, evaluated at the minimum: 2|J| either way.
    bands.curvature = 2.0 * j * std::cos(bands.band_edge_k);

    // Strict gap iff the flat energy avoids [min E_d, max E_d]:  |t| > 2|J|.
    const double band_half_width = 4.0 * std::abs(j);
    const double center = -config.intra_hop + config.onsite;
    bands.gap_present =
        std::abs(bands.flat_energy - center) > band_half_width / 2.0;
    return bands;
}

double flat_band_energy(const LatticeConfig& config) {
    return config.intra_hop + config.onsite;
}

double dispersive_energy(const LatticeConfig& config, double k) {
    return -4.0 * config.inter_hop * std::cos(k) - config.intra_hop + config.onsite;
}

double group_velocity(const LatticeConfig& config, double k) {
    return -4.0 * config.inter_hop * std::sin(k);
}

std::optional<double> resonant_k(const LatticeConfig& config, double omega_e) {
    const double j = config.inter_hop;
    if (j == 0.0)
        return std::nullopt; // degenerate band, no meaningful wavenumber
    const double c = -(omega_e + config.intra_hop - config.onsite) / (4.0 * j);
    if (c < -1.0 || c > 1.0)
        return std::nullopt;
    return std::acos(c);
}

double band_edge_detuning(const LatticeConfig& config, double omega_e) {
    const double edge_k = config.inter_hop >= 0.0 ? 0.0 : kPi;
    return dispersive_energy(config, edge_k) - omega_e;
}

double flat_detuning(const LatticeConfig& config, double omega_e) {
    return flat_band_energy(config) - omega_e;
}

FDPair ab_to_fd(Complex a, Complex b) {
    const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
    return {(a - b) * inv_sqrt2, (a + b) * inv_sqrt2};
}

std::pair<Complex, Complex> fd_to_ab(const FDPair& fd) {
    const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
    return {(fd.flat + fd.dispersive) * inv_sqrt2,
            (fd.dispersive - fd.flat) * inv_sqrt2};
}

std::vector<FDPair> ab_to_fd(std::span<const Complex> a_amps,
                             std::span<const Complex> b_amps) {
    if (a_amps.size() != b_amps.size())
        throw std::invalid_argument("ab_to_fd: sublattice arrays differ in length");
    std::vector<FDPair> out;
    out.reserve(a_amps.size());
    for (size_t i = 0; i < a_amps.size(); ++i)
        out.push_back(ab_to_fd(a_amps[i], b_amps[i]));
    return out;
}

} // namespace xstitch
