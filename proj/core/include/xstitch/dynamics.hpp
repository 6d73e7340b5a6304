// dynamics.hpp -- emitters coupled to the lattice, single-excitation evolution
#ifndef XSTITCH_DYNAMICS_HPP
#define XSTITCH_DYNAMICS_HPP

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "xstitch/lattice.hpp"

namespace xstitch {

// ----- emitters -----

enum class EmitterKind { Small, Giant };

// Two-level emitter attached to the lattice.  A small emitter touches one
// A-sublattice site; a giant emitter touches an A site and a B site, the
// second leg picking up exp(i*phase).
struct EmitterSpec {
    EmitterKind kind = EmitterKind::Small;
    double frequency = 0.0;          // bare transition frequency
    double coupling = 0.1;           // per-leg amplitude g, >= 0
    double phase = 0.0;              // giant only; ignored for small
    SiteIndex attach_a{0, Sublattice::A};
    SiteIndex attach_b{0, Sublattice::B}; // giant only

    // Phase folded to (-pi, pi] so physically identical specs assemble to
    // bit-identical Hamiltonians.
    double canonical_phase() const;
    void validate(const LatticeConfig& lattice) const;
    bool operator==(const EmitterSpec&) const = default;
};

EmitterSpec small_emitter(int cell, double frequency, double coupling);
EmitterSpec giant_emitter(int cell, double frequency, double coupling, double phase);

// ----- assembled single-excitation Hamiltonian -----

// Basis ordering: lattice sites first (see LatticeConfig::flat_index), then
// one row per emitter.
struct SystemHamiltonian {
    SparseMatrix matrix;
    LatticeConfig lattice;
    std::vector<EmitterSpec> emitters;

    int n_sites() const { return lattice.n_sites(); }
    int dimension() const { return static_cast<int>(matrix.rows()); }
    int emitter_index(int which) const;
};

SystemHamiltonian assemble_system(const LatticeConfig& lattice,
                                  const std::vector<EmitterSpec>& emitters);

// ----- states -----

struct SystemState {
    Eigen::VectorXcd amplitudes;
    double time = 0.0;
};

SystemState excited_emitter_state(const SystemHamiltonian& system, int which);
SystemState site_excited_state(const SystemHamiltonian& system, SiteIndex site);

// ----- evolution -----

struct TimeGrid {
    double spacing = 0.1; // interval between stored samples
    int count = 0;        // number of steps; count+1 samples including t=0
    void validate() const;
    double horizon() const { return spacing * count; }
};

// Thrown when conserved quantities drift past tolerance mid-run.
struct ToleranceError : std::runtime_error {
    ToleranceError(const std::string& what, double drift_, double time_)
        : std::runtime_error(what), drift(drift_), time(time_) {}
    double drift;
    double time;
};

struct EvolveOptions {
    double norm_tolerance = 1e-8;       // abort if |norm^2 - 1| exceeds this
    std::vector<double> snapshot_times; // rounded to the sample grid
    std::vector<int> tracked_sites;     // flat indices with stored amplitudes
    bool track_energy = true;
};

struct Trajectory {
    std::vector<double> times;
    Eigen::MatrixXd emitter_populations; // (samples) x (emitters)
    std::vector<int> tracked_sites;
    Eigen::MatrixXcd tracked_amplitudes; // (samples) x (tracked sites)
    std::vector<double> norm_sq;
    std::vector<double> energy;          // empty unless track_energy
    std::vector<SystemState> snapshots;
    double max_norm_drift = 0.0;   // in the squared norm
    double max_energy_drift = 0.0; // relative to max(1, |E(0)|)
};

Trajectory evolve(const SystemHamiltonian& system, const SystemState& initial,
                  const TimeGrid& grid, const EvolveOptions& options = {});

// ----- derived observables -----

// Per-cell weight of a state, both in sublattice and in flat/dispersive form.
struct FieldProfile {
    std::vector<double> site_a_weight;     // |psi_A(x)|^2
    std::vector<double> site_b_weight;     // |psi_B(x)|^2
    std::vector<double> flat_weight;       // |(psi_A - psi_B)/sqrt2|^2
    std::vector<double> dispersive_weight; // |(psi_A + psi_B)/sqrt2|^2
    double emitter_weight = 0.0;           // summed over emitters
};

FieldProfile field_profile(const SystemHamiltonian& system,
                           const SystemState& state);

// Excited / anchor-cell / rest-of-lattice split of a trajectory.  The anchor
// cell's two sites must be among the tracked sites.
struct PopulationSeries {
    std::vector<double> times;
    std::vector<double> excited;   // summed over emitters
    std::vector<double> anchor;    // both sites of the anchor cell
    std::vector<double> remainder; // norm^2 minus the other two
};

PopulationSeries populations(const Trajectory& trajectory,
                             const SystemHamiltonian& system, int anchor_cell);

// ----- canned two-emitter setup -----

struct TwoEmitterScenario {
    SystemHamiltonian system;
    SystemState initial; // first emitter excited
    int cell_a = 0;
    int cell_b = 0;
};

// Places the first emitter at the middle cell and the second `separation`
// cells further along (wrapping if periodic); attachment cells of the input
// specs are overridden accordingly.
TwoEmitterScenario two_emitter_scenario(const LatticeConfig& lattice,
                                        const EmitterSpec& first,
                                        const EmitterSpec& second,
                                        int separation);

} // namespace xstitch

#endif
