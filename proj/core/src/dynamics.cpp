#include "xstitch/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <set>

#include "xstitch/propagator.hpp"

namespace xstitch {

namespace {

double snap_unit(double v) {
    if (std::abs(v) < 1e-15) return 0.0;
    if (std::abs(v - 1.0) < 1e-15) return 1.0;
    if (std::abs(v + 1.0) < 1e-15) return -1.0;
    return v;
}

} // namespace

// ----- emitters -----

double EmitterSpec::canonical_phase() const {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double p = std::remainder(phase, two_pi);
    if (p == -std::numbers::pi) p = std::numbers::pi;
    return p;
}

void EmitterSpec::validate(const LatticeConfig& lattice) const {
    lattice.validate();
    if (!std::isfinite(frequency) || !std::isfinite(coupling) || !std::isfinite(phase))
        throw std::invalid_argument("emitter: parameters must be finite");
    if (coupling < 0.0)
        throw std::invalid_argument("emitter: coupling must be >= 0");
    if (attach_a.sublattice != Sublattice::A)
        throw std::invalid_argument("emitter: attach_a must sit on sublattice A");
    if (attach_a.cell < 0 || attach_a.cell >= lattice.n_cells)
        throw std::invalid_argument("emitter: attach_a cell out of range");
    if (kind == EmitterKind::Giant) {
        if (attach_b.sublattice != Sublattice::B)
            throw std::invalid_argument("emitter: attach_b must sit on sublattice B");
        if (attach_b.cell < 0 || attach_b.cell >= lattice.n_cells)
            throw std::invalid_argument("emitter: attach_b cell out of range");
    }
}

EmitterSpec small_emitter(int cell, double frequency, double coupling) {
    EmitterSpec e;
    e.kind = EmitterKind::Small;
    e.frequency = frequency;
    e.coupling = coupling;
    e.attach_a = {cell, Sublattice::A};
    e.attach_b = {cell, Sublattice::B};
    return e;
}

EmitterSpec giant_emitter(int cell, double frequency, double coupling, double phase) {
    EmitterSpec e = small_emitter(cell, frequency, coupling);
    e.kind = EmitterKind::Giant;
    e.phase = phase;
    return e;
}

// ----- assembled Hamiltonian -----

int SystemHamiltonian::emitter_index(int which) const {
    if (which < 0 || which >= static_cast<int>(emitters.size()))
        throw std::invalid_argument("emitter index out of range");
    return n_sites() + which;
}

SystemHamiltonian assemble_system(const LatticeConfig& lattice,
                                  const std::vector<EmitterSpec>& emitters) {
    if (emitters.empty())
        throw std::invalid_argument("assemble_system: need at least one emitter");
    for (const auto& e : emitters) e.validate(lattice);

    const SparseMatrix bare = build_lattice_hamiltonian(lattice);
    const int n_sites = lattice.n_sites();
    const int dim = n_sites + static_cast<int>(emitters.size());

    std::vector<Eigen::Triplet<Complex>> entries;
    entries.reserve(bare.nonZeros() + 5 * emitters.size());
    for (int outer = 0; outer < bare.outerSize(); ++outer)
        for (SparseMatrix::InnerIterator it(bare, outer); it; ++it)
            entries.emplace_back(static_cast<int>(it.row()),
                                 static_cast<int>(it.col()), it.value());

    auto couple = [&entries](int site, int emitter, Complex amp) {
        entries.emplace_back(site, emitter, amp);
        entries.emplace_back(emitter, site, std::conj(amp));
    };

    for (int q = 0; q < static_cast<int>(emitters.size()); ++q) {
        const EmitterSpec& e = emitters[q];
        const int row = n_sites + q;
        entries.emplace_back(row, row, Complex(e.frequency, 0.0));
        couple(lattice.flat_index(e.attach_a), row, Complex(e.coupling, 0.0));
        if (e.kind == EmitterKind::Giant) {
            const double p = e.canonical_phase();
            const Complex leg(snap_unit(std::cos(p)), snap_unit(std::sin(p)));
            couple(lattice.flat_index(e.attach_b), row, e.coupling * leg);
        }
    }

    SystemHamiltonian out;
    out.matrix.resize(dim, dim);
    out.matrix.setFromTriplets(entries.begin(), entries.end());
    out.matrix.makeCompressed();
    out.lattice = lattice;
    out.emitters = emitters;
    return out;
}

SystemState excited_emitter_state(const SystemHamiltonian& system, int which) {
    SystemState s;
    s.amplitudes = Eigen::VectorXcd::Zero(system.dimension());
    s.amplitudes[system.emitter_index(which)] = 1.0;
    return s;
}

SystemState site_excited_state(const SystemHamiltonian& system, SiteIndex site) {
    SystemState s;
    s.amplitudes = Eigen::VectorXcd::Zero(system.dimension());
    s.amplitudes[system.lattice.flat_index(site)] = 1.0;
    return s;
}

// ----- evolution -----

void TimeGrid::validate() const {
    if (!(spacing > 0.0) || !std::isfinite(spacing))
        throw std::invalid_argument("time grid: spacing must be positive and finite");
    if (count < 0)
        throw std::invalid_argument("time grid: negative step count");
}

Trajectory evolve(const SystemHamiltonian& system, const SystemState& initial,
                  const TimeGrid& grid, const EvolveOptions& options) {
    grid.validate();
    if (initial.amplitudes.size() != system.dimension())
        throw std::invalid_argument("evolve: initial state dimension mismatch");
    if (initial.time != 0.0)
        throw std::invalid_argument("evolve: initial state must sit at t=0");
    for (int site : options.tracked_sites)
        if (site < 0 || site >= system.n_sites())
            throw std::invalid_argument("evolve: tracked site out of range");

    const int n_samples = grid.count + 1;
    const int n_emitters = static_cast<int>(system.emitters.size());
    const int n_tracked = static_cast<int>(options.tracked_sites.size());

    // Which samples want a snapshot (times rounded to the grid).
    std::set<int> snapshot_samples;
    for (double t : options.snapshot_times) {
        int j = static_cast<int>(std::lround(t / grid.spacing));
        snapshot_samples.insert(std::clamp(j, 0, grid.count));
    }

    Trajectory out;
    out.times.resize(n_samples);
    out.emitter_populations.resize(n_samples, n_emitters);
    out.tracked_sites = options.tracked_sites;
    out.tracked_amplitudes.resize(n_samples, n_tracked);
    out.norm_sq.resize(n_samples);
    if (options.track_energy) out.energy.resize(n_samples);

    ChebyshevPropagator prop(system.matrix, grid.spacing);
    Eigen::VectorXcd psi = initial.amplitudes;
    const double norm0 = psi.squaredNorm();
    const double energy0 = options.track_energy ? prop.energy(psi) : 0.0;
    const double energy_scale = std::max(1.0, std::abs(energy0));

    for (int j = 0; j < n_samples; ++j) {
        if (j > 0) prop.step(psi);
        const double t = grid.spacing * j;
        out.times[j] = t;
        for (int q = 0; q < n_emitters; ++q)
            out.emitter_populations(j, q) = std::norm(psi[system.n_sites() + q]);
        for (int s = 0; s < n_tracked; ++s)
            out.tracked_amplitudes(j, s) = psi[options.tracked_sites[s]];

        const double nrm = psi.squaredNorm();
        out.norm_sq[j] = nrm;
        out.max_norm_drift = std::max(out.max_norm_drift, std::abs(nrm - norm0));
        if (options.track_energy) {
            const double en = prop.energy(psi);
            out.energy[j] = en;
            out.max_energy_drift =
                std::max(out.max_energy_drift, std::abs(en - energy0) / energy_scale);
        }
        if (out.max_norm_drift > options.norm_tolerance) {
            char msg[160];
            std::snprintf(msg, sizeof msg,
                          "evolve: norm drift %.3e exceeds tolerance %.3e at t=%g "
                          "(dim=%d, dt=%g)",
                          out.max_norm_drift, options.norm_tolerance, t,
                          system.dimension(), grid.spacing);
            throw ToleranceError(msg, out.max_norm_drift, t);
        }
        if (snapshot_samples.count(j)) out.snapshots.push_back({psi, t});
    }
    return out;
}

// ----- derived observables -----

FieldProfile field_profile(const SystemHamiltonian& system,
                           const SystemState& state) {
    if (state.amplitudes.size() != system.dimension())
        throw std::invalid_argument("field_profile: state dimension mismatch");
    const int n = system.lattice.n_cells;
    FieldProfile out;
    out.site_a_weight.resize(n);
    out.site_b_weight.resize(n);
    out.flat_weight.resize(n);
    out.dispersive_weight.resize(n);
    for (int x = 0; x < n; ++x) {
        const Complex a = state.amplitudes[system.lattice.flat_index({x, Sublattice::A})];
        const Complex b = state.amplitudes[system.lattice.flat_index({x, Sublattice::B})];
        const FDPair fd = ab_to_fd(a, b);
        out.site_a_weight[x] = std::norm(a);
        out.site_b_weight[x] = std::norm(b);
        out.flat_weight[x] = std::norm(fd.flat);
        out.dispersive_weight[x] = std::norm(fd.dispersive);
    }
    for (int q = 0; q < static_cast<int>(system.emitters.size()); ++q)
        out.emitter_weight += std::norm(state.amplitudes[system.n_sites() + q]);
    return out;
}

PopulationSeries populations(const Trajectory& trajectory,
                             const SystemHamiltonian& system, int anchor_cell) {
    const int site_a = system.lattice.flat_index({anchor_cell, Sublattice::A});
    const int site_b = system.lattice.flat_index({anchor_cell, Sublattice::B});
    const auto& tracked = trajectory.tracked_sites;
    const auto find = [&tracked](int site) {
        const auto it = std::find(tracked.begin(), tracked.end(), site);
        if (it == tracked.end())
            throw std::invalid_argument(
                "populations: anchor cell sites were not tracked");
        return static_cast<int>(it - tracked.begin());
    };
    const int col_a = find(site_a), col_b = find(site_b);

    const int n_samples = static_cast<int>(trajectory.times.size());
    PopulationSeries out;
    out.times = trajectory.times;
    out.excited.resize(n_samples);
    out.anchor.resize(n_samples);
    out.remainder.resize(n_samples);
    for (int j = 0; j < n_samples; ++j) {
        out.excited[j] = trajectory.emitter_populations.row(j).sum();
        out.anchor[j] = std::norm(trajectory.tracked_amplitudes(j, col_a)) +
                        std::norm(trajectory.tracked_amplitudes(j, col_b));
        out.remainder[j] = trajectory.norm_sq[j] - out.excited[j] - out.anchor[j];
    }
    return out;
}

// ----- canned two-emitter setup -----

TwoEmitterScenario two_emitter_scenario(const LatticeConfig& lattice,
                                        const EmitterSpec& first,
                                        const EmitterSpec& second,
                                        int separation) {
    if (separation < 0)
        throw std::invalid_argument("two_emitter_scenario: negative separation");
    if (separation >= lattice.n_cells)
        throw std::invalid_argument("two_emitter_scenario: separation exceeds lattice");
    TwoEmitterScenario out;
    out.cell_a = lattice.n_cells / 2;
    out.cell_b = out.cell_a + separation;
    if (out.cell_b >= lattice.n_cells) out.cell_b -= lattice.n_cells;

    auto place = [](EmitterSpec spec, int cell) {
        spec.attach_a = {cell, Sublattice::A};
        spec.attach_b = {cell, Sublattice::B};
        return spec;
    };
    out.system = assemble_system(
        lattice, {place(first, out.cell_a), place(second, out.cell_b)});
    out.initial = excited_emitter_state(out.system, 0);
    return out;
}

} // namespace xstitch
