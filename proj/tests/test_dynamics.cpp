#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include <Eigen/Dense>

#include "xstitch/dynamics.hpp"
#include "xstitch/propagator.hpp"

using namespace xstitch;
namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("emitter specs validate their attachments") {
    LatticeConfig lattice;
    lattice.n_cells = 8;

    CHECK_NOTHROW(small_emitter(3, -0.5, 0.1).validate(lattice));
    CHECK_NOTHROW(giant_emitter(3, -0.5, 0.1, kPi).validate(lattice));

    EmitterSpec bad = small_emitter(3, -0.5, 0.1);
    bad.coupling = -0.1;
    CHECK_THROWS(bad.validate(lattice));

    bad = small_emitter(3, -0.5, 0.1);
    bad.attach_a.sublattice = Sublattice::B;
    CHECK_THROWS(bad.validate(lattice));

    bad = giant_emitter(3, -0.5, 0.1, 0.0);
    bad.attach_b.sublattice = Sublattice::A;
    CHECK_THROWS(bad.validate(lattice));

    CHECK_THROWS(small_emitter(8, -0.5, 0.1).validate(lattice));
}

TEST_CASE("phase canonicalization folds to (-pi, pi]") {
    CHECK(giant_emitter(0, 0.0, 0.1, 3 * kPi).canonical_phase() ==
          doctest::Approx(kPi));
    CHECK(giant_emitter(0, 0.0, 0.1, -kPi).canonical_phase() ==
          doctest::Approx(kPi));
    CHECK(giant_emitter(0, 0.0, 0.1, 0.3).canonical_phase() ==
          doctest::Approx(0.3).epsilon(1e-15));
}

TEST_CASE("assembled hamiltonian wires emitters to their legs") {
    LatticeConfig lattice;
    lattice.n_cells = 6;
    lattice.intra_hop = 0.4;

    const auto sys = assemble_system(
        lattice, {small_emitter(2, 0.3, 0.2), giant_emitter(4, -0.1, 0.15, 0.7)});
    CHECK(sys.dimension() == 2 * 6 + 2);
    CHECK(sys.emitter_index(0) == 12);
    CHECK(sys.emitter_index(1) == 13);

    const Eigen::MatrixXcd h = Eigen::MatrixXcd(sys.matrix);
    CHECK((h - h.adjoint()).norm() == doctest::Approx(0.0));

    const int a2 = lattice.flat_index({2, Sublattice::A});
    const int a4 = lattice.flat_index({4, Sublattice::A});
    const int b4 = lattice.flat_index({4, Sublattice::B});
    CHECK(h(12, 12).real() == doctest::Approx(0.3).epsilon(1e-15));
    CHECK(h(13, 13).real() == doctest::Approx(-0.1).epsilon(1e-15));
    CHECK(std::abs(h(a2, 12)) == doctest::Approx(0.2).epsilon(1e-15));
    CHECK(std::abs(h(a4, 13)) == doctest::Approx(0.15).epsilon(1e-15));
    CHECK(std::abs(h(b4, 13)) == doctest::Approx(0.15).epsilon(1e-15));
    // the B leg carries the relative phase 0.7
    const Complex ratio = h(b4, 13) / h(a4, 13);
    CHECK(std::arg(ratio) == doctest::Approx(0.7).epsilon(1e-12));
    // small emitters touch nothing else
    const int b2 = lattice.flat_index({2, Sublattice::B});
    CHECK(std::abs(h(b2, 12)) == 0.0);
}

TEST_CASE("opposite-phase legs assemble to an exactly real -g") {
    LatticeConfig lattice;
    lattice.n_cells = 4;
    const auto sys = assemble_system(lattice, {giant_emitter(1, 0.0, 0.25, kPi)});
    const Eigen::MatrixXcd h = Eigen::MatrixXcd(sys.matrix);
    const int b1 = lattice.flat_index({1, Sublattice::B});
    const int a1 = lattice.flat_index({1, Sublattice::A});
    const Complex leg_b = h(b1, sys.emitter_index(0));
    const Complex leg_a = h(a1, sys.emitter_index(0));
    CHECK(leg_b.imag() == 0.0);
    CHECK(leg_b.real() == doctest::Approx(-leg_a.real()).epsilon(1e-16));
}

TEST_CASE("full phase turns assemble identically") {
    LatticeConfig lattice;
    lattice.n_cells = 4;
    const auto assemble_with = [&](double phase) {
        return Eigen::MatrixXcd(
            assemble_system(lattice, {giant_emitter(1, 0.2, 0.1, phase)}).matrix);
    };
    // at the canonical phases the snap makes the wrap exactly invisible
    CHECK((assemble_with(kPi) - assemble_with(3 * kPi)).norm() == 0.0);
    CHECK((assemble_with(kPi) - assemble_with(-kPi)).norm() == 0.0);
    CHECK((assemble_with(0.0) - assemble_with(2 * kPi)).norm() == 0.0);
    // for generic phases the caller's phi + 2*pi is itself rounded, so the
    // wrap can differ by the ulp that addition already lost
    CHECK((assemble_with(0.4) - assemble_with(0.4 + 2 * kPi)).norm() <= 1e-15);
}

TEST_CASE("chebyshev propagator reproduces a two-site rotation") {
    SparseMatrix h(2, 2);
    h.insert(0, 1) = 1.0;
    h.insert(1, 0) = 1.0;
    h.makeCompressed();
    ChebyshevPropagator prop(h, 0.3);
    Eigen::VectorXcd psi(2);
    psi << 1.0, 0.0;
    prop.step(psi);
    CHECK(std::abs(psi[0] - Complex(std::cos(0.3), 0.0)) < 1e-14);
    CHECK(std::abs(psi[1] - Complex(0.0, -std::sin(0.3))) < 1e-14);
    CHECK(std::abs(psi.squaredNorm() - 1.0) < 1e-14);
}

TEST_CASE("decoupled emitter keeps its excitation") {
    LatticeConfig lattice;
    lattice.n_cells = 6;
    const auto sys = assemble_system(lattice, {small_emitter(3, 0.8, 0.0)});
    const auto traj =
        evolve(sys, excited_emitter_state(sys, 0), {0.25, 40});
    for (int j = 0; j <= 40; ++j)
        CHECK(traj.emitter_populations(j, 0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("isolated site + emitter is a textbook two-level rabi") {
    LatticeConfig lattice;
    lattice.n_cells = 4;
    lattice.inter_hop = 0.0; // decouple the lattice entirely
    lattice.intra_hop = 0.0;
    const double g = 0.25;
    const auto sys = assemble_system(lattice, {small_emitter(1, 0.0, g)});
    const auto traj = evolve(sys, excited_emitter_state(sys, 0), {0.1, 100});
    for (size_t j = 0; j < traj.times.size(); ++j) {
        const double expected = std::pow(std::cos(g * traj.times[j]), 2);
        CHECK(traj.emitter_populations(j, 0) ==
              doctest::Approx(expected).epsilon(1e-8));
    }
}

TEST_CASE("evolution conserves norm and energy") {
    LatticeConfig lattice;
    lattice.n_cells = 24;
    lattice.intra_hop = -2.4;
    const auto sys = assemble_system(lattice, {small_emitter(12, -1.9, 0.1)});
    EvolveOptions options;
    options.snapshot_times = {2.0};
    const auto traj = evolve(sys, excited_emitter_state(sys, 0), {0.5, 20}, options);

    CHECK(traj.times.size() == 21);
    CHECK(traj.max_norm_drift <= 1e-10);
    CHECK(traj.max_energy_drift <= 1e-10);
    REQUIRE(traj.snapshots.size() == 1);
    CHECK(traj.snapshots[0].time == doctest::Approx(2.0));
    CHECK(std::abs(traj.snapshots[0].amplitudes.squaredNorm() - 1.0) < 1e-10);
}

TEST_CASE("boundary condition is invisible before the front arrives") {
    LatticeConfig periodic;
    periodic.n_cells = 40;
    periodic.intra_hop = -2.4;
    LatticeConfig open = periodic;
    open.boundary = Boundary::Open;

    const auto run = [](const LatticeConfig& lattice) {
        const auto sys = assemble_system(lattice, {small_emitter(20, -1.9, 0.3)});
        return evolve(sys, excited_emitter_state(sys, 0), {0.25, 8});
    };
    const auto tp = run(periodic), to = run(open);
    for (int j = 0; j <= 8; ++j)
        CHECK(std::abs(tp.emitter_populations(j, 0) - to.emitter_populations(j, 0)) <
              1e-10);
}

TEST_CASE("norm-tolerance violations raise a structured error") {
    LatticeConfig lattice;
    lattice.n_cells = 6;
    const auto sys = assemble_system(lattice, {small_emitter(3, 0.0, 0.2)});
    EvolveOptions options;
    options.norm_tolerance = -1.0; // any drift, including zero, now violates
    CHECK_THROWS_AS(
        evolve(sys, excited_emitter_state(sys, 0), {0.5, 4}, options),
        ToleranceError);
}

TEST_CASE("field profile separates sublattice and channel weights") {
    LatticeConfig lattice;
    lattice.n_cells = 8;
    const auto sys = assemble_system(lattice, {small_emitter(0, 0.0, 0.1)});

    const auto site = site_excited_state(sys, {3, Sublattice::A});
    const auto p = field_profile(sys, site);
    CHECK(p.site_a_weight[3] == doctest::Approx(1.0));
    CHECK(p.site_b_weight[3] == doctest::Approx(0.0));
    CHECK(p.flat_weight[3] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(p.dispersive_weight[3] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(p.emitter_weight == doctest::Approx(0.0));
    double total = 0.0;
    for (int x = 0; x < 8; ++x) total += p.site_a_weight[x] + p.site_b_weight[x];
    CHECK(total == doctest::Approx(1.0));

    const auto excited = field_profile(sys, excited_emitter_state(sys, 0));
    CHECK(excited.emitter_weight == doctest::Approx(1.0));
    CHECK(excited.site_a_weight[0] == doctest::Approx(0.0));
}

TEST_CASE("population series splits excited/anchor/remainder consistently") {
    LatticeConfig lattice;
    lattice.n_cells = 12;
    const auto sys = assemble_system(lattice, {small_emitter(6, 0.0, 0.3)});
    EvolveOptions options;
    options.tracked_sites = {lattice.flat_index({6, Sublattice::A}),
                             lattice.flat_index({6, Sublattice::B})};
    const auto traj = evolve(sys, excited_emitter_state(sys, 0), {0.2, 25}, options);
    const auto series = populations(traj, sys, 6);
    REQUIRE(series.times.size() == traj.times.size());
    for (size_t j = 0; j < series.times.size(); ++j) {
        CHECK(series.excited[j] + series.anchor[j] + series.remainder[j] ==
              doctest::Approx(traj.norm_sq[j]).epsilon(1e-12));
        CHECK(series.anchor[j] >= 0.0);
        CHECK(series.remainder[j] >= -1e-12);
    }
    // untracked anchor cell is an error
    CHECK_THROWS(populations(traj, sys, 3));
}

TEST_CASE("two-emitter scenario places and excites the pair") {
    LatticeConfig lattice;
    lattice.n_cells = 10;
    const auto spec = small_emitter(0, -1.9, 0.1);
    const auto scenario = two_emitter_scenario(lattice, spec, spec, 7);
    CHECK(scenario.cell_a == 5);
    CHECK(scenario.cell_b == 2); // wraps around the ring
    CHECK(scenario.system.emitters[0].attach_a.cell == 5);
    CHECK(scenario.system.emitters[1].attach_a.cell == 2);
    CHECK(std::abs(scenario.initial.amplitudes[scenario.system.emitter_index(0)] -
                   Complex(1.0, 0.0)) == 0.0);
    CHECK(scenario.initial.amplitudes.squaredNorm() == doctest::Approx(1.0));
}
