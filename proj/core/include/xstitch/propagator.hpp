// propagator.hpp — fixed-step Chebyshev approximation of exp(-i H dt) for
// sparse Hermitian H.  Spectral bounds come from Gershgorin discs, so the
// scaled operator is guaranteed inside [-1, 1] and the Bessel-weighted series
// converges superexponentially; each step is unitary to truncation accuracy.

#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace xstitch {

class ChebyshevPropagator {
public:
    // tolerance bounds the truncation error of a single step (coefficient tail).
    ChebyshevPropagator(Eigen::SparseMatrix<std::complex<double>> hamiltonian,
                        double dt, double tolerance = 1e-15);

    // psi <- exp(-i H dt) psi
    void step(Eigen::VectorXcd& psi);

    // <psi|H|psi> (real part; exact for Hermitian H and a fresh matvec)
    double energy(const Eigen::VectorXcd& psi) const;

    int term_count() const { return static_cast<int>(coefficients_.size()); }
    double spectral_center() const { return center_; }
    double spectral_half_width() const { return half_width_; }
    double dt() const { return dt_; }

private:
    Eigen::SparseMatrix<std::complex<double>> h_;
    double dt_;
    double center_ = 0.0;
    double half_width_ = 0.0;
    std::complex<double> phase_ = 1.0;            // e^{-i center dt}
    std::vector<std::complex<double>> coefficients_; // (2 - delta_m0)(-i)^m J_m(half_width dt)
    Eigen::VectorXcd t_prev_, t_curr_, t_next_, accum_; // recurrence scratch
};

} // namespace xstitch
