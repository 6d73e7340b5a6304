#include "xstitch/propagator.hpp"

#include <cmath>
#include <stdexcept>

namespace xstitch {

namespace {
constexpr std::complex<double> kI{0.0, 1.0};

std::complex<double> minus_i_pow(int m) {
    switch (m & 3) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, -1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, 1.0};
    }
}
} // namespace

ChebyshevPropagator::ChebyshevPropagator(
    Eigen::SparseMatrix<std::complex<double>> hamiltonian, double dt,
    double tolerance)
    : h_(std::move(hamiltonian)), dt_(dt) {
    if (h_.rows() != h_.cols() || h_.rows() == 0)
        throw std::invalid_argument("propagator: Hamiltonian must be square and nonempty");
    if (!(dt > 0.0) || !std::isfinite(dt))
        throw std::invalid_argument("propagator: step size must be positive and finite");
    h_.makeCompressed();

    // Gershgorin bounds: every eigenvalue lies in [min(c-r), max(c+r)].
    const int n = static_cast<int>(h_.rows());
    std::vector<double> diag(n, 0.0), radius(n, 0.0);
    for (int outer = 0; outer < h_.outerSize(); ++outer) {
        for (Eigen::SparseMatrix<std::complex<double>>::InnerIterator it(h_, outer);
             it; ++it) {
            if (it.row() == it.col())
                diag[it.row()] = it.value().real();
            else
                radius[it.row()] += std::abs(it.value());
        }
    }
    double lo = diag[0] - radius[0], hi = diag[0] + radius[0];
    for (int i = 1; i < n; ++i) {
        lo = std::min(lo, diag[i] - radius[i]);
        hi = std::max(hi, diag[i] + radius[i]);
    }
    center_ = 0.5 * (hi + lo);
    half_width_ = 0.5 * (hi - lo) * (1.0 + 1e-12);
    phase_ = std::exp(-kI * (center_ * dt_));

    // Bessel-weighted expansion of e^{-i z X}, X scaled to [-1, 1]:
    // coefficients (2 - delta_m0)(-i)^m J_m(z); past m ~ z they decay faster
    // than exponentially, so truncate once below tolerance.
    const double z = half_width_ * dt_;
    const int hard_cap = 2 * static_cast<int>(z) + 200;
    for (int m = 0; m <= hard_cap; ++m) {
        const double jm = std::cyl_bessel_j(static_cast<double>(m), z);
        coefficients_.push_back((m == 0 ? 1.0 : 2.0) * minus_i_pow(m) * jm);
        if (m > z && std::abs(jm) < tolerance)
            break;
    }

    t_prev_.resize(n);
    t_curr_.resize(n);
    t_next_.resize(n);
    accum_.resize(n);
}

void ChebyshevPropagator::step(Eigen::VectorXcd& psi) {
    if (psi.size() != h_.rows())
        throw std::invalid_argument("propagator: state dimension mismatch");
    if (half_width_ == 0.0) { // H is a multiple of the identity
        psi *= phase_;
        return;
    }
    const double inv_w = 1.0 / half_width_;

    // Clenshaw-style forward recurrence on T_m(H_scaled) psi.
    t_prev_ = psi;
    accum_ = coefficients_[0] * t_prev_;
    if (coefficients_.size() > 1) {
        t_curr_.noalias() = h_ * psi;
        t_curr_ = inv_w * (t_curr_ - center_ * psi);
        accum_ += coefficients_[1] * t_curr_;
    }
    for (size_t m = 2; m < coefficients_.size(); ++m) {
        t_next_.noalias() = h_ * t_curr_;
        t_next_ = 2.0 * inv_w * (t_next_ - center_ * t_curr_) - t_prev_;
        accum_ += coefficients_[m] * t_next_;
        t_prev_.swap(t_curr_);
        t_curr_.swap(t_next_);
    }
    psi = phase_ * accum_;
}

double ChebyshevPropagator::energy(const Eigen::VectorXcd& psi) const {
    return psi.dot(h_ * psi).real();
}

} // namespace xstitch
