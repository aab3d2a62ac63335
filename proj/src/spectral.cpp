#include "cssrad/spectral.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <lapacke.h>

#include "cssrad/operators.hpp"

namespace cssrad {

namespace {
constexpr double two_pi = 2.0 * std::numbers::pi;
}

SpectralTransform::SpectralTransform(GridPtr grid) : grid_(std::move(grid)) {
    const int n = grid_->size();
    const double h = grid_->spacing();
    RadialLaplacian lap(*grid_);

    // Symmetrize with D^{1/2} L D^{-1/2}, D = diag(w); the off-diagonal of
    // the symmetric form is e_{i+1} / (h sqrt(w_i w_{i+1})).
    std::vector<double> d(lap.diag);
    std::vector<double> e(n - 1);
    for (int i = 0; i + 1 < n; ++i)
        e[i] = grid_->edge(i + 1) / (h * std::sqrt(grid_->weight(i) * grid_->weight(i + 1)));

    std::vector<double> z(static_cast<size_t>(n) * n);
    int info = LAPACKE_dstev(LAPACK_COL_MAJOR, 'V', n, d.data(), e.data(), z.data(), n);
    if (info != 0)
        throw std::runtime_error("SpectralTransform: tridiagonal eigensolver failed");

    // Eigenvalues arrive ascending (most negative first); store frequencies
    // xi = sqrt(-lambda) ascending instead.
    xi_.resize(n);
    fwd_.resize(static_cast<size_t>(n) * n);
    inv_.resize(static_cast<size_t>(n) * n);
    for (int k = 0; k < n; ++k) {
        const int src = n - 1 - k;
        const double lambda = d[src];
        xi_[k] = std::sqrt(std::max(-lambda, 0.0));
        for (int i = 0; i < n; ++i) {
            const double u = z[static_cast<size_t>(src) * n + i] / std::sqrt(grid_->weight(i));
            fwd_[static_cast<size_t>(k) * n + i] = grid_->weight(i) * u;
            inv_[static_cast<size_t>(i) * n + k] = u;
        }
    }
}

std::vector<cplx> SpectralTransform::forward(std::span<const cplx> f) const {
    const int n = grid_->size();
    if (static_cast<int>(f.size()) != n)
        throw std::invalid_argument("SpectralTransform::forward: size mismatch");
    std::vector<cplx> c(n);
    for (int k = 0; k < n; ++k) {
        const double* row = &fwd_[static_cast<size_t>(k) * n];
        double re = 0.0, im = 0.0;
        for (int i = 0; i < n; ++i) {
            re += row[i] * f[i].real();
            im += row[i] * f[i].imag();
        }
        c[k] = cplx(re, im);
    }
    return c;
}

std::vector<cplx> SpectralTransform::inverse(std::span<const cplx> coeff) const {
    const int n = grid_->size();
    if (static_cast<int>(coeff.size()) != n)
        throw std::invalid_argument("SpectralTransform::inverse: size mismatch");
    std::vector<cplx> f(n);
    for (int i = 0; i < n; ++i) {
        const double* row = &inv_[static_cast<size_t>(i) * n];
        double re = 0.0, im = 0.0;
        for (int k = 0; k < n; ++k) {
            re += row[k] * coeff[k].real();
            im += row[k] * coeff[k].imag();
        }
        f[i] = cplx(re, im);
    }
    return f;
}

double SpectralTransform::sobolev_norm_from_coeff(std::span<const cplx> coeff, double s,
                                                  bool homogeneous) const {
    if (!(s >= 0.0 && s <= 2.0))
        throw std::invalid_argument("sobolev_norm: order s must lie in [0, 2]");
    double acc = 0.0;
    for (size_t k = 0; k < coeff.size(); ++k) {
        const double xi2 = xi_[k] * xi_[k];
        const double mult = homogeneous ? std::pow(xi2, s) : std::pow(1.0 + xi2, s);
        acc += mult * std::norm(coeff[k]);
    }
    return std::sqrt(two_pi * acc);
}

double SpectralTransform::sobolev_norm(const RadialField& f, double s, bool homogeneous) const {
    if (!f.grid || !f.grid->same_as(*grid_))
        throw std::invalid_argument("sobolev_norm: field grid does not match transform");
    return sobolev_norm_from_coeff(forward(f.values), s, homogeneous);
}

double SpectralTransform::l2_norm_spectral(std::span<const cplx> coeff) const {
    double acc = 0.0;
    for (const auto& c : coeff)
        acc += std::norm(c);
    return std::sqrt(two_pi * acc);
}

} // namespace cssrad
