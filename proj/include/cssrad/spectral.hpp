// Order-zero radial spectral transform and fractional Sobolev norms.
#pragma once

#include "cssrad/field.hpp"

namespace cssrad {

// Expansion in the discrete Bessel basis: the w-orthonormal eigenvectors of
// the grid's radial Laplacian.  The basis vectors are quadrature samples of
// (normalized) J0(xi_k r) up to the discretization order, and the eigenvalue
// frequencies xi_k track the Dirichlet Bessel frequencies of the truncated
// disk.  Expanding in the operator's own eigenbasis makes the round trip,
// the Plancherel identity, and the invariance of every H^s norm under the
// Crank-Nicolson flow exact to roundoff, which is what the tests pin down.
class SpectralTransform {
public:
    explicit SpectralTransform(GridPtr grid);

    const GridPtr& grid() const { return grid_; }
    const std::vector<double>& frequency_nodes() const { return xi_; }

    // Coefficients of f in the w-orthonormal eigenbasis.
    std::vector<cplx> forward(std::span<const cplx> f) const;
    std::vector<cplx> inverse(std::span<const cplx> coeff) const;

    // || |xi|^s f ||_{L^2} from the spectral side (homogeneous), or with the
    // multiplier (1 + xi^2)^{s/2} (inhomogeneous).  Requires 0 <= s <= 2,
    // the range validated by the transform's accuracy tests.
    double sobolev_norm(const RadialField& f, double s, bool homogeneous = true) const;
    double sobolev_norm_from_coeff(std::span<const cplx> coeff, double s,
                                   bool homogeneous = true) const;

    // L^2 norm evaluated on the frequency side (Plancherel's other route).
    double l2_norm_spectral(std::span<const cplx> coeff) const;

private:
    GridPtr grid_;
    std::vector<double> xi_;
    std::vector<double> fwd_; // row k: fwd_[k*n + i] = w_i U_{ik}
    std::vector<double> inv_; // row i: inv_[i*n + k] = U_{ik}
};

} // namespace cssrad
