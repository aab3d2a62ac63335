// Finite-difference operators on radial grids.
#pragma once

#include <span>

#include "cssrad/field.hpp"

namespace cssrad {

// d/dr by second-order centered differences, one-sided second order at the
// ends; exact for affine functions of r.
RadialField radial_derivative(const RadialField& f);
std::vector<double> radial_derivative(const RadialGrid& g, std::span<const double> f);

// Conservative discretization of the radial Laplacian d_rr + (1/r) d_r in
// flux form: (L f)_i = [e_{i+1} (f_{i+1}-f_i) - e_i (f_i-f_{i-1})] / (h w_i)
// with cell edges e_i = i h.  The e_0 = 0 edge enforces the Neumann
// regularity condition at the axis; the outer closure is homogeneous
// Dirichlet at r_max, imposed at the boundary edge half a cell beyond the
// last node.  Self-adjoint and negative definite in the w-weighted inner
// product, which is what makes Crank-Nicolson exactly unitary.
struct RadialLaplacian {
    explicit RadialLaplacian(const RadialGrid& g);

    std::vector<double> sub;  // sub[i]  multiplies f_{i-1}, sub[0] unused
    std::vector<double> diag;
    std::vector<double> sup;  // sup[i]  multiplies f_{i+1}, sup[n-1] unused

    void apply(std::span<const cplx> in, std::span<cplx> out) const;
};

} // namespace cssrad
