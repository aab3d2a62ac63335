// Crank-Nicolson propagator for the free radial Schroedinger flow.
#pragma once

#include "cssrad/operators.hpp"

namespace cssrad {

// One Crank-Nicolson step of i d_t f = -Lap f:
//   (I - i dt/2 L) f_new = (I + i dt/2 L) f_old.
// The Cayley structure makes each step an exact isometry of the discrete
// r dr inner product.  The implicit tridiagonal system is solved by a
// precomputed direct factorization (no iteration).  dt may be negative,
// which inverts the flow.
class FreePropagator {
public:
    FreePropagator(GridPtr grid, double dt);

    const GridPtr& grid() const { return grid_; }
    double dt() const { return dt_; }

    void step_in_place(std::span<cplx> v) const;
    RadialField step(const RadialField& f) const;
    RadialField advance(const RadialField& f, int nsteps) const;

private:
    GridPtr grid_;
    double dt_;
    RadialLaplacian lap_;
    // Bands of B = I + i theta L and the Thomas factorization of
    // M = I - i theta L, theta = dt/2.
    std::vector<cplx> b_sub_, b_diag_, b_sup_;
    std::vector<cplx> m_sub_, m_cprime_, m_inv_denom_;
    mutable std::vector<cplx> scratch_;
};

// Single Crank-Nicolson step convenience wrapper (dt = 0 returns f).
RadialField free_propagate(const RadialField& f, double dt);

} // namespace cssrad
