// Discretized k-particle marginal kernels, the collision operator, and
// residual checks of the infinite radial hierarchy on factorized states.
#pragma once

#include "cssrad/solver.hpp"

namespace cssrad {

// Dense complex tensor gamma(i_1..i_k ; i'_1..i'_k) over the nodes of one
// grid, k <= 3.  Row-major with the unprimed block leading.  Grids stay
// coarse for k >= 2: the footprint grows like n^(2k).
class DensityKernel {
public:
    DensityKernel(int k, GridPtr grid);

    // gamma^(k) = prod_j phi(r_j) conj(phi)(r'_j)
    static DensityKernel factorized(const RadialField& phi, int k);

    int particles() const { return k_; }
    int n() const { return n_; }
    const GridPtr& grid() const { return grid_; }

    std::vector<cplx>& data() { return v_; }
    const std::vector<cplx>& data() const { return v_; }

    size_t flat_index(std::span<const int> unprimed, std::span<const int> primed) const;
    cplx at(std::span<const int> unprimed, std::span<const int> primed) const;

    void add_scaled(const DensityKernel& other, cplx factor);

private:
    int k_;
    int n_;
    GridPtr grid_;
    std::vector<cplx> v_;
};

// Tr gamma = (2 pi)^k sum over the diagonal with quadrature weights.
cplx trace(const DensityKernel& gamma);

// gamma^(k) = Tr_{k+1} gamma^(k+1): contracts the last unprimed/primed pair
// against the weights (with the 2 pi angular factor).  Requires k >= 2 input.
DensityKernel partial_trace(const DensityKernel& gamma);

// B_{j,k+1} gamma^(k+1) = Tr_{k+1}[ delta(x_j - x_{k+1}), gamma^(k+1) ]:
// diagonal re-insertion of the last variable pair at r_j (plus term) and at
// r'_j (minus term).  j is 1-based, j <= k for a (k+1)-particle input.
DensityKernel collision(const DensityKernel& gamma_kplus1, int j);

// Collision of the factorized (k+1)-particle kernel built from phi, without
// materializing the n^(2k+2) tensor: for factorized input the definition
// collapses to gamma^(k) * (|phi(r_j)|^2 - |phi(r'_j)|^2).
DensityKernel collision_factorized(const RadialField& phi, int k, int j);

double kernel_l2_norm(const DensityKernel& gamma);
// max |gamma(x;x') - conj(gamma(x';x))| over all entries
double hermitian_defect(const DensityKernel& gamma);
// max deviation under simultaneous transposition of particle pairs
double permutation_defect(const DensityKernel& gamma);

// sum_j [Lap_{x_j}, gamma] with the grid's radial Laplacian on each index.
DensityKernel laplacian_commutator(const DensityKernel& gamma, const RadialLaplacian& lap);
// sum_j [a(r_j), gamma] for a sampled potential a.
DensityKernel potential_commutator(const DensityKernel& gamma, std::span<const double> a);

struct ResidualReport {
    std::vector<double> times;     // interior snapshot times
    std::vector<double> residuals; // kernel L^2 norm of LHS - RHS
    double max_residual = 0.0;
};

// Defect of the hierarchy equation
//   i d_t gamma^(k) + sum [Lap_j, gamma^(k)]
//     = sum [a(r_j), gamma^(k)] - g sum B_{j,k+1} gamma^(k+1)
// evaluated on factorized kernels built from trajectory snapshots restricted
// to a coarse grid nested in the solver grid.  Time derivative by centered
// differences; the potential a is computed on the solver grid and sampled at
// the coarse nodes.  Second-order small when phi solves the one-particle
// system.  k = 1 contracts a materialized two-particle kernel through
// collision(); k = 2 uses collision_factorized, since the dense
// three-particle tensor is out of memory reach at useful resolutions.
ResidualReport hierarchy_residual(const Trajectory& traj, int k, double g,
                                  const GridPtr& coarse);

struct DuhamelReport {
    double time = 0.0;
    double defect = 0.0;       // kernel L^2 distance to the mild-form RHS
    double target_norm = 0.0;  // kernel L^2 norm of gamma^(1)(t)
};

// Mild-form check at k = 1 on the solver grid:
//   gamma(t) vs U(t) gamma(0) - i int_0^t U(t-s) ([a, gamma](s) - g B gamma^(2)(s)) ds
// with U realized by Crank-Nicolson steps at the trajectory's own time step
// on both kernel indices and trapezoid quadrature in s over the snapshots.
DuhamelReport duhamel_check(const Trajectory& traj, double g);

} // namespace cssrad
