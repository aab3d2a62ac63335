// Self-generated gauge potentials of the radial Chern-Simons-Schroedinger
// system, computed as quadratures of the density.
#pragma once

#include <span>
#include <vector>

#include "cssrad/grid.hpp"

namespace cssrad {
namespace gauge {

// A_theta(r) = -1/2 * integral_0^r rho(s) s ds.
//
// The density is reconstructed as piecewise constant on the grid cells and
// the integral is evaluated exactly on that reconstruction, so densities
// that are genuinely cell-constant (indicator profiles aligned with cell
// edges) reproduce their closed forms to roundoff, and smooth densities are
// integrated to second order.
std::vector<double> a_theta(const RadialGrid& g, std::span<const double> rho);

// A_0 via the bilinear form A_0^{(rho1,rho2)}(r) = -int_r^rmax A_theta^{(rho1)}(s) rho2(s) ds/s,
// with the same piecewise-constant reconstruction integrated in closed form
// per cell (A_theta is piecewise quadratic, so each cell contributes a log
// and a quadratic term).  Vanishes at the outer boundary.
std::vector<double> a_zero(const RadialGrid& g, std::span<const double> rho1,
                           std::span<const double> rho2);

// Independent route for the diagonal case:
// A_0(r) = 1/2 int_r^rmax rho(s) [int_0^s rho(u) u du] ds/s, accumulated
// directly without going through a_theta.  Kept as a separate code path so
// the two evaluations can be cross-checked.
std::vector<double> a_zero_nested(const RadialGrid& g, std::span<const double> rho);

// a_{rho1,rho2}(r) = A_0^{(rho1,rho2)}(r) + A_theta^{(rho1)}(r) A_theta^{(rho2)}(r) / r^2.
std::vector<double> a_combined(const RadialGrid& g, std::span<const double> rho1,
                               std::span<const double> rho2);

// The three potentials of the diagonal case rho1 = rho2 = rho bundled.
struct GaugeFields {
    std::vector<double> a_theta;
    std::vector<double> a_zero;
    std::vector<double> a_combined;
};

GaugeFields compute(const RadialGrid& g, std::span<const double> rho);

} // namespace gauge
} // namespace cssrad
