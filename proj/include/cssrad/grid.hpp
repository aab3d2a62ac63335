// Cell-centered radial grids carrying the r dr measure.
#pragma once

#include <memory>
#include <span>
#include <vector>

namespace cssrad {

// Uniform cell-centered discretization of (0, r_max]: nodes r_i = (i - 1/2) h,
// h = r_max / n.  The axis r = 0 is never a node; regularity there is imposed
// through the Laplacian stencil.  Quadrature weights w_i = r_i h are the exact
// masses of the cells under the measure r dr, so sum(w) == r_max^2 / 2 exactly.
class RadialGrid {
public:
    RadialGrid(int n, double r_max);

    int size() const { return n_; }
    double r_max() const { return r_max_; }
    double spacing() const { return h_; }

    const std::vector<double>& nodes() const { return nodes_; }
    const std::vector<double>& weights() const { return weights_; }

    double node(int i) const { return nodes_[i]; }
    double weight(int i) const { return weights_[i]; }
    // Cell edge i in [0, n]; edge(0) = 0, edge(n) = r_max.
    double edge(int i) const { return h_ * i; }

    // Quadrature for integral f(r) r dr over (0, r_max].
    double integrate(std::span<const double> f) const;

    bool same_as(const RadialGrid& other) const;

private:
    int n_;
    double r_max_;
    double h_;
    std::vector<double> nodes_;
    std::vector<double> weights_;
};

using GridPtr = std::shared_ptr<const RadialGrid>;

GridPtr make_grid(int n, double r_max);

// Index map of coarse nodes into a finer grid whose nodes contain them
// exactly; throws if the grids do not nest.
std::vector<int> nested_indices(const RadialGrid& fine, const RadialGrid& coarse);

} // namespace cssrad
