// Complex radial fields and the L^p norms of the 2D radial calculus.
#pragma once

#include <complex>
#include <span>
#include <vector>

#include "cssrad/grid.hpp"

namespace cssrad {

using cplx = std::complex<double>;

// Samples of a radial function at one instant.  All planar integrals carry
// the angular factor 2*pi, i.e. integral over R^2 of f = 2*pi * integral of
// f(r) r dr.
struct RadialField {
    GridPtr grid;
    std::vector<cplx> values;
    double time = 0.0;

    RadialField() = default;
    RadialField(GridPtr g, std::vector<cplx> v, double t = 0.0)
        : grid(std::move(g)), values(std::move(v)), time(t) {}

    static RadialField zero(GridPtr g);

    int size() const { return static_cast<int>(values.size()); }
    bool finite() const;
};

// Sample an analytic radial profile on a grid.
template <class F>
RadialField sample_field(GridPtr g, F&& f, double time = 0.0) {
    std::vector<cplx> v(g->size());
    for (int i = 0; i < g->size(); ++i)
        v[i] = f(g->node(i));
    return RadialField(std::move(g), std::move(v), time);
}

std::vector<double> density(const RadialField& f); // |f|^2 at the nodes

double l2_norm(const RadialField& f);
// L^p with the R^2 convention: (2*pi * integral |f|^p r dr)^(1/p).
double lp_norm(const RadialField& f, double p);
double sup_norm(const RadialField& f);
double l2_distance(const RadialField& a, const RadialField& b);

// Pointwise helpers; grids must match.
RadialField operator*(const RadialField& a, const RadialField& b);
RadialField operator-(const RadialField& a, const RadialField& b);
RadialField scaled(const RadialField& a, cplx factor);

} // namespace cssrad
