#include "cssrad/operators.hpp"

#include <stdexcept>

namespace cssrad {

std::vector<double> radial_derivative(const RadialGrid& g, std::span<const double> f) {
    const int n = g.size();
    if (n < 3)
        throw std::invalid_argument("radial_derivative: need at least 3 nodes");
    const double h = g.spacing();
    std::vector<double> d(n);
    d[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
    for (int i = 1; i < n - 1; ++i)
        d[i] = (f[i + 1] - f[i - 1]) / (2.0 * h);
    d[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * h);
    return d;
}

RadialField radial_derivative(const RadialField& f) {
    const int n = f.size();
    if (n < 3)
        throw std::invalid_argument("radial_derivative: need at least 3 nodes");
    const double h = f.grid->spacing();
    RadialField d = f;
    d.values[0] = (-3.0 * f.values[0] + 4.0 * f.values[1] - f.values[2]) / (2.0 * h);
    for (int i = 1; i < n - 1; ++i)
        d.values[i] = (f.values[i + 1] - f.values[i - 1]) / (2.0 * h);
    d.values[n - 1] =
        (3.0 * f.values[n - 1] - 4.0 * f.values[n - 2] + f.values[n - 3]) / (2.0 * h);
    return d;
}

RadialLaplacian::RadialLaplacian(const RadialGrid& g) {
    const int n = g.size();
    const double h = g.spacing();
    sub.assign(n, 0.0);
    diag.assign(n, 0.0);
    sup.assign(n, 0.0);
    for (int i = 0; i < n; ++i) {
        const double wi = g.weight(i);
        const double left = (i > 0) ? g.edge(i) / (h * wi) : 0.0;
        double right = g.edge(i + 1) / (h * wi);
        if (i == n - 1)
            right *= 2.0; // Dirichlet value at r_max sits half a cell away
        if (i > 0)
            sub[i] = left;
        if (i < n - 1)
            sup[i] = g.edge(i + 1) / (h * wi);
        diag[i] = -(left + right);
    }
}

void RadialLaplacian::apply(std::span<const cplx> in, std::span<cplx> out) const {
    const int n = static_cast<int>(diag.size());
    for (int i = 0; i < n; ++i) {
        cplx acc = diag[i] * in[i];
        if (i > 0)
            acc += sub[i] * in[i - 1];
        if (i < n - 1)
            acc += sup[i] * in[i + 1];
        out[i] = acc;
    }
}

} // namespace cssrad
