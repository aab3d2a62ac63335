#include "cssrad/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace cssrad {

RadialGrid::RadialGrid(int n, double r_max) : n_(n), r_max_(r_max) {
    if (n < 1)
        throw std::invalid_argument("RadialGrid: node count must be positive");
    if (!(r_max > 0.0) || !std::isfinite(r_max))
        throw std::invalid_argument("RadialGrid: r_max must be positive and finite");
    h_ = r_max / n;
    nodes_.resize(n);
    weights_.resize(n);
    for (int i = 0; i < n; ++i) {
        nodes_[i] = (i + 0.5) * h_;
        weights_[i] = nodes_[i] * h_;
    }
}

double RadialGrid::integrate(std::span<const double> f) const {
    if (static_cast<int>(f.size()) != n_)
        throw std::invalid_argument("integrate: sample count does not match grid");
    double acc = 0.0;
    for (int i = 0; i < n_; ++i)
        acc += weights_[i] * f[i];
    return acc;
}

bool RadialGrid::same_as(const RadialGrid& other) const {
    return n_ == other.n_ && r_max_ == other.r_max_;
}

GridPtr make_grid(int n, double r_max) {
    return std::make_shared<RadialGrid>(n, r_max);
}

std::vector<int> nested_indices(const RadialGrid& fine, const RadialGrid& coarse) {
    std::vector<int> idx(coarse.size());
    for (int j = 0; j < coarse.size(); ++j) {
        double pos = coarse.node(j) / fine.spacing() - 0.5;
        int i = static_cast<int>(std::lround(pos));
        if (i < 0 || i >= fine.size() || std::abs(pos - i) > 1e-9)
            throw std::invalid_argument("nested_indices: coarse node is not a fine-grid node");
        idx[j] = i;
    }
    return idx;
}

} // namespace cssrad
