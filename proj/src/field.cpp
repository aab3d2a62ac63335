#include "cssrad/field.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace cssrad {

namespace {
constexpr double two_pi = 2.0 * std::numbers::pi;

void require_same_grid(const RadialField& a, const RadialField& b, const char* what) {
    if (!a.grid || !b.grid || !a.grid->same_as(*b.grid))
        throw std::invalid_argument(std::string(what) + ": grid mismatch");
}
} // namespace

RadialField RadialField::zero(GridPtr g) {
    return RadialField(std::move(g), std::vector<cplx>(g ? g->size() : 0, cplx(0.0)));
}

bool RadialField::finite() const {
    for (const auto& v : values)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            return false;
    return true;
}

std::vector<double> density(const RadialField& f) {
    std::vector<double> rho(f.values.size());
    for (size_t i = 0; i < rho.size(); ++i)
        rho[i] = std::norm(f.values[i]);
    return rho;
}

double l2_norm(const RadialField& f) {
    double acc = 0.0;
    for (int i = 0; i < f.size(); ++i)
        acc += f.grid->weight(i) * std::norm(f.values[i]);
    return std::sqrt(two_pi * acc);
}

double lp_norm(const RadialField& f, double p) {
    if (!(p >= 1.0))
        throw std::invalid_argument("lp_norm: p must be >= 1");
    if (std::isinf(p))
        return sup_norm(f);
    if (p == 2.0)
        return l2_norm(f);
    double acc = 0.0;
    for (int i = 0; i < f.size(); ++i)
        acc += f.grid->weight(i) * std::pow(std::abs(f.values[i]), p);
    return std::pow(two_pi * acc, 1.0 / p);
}

double sup_norm(const RadialField& f) {
    double m = 0.0;
    for (const auto& v : f.values)
        m = std::max(m, std::abs(v));
    return m;
}

double l2_distance(const RadialField& a, const RadialField& b) {
    require_same_grid(a, b, "l2_distance");
    double acc = 0.0;
    for (int i = 0; i < a.size(); ++i)
        acc += a.grid->weight(i) * std::norm(a.values[i] - b.values[i]);
    return std::sqrt(two_pi * acc);
}

RadialField operator*(const RadialField& a, const RadialField& b) {
    require_same_grid(a, b, "field product");
    RadialField out = a;
    for (int i = 0; i < a.size(); ++i)
        out.values[i] *= b.values[i];
    return out;
}

RadialField operator-(const RadialField& a, const RadialField& b) {
    require_same_grid(a, b, "field difference");
    RadialField out = a;
    for (int i = 0; i < a.size(); ++i)
        out.values[i] -= b.values[i];
    return out;
}

RadialField scaled(const RadialField& a, cplx factor) {
    RadialField out = a;
    for (auto& v : out.values)
        v *= factor;
    return out;
}

} // namespace cssrad
