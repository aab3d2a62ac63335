#include "cssrad/gauge.hpp"

#include <cmath>
#include <stdexcept>

namespace cssrad {
namespace gauge {

namespace {

void check(const RadialGrid& g, std::span<const double> rho, const char* what) {
    if (static_cast<int>(rho.size()) != g.size())
        throw std::invalid_argument(std::string(what) + ": density size does not match grid");
}

} // namespace

std::vector<double> a_theta(const RadialGrid& g, std::span<const double> rho) {
    check(g, rho, "a_theta");
    const int n = g.size();
    std::vector<double> out(n);
    double edge_mass = 0.0; // integral of rho~ u du up to the current left edge
    for (int i = 0; i < n; ++i) {
        const double el = g.edge(i);
        const double r = g.node(i);
        const double half_cell = 0.5 * (r * r - el * el);
        out[i] = -0.5 * (edge_mass + rho[i] * half_cell);
        edge_mass += rho[i] * g.weight(i);
    }
    return out;
}

std::vector<double> a_zero(const RadialGrid& g, std::span<const double> rho1,
                           std::span<const double> rho2) {
    check(g, rho1, "a_zero");
    check(g, rho2, "a_zero");
    const int n = g.size();

    // Left-edge masses of rho1: M_j = int_0^{e_j} rho1~ u du.
    std::vector<double> edge_mass(n);
    double acc = 0.0;
    for (int j = 0; j < n; ++j) {
        edge_mass[j] = acc;
        acc += rho1[j] * g.weight(j);
    }

    // Within cell j, A_theta(s) = -1/2 [M_j + rho1_j (s^2 - e_j^2) / 2], so
    //   -A_theta(s) rho2_j / s = c_log / s + c_lin s
    // with c_log = rho2_j (M_j - rho1_j e_j^2 / 2) / 2 and c_lin = rho2_j rho1_j / 4,
    // integrated in closed form over [a, b].
    auto segment = [&](int j, double a, double b) {
        const double ej = g.edge(j);
        const double c_log = 0.5 * rho2[j] * (edge_mass[j] - 0.5 * rho1[j] * ej * ej);
        const double c_lin = 0.25 * rho2[j] * rho1[j];
        return c_log * std::log(b / a) + c_lin * (b * b - a * a);
    };

    std::vector<double> out(n);
    double tail = 0.0; // integral from the right edge of the current cell to r_max
    for (int i = n - 1; i >= 0; --i) {
        out[i] = tail + segment(i, g.node(i), g.edge(i + 1));
        if (i > 0)
            tail += segment(i, g.edge(i), g.edge(i + 1));
    }
    return out;
}

std::vector<double> a_zero_nested(const RadialGrid& g, std::span<const double> rho) {
    check(g, rho, "a_zero_nested");
    const int n = g.size();

    std::vector<double> edge_mass(n);
    double acc = 0.0;
    for (int j = 0; j < n; ++j) {
        edge_mass[j] = acc;
        acc += rho[j] * g.weight(j);
    }

    // 1/2 rho_j W(s) / s with W(s) = M_j + rho_j (s^2 - e_j^2)/2 on cell j.
    auto segment = [&](int j, double a, double b) {
        const double ej = g.edge(j);
        const double c_log = 0.5 * rho[j] * (edge_mass[j] - 0.5 * rho[j] * ej * ej);
        const double c_lin = 0.25 * rho[j] * rho[j];
        return c_log * std::log(b / a) + c_lin * (b * b - a * a);
    };

    std::vector<double> out(n);
    double tail = 0.0;
    for (int i = n - 1; i >= 0; --i) {
        out[i] = tail + segment(i, g.node(i), g.edge(i + 1));
        if (i > 0)
            tail += segment(i, g.edge(i), g.edge(i + 1));
    }
    return out;
}

std::vector<double> a_combined(const RadialGrid& g, std::span<const double> rho1,
                               std::span<const double> rho2) {
    auto at1 = a_theta(g, rho1);
    auto at2 = (rho1.data() == rho2.data()) ? at1 : a_theta(g, rho2);
    auto out = a_zero(g, rho1, rho2);
    for (int i = 0; i < g.size(); ++i) {
        const double r = g.node(i);
        out[i] += at1[i] * at2[i] / (r * r);
    }
    return out;
}

GaugeFields compute(const RadialGrid& g, std::span<const double> rho) {
    GaugeFields f;
    f.a_theta = a_theta(g, rho);
    f.a_zero = a_zero(g, rho, rho);
    f.a_combined = f.a_zero;
    for (int i = 0; i < g.size(); ++i) {
        const double r = g.node(i);
        f.a_combined[i] += f.a_theta[i] * f.a_theta[i] / (r * r);
    }
    return f;
}

} // namespace gauge
} // namespace cssrad
