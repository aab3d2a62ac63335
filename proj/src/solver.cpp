#include "cssrad/solver.hpp"

#include <cmath>
#include <numbers>

#include "cssrad/operators.hpp"

namespace cssrad {

namespace {
constexpr double two_pi = 2.0 * std::numbers::pi;

// V = A_0 + A_theta^2/r^2 - g |phi|^2 evaluated from the current density.
std::vector<double> potential(const RadialField& phi, double g) {
    const auto rho = density(phi);
    auto v = gauge::compute(*phi.grid, rho).a_combined;
    for (int i = 0; i < phi.size(); ++i)
        v[i] -= g * rho[i];
    return v;
}

void apply_phase(RadialField& phi, std::span<const double> v, double tau) {
    for (int i = 0; i < phi.size(); ++i)
        phi.values[i] *= std::polar(1.0, -tau * v[i]);
}

double boundary_mass_fraction(const RadialField& phi) {
    const auto& g = *phi.grid;
    const double cut = 0.9 * g.r_max();
    double inner = 0.0, outer = 0.0;
    for (int i = 0; i < g.size(); ++i) {
        const double m = g.weight(i) * std::norm(phi.values[i]);
        (g.node(i) > cut ? outer : inner) += m;
    }
    const double total = inner + outer;
    return total > 0.0 ? outer / total : 0.0;
}

} // namespace

void SolverConfig::validate() const {
    if (!(dt > 0.0))
        throw std::invalid_argument("SolverConfig: dt must be positive");
    if (!(t_end >= 0.0))
        throw std::invalid_argument("SolverConfig: t_end must be nonnegative");
    if (n < 16)
        throw std::invalid_argument("SolverConfig: n must be at least 16");
    if (record_every < 1)
        throw std::invalid_argument("SolverConfig: record_every must be positive");
}

double charge(const RadialField& phi) {
    const auto rho = density(phi);
    return two_pi * phi.grid->integrate(rho);
}

double energy(const RadialField& phi, double g) {
    const auto rho = density(phi);
    const auto at = gauge::a_theta(*phi.grid, rho);
    const auto dphi = radial_derivative(phi);
    std::vector<double> integrand(phi.size());
    for (int i = 0; i < phi.size(); ++i) {
        const double r = phi.grid->node(i);
        integrand[i] = std::norm(dphi.values[i]) + (at[i] * at[i]) / (r * r) * rho[i] -
                       0.5 * g * rho[i] * rho[i];
    }
    return 0.5 * two_pi * phi.grid->integrate(integrand);
}

RadialField css_step(const RadialField& phi, const FreePropagator& prop, double g) {
    const double dt = prop.dt();
    RadialField out = phi;
    apply_phase(out, potential(out, g), dt / 2.0);
    prop.step_in_place(out.values);
    apply_phase(out, potential(out, g), dt / 2.0);
    out.time = phi.time + dt;
    return out;
}

Trajectory run(const SolverConfig& cfg, const RadialField& phi0) {
    cfg.validate();
    if (!phi0.finite())
        throw std::invalid_argument("run: initial data contains non-finite samples");

    Trajectory traj;
    traj.grid = phi0.grid;
    traj.dt = cfg.dt;
    FreePropagator prop(phi0.grid, cfg.dt);

    const long nsteps = std::lround(cfg.t_end / cfg.dt);
    const double chg0 = charge(phi0);
    bool boundary_warned = false;

    auto record = [&](const RadialField& phi) {
        traj.times.push_back(phi.time);
        traj.fields.push_back(phi);
        traj.charge_series.push_back(charge(phi));
        traj.energy_series.push_back(energy(phi, cfg.g));
        if (!boundary_warned && chg0 > 0.0 &&
            boundary_mass_fraction(phi) > cfg.boundary_mass_tol) {
            traj.warnings.push_back(
                "boundary mass fraction exceeds tolerance at t = " + std::to_string(phi.time) +
                "; increase r_max");
            boundary_warned = true;
        }
    };

    RadialField phi = phi0;
    record(phi);
    double prev_charge = chg0;
    for (long s = 1; s <= nsteps; ++s) {
        phi = css_step(phi, prop, cfg.g);
        if (!phi.finite())
            throw InstabilityError(phi.time, s,
                                   "instability: non-finite field at t = " +
                                       std::to_string(phi.time));
        const double chg = charge(phi);
        if (prev_charge > 0.0 && chg > 1.01 * prev_charge)
            throw InstabilityError(phi.time, s,
                                   "instability: charge grew by more than 1% in one step at t = " +
                                       std::to_string(phi.time));
        prev_charge = chg;
        if (s % cfg.record_every == 0 || s == nsteps)
            record(phi);
    }
    return traj;
}

ScalingReport scaling_check(const std::function<cplx(double)>& data, double lambda,
                            const SolverConfig& cfg, bool rescale_dt) {
    if (!(lambda > 0.0))
        throw std::invalid_argument("scaling_check: lambda must be positive");
    cfg.validate();

    auto grid_base = make_grid(cfg.n, cfg.r_max);
    auto grid_scaled = make_grid(cfg.n, cfg.r_max / lambda);

    auto phi0 = sample_field(grid_base, data);
    auto psi0 = sample_field(grid_scaled, [&](double r) { return lambda * data(lambda * r); });

    SolverConfig cfg_scaled = cfg;
    cfg_scaled.r_max = cfg.r_max / lambda;
    cfg_scaled.t_end = cfg.t_end / (lambda * lambda);
    if (rescale_dt)
        cfg_scaled.dt = cfg.dt / (lambda * lambda);
    // Record only the endpoints; the comparison happens at the final time.
    SolverConfig cfg_base = cfg;
    cfg_base.record_every =
        static_cast<int>(std::max<long>(1, std::lround(cfg.t_end / cfg.dt)));
    cfg_scaled.record_every =
        static_cast<int>(std::max<long>(1, std::lround(cfg_scaled.t_end / cfg_scaled.dt)));

    auto traj_base = run(cfg_base, phi0);
    auto traj_scaled = run(cfg_scaled, psi0);

    const auto& phi_T = traj_base.fields.back();
    const auto& psi_T = traj_scaled.fields.back();

    // lambda * phi(T, lambda r'_i) = lambda * phi(T, r_i): node-exact.
    RadialField rescaled(grid_scaled, phi_T.values, psi_T.time);
    for (auto& v : rescaled.values)
        v *= lambda;

    ScalingReport rep;
    rep.distance = l2_distance(psi_T, rescaled);
    rep.charge_base = charge(phi0);
    rep.charge_scaled = charge(psi0);
    return rep;
}

} // namespace cssrad
