#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "cssrad/solver.hpp"

using namespace cssrad;

namespace {
constexpr double pi = std::numbers::pi;

RadialField gaussian(const GridPtr& g, double amp = 1.0) {
    return sample_field(g, [amp](double r) { return cplx(amp * std::exp(-r * r / 2.0), 0.0); });
}
} // namespace

TEST_CASE("charge: zero, gaussian, exact scaling invariance") {
    auto g = make_grid(1024, 16.0);
    CHECK(charge(RadialField::zero(g)) == 0.0);
    CHECK(charge(gaussian(g)) == doctest::Approx(pi).epsilon(1e-10));

    // charge(lambda f(lambda .)) on the 1/lambda grid equals charge(f):
    // the quadrature transforms exactly, not just to O(h^2)
    const double lambda = 2.0;
    auto gs = make_grid(1024, 16.0 / lambda);
    auto scaled = sample_field(
        gs, [&](double r) { return cplx(lambda * std::exp(-lambda * lambda * r * r / 2.0), 0.0); });
    CHECK(std::abs(charge(scaled) - charge(gaussian(g))) / pi <= 1e-13);
}

TEST_CASE("energy: zero field and the linear-limit gradient term") {
    auto g = make_grid(1024, 16.0);
    CHECK(energy(RadialField::zero(g), -1.0) == 0.0);

    // with amplitude eps: E = eps^2/2 ||grad phi||^2 + O(eps^4), and
    // ||grad e^{-r^2/2}||^2 = pi
    const double eps = 1e-5;
    const double e = energy(gaussian(g, eps), 0.0);
    CHECK(e == doctest::Approx(0.5 * pi * eps * eps).epsilon(1e-4));
}

TEST_CASE("step: zero data stays zero; tiny data matches free propagation") {
    auto g = make_grid(512, 16.0);
    FreePropagator prop(g, 1e-3);
    auto z = css_step(RadialField::zero(g), prop, -1.0);
    CHECK(l2_norm(z) == 0.0);

    const double eps = 1e-8;
    auto f = gaussian(g, eps);
    auto nonlinear = css_step(f, prop, 0.0);
    auto linear = prop.step(f);
    CHECK(l2_distance(nonlinear, linear) / l2_norm(linear) <= 1e-14);
}

TEST_CASE("run bookkeeping: t_end = 0, snapshot count, determinism") {
    auto g = make_grid(64, 8.0);
    SolverConfig cfg;
    cfg.n = 64;
    cfg.r_max = 8.0;
    cfg.dt = 1e-3;
    cfg.t_end = 0.0;
    auto traj0 = run(cfg, gaussian(g));
    CHECK(traj0.snapshots() == 1);

    cfg.t_end = 10e-3;
    cfg.record_every = 1;
    auto traj = run(cfg, gaussian(g));
    CHECK(traj.snapshots() == 11);
    CHECK(traj.times.front() == 0.0);
    CHECK(traj.times.back() == doctest::Approx(10e-3));

    auto traj2 = run(cfg, gaussian(g));
    REQUIRE(traj2.snapshots() == traj.snapshots());
    for (int m = 0; m < traj.snapshots(); ++m)
        for (int i = 0; i < g->size(); ++i)
            CHECK(traj.fields[m].values[i] == traj2.fields[m].values[i]);
}

TEST_CASE("conservation over the unit time horizon") {
    SolverConfig cfg;
    cfg.n = 512;
    cfg.r_max = 16.0;
    cfg.dt = 1e-3;
    cfg.t_end = 1.0;
    cfg.g = -1.0;
    cfg.record_every = 50;
    auto g = make_grid(cfg.n, cfg.r_max);
    auto traj = run(cfg, gaussian(g));

    const double chg0 = traj.charge_series.front();
    const double en0 = traj.energy_series.front();
    for (int m = 0; m < traj.snapshots(); ++m) {
        CHECK(std::abs(traj.charge_series[m] - chg0) / chg0 <= 1e-8);
        CHECK(std::abs(traj.energy_series[m] - en0) / std::abs(en0) <= 1e-3);
    }
}

TEST_CASE("global phase invariance of the modulus") {
    SolverConfig cfg;
    cfg.n = 256;
    cfg.r_max = 12.0;
    cfg.dt = 2e-3;
    cfg.t_end = 0.1;
    cfg.record_every = 50;
    auto g = make_grid(cfg.n, cfg.r_max);
    auto a = run(cfg, gaussian(g));
    auto rotated = gaussian(g);
    for (auto& v : rotated.values)
        v *= std::polar(1.0, 0.73);
    auto b = run(cfg, rotated);
    for (int i = 0; i < g->size(); ++i)
        CHECK(std::abs(std::abs(a.fields.back().values[i]) -
                       std::abs(b.fields.back().values[i])) <= 1e-12);
}

TEST_CASE("nonlinear self-convergence is second order") {
    // no closed form: compare successive refinements at t = 0.25
    std::vector<RadialField> finals;
    std::vector<GridPtr> grids;
    for (int lev = 0; lev < 3; ++lev) {
        SolverConfig cfg;
        cfg.n = 128 << lev;
        cfg.r_max = 16.0;
        cfg.dt = 4e-3 / (1 << lev);
        cfg.t_end = 0.25;
        cfg.g = -1.0;
        cfg.record_every = 1 << 20;
        auto g = make_grid(cfg.n, cfg.r_max);
        finals.push_back(run(cfg, gaussian(g)).fields.back());
        grids.push_back(g);
    }
    auto restrict_avg = [](const RadialField& fine, const GridPtr& coarse) {
        std::vector<cplx> v(coarse->size());
        for (int j = 0; j < coarse->size(); ++j)
            v[j] = 0.5 * (fine.values[2 * j] + fine.values[2 * j + 1]);
        return RadialField(coarse, std::move(v), fine.time);
    };
    const double e0 = l2_distance(finals[0], restrict_avg(finals[1], grids[0]));
    const double e1 = l2_distance(finals[1], restrict_avg(finals[2], grids[1]));
    CHECK(e0 / e1 > 3.0);
    CHECK(e0 / e1 < 5.5);
}

TEST_CASE("scaling check: identity lambda, discrete covariance, dt-error decay") {
    SolverConfig cfg;
    cfg.n = 256;
    cfg.r_max = 16.0;
    cfg.dt = 2e-3;
    cfg.t_end = 0.64;
    cfg.g = -1.0;
    auto data = [](double r) { return cplx(std::exp(-r * r / 2.0), 0.0); };

    auto rep1 = scaling_check(data, 1.0, cfg);
    CHECK(rep1.distance <= 1e-12);

    // with dt rescaled by 1/lambda^2 the discrete flows coincide exactly
    auto covariant = scaling_check(data, 2.0, cfg, /*rescale_dt=*/true);
    CHECK(covariant.distance <= 1e-11);
    CHECK(std::abs(covariant.charge_base - covariant.charge_scaled) /
              covariant.charge_base <=
          1e-10);

    // with a shared dt the residual is the second-order time error
    std::vector<double> errs;
    for (int lev = 0; lev < 3; ++lev) {
        SolverConfig c = cfg;
        c.n = 256 << lev;
        c.dt = 2e-3 / (1 << lev);
        errs.push_back(scaling_check(data, 2.0, c).distance);
    }
    CHECK(errs[0] / errs[1] > 3.0);
    CHECK(errs[0] / errs[1] < 5.3);
    CHECK(errs[1] / errs[2] > 3.0);
    CHECK(errs[1] / errs[2] < 5.3);
}

TEST_CASE("instability detection aborts with diagnostics") {
    SolverConfig cfg;
    cfg.n = 64;
    cfg.r_max = 4.0;
    cfg.dt = 0.5; // absurdly large step on focusing data
    cfg.t_end = 50.0;
    cfg.g = 5.0;
    auto g = make_grid(cfg.n, cfg.r_max);
    auto big = sample_field(g, [](double r) { return cplx(40.0 * std::exp(-8.0 * r * r), 0.0); });
    CHECK_THROWS_AS(run(cfg, big), InstabilityError);
}

TEST_CASE("boundary mass warning fires when data reaches the edge") {
    SolverConfig cfg;
    cfg.n = 128;
    cfg.r_max = 4.0; // far too small for this data
    cfg.dt = 1e-3;
    cfg.t_end = 1e-2;
    cfg.record_every = 5;
    auto g = make_grid(cfg.n, cfg.r_max);
    auto wide = sample_field(g, [](double r) { return cplx(std::exp(-r * r / 32.0), 0.0); });
    auto traj = run(cfg, wide);
    CHECK(!traj.warnings.empty());

    SolverConfig ok = cfg;
    ok.r_max = 16.0;
    ok.n = 512;
    auto g2 = make_grid(ok.n, ok.r_max);
    auto narrow = sample_field(g2, [](double r) { return cplx(std::exp(-r * r / 2.0), 0.0); });
    CHECK(run(ok, narrow).warnings.empty());
}

TEST_CASE("config validation") {
    SolverConfig cfg;
    cfg.dt = 0.0;
    CHECK_THROWS(cfg.validate());
    cfg.dt = 1e-3;
    cfg.t_end = -1.0;
    CHECK_THROWS(cfg.validate());
    cfg.t_end = 1.0;
    cfg.n = 8;
    CHECK_THROWS(cfg.validate());
}
