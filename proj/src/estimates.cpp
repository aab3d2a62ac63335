#include "cssrad/estimates.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

namespace cssrad {
namespace estimates {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

double u01(std::mt19937_64& rng) {
    // fixed 53-bit mapping; std::uniform_real_distribution is not
    // reproducible across library implementations
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", x);
    return buf;
}

void push_sample(RatioReport& rep, int index, double lhs, double rhs,
                 const std::string& who) {
    RatioSample s;
    s.index = index;
    s.lhs = lhs;
    s.rhs = rhs;
    if (rhs == 0.0 && lhs == 0.0) {
        s.skipped = true; // degenerate 0/0 member
        ++rep.skipped;
    } else if (rhs == 0.0) {
        s.ratio = std::numeric_limits<double>::infinity();
        rep.all_finite = false;
    } else {
        s.ratio = lhs / rhs;
        if (!std::isfinite(s.ratio))
            rep.all_finite = false;
    }
    if (!s.skipped && s.ratio > rep.max_ratio) {
        rep.max_ratio = s.ratio;
        rep.argmax_index = index;
        rep.argmax_params = who;
    }
    rep.samples.push_back(s);
}

RadialField weighted(const RadialField& f, double power) {
    RadialField out = f;
    for (int i = 0; i < f.size(); ++i)
        out.values[i] *= std::pow(f.grid->node(i), power);
    return out;
}

} // namespace

std::string GeneratorParams::describe() const {
    std::ostringstream os;
    os << "width=" << fmt(width) << " center=" << fmt(center) << " amp=" << fmt(amplitude)
       << " phase=" << fmt(phase) << " chirp=" << fmt(chirp);
    return os.str();
}

Ensemble Ensemble::make(std::uint64_t seed, int count) {
    Ensemble e;
    e.seed = seed;
    e.members.resize(count);
    std::mt19937_64 rng(seed);
    for (auto& m : e.members) {
        m.width = 0.5 + 7.5 * u01(rng);
        m.center = 2.0 * u01(rng);
        m.amplitude = 0.5 + 1.5 * u01(rng);
        m.phase = two_pi * u01(rng);
        const bool chirped = u01(rng) < 0.5;
        const double b = -2.0 + 4.0 * u01(rng); // drawn unconditionally: stable stream
        m.chirp = chirped ? b : 0.0;
    }
    return e;
}

RadialField Ensemble::realize(int index, const GridPtr& grid) const {
    const auto& m = members.at(index);
    const cplx amp = std::polar(m.amplitude, m.phase);
    return sample_field(grid, [&](double r) {
        const double d = r - m.center;
        return amp * std::exp(cplx(-m.width * d * d, m.chirp * r * r));
    });
}

void attach_refinement(RatioReport& base, const RatioReport& refined) {
    base.refinement_checked = true;
    base.max_ratio_refined = refined.max_ratio;
    const double scale = std::max(base.max_ratio, 1e-300);
    base.refinement_stable =
        std::abs(refined.max_ratio - base.max_ratio) <= 0.1 * scale && base.all_finite &&
        refined.all_finite;
}

Workspace Workspace::make(int n, double r_max) {
    Workspace ws;
    ws.grid = make_grid(n, r_max);
    ws.transform = std::make_shared<SpectralTransform>(ws.grid);
    return ws;
}

double lp_norm_real(const RadialGrid& g, std::span<const double> f, double p) {
    if (std::isinf(p)) {
        double m = 0.0;
        for (double v : f)
            m = std::max(m, std::abs(v));
        return m;
    }
    double acc = 0.0;
    for (int i = 0; i < g.size(); ++i)
        acc += g.weight(i) * std::pow(std::abs(f[i]), p);
    return std::pow(two_pi * acc, 1.0 / p);
}

RadialField hardy_apply(HardyOp op, int npow, const RadialField& f) {
    const auto& g = *f.grid;
    const int n = g.size();
    RadialField out = f;

    switch (op) {
    case HardyOp::inv_dr: {
        // -int_r^rmax f ds: suffix with the uniform measure
        cplx tail(0.0);
        const double h = g.spacing();
        for (int i = n - 1; i >= 0; --i) {
            out.values[i] = -(tail + f.values[i] * (g.edge(i + 1) - g.node(i)));
            tail += f.values[i] * h;
        }
        break;
    }
    case HardyOp::inv_rdr: {
        // -int_r^rmax f/s ds: per-cell log masses
        cplx tail(0.0);
        for (int i = n - 1; i >= 0; --i) {
            out.values[i] = -(tail + f.values[i] * std::log(g.edge(i + 1) / g.node(i)));
            if (i > 0)
                tail += f.values[i] * std::log(g.edge(i + 1) / g.edge(i));
        }
        break;
    }
    case HardyOp::inv_rn_bar: {
        if (npow < 0)
            throw std::invalid_argument("hardy_apply: power weight must be nonnegative");
        // int_0^r f s^n ds: prefix with exact cell masses of s^n ds
        const double q = npow + 1.0;
        auto mass = [&](double a, double b) { return (std::pow(b, q) - std::pow(a, q)) / q; };
        cplx acc(0.0);
        for (int i = 0; i < n; ++i) {
            out.values[i] = acc + f.values[i] * mass(g.edge(i), g.node(i));
            acc += f.values[i] * mass(g.edge(i), g.edge(i + 1));
        }
        break;
    }
    }
    return out;
}

RatioReport hardy_ratio(HardyOp op, int npow, double p, const Ensemble& ens,
                        const Workspace& ws) {
    RatioReport rep;
    switch (op) {
    case HardyOp::inv_rdr:
        if (!(p >= 1.0) || std::isinf(p))
            throw std::domain_error("hardy-log bound holds for 1 <= p < inf only");
        rep.estimate_id = "hardy-log-p" + fmt(p);
        break;
    case HardyOp::inv_rn_bar:
        if (!(p > 1.0))
            throw std::domain_error("hardy-power bound holds for 1 < p <= inf only");
        rep.estimate_id =
            std::string("hardy-power-") + (std::isinf(p) ? "pinf" : "p" + fmt(p)) + "-n" +
            std::to_string(npow);
        break;
    case HardyOp::inv_dr:
        rep.estimate_id = "hardy-halfline-l2l1";
        break;
    }
    rep.params = "p=" + fmt(p) + (op == HardyOp::inv_rn_bar ? " n=" + std::to_string(npow) : "");

    for (int i = 0; i < ens.count(); ++i) {
        const auto f = ens.realize(i, ws.grid);
        double lhs = 0.0, rhs = 0.0;
        switch (op) {
        case HardyOp::inv_rdr:
            lhs = lp_norm(hardy_apply(op, 0, f), p);
            rhs = lp_norm(f, p);
            break;
        case HardyOp::inv_rn_bar:
            lhs = lp_norm(weighted(hardy_apply(op, npow, f), -(npow + 1.0)), p);
            rhs = lp_norm(f, p);
            break;
        case HardyOp::inv_dr:
            lhs = l2_norm(hardy_apply(op, 0, f));
            rhs = lp_norm(f, 1.0);
            break;
        }
        push_sample(rep, i, lhs, rhs, ens.members[i].describe());
    }
    return rep;
}

RadialField trilinear_T(const RadialField& f, const RadialField& g, const RadialField& h,
                        const TrilinearTimes& times, double dt_sub, bool conj_f, bool conj_g,
                        bool conj_h) {
    if (!f.grid->same_as(*g.grid) || !f.grid->same_as(*h.grid))
        throw std::invalid_argument("trilinear_T: grid mismatch");
    auto on_lattice = [&](double t) {
        const double k = t / dt_sub;
        const long rounded = std::lround(k);
        if (std::abs(k - rounded) > 1e-9)
            throw std::invalid_argument("trilinear_T: time offsets must sit on the substep lattice");
        return rounded;
    };
    FreePropagator fwd(f.grid, dt_sub);
    FreePropagator bwd(f.grid, -dt_sub);
    auto evolve = [&](const RadialField& u, double offset, bool conj) {
        long steps = on_lattice(offset);
        RadialField out = u;
        if (conj)
            for (auto& v : out.values)
                v = std::conj(v);
        const FreePropagator& prop = (steps >= 0) == !conj ? fwd : bwd;
        // conj(e^{i t L} u) = e^{-i t L} conj(u)
        for (long s = 0; s < std::abs(steps); ++s)
            prop.step_in_place(out.values);
        return out;
    };
    auto a = evolve(f, times.t - times.t1, conj_f);
    auto b = evolve(g, times.t - times.t2, conj_g);
    auto c = evolve(h, times.t - times.t3, conj_h);
    RadialField out = a;
    for (int i = 0; i < out.size(); ++i)
        out.values[i] = a.values[i] * b.values[i] * c.values[i];
    out.time = times.t;
    return out;
}

namespace {

// Common driver for the two trilinear space-time bounds.
template <class NormAtSample, class RhsOf>
RatioReport trilinear_harness(const std::string& id, const Ensemble& ens,
                              const TrilinearOptions& opt, const Workspace& ws,
                              NormAtSample&& norm_at, RhsOf&& rhs_of) {
    if (opt.substeps % opt.time_samples != 0)
        throw std::invalid_argument("trilinear harness: substeps must be a multiple of time_samples");
    RatioReport rep;
    rep.estimate_id = id;
    rep.params = "s=" + fmt(opt.s) + " t0=" + fmt(opt.t0) +
                 " time_samples=" + std::to_string(opt.time_samples);

    const double dt_sub = opt.t0 / opt.substeps;
    const int stride = opt.substeps / opt.time_samples;
    const double dt_sample = opt.t0 / opt.time_samples;
    FreePropagator fwd(ws.grid, dt_sub);
    FreePropagator bwd(ws.grid, -dt_sub);

    const int triples = ens.count() / 3;
    for (int tr = 0; tr < triples; ++tr) {
        std::array<RadialField, 3> u = {ens.realize(3 * tr, ws.grid),
                                        ens.realize(3 * tr + 1, ws.grid),
                                        ens.realize(3 * tr + 2, ws.grid)};
        // offsets drawn per triple, independent of the grid, so a refined
        // rerun sees the same continuum integrand
        std::array<long, 3> offset{0, 0, 0};
        if (opt.randomize_offsets) {
            std::mt19937_64 rng(ens.seed ^ (0x9e3779b97f4a7c15ULL + 0x51d2c1b7ULL * (tr + 1)));
            for (auto& o : offset)
                o = static_cast<long>(rng() % static_cast<std::uint64_t>(opt.substeps));
        }
        // state at t = 0 is U(-t_j) f_j
        for (int j = 0; j < 3; ++j)
            for (long s = 0; s < offset[j]; ++s)
                bwd.step_in_place(u[j].values);

        double l1 = 0.0;
        RadialField prod = u[0];
        for (int m = 0; m <= opt.time_samples; ++m) {
            if (m > 0)
                for (int j = 0; j < 3; ++j)
                    for (int s = 0; s < stride; ++s)
                        fwd.step_in_place(u[j].values);
            for (int i = 0; i < prod.size(); ++i)
                prod.values[i] = u[0].values[i] * u[1].values[i] * u[2].values[i];
            const double w = (m == 0 || m == opt.time_samples) ? 0.5 : 1.0;
            l1 += w * dt_sample * norm_at(prod);
        }
        const double rhs = rhs_of(tr);
        std::ostringstream who;
        who << ens.members[3 * tr].describe() << " | " << ens.members[3 * tr + 1].describe()
            << " | " << ens.members[3 * tr + 2].describe();
        push_sample(rep, tr, l1, rhs, who.str());
    }
    return rep;
}

} // namespace

RatioReport estimate_TH(const Ensemble& ens, const TrilinearOptions& opt, const Workspace& ws) {
    if (!(opt.s > 0.0 && opt.s <= 2.0 / 3.0))
        throw std::domain_error("trilinear-hs bound holds for 0 < s <= 2/3 only");
    std::vector<std::array<double, 3>> hs_norms(ens.count() / 3);
    for (int tr = 0; tr < static_cast<int>(hs_norms.size()); ++tr)
        for (int j = 0; j < 3; ++j)
            hs_norms[tr][j] = ws.transform->sobolev_norm(ens.realize(3 * tr + j, ws.grid), opt.s);
    return trilinear_harness(
        "trilinear-hs-s" + fmt(opt.s), ens, opt, ws,
        [&](const RadialField& prod) { return ws.transform->sobolev_norm(prod, opt.s); },
        [&](int tr) {
            return std::pow(opt.t0, opt.s) * hs_norms[tr][0] * hs_norms[tr][1] * hs_norms[tr][2];
        });
}

RatioReport estimate_TL2(const Ensemble& ens, const TrilinearOptions& opt, const Workspace& ws) {
    if (!(opt.s > 0.0 && opt.s <= 2.0))
        throw std::domain_error("trilinear-l2 bound holds for 0 < s <= 2 only");
    std::vector<double> rhs(ens.count() / 3);
    for (int tr = 0; tr < static_cast<int>(rhs.size()); ++tr) {
        const double nf = l2_norm(ens.realize(3 * tr, ws.grid));
        const double ng = l2_norm(ens.realize(3 * tr + 1, ws.grid));
        const double nh = ws.transform->sobolev_norm(ens.realize(3 * tr + 2, ws.grid), opt.s);
        rhs[tr] = std::pow(opt.t0, opt.s / 2.0) * nf * ng * nh;
    }
    return trilinear_harness(
        "trilinear-l2-s" + fmt(opt.s), ens, opt, ws,
        [&](const RadialField& prod) { return l2_norm(prod); }, [&](int tr) { return rhs[tr]; });
}

std::vector<RatioReport> estimate_gauge_bounds(const Ensemble& ens, const Workspace& ws,
                                               std::span<const int> q_values) {
    const auto& g = *ws.grid;
    const int pairs = ens.count() / 2;

    struct Entry {
        RatioReport rep;
    };
    std::vector<RatioReport> out;

    auto new_report = [&](std::string id, std::string params) {
        RatioReport r;
        r.estimate_id = std::move(id);
        r.params = std::move(params);
        return r;
    };

    RatioReport atheta_sup = new_report("atheta-sup-l1", "");
    RatioReport atheta_r = new_report("atheta-r-sup-l2", "");
    RatioReport atheta_r2_p2 = new_report("atheta-r2-p2", "p=2");
    RatioReport atheta_r2_pinf = new_report("atheta-r2-pinf", "p=inf");
    RatioReport a0_p1 = new_report("a0-p1", "p=1");
    RatioReport a0_p2 = new_report("a0-p2", "p=2");
    RatioReport a0_sup = new_report("a0-sup-l2sq", "");
    RatioReport asq_p2 = new_report("athetasq-p2", "p=2");
    RatioReport asq_pinf = new_report("athetasq-pinf", "p=inf");
    RatioReport asq_sup = new_report("athetasq-sup-l2sq", "");
    std::vector<RatioReport> weighted_2q, weighted_1q, a0_weighted;
    for (int q : q_values) {
        weighted_2q.push_back(new_report("atheta-w2q-q" + std::to_string(q),
                                         "q=" + std::to_string(q)));
        weighted_1q.push_back(new_report("atheta-w1q-q" + std::to_string(q),
                                         "q=" + std::to_string(q)));
        a0_weighted.push_back(new_report("a0-wsup-q" + std::to_string(q),
                                         "q=" + std::to_string(q)));
    }
    const double inf = std::numeric_limits<double>::infinity();

    for (int i = 0; i < pairs; ++i) {
        const auto psi1 = ens.realize(2 * i, ws.grid);
        const auto psi2 = ens.realize(2 * i + 1, ws.grid);
        const auto rho1 = density(psi1);
        const auto rho2 = density(psi2);
        const auto at1 = gauge::a_theta(g, rho1);
        const auto at2 = gauge::a_theta(g, rho2);
        const std::string who = ens.members[2 * i].describe();
        const std::string who2 = who + " | " + ens.members[2 * i + 1].describe();

        const double rho1_l1 = lp_norm_real(g, rho1, 1.0);
        const double rho1_l2 = lp_norm_real(g, rho1, 2.0);

        auto over_r = [&](std::span<const double> v, double power) {
            std::vector<double> w(v.size());
            for (size_t k = 0; k < v.size(); ++k)
                w[k] = v[k] * std::pow(g.node(static_cast<int>(k)), power);
            return w;
        };

        push_sample(atheta_sup, i, lp_norm_real(g, at1, inf), rho1_l1, who);
        push_sample(atheta_r, i, lp_norm_real(g, over_r(at1, -1.0), inf), rho1_l2, who);
        push_sample(atheta_r2_p2, i, lp_norm_real(g, over_r(at1, -2.0), 2.0),
                    lp_norm_real(g, rho1, 2.0), who);
        push_sample(atheta_r2_pinf, i, lp_norm_real(g, over_r(at1, -2.0), inf),
                    lp_norm_real(g, rho1, inf), who);

        const auto a0_diag = gauge::a_zero(g, rho1, rho1);
        push_sample(a0_p1, i, lp_norm_real(g, a0_diag, 1.0), rho1_l1 * rho1_l1, who);
        push_sample(a0_p2, i, lp_norm_real(g, a0_diag, 2.0), rho1_l1 * rho1_l2, who);
        push_sample(a0_sup, i, lp_norm_real(g, a0_diag, inf), rho1_l2 * rho1_l2, who);

        std::vector<double> asq(g.size());
        for (int k = 0; k < g.size(); ++k) {
            const double r = g.node(k);
            asq[k] = at1[k] * at1[k] / (r * r);
        }
        push_sample(asq_p2, i, lp_norm_real(g, asq, 2.0), rho1_l1 * rho1_l2, who);
        push_sample(asq_pinf, i, lp_norm_real(g, asq, inf), rho1_l1 * lp_norm_real(g, rho1, inf),
                    who);
        push_sample(asq_sup, i, lp_norm_real(g, asq, inf), rho1_l2 * rho1_l2, who);

        for (size_t qi = 0; qi < q_values.size(); ++qi) {
            const double q = q_values[qi];
            const double p = q / (q - 1.0);
            const double hq = ws.transform->sobolev_norm(psi1, 1.0 / q);
            push_sample(weighted_2q[qi], i, lp_norm_real(g, over_r(at1, -2.0 / q), inf), hq * hq,
                        who);
            push_sample(weighted_1q[qi], i, lp_norm_real(g, over_r(at1, -1.0 / q), inf),
                        hq * l2_norm(psi1), who);

            // bilinear A_0 with the weight r^{1/p}; minimum over both orderings
            const auto a0_bilin = gauge::a_zero(g, rho1, rho2);
            const double lhs = lp_norm_real(g, over_r(a0_bilin, 1.0 / p), inf);
            const double h1q_1 = hq;
            const double h1q_2 = ws.transform->sobolev_norm(psi2, 1.0 / q);
            const double h1p_1 = ws.transform->sobolev_norm(psi1, 1.0 / p);
            const double h1p_2 = ws.transform->sobolev_norm(psi2, 1.0 / p);
            const double rhs = std::min(h1q_1 * h1q_1 * h1p_2 * l2_norm(psi2),
                                        h1q_2 * h1q_2 * h1p_1 * l2_norm(psi1));
            push_sample(a0_weighted[qi], i, lhs, rhs, who2);
        }
    }

    out.push_back(std::move(atheta_sup));
    out.push_back(std::move(atheta_r));
    out.push_back(std::move(atheta_r2_p2));
    out.push_back(std::move(atheta_r2_pinf));
    out.push_back(std::move(a0_p1));
    out.push_back(std::move(a0_p2));
    out.push_back(std::move(a0_sup));
    out.push_back(std::move(asq_p2));
    out.push_back(std::move(asq_pinf));
    out.push_back(std::move(asq_sup));
    for (auto& r : weighted_2q)
        out.push_back(std::move(r));
    for (auto& r : weighted_1q)
        out.push_back(std::move(r));
    for (auto& r : a0_weighted)
        out.push_back(std::move(r));
    return out;
}

std::vector<RatioReport> estimate_mainnest(const Ensemble& ens, const Workspace& ws) {
    const auto& g = *ws.grid;
    RatioReport product;
    product.estimate_id = "a-product-l2";
    RatioReport combined;
    combined.estimate_id = "a-combined-min";

    const int triples = ens.count() / 3;
    for (int tr = 0; tr < triples; ++tr) {
        std::array<RadialField, 3> psi = {ens.realize(3 * tr, ws.grid),
                                          ens.realize(3 * tr + 1, ws.grid),
                                          ens.realize(3 * tr + 2, ws.grid)};
        const auto rho1 = density(psi[0]);
        const auto rho2 = density(psi[1]);
        std::array<double, 3> h_half, l2n;
        for (int j = 0; j < 3; ++j) {
            h_half[j] = ws.transform->sobolev_norm(psi[j], 0.5);
            l2n[j] = l2_norm(psi[j]);
        }
        std::ostringstream who;
        who << ens.members[3 * tr].describe() << " | " << ens.members[3 * tr + 1].describe()
            << " | " << ens.members[3 * tr + 2].describe();

        // two-term product bound: ||A0 Theta|| + ||Atheta1 Atheta2 / r^2 Theta||
        const auto a0 = gauge::a_zero(g, rho1, rho2);
        const auto at1 = gauge::a_theta(g, rho1);
        const auto at2 = gauge::a_theta(g, rho2);
        RadialField term1 = psi[2], term2 = psi[2];
        for (int i = 0; i < g.size(); ++i) {
            const double r = g.node(i);
            term1.values[i] *= a0[i];
            term2.values[i] *= at1[i] * at2[i] / (r * r);
        }
        const double lhs_prod = l2_norm(term1) + l2_norm(term2);
        const double min_s2 = std::min(h_half[0] * l2n[1], h_half[1] * l2n[0]);
        const double rhs_prod = h_half[0] * h_half[1] * h_half[2] * min_s2;
        push_sample(product, tr, lhs_prod, rhs_prod, who.str());

        // minimum over all six permutations for the combined potential
        const auto a = gauge::a_combined(g, rho1, rho2);
        RadialField apsi = psi[2];
        for (int i = 0; i < g.size(); ++i)
            apsi.values[i] *= a[i];
        const double lhs_comb = l2_norm(apsi);
        std::array<int, 3> perm = {0, 1, 2};
        double best = std::numeric_limits<double>::infinity();
        std::sort(perm.begin(), perm.end());
        do {
            best = std::min(best, h_half[perm[0]] * h_half[perm[1]] * l2n[perm[2]]);
        } while (std::next_permutation(perm.begin(), perm.end()));
        const double rhs_comb = h_half[0] * h_half[1] * best;
        push_sample(combined, tr, lhs_comb, rhs_comb, who.str());
    }
    std::vector<RatioReport> out;
    out.push_back(std::move(product));
    out.push_back(std::move(combined));
    return out;
}

} // namespace estimates
} // namespace cssrad
