#include "cssrad/drivers.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include "cssrad/boardgame.hpp"
#include "cssrad/estimates.hpp"
#include "cssrad/gauge.hpp"
#include "cssrad/hierarchy.hpp"
#include "cssrad/solver.hpp"

namespace cssrad {
namespace drivers {

namespace fs = std::filesystem;

namespace {

ordered_json summary_skeleton(const std::string& subcommand, std::uint64_t seed) {
    ordered_json j;
    j["version"] = version_string;
    j["subcommand"] = subcommand;
    j["seed"] = seed;
    return j;
}

void finalize_summary(ordered_json& j, const CommonOptions& opts) {
    fs::create_directories(opts.out_dir);
    write_json(fs::path(opts.out_dir) / "summary.json", j);
}

std::uint64_t resolve_seed(ConfigReader& reader, const CommonOptions& opts) {
    const std::uint64_t cfg_seed = reader.get_seed("seed", 0);
    return opts.seed_given ? opts.seed : cfg_seed;
}

struct SimulateSetup {
    SolverConfig solver;
    InitialData data;
    std::uint64_t seed = 0;
};

SimulateSetup parse_simulate(const KeyValueDoc& doc, const CommonOptions& opts) {
    std::vector<std::string> errors;
    ConfigReader reader(doc, errors);
    SimulateSetup s;
    s.solver.n = reader.get_int("n", 1024, 16, 1 << 20);
    s.solver.r_max = reader.get_double(
        "r_max", 16.0, [](double v) { return v > 0.0; }, "r_max must be positive");
    s.solver.dt = reader.get_double(
        "dt", 1e-3, [](double v) { return v > 0.0; }, "dt must be positive");
    s.solver.t_end = reader.get_double(
        "t_end", 1.0, [](double v) { return v >= 0.0; }, "t_end must be nonnegative");
    s.solver.g = reader.get_double("g", -1.0, nullptr, "");
    s.solver.record_every = reader.get_int("record_every", 100, 1, 1 << 30);
    s.solver.boundary_mass_tol =
        reader.get_double("boundary_mass_tol", 1e-10, [](double v) { return v > 0.0; },
                          "boundary_mass_tol must be positive");
    const std::string preset =
        reader.get_enum("preset", "gaussian", {"gaussian", "ring", "indicator"});
    std::map<std::string, double> params;
    for (const char* key : {"width", "amplitude", "center", "radius"}) {
        const std::string full = std::string("preset.") + key;
        if (doc.has(full))
            params[key] = reader.get_double(full, 0.0, nullptr, "");
    }
    s.seed = resolve_seed(reader, opts);
    reader.finish();

    // presets reject parameters that do not belong to them
    static const std::map<std::string, std::set<std::string>> allowed = {
        {"gaussian", {"width", "amplitude"}},
        {"ring", {"center", "width", "amplitude"}},
        {"indicator", {"radius"}}};
    for (const auto& [k, v] : params)
        if (!allowed.at(preset).count(k))
            errors.push_back("preset " + preset + " does not take parameter '" + k + "'");

    s.data = make_preset(preset, params, errors);
    if (!errors.empty())
        throw ConfigError(errors);
    return s;
}

ordered_json preset_echo(const InitialData& d) {
    ordered_json j;
    j["name"] = d.name;
    for (const auto& [k, v] : d.params)
        j[k] = v;
    return j;
}

ordered_json solver_echo(const SolverConfig& c) {
    ordered_json j;
    j["n"] = c.n;
    j["r_max"] = c.r_max;
    j["dt"] = c.dt;
    j["t_end"] = c.t_end;
    j["g"] = c.g;
    j["record_every"] = c.record_every;
    j["boundary_mass_tol"] = c.boundary_mass_tol;
    return j;
}

} // namespace

std::vector<double> pairwise_orders(const std::vector<double>& errors) {
    std::vector<double> orders;
    for (size_t i = 0; i + 1 < errors.size(); ++i) {
        if (errors[i] > 0.0 && errors[i + 1] > 0.0)
            orders.push_back(std::log2(errors[i] / errors[i + 1]));
        else
            orders.push_back(0.0);
    }
    return orders;
}

double fitted_order(const std::vector<double>& errors) {
    // least-squares slope of log2(error) against level
    const int m = static_cast<int>(errors.size());
    if (m < 2)
        return 0.0;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < m; ++i) {
        const double x = i;
        const double y = std::log2(std::max(errors[i], 1e-300));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return -(m * sxy - sx * sy) / (m * sxx - sx * sx);
}

ordered_json run_simulate(const KeyValueDoc& doc, const CommonOptions& opts) {
    const auto setup = parse_simulate(doc, opts);
    const auto grid = make_grid(setup.solver.n, setup.solver.r_max);
    const auto phi0 = sample_field(grid, setup.data.profile);

    const auto traj = run(setup.solver, phi0);

    fs::create_directories(opts.out_dir);
    for (int m = 0; m < traj.snapshots(); ++m) {
        char name[32];
        std::snprintf(name, sizeof(name), "snapshot_%04d.csv", m);
        write_field_csv(fs::path(opts.out_dir) / name, traj.fields[m]);
    }
    std::vector<CsvColumn> series(3);
    series[0] = {"t", traj.times};
    series[1] = {"charge", traj.charge_series};
    series[2] = {"energy", traj.energy_series};
    write_csv(fs::path(opts.out_dir) / "series.csv", series);

    ordered_json j = summary_skeleton("simulate", setup.seed);
    j["config"] = solver_echo(setup.solver);
    j["config"]["preset"] = preset_echo(setup.data);
    j["regime"] = setup.solver.g >= 1.0 ? "focusing (g >= 1)" : "defocusing (g < 1)";
    j["warnings"] = traj.warnings;

    const double chg0 = traj.charge_series.front();
    const double en0 = traj.energy_series.front();
    double chg_drift = 0.0, en_drift = 0.0;
    for (int m = 0; m < traj.snapshots(); ++m) {
        chg_drift = std::max(chg_drift, std::abs(traj.charge_series[m] - chg0));
        en_drift = std::max(en_drift, std::abs(traj.energy_series[m] - en0));
    }
    ordered_json metrics;
    metrics["snapshots"] = traj.snapshots();
    metrics["charge_initial"] = chg0;
    metrics["charge_final"] = traj.charge_series.back();
    metrics["charge_drift_rel"] = chg0 != 0.0 ? chg_drift / chg0 : 0.0;
    metrics["energy_initial"] = en0;
    metrics["energy_final"] = traj.energy_series.back();
    metrics["energy_drift_rel"] = en0 != 0.0 ? en_drift / std::abs(en0) : 0.0;
    j["metrics"] = metrics;

    finalize_summary(j, opts);
    return j;
}

ordered_json run_gauge_table(const std::string& input_csv, const CommonOptions& opts) {
    std::vector<double> r, rho;
    read_profile_csv(input_csv, r, rho);

    // the quadrature rules assume cell-centered uniform nodes
    const int n = static_cast<int>(r.size());
    const double h = 2.0 * r[0];
    const double r_max = n * h;
    std::vector<std::string> errors;
    if (!(h > 0.0))
        errors.push_back("gauge-table: first radius must be positive");
    for (int i = 0; i < n && errors.empty(); ++i)
        if (std::abs(r[i] - (i + 0.5) * h) > 1e-9 * std::max(1.0, r_max))
            errors.push_back("gauge-table: radii must form a uniform cell-centered grid "
                             "(r_i = (i - 1/2) h); row " +
                             std::to_string(i + 1) + " breaks the pattern");
    if (!errors.empty())
        throw ConfigError(errors);

    const auto grid = make_grid(n, r_max);
    const auto fields = gauge::compute(*grid, rho);

    fs::create_directories(opts.out_dir);
    std::vector<CsvColumn> cols(4);
    cols[0] = {"r", r};
    cols[1] = {"a_theta", fields.a_theta};
    cols[2] = {"a_zero", fields.a_zero};
    cols[3] = {"a", fields.a_combined};
    write_csv(fs::path(opts.out_dir) / "gauge_table.csv", cols);

    ordered_json j = summary_skeleton("gauge-table", 0);
    j["config"] = {{"input", input_csv}, {"n", n}, {"r_max", r_max}};
    j["warnings"] = ordered_json::array();
    ordered_json metrics;
    metrics["density_l1"] = estimates::lp_norm_real(*grid, rho, 1.0);
    metrics["a_theta_limit"] = fields.a_theta.back();
    metrics["a_zero_at_origin"] = fields.a_zero.front();
    j["metrics"] = metrics;
    finalize_summary(j, opts);
    return j;
}

ordered_json run_boardgame(int depth, const CommonOptions& opts) {
    using namespace boardgame;
    if (depth < 1 || depth > max_enumeration_depth)
        throw ConfigError({"boardgame: depth must lie in [1, " +
                           std::to_string(max_enumeration_depth) + "]"});

    ordered_json j = summary_skeleton("boardgame", 0);
    j["config"] = {{"depth", depth}};
    j["warnings"] = ordered_json::array();

    ordered_json metrics;
    if (depth <= 5) {
        ordered_json maps = ordered_json::array();
        for (const auto& m : enumerate_sigma(depth)) {
            ordered_json row = ordered_json::array();
            for (int l = 2; l <= depth + 1; ++l)
                row.push_back(m.sigma(l));
            maps.push_back(row);
        }
        metrics["maps"] = maps;
    }
    ordered_json budget_table = ordered_json::array();
    for (int d = 1; d <= depth; ++d) {
        const auto rep = budget_check(d);
        ordered_json row;
        row["depth"] = d;
        row["sigma_count"] = to_string(rep.sigma_count);
        row["factorial"] = to_string(rep.factorial_count);
        row["budget_4j"] = to_string(rep.budget);
        row["within_budget"] = rep.within_budget;
        row["note"] = rep.note;
        budget_table.push_back(row);
    }
    metrics["budget_table"] = budget_table;
    ordered_json terms = ordered_json::array();
    for (int rdep = 1; rdep <= depth; ++rdep) {
        const auto tc = raw_term_count(rdep);
        ordered_json row;
        row["depth"] = rdep;
        row["raw_count"] = to_string(tc.raw_count);
        row["budget_4r"] = to_string(tc.budget);
        terms.push_back(row);
    }
    metrics["raw_term_counts"] = terms;
    j["metrics"] = metrics;
    finalize_summary(j, opts);
    return j;
}

namespace {

struct EstimatesSetup {
    std::vector<std::string> groups;
    int count = 100;
    int n = 256;
    double r_max = 16.0;
    double t0 = 1.0;
    int time_samples = 64;
    int substeps = 256;
    double s = 2.0 / 3.0;
    std::vector<int> q_values = {2, 3};
    bool refine = true;
    std::uint64_t seed = 0;
};

EstimatesSetup parse_estimates(const KeyValueDoc& doc, const CommonOptions& opts) {
    std::vector<std::string> errors;
    ConfigReader reader(doc, errors);
    EstimatesSetup s;
    const std::string which = reader.get_string("estimates", "all");
    static const std::vector<std::string> known = {
        "hardy-log", "hardy-power", "hardy-halfline", "gauge-bounds",
        "a-product", "a-combined",  "trilinear-hs",   "trilinear-l2"};
    if (which == "all") {
        s.groups = known;
    } else {
        std::istringstream ss(which);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            if (std::find(known.begin(), known.end(), tok) == known.end())
                errors.push_back("estimates: unknown estimate group '" + tok + "'");
            else
                s.groups.push_back(tok);
        }
        if (s.groups.empty())
            errors.push_back("estimates: empty estimate selection");
    }
    s.count = reader.get_int("count", 100, 3, 100000);
    s.n = reader.get_int("n", 256, 16, 4096);
    s.r_max = reader.get_double(
        "r_max", 16.0, [](double v) { return v > 0.0; }, "r_max must be positive");
    s.t0 = reader.get_double(
        "t0", 1.0, [](double v) { return v > 0.0; }, "t0 must be positive");
    s.time_samples = reader.get_int("time_samples", 64, 64, 4096);
    s.substeps = reader.get_int("substeps", 256, 1, 1 << 16);
    s.s = reader.get_double(
        "s", 2.0 / 3.0, [](double v) { return v > 0.0 && v <= 2.0; },
        "s must lie in (0, 2]");
    const std::string qlist = reader.get_string("q_values", "2,3");
    {
        s.q_values.clear();
        std::istringstream ss(qlist);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            try {
                const int q = std::stoi(tok);
                if (q < 2)
                    errors.push_back("estimates: q values must be integers >= 2");
                else
                    s.q_values.push_back(q);
            } catch (...) {
                errors.push_back("estimates: cannot parse q value '" + tok + "'");
            }
        }
        if (s.q_values.empty())
            errors.push_back("estimates: empty q list");
    }
    s.refine = reader.get_bool("refine", true);
    s.seed = resolve_seed(reader, opts);
    if (s.substeps % std::max(1, s.time_samples) != 0)
        errors.push_back("estimates: substeps must be a multiple of time_samples");
    reader.finish();
    if (!errors.empty())
        throw ConfigError(errors);
    return s;
}

ordered_json report_json(const estimates::RatioReport& r) {
    ordered_json j;
    j["estimate_id"] = r.estimate_id;
    j["params"] = r.params;
    j["samples"] = static_cast<int>(r.samples.size());
    j["skipped"] = r.skipped;
    j["max_ratio"] = r.max_ratio;
    j["argmax_index"] = r.argmax_index;
    j["argmax_params"] = r.argmax_params;
    j["all_finite"] = r.all_finite;
    if (r.refinement_checked) {
        j["max_ratio_refined"] = r.max_ratio_refined;
        j["refinement_stable"] = r.refinement_stable;
    }
    j["statement"] = "finite, refinement-stable max ratio over a documented random "
                     "ensemble; a sampled check can falsify but not prove the bound";
    return j;
}

void write_report_csv(const fs::path& dir, const estimates::RatioReport& r) {
    std::vector<CsvColumn> cols(4);
    cols[0].header = "sample";
    cols[1].header = "lhs";
    cols[2].header = "rhs";
    cols[3].header = "ratio";
    for (const auto& s : r.samples) {
        cols[0].values.push_back(s.index);
        cols[1].values.push_back(s.lhs);
        cols[2].values.push_back(s.rhs);
        cols[3].values.push_back(s.skipped ? 0.0 : s.ratio);
    }
    write_csv(dir / (r.estimate_id + ".csv"), cols);
}

} // namespace

ordered_json run_estimates(const KeyValueDoc& doc, const CommonOptions& opts) {
    using namespace estimates;
    const auto setup = parse_estimates(doc, opts);
    const auto ens = Ensemble::make(setup.seed, setup.count);
    auto ws = Workspace::make(setup.n, setup.r_max);
    Workspace ws2;
    if (setup.refine)
        ws2 = Workspace::make(2 * setup.n, setup.r_max);

    TrilinearOptions tri;
    tri.s = setup.s;
    tri.t0 = setup.t0;
    tri.time_samples = setup.time_samples;
    tri.substeps = setup.substeps;

    std::vector<RatioReport> reports;
    auto run_group = [&](const std::string& group, const Workspace& w) {
        std::vector<RatioReport> out;
        if (group == "hardy-log") {
            for (double p : {2.0, 4.0})
                out.push_back(hardy_ratio(HardyOp::inv_rdr, 0, p, ens, w));
        } else if (group == "hardy-power") {
            const double inf = std::numeric_limits<double>::infinity();
            for (int npow : {0, 1})
                for (double p : {2.0, inf})
                    out.push_back(hardy_ratio(HardyOp::inv_rn_bar, npow, p, ens, w));
        } else if (group == "hardy-halfline") {
            out.push_back(hardy_ratio(HardyOp::inv_dr, 0, 2.0, ens, w));
        } else if (group == "gauge-bounds") {
            out = estimate_gauge_bounds(ens, w, setup.q_values);
        } else if (group == "a-product" || group == "a-combined") {
            auto both = estimate_mainnest(ens, w);
            out.push_back(group == "a-product" ? std::move(both[0]) : std::move(both[1]));
        } else if (group == "trilinear-hs") {
            TrilinearOptions o = tri;
            o.s = std::min(setup.s, 2.0 / 3.0);
            out.push_back(estimate_TH(ens, o, w));
        } else if (group == "trilinear-l2") {
            out.push_back(estimate_TL2(ens, tri, w));
        }
        return out;
    };

    for (const auto& group : setup.groups) {
        auto base = run_group(group, ws);
        if (setup.refine) {
            auto refined = run_group(group, ws2);
            for (size_t i = 0; i < base.size(); ++i)
                attach_refinement(base[i], refined[i]);
        }
        for (auto& r : base)
            reports.push_back(std::move(r));
    }

    fs::create_directories(opts.out_dir);
    for (const auto& r : reports)
        write_report_csv(opts.out_dir, r);

    ordered_json j = summary_skeleton("estimates", setup.seed);
    ordered_json cfg;
    cfg["count"] = setup.count;
    cfg["n"] = setup.n;
    cfg["r_max"] = setup.r_max;
    cfg["t0"] = setup.t0;
    cfg["time_samples"] = setup.time_samples;
    cfg["substeps"] = setup.substeps;
    cfg["s"] = setup.s;
    cfg["q_values"] = setup.q_values;
    cfg["refine"] = setup.refine;
    {
        std::string joined;
        for (const auto& g : setup.groups)
            joined += (joined.empty() ? "" : ",") + g;
        cfg["estimates"] = joined;
    }
    j["config"] = cfg;
    j["warnings"] = ordered_json::array();
    ordered_json metrics;
    ordered_json arr = ordered_json::array();
    for (const auto& r : reports)
        arr.push_back(report_json(r));
    metrics["reports"] = arr;
    j["metrics"] = metrics;
    finalize_summary(j, opts);
    return j;
}

namespace {

struct ConvergeSetup {
    std::string target = "free_gaussian";
    int levels = 3;
    int n = 512;
    double r_max = 16.0;
    double dt = 2e-3;
    double t_end = 0.5;
    double g = -1.0;
    double lambda = 2.0;
    int k = 1;
    int coarse_n = 8;
    int multiplier = 9;
    int record_every = 10;
    std::uint64_t seed = 0;
};

ConvergeSetup parse_converge(const KeyValueDoc& doc, const CommonOptions& opts) {
    std::vector<std::string> errors;
    ConfigReader reader(doc, errors);
    ConvergeSetup s;
    s.target = reader.get_enum(
        "target", "free_gaussian",
        {"free_gaussian", "nls", "scaling", "hierarchy", "duhamel"});
    s.levels = reader.get_int("levels", 3, 2, 8);
    s.n = reader.get_int("n", 512, 16, 1 << 18);
    s.r_max = reader.get_double(
        "r_max", 16.0, [](double v) { return v > 0.0; }, "r_max must be positive");
    s.dt = reader.get_double(
        "dt", 2e-3, [](double v) { return v > 0.0; }, "dt must be positive");
    s.t_end = reader.get_double(
        "t_end", 0.5, [](double v) { return v > 0.0; }, "t_end must be positive");
    s.g = reader.get_double("g", -1.0, nullptr, "");
    s.lambda = reader.get_double(
        "lambda", 2.0, [](double v) { return v > 0.0; }, "lambda must be positive");
    s.k = reader.get_int("k", 1, 1, 2);
    s.coarse_n = reader.get_int("coarse_n", 8, 4, 64);
    s.multiplier = reader.get_int("multiplier", 9, 1, 63);
    s.record_every = reader.get_int("record_every", 10, 1, 1 << 30);
    s.seed = resolve_seed(reader, opts);
    if (s.multiplier % 2 == 0)
        errors.push_back("converge: multiplier must be odd so the coarse nodes nest");
    reader.finish();
    if (!errors.empty())
        throw ConfigError(errors);
    return s;
}

RadialField gaussian_on(const GridPtr& g) {
    return sample_field(g, [](double r) { return cplx(std::exp(-r * r / 2.0), 0.0); });
}

RadialField analytic_free_gaussian(const GridPtr& g, double t) {
    const cplx denom(1.0, 2.0 * t);
    return sample_field(
        g, [&](double r) { return std::exp(-r * r / (2.0 * denom)) / denom; }, t);
}

// second-order restriction: cell-centered coarse nodes sit midway between
// two fine nodes when n doubles
RadialField restrict_to_coarse(const RadialField& fine, const GridPtr& coarse) {
    std::vector<cplx> v(coarse->size());
    for (int j = 0; j < coarse->size(); ++j)
        v[j] = 0.5 * (fine.values[2 * j] + fine.values[2 * j + 1]);
    return RadialField(coarse, std::move(v), fine.time);
}

} // namespace

ordered_json run_converge(const KeyValueDoc& doc, const CommonOptions& opts) {
    const auto s = parse_converge(doc, opts);

    std::vector<double> errors;
    ordered_json level_info = ordered_json::array();

    if (s.target == "free_gaussian") {
        for (int lev = 0; lev < s.levels; ++lev) {
            const int n = s.n << lev;
            const double dt = s.dt / (1 << lev);
            const auto grid = make_grid(n, s.r_max);
            FreePropagator prop(grid, dt);
            const auto phi = prop.advance(gaussian_on(grid),
                                          static_cast<int>(std::lround(s.t_end / dt)));
            const double err = l2_distance(phi, analytic_free_gaussian(grid, s.t_end));
            errors.push_back(err);
            level_info.push_back({{"n", n}, {"dt", dt}, {"error", err}});
        }
    } else if (s.target == "nls") {
        std::vector<RadialField> finals;
        std::vector<GridPtr> grids;
        for (int lev = 0; lev <= s.levels; ++lev) {
            const int n = s.n << lev;
            const double dt = s.dt / (1 << lev);
            SolverConfig cfg;
            cfg.n = n;
            cfg.r_max = s.r_max;
            cfg.dt = dt;
            cfg.t_end = s.t_end;
            cfg.g = s.g;
            cfg.record_every = static_cast<int>(std::lround(s.t_end / dt));
            const auto grid = make_grid(n, s.r_max);
            finals.push_back(run(cfg, gaussian_on(grid)).fields.back());
            grids.push_back(grid);
        }
        for (int lev = 0; lev < s.levels; ++lev) {
            const double err =
                l2_distance(finals[lev], restrict_to_coarse(finals[lev + 1], grids[lev]));
            errors.push_back(err);
            level_info.push_back(
                {{"n", s.n << lev}, {"dt", s.dt / (1 << lev)}, {"error", err}});
        }
    } else if (s.target == "scaling") {
        for (int lev = 0; lev < s.levels; ++lev) {
            SolverConfig cfg;
            cfg.n = s.n << lev;
            cfg.r_max = s.r_max;
            cfg.dt = s.dt / (1 << lev);
            cfg.t_end = s.t_end;
            cfg.g = s.g;
            const auto rep = scaling_check(
                [](double r) { return cplx(std::exp(-r * r / 2.0), 0.0); }, s.lambda, cfg);
            errors.push_back(rep.distance);
            level_info.push_back({{"n", cfg.n},
                                  {"dt", cfg.dt},
                                  {"error", rep.distance},
                                  {"charge_base", rep.charge_base},
                                  {"charge_scaled", rep.charge_scaled}});
        }
    } else if (s.target == "hierarchy" || s.target == "duhamel") {
        for (int lev = 0; lev < s.levels; ++lev) {
            const int nc = s.coarse_n << lev;
            const int n = 2 * s.multiplier * nc;
            const double dt = s.dt / (1 << lev);
            SolverConfig cfg;
            cfg.n = n;
            cfg.r_max = s.r_max;
            cfg.dt = dt;
            cfg.t_end = s.t_end;
            cfg.g = s.g;
            cfg.record_every = s.record_every;
            const auto grid = make_grid(n, s.r_max);
            const auto traj = run(cfg, gaussian_on(grid));
            double err = 0.0;
            if (s.target == "hierarchy") {
                const auto coarse = make_grid(nc, s.r_max / 2.0);
                err = hierarchy_residual(traj, s.k, s.g, coarse).max_residual;
            } else {
                err = duhamel_check(traj, s.g).defect;
            }
            errors.push_back(err);
            level_info.push_back(
                {{"n", n}, {"coarse_n", nc}, {"dt", dt}, {"error", err}});
        }
    }

    ordered_json j = summary_skeleton("converge", s.seed);
    ordered_json cfg;
    cfg["target"] = s.target;
    cfg["levels"] = s.levels;
    cfg["n"] = s.n;
    cfg["r_max"] = s.r_max;
    cfg["dt"] = s.dt;
    cfg["t_end"] = s.t_end;
    cfg["g"] = s.g;
    if (s.target == "scaling")
        cfg["lambda"] = s.lambda;
    if (s.target == "hierarchy") {
        cfg["k"] = s.k;
        cfg["coarse_n"] = s.coarse_n;
        cfg["multiplier"] = s.multiplier;
    }
    j["config"] = cfg;
    j["warnings"] = ordered_json::array();
    ordered_json metrics;
    metrics["levels"] = level_info;
    metrics["orders"] = pairwise_orders(errors);
    metrics["fitted_order"] = fitted_order(errors);
    j["metrics"] = metrics;
    finalize_summary(j, opts);
    return j;
}

ordered_json run_hierarchy_check(const std::string& run_dir, const HierarchyCheckOptions& hopts,
                                 const CommonOptions& opts) {
    // base physics comes from the completed run's summary
    std::ifstream in(fs::path(run_dir) / "summary.json");
    if (!in)
        throw ConfigError({"hierarchy-check: cannot open " + run_dir + "/summary.json"});
    ordered_json prior;
    try {
        prior = ordered_json::parse(in);
    } catch (const std::exception& e) {
        throw ConfigError({std::string("hierarchy-check: cannot parse summary.json: ") +
                           e.what()});
    }
    if (!prior.contains("config") || !prior["config"].contains("preset"))
        throw ConfigError({"hierarchy-check: run summary lacks a simulate config"});
    const double g = prior["config"]["g"].get<double>();
    const double r_max = prior["config"]["r_max"].get<double>();
    std::map<std::string, double> preset_params;
    for (auto& [key, val] : prior["config"]["preset"].items())
        if (key != "name")
            preset_params[key] = val.get<double>();
    std::vector<std::string> errors;
    const auto data =
        make_preset(prior["config"]["preset"]["name"].get<std::string>(), preset_params, errors);
    if (!errors.empty())
        throw ConfigError(errors);
    if (hopts.k < 1 || hopts.k > 2)
        throw ConfigError({"hierarchy-check: k must be 1 or 2"});
    if (hopts.levels < 1)
        throw ConfigError({"hierarchy-check: levels must be positive"});
    if (hopts.multiplier % 2 == 0)
        throw ConfigError({"hierarchy-check: multiplier must be odd"});

    std::vector<double> residuals, defects;
    ordered_json level_info = ordered_json::array();
    for (int lev = 0; lev < hopts.levels; ++lev) {
        const int nc = hopts.coarse_n << lev;
        const int n = 2 * hopts.multiplier * nc;
        const double dt = hopts.dt / (1 << lev);
        SolverConfig cfg;
        cfg.n = n;
        cfg.r_max = r_max;
        cfg.dt = dt;
        cfg.t_end = hopts.t_end;
        cfg.g = g;
        cfg.record_every = hopts.record_every;
        const auto grid = make_grid(n, r_max);
        const auto traj = run(cfg, sample_field(grid, data.profile));
        const auto coarse = make_grid(nc, r_max / 2.0);
        const auto rep = hierarchy_residual(traj, hopts.k, g, coarse);
        residuals.push_back(rep.max_residual);
        ordered_json row;
        row["coarse_n"] = nc;
        row["n"] = n;
        row["dt"] = dt;
        row["max_residual"] = rep.max_residual;
        if (hopts.with_duhamel) {
            const auto du = duhamel_check(traj, g);
            defects.push_back(du.defect);
            row["duhamel_defect"] = du.defect;
        }
        level_info.push_back(row);
    }

    ordered_json j = summary_skeleton("hierarchy-check", 0);
    j["config"] = {{"run_dir", run_dir},         {"k", hopts.k},
                   {"levels", hopts.levels},     {"coarse_n", hopts.coarse_n},
                   {"multiplier", hopts.multiplier}, {"dt", hopts.dt},
                   {"t_end", hopts.t_end},       {"record_every", hopts.record_every},
                   {"with_duhamel", hopts.with_duhamel}};
    j["warnings"] = ordered_json::array();
    ordered_json metrics;
    metrics["levels"] = level_info;
    metrics["residual_orders"] = pairwise_orders(residuals);
    metrics["residual_fitted_order"] = fitted_order(residuals);
    if (hopts.with_duhamel) {
        metrics["duhamel_orders"] = pairwise_orders(defects);
        metrics["duhamel_fitted_order"] = fitted_order(defects);
    }
    j["metrics"] = metrics;
    finalize_summary(j, opts);
    return j;
}

} // namespace drivers
} // namespace cssrad
