// cssrad: numerical laboratory for the radial Chern-Simons-Schroedinger
// system, its gauge potentials, the associated marginal-kernel hierarchy,
// and the multilinear estimates behind it.
//
// Exit codes: 0 success, 2 configuration error, 3 numerical instability.
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "cssrad/drivers.hpp"
#include "cssrad/solver.hpp"

using namespace cssrad;

namespace {

struct CliContext {
    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool seed_given = false;
};

drivers::CommonOptions common_options(const CliContext& ctx, const std::string& fallback_out) {
    drivers::CommonOptions opts;
    opts.out_dir = ctx.out_dir.empty() ? fallback_out : ctx.out_dir;
    opts.seed = ctx.seed;
    opts.seed_given = ctx.seed_given;
    return opts;
}

KeyValueDoc load_config(const std::string& path) {
    std::vector<std::string> errors;
    auto doc = KeyValueDoc::parse_file(path, errors);
    if (!errors.empty())
        throw ConfigError(errors);
    return doc;
}

void report_timing(const drivers::CommonOptions& opts, double seconds) {
    std::cerr << "wall time: " << seconds << " s\n";
    // kept out of summary.json so reruns stay byte-identical
    std::ofstream out(std::filesystem::path(opts.out_dir) / "timing.txt");
    if (out)
        out << seconds << "\n";
}

int guarded(const drivers::CommonOptions& opts, const std::function<void()>& body) {
    const auto start = std::chrono::steady_clock::now();
    try {
        body();
    } catch (const ConfigError& e) {
        std::cerr << "configuration error:\n";
        for (const auto& v : e.violations)
            std::cerr << "  - " << v << "\n";
        return 2;
    } catch (const InstabilityError& e) {
        std::cerr << e.what() << " (step " << e.step << ")\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - start;
    report_timing(opts, dt.count());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"radial Chern-Simons-Schroedinger laboratory"};
    app.require_subcommand(1);

    if (const char* threads = std::getenv("CSSRAD_THREADS")) {
        // reserved thread-count override; this build evaluates sequentially
        if (std::atoi(threads) > 1)
            std::cerr << "note: CSSRAD_THREADS > 1 requested; this build runs sequentially\n";
    }

    CliContext ctx;
    int depth = 4;
    std::string input_csv;
    std::string run_dir;
    drivers::HierarchyCheckOptions hopts;

    auto add_common = [&](CLI::App* sub, bool with_config) {
        if (with_config)
            sub->add_option("--config", ctx.config_path, "key = value configuration file")
                ->required();
        sub->add_option("--out", ctx.out_dir, "output directory");
        sub->add_option("--seed", ctx.seed, "overrides the config-file seed")
            ->each([&](const std::string&) { ctx.seed_given = true; });
    };

    auto* sim = app.add_subcommand("simulate", "integrate the gauged radial NLS");
    add_common(sim, true);
    auto* est = app.add_subcommand("estimates", "randomized inequality ratio harness");
    add_common(est, true);
    auto* conv = app.add_subcommand("converge", "refinement studies with observed orders");
    add_common(conv, true);
    auto* board = app.add_subcommand("boardgame", "collapsing-map enumeration and budgets");
    add_common(board, false);
    board->add_option("--depth", depth, "expansion depth")->required();
    auto* gt = app.add_subcommand("gauge-table", "gauge potentials from a density profile");
    add_common(gt, false);
    gt->add_option("--input", input_csv, "CSV with columns r,rho")->required();
    auto* hc = app.add_subcommand("hierarchy-check", "hierarchy residuals for a finished run");
    add_common(hc, false);
    hc->add_option("--run", run_dir, "directory of a completed simulate run")->required();
    hc->add_option("--k", hopts.k, "marginal order (1 or 2)");
    hc->add_option("--levels", hopts.levels, "refinement levels");
    hc->add_flag("--duhamel", hopts.with_duhamel, "also check the mild integral form");
    hc->add_option("--coarse-n", hopts.coarse_n, "kernel nodes at the first level");
    hc->add_option("--multiplier", hopts.multiplier, "odd solver/kernel grid ratio");
    hc->add_option("--dt", hopts.dt, "solver step at the first level");
    hc->add_option("--t-end", hopts.t_end, "diagnostic horizon");
    hc->add_option("--record-every", hopts.record_every, "snapshot cadence in steps");

    CLI11_PARSE(app, argc, argv);

    if (sim->parsed()) {
        const auto opts = common_options(ctx, "out-simulate");
        return guarded(opts,
                       [&] { drivers::run_simulate(load_config(ctx.config_path), opts); });
    }
    if (est->parsed()) {
        const auto opts = common_options(ctx, "out-estimates");
        return guarded(opts,
                       [&] { drivers::run_estimates(load_config(ctx.config_path), opts); });
    }
    if (conv->parsed()) {
        const auto opts = common_options(ctx, "out-converge");
        return guarded(opts,
                       [&] { drivers::run_converge(load_config(ctx.config_path), opts); });
    }
    if (board->parsed()) {
        const auto opts = common_options(ctx, "out-boardgame");
        return guarded(opts, [&] { drivers::run_boardgame(depth, opts); });
    }
    if (gt->parsed()) {
        const auto opts = common_options(ctx, "out-gauge-table");
        return guarded(opts, [&] { drivers::run_gauge_table(input_csv, opts); });
    }
    if (hc->parsed()) {
        const auto opts = common_options(ctx, "out-hierarchy-check");
        return guarded(opts, [&] { drivers::run_hierarchy_check(run_dir, hopts, opts); });
    }
    return 2;
}
