// Subcommand drivers behind the command-line tool, callable from tests.
// Every driver writes its artifacts under an output directory and returns
// the run summary; the summary contains no volatile data (timings go to a
// side file) so identical inputs give byte-identical summaries.
#pragma once

#include <cstdint>
#include <string>

#include "cssrad/config.hpp"
#include "cssrad/runio.hpp"

namespace cssrad {
namespace drivers {

inline constexpr const char* version_string = "cssrad 0.1.0";

struct CommonOptions {
    std::string out_dir = "out";
    std::uint64_t seed = 0;
    bool seed_given = false; // CLI seed overrides a config-file seed
};

ordered_json run_simulate(const KeyValueDoc& doc, const CommonOptions& opts);
ordered_json run_estimates(const KeyValueDoc& doc, const CommonOptions& opts);
ordered_json run_converge(const KeyValueDoc& doc, const CommonOptions& opts);
ordered_json run_boardgame(int depth, const CommonOptions& opts);
ordered_json run_gauge_table(const std::string& input_csv, const CommonOptions& opts);

struct HierarchyCheckOptions {
    int k = 1;
    int levels = 3;
    bool with_duhamel = false;
    int coarse_n = 8;      // coarse nodes at the first level, doubled per level
    int multiplier = 9;    // solver n = 2 * multiplier * coarse_n (odd keeps nodes nested)
    double dt = 4e-3;      // solver step at the first level, halved per level
    double t_end = 0.2;
    int record_every = 10;
};

ordered_json run_hierarchy_check(const std::string& run_dir, const HierarchyCheckOptions& hopts,
                                 const CommonOptions& opts);

// Observed order of a sequence of errors under factor-2 refinement.
std::vector<double> pairwise_orders(const std::vector<double>& errors);
double fitted_order(const std::vector<double>& errors);

} // namespace drivers
} // namespace cssrad
