// Randomized ratio harness for the weighted Hardy operators, the gauge-field
// bounds, and the trilinear space-time product bounds.  A finite sampled
// max ratio that is stable under grid refinement is the numerical surrogate
// for an inequality constant; the harness can falsify a bound but never
// prove one.
#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include "cssrad/gauge.hpp"
#include "cssrad/propagator.hpp"
#include "cssrad/spectral.hpp"

namespace cssrad {
namespace estimates {

// Gaussian bump amp * e^{i phase} * exp(-width (r-center)^2 + i chirp r^2).
struct GeneratorParams {
    double width = 1.0;
    double center = 0.0;
    double amplitude = 1.0;
    double phase = 0.0;
    double chirp = 0.0;

    std::string describe() const;
};

// Deterministic sample family: width in [0.5, 8], center in [0, 2],
// amplitude in [0.5, 2], phase in [0, 2 pi), chirp in [-2, 2] applied to
// half the members.  Members are stored as parameters so the same continuum
// ensemble can be realized on any grid (refinement reruns resample it).
struct Ensemble {
    std::uint64_t seed = 0;
    std::vector<GeneratorParams> members;

    static Ensemble make(std::uint64_t seed, int count);
    int count() const { return static_cast<int>(members.size()); }
    RadialField realize(int index, const GridPtr& grid) const;
};

struct RatioSample {
    int index = 0;
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;
    bool skipped = false;
};

struct RatioReport {
    std::string estimate_id;
    std::string params;
    std::vector<RatioSample> samples;
    double max_ratio = 0.0;
    int argmax_index = -1;
    std::string argmax_params;
    int skipped = 0;
    bool all_finite = true;
    // refinement stability: filled when a x2-refined rerun is attached
    bool refinement_checked = false;
    double max_ratio_refined = 0.0;
    bool refinement_stable = false;
};

// Marks `base` with the result of the same estimate on a refined grid;
// stable means the max ratio moved by at most 10%.
void attach_refinement(RatioReport& base, const RatioReport& refined);

// Grid plus its spectral transform, shared across estimate evaluations.
struct Workspace {
    GridPtr grid;
    std::shared_ptr<const SpectralTransform> transform;

    static Workspace make(int n, double r_max);
};

enum class HardyOp {
    inv_dr,     // -int_r^inf f ds
    inv_rdr,    // -int_r^inf f/s ds
    inv_rn_bar, // int_0^r f s^n ds
};

// Weighted antiderivatives, integrated exactly on the cell-constant
// reconstruction (same quadrature convention as the gauge module).
RadialField hardy_apply(HardyOp op, int npow, const RadialField& f);

// Mapping-bound ratios:
//   inv_rdr:    ||inv_rdr f||_p <~ ||f||_p for 1 <= p < inf   ("hardy-log")
//   inv_rn_bar: ||r^{-n-1} inv_rn_bar f||_p <~ ||f||_p, 1 < p <= inf ("hardy-power")
//   inv_dr:     ||inv_dr f||_2 <~ ||f||_1                      ("hardy-halfline")
// Exponents outside the stated validity range are rejected.
RatioReport hardy_ratio(HardyOp op, int npow, double p, const Ensemble& ens,
                        const Workspace& ws);

struct TrilinearTimes {
    double t = 0.0, t1 = 0.0, t2 = 0.0, t3 = 0.0;
};

// T(f,g,h) = U(t-t1) f * U(t-t2) g * U(t-t3) h with U realized by
// Crank-Nicolson on a substep lattice of spacing dt_sub (times must sit on
// the lattice).  Each factor may be conjugated.
RadialField trilinear_T(const RadialField& f, const RadialField& g, const RadialField& h,
                        const TrilinearTimes& times, double dt_sub, bool conj_f = false,
                        bool conj_g = false, bool conj_h = false);

struct TrilinearOptions {
    double s = 2.0 / 3.0;
    double t0 = 1.0;
    int time_samples = 64; // trapezoid intervals on [0, t0]
    int substeps = 256;    // propagation lattice per [0, t0]
    bool randomize_offsets = true;
};

// || T ||_{L^1_t H^s} <~ t0^s ||f||_{H^s} ||g||_{H^s} ||h||_{H^s}, 0 < s <= 2/3.
RatioReport estimate_TH(const Ensemble& ens, const TrilinearOptions& opt, const Workspace& ws);
// || T ||_{L^1_t L^2} <~ t0^{s/2} ||f||_{L^2} ||g||_{L^2} ||h||_{H^s}, 0 < s <= 2.
RatioReport estimate_TL2(const Ensemble& ens, const TrilinearOptions& opt, const Workspace& ws);

// The elementary and weighted gauge-potential bounds, one report per bound
// and exponent; q_values sweeps the conjugate-exponent family.
std::vector<RatioReport> estimate_gauge_bounds(const Ensemble& ens, const Workspace& ws,
                                               std::span<const int> q_values);

// The combined-potential L^2 bounds on triples: the two-term product bound
// ("a-product-l2") and the minimum-over-permutations bound ("a-combined-min").
std::vector<RatioReport> estimate_mainnest(const Ensemble& ens, const Workspace& ws);

// Real-sample norm helpers with the 2 pi r dr convention.
double lp_norm_real(const RadialGrid& g, std::span<const double> f, double p);

} // namespace estimates
} // namespace cssrad
