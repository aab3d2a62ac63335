#include "cssrad/hierarchy.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace cssrad {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;
constexpr size_t max_entries = size_t(1) << 27; // ~2 GB of complex doubles

size_t tensor_entries(int k, int n) {
    size_t e = 1;
    for (int a = 0; a < 2 * k; ++a)
        e *= static_cast<size_t>(n);
    return e;
}

// Odometer over a 2k-dimensional multi-index.
struct MultiIndex {
    int dims;
    int n;
    std::array<int, 6> idx{};
    bool next() {
        for (int a = dims - 1; a >= 0; --a) {
            if (++idx[a] < n)
                return true;
            idx[a] = 0;
        }
        return false;
    }
};

} // namespace

DensityKernel::DensityKernel(int k, GridPtr grid)
    : k_(k), n_(grid ? grid->size() : 0), grid_(std::move(grid)) {
    if (k < 1 || k > 3)
        throw std::invalid_argument("DensityKernel: supported particle numbers are 1..3");
    const size_t entries = tensor_entries(k_, n_);
    if (entries > max_entries)
        throw std::invalid_argument("DensityKernel: tensor too large; use a coarser grid");
    v_.assign(entries, cplx(0.0));
}

DensityKernel DensityKernel::factorized(const RadialField& phi, int k) {
    DensityKernel out(k, phi.grid);
    const int n = out.n_;
    const auto& f = phi.values;
    MultiIndex mi{2 * k, n};
    size_t flat = 0;
    do {
        cplx prod(1.0);
        for (int a = 0; a < k; ++a)
            prod *= f[mi.idx[a]];
        for (int a = k; a < 2 * k; ++a)
            prod *= std::conj(f[mi.idx[a]]);
        out.v_[flat++] = prod;
    } while (mi.next());
    return out;
}

size_t DensityKernel::flat_index(std::span<const int> unprimed,
                                 std::span<const int> primed) const {
    size_t flat = 0;
    for (int a = 0; a < k_; ++a)
        flat = flat * n_ + unprimed[a];
    for (int a = 0; a < k_; ++a)
        flat = flat * n_ + primed[a];
    return flat;
}

cplx DensityKernel::at(std::span<const int> unprimed, std::span<const int> primed) const {
    return v_[flat_index(unprimed, primed)];
}

void DensityKernel::add_scaled(const DensityKernel& other, cplx factor) {
    if (other.v_.size() != v_.size() || other.k_ != k_)
        throw std::invalid_argument("DensityKernel::add_scaled: shape mismatch");
    for (size_t i = 0; i < v_.size(); ++i)
        v_[i] += factor * other.v_[i];
}

cplx trace(const DensityKernel& gamma) {
    const int k = gamma.particles();
    const int n = gamma.n();
    const auto& g = *gamma.grid();
    double angular = 1.0;
    for (int a = 0; a < k; ++a)
        angular *= two_pi;
    MultiIndex mi{k, n};
    cplx acc(0.0);
    std::array<int, 3> idx{};
    do {
        double w = 1.0;
        for (int a = 0; a < k; ++a) {
            idx[a] = mi.idx[a];
            w *= g.weight(mi.idx[a]);
        }
        acc += w * gamma.at(std::span<const int>(idx.data(), k),
                            std::span<const int>(idx.data(), k));
    } while (mi.next());
    return angular * acc;
}

DensityKernel partial_trace(const DensityKernel& gamma) {
    const int k = gamma.particles();
    if (k < 2)
        throw std::invalid_argument("partial_trace: need at least two particles");
    const int n = gamma.n();
    const auto& g = *gamma.grid();
    DensityKernel out(k - 1, gamma.grid());

    MultiIndex mi{2 * (k - 1), n};
    std::array<int, 3> up{}, pr{};
    do {
        for (int a = 0; a < k - 1; ++a) {
            up[a] = mi.idx[a];
            pr[a] = mi.idx[k - 1 + a];
        }
        cplx acc(0.0);
        std::array<int, 3> up_full{}, pr_full{};
        for (int a = 0; a < k - 1; ++a) {
            up_full[a] = up[a];
            pr_full[a] = pr[a];
        }
        for (int m = 0; m < n; ++m) {
            up_full[k - 1] = m;
            pr_full[k - 1] = m;
            acc += g.weight(m) * gamma.at(std::span<const int>(up_full.data(), k),
                                          std::span<const int>(pr_full.data(), k));
        }
        out.data()[out.flat_index(std::span<const int>(up.data(), k - 1),
                                  std::span<const int>(pr.data(), k - 1))] = two_pi * acc;
    } while (mi.next());
    return out;
}

DensityKernel collision(const DensityKernel& gamma_kplus1, int j) {
    const int kp = gamma_kplus1.particles();
    const int k = kp - 1;
    if (k < 1)
        throw std::invalid_argument("collision: input must have at least two particles");
    if (j < 1 || j > k)
        throw std::invalid_argument("collision: index j out of range");
    const int n = gamma_kplus1.n();
    DensityKernel out(k, gamma_kplus1.grid());

    MultiIndex mi{2 * k, n};
    std::array<int, 3> up{}, pr{};
    std::array<int, 4> up_full{}, pr_full{};
    size_t flat = 0;
    do {
        for (int a = 0; a < k; ++a) {
            up[a] = mi.idx[a];
            pr[a] = mi.idx[k + a];
            up_full[a] = up[a];
            pr_full[a] = pr[a];
        }
        // plus term: last pair re-inserted at r_j
        up_full[k] = up[j - 1];
        pr_full[k] = up[j - 1];
        cplx val = gamma_kplus1.at(std::span<const int>(up_full.data(), kp),
                                   std::span<const int>(pr_full.data(), kp));
        // minus term: last pair re-inserted at r'_j
        up_full[k] = pr[j - 1];
        pr_full[k] = pr[j - 1];
        val -= gamma_kplus1.at(std::span<const int>(up_full.data(), kp),
                               std::span<const int>(pr_full.data(), kp));
        out.data()[flat++] = val;
    } while (mi.next());
    return out;
}

DensityKernel collision_factorized(const RadialField& phi, int k, int j) {
    if (j < 1 || j > k)
        throw std::invalid_argument("collision_factorized: index j out of range");
    DensityKernel out = DensityKernel::factorized(phi, k);
    const int n = out.n();
    const auto rho = density(phi);
    MultiIndex mi{2 * k, n};
    size_t flat = 0;
    do {
        const double factor = rho[mi.idx[j - 1]] - rho[mi.idx[k + j - 1]];
        out.data()[flat++] *= factor;
    } while (mi.next());
    return out;
}

double kernel_l2_norm(const DensityKernel& gamma) {
    const int k = gamma.particles();
    const int n = gamma.n();
    const auto& g = *gamma.grid();
    double angular = 1.0;
    for (int a = 0; a < 2 * k; ++a)
        angular *= two_pi;
    MultiIndex mi{2 * k, n};
    size_t flat = 0;
    double acc = 0.0;
    do {
        double w = 1.0;
        for (int a = 0; a < 2 * k; ++a)
            w *= g.weight(mi.idx[a]);
        acc += w * std::norm(gamma.data()[flat++]);
    } while (mi.next());
    return std::sqrt(angular * acc);
}

double hermitian_defect(const DensityKernel& gamma) {
    const int k = gamma.particles();
    const int n = gamma.n();
    MultiIndex mi{2 * k, n};
    std::array<int, 3> up{}, pr{};
    size_t flat = 0;
    double worst = 0.0;
    do {
        for (int a = 0; a < k; ++a) {
            up[a] = mi.idx[k + a]; // swapped blocks
            pr[a] = mi.idx[a];
        }
        const cplx swapped = gamma.at(std::span<const int>(up.data(), k),
                                      std::span<const int>(pr.data(), k));
        worst = std::max(worst, std::abs(gamma.data()[flat++] - std::conj(swapped)));
    } while (mi.next());
    return worst;
}

double permutation_defect(const DensityKernel& gamma) {
    const int k = gamma.particles();
    if (k < 2)
        return 0.0;
    const int n = gamma.n();
    double worst = 0.0;
    // adjacent transpositions generate the symmetric group
    for (int p = 0; p + 1 < k; ++p) {
        MultiIndex mi{2 * k, n};
        std::array<int, 3> up{}, pr{};
        size_t flat = 0;
        do {
            for (int a = 0; a < k; ++a) {
                up[a] = mi.idx[a];
                pr[a] = mi.idx[k + a];
            }
            std::swap(up[p], up[p + 1]);
            std::swap(pr[p], pr[p + 1]);
            const cplx permuted = gamma.at(std::span<const int>(up.data(), k),
                                           std::span<const int>(pr.data(), k));
            worst = std::max(worst, std::abs(gamma.data()[flat++] - permuted));
        } while (mi.next());
    }
    return worst;
}

DensityKernel laplacian_commutator(const DensityKernel& gamma, const RadialLaplacian& lap) {
    const int k = gamma.particles();
    const int n = gamma.n();
    DensityKernel out(k, gamma.grid());

    MultiIndex mi{2 * k, n};
    size_t flat = 0;
    do {
        cplx acc(0.0);
        for (int axis = 0; axis < 2 * k; ++axis) {
            const int i = mi.idx[axis];
            // stride of this axis in the flat layout
            size_t stride = 1;
            for (int a = 2 * k - 1; a > axis; --a)
                stride *= static_cast<size_t>(n);
            cplx term = lap.diag[i] * gamma.data()[flat];
            if (i > 0)
                term += lap.sub[i] * gamma.data()[flat - stride];
            if (i < n - 1)
                term += lap.sup[i] * gamma.data()[flat + stride];
            acc += (axis < k) ? term : -term;
        }
        out.data()[flat] = acc;
        ++flat;
    } while (mi.next());
    return out;
}

DensityKernel potential_commutator(const DensityKernel& gamma, std::span<const double> a) {
    const int k = gamma.particles();
    const int n = gamma.n();
    if (static_cast<int>(a.size()) != n)
        throw std::invalid_argument("potential_commutator: potential size mismatch");
    DensityKernel out(k, gamma.grid());
    MultiIndex mi{2 * k, n};
    size_t flat = 0;
    do {
        double factor = 0.0;
        for (int axis = 0; axis < k; ++axis)
            factor += a[mi.idx[axis]] - a[mi.idx[k + axis]];
        out.data()[flat] = factor * gamma.data()[flat];
        ++flat;
    } while (mi.next());
    return out;
}

namespace {

RadialField restrict_field(const RadialField& fine, const GridPtr& coarse,
                           const std::vector<int>& idx) {
    std::vector<cplx> v(coarse->size());
    for (int j = 0; j < coarse->size(); ++j)
        v[j] = fine.values[idx[j]];
    return RadialField(coarse, std::move(v), fine.time);
}

double snapshot_spacing(const Trajectory& traj) {
    if (traj.snapshots() < 2)
        throw std::invalid_argument("hierarchy checks need at least two snapshots");
    const double ds = traj.times[1] - traj.times[0];
    for (int m = 1; m + 1 < traj.snapshots(); ++m)
        if (std::abs((traj.times[m + 1] - traj.times[m]) - ds) > 1e-9 * std::max(1.0, ds))
            throw std::invalid_argument("hierarchy checks require uniform snapshot spacing");
    return ds;
}

} // namespace

ResidualReport hierarchy_residual(const Trajectory& traj, int k, double g,
                                  const GridPtr& coarse) {
    if (k < 1 || k > 2)
        throw std::invalid_argument("hierarchy_residual: k must be 1 or 2");
    if (traj.snapshots() < 3)
        throw std::invalid_argument(
            "hierarchy_residual: centered time differences need at least three snapshots");
    const double ds = snapshot_spacing(traj);
    const auto idx = nested_indices(*traj.grid, *coarse);
    RadialLaplacian lap(*coarse);

    ResidualReport rep;
    for (int m = 1; m + 1 < traj.snapshots(); ++m) {
        const auto phi_prev = restrict_field(traj.fields[m - 1], coarse, idx);
        const auto phi_mid = restrict_field(traj.fields[m], coarse, idx);
        const auto phi_next = restrict_field(traj.fields[m + 1], coarse, idx);

        auto gamma_mid = DensityKernel::factorized(phi_mid, k);

        // i d_t gamma by centered differences
        auto defect = DensityKernel::factorized(phi_next, k);
        defect.add_scaled(DensityKernel::factorized(phi_prev, k), cplx(-1.0));
        const cplx i_over_2ds(0.0, 1.0 / (2.0 * ds));
        for (auto& v : defect.data())
            v *= i_over_2ds;

        defect.add_scaled(laplacian_commutator(gamma_mid, lap), cplx(1.0));

        // potential from the solver-grid density, sampled at the coarse nodes
        const auto rho_fine = density(traj.fields[m]);
        const auto a_fine = gauge::a_combined(*traj.grid, rho_fine, rho_fine);
        std::vector<double> a_coarse(coarse->size());
        for (int jn = 0; jn < coarse->size(); ++jn)
            a_coarse[jn] = a_fine[idx[jn]];
        defect.add_scaled(potential_commutator(gamma_mid, a_coarse), cplx(-1.0));

        if (k == 1) {
            const auto gamma2 = DensityKernel::factorized(phi_mid, 2);
            defect.add_scaled(collision(gamma2, 1), cplx(g));
        } else {
            for (int j = 1; j <= k; ++j)
                defect.add_scaled(collision_factorized(phi_mid, k, j), cplx(g));
        }

        rep.times.push_back(traj.times[m]);
        rep.residuals.push_back(kernel_l2_norm(defect));
        rep.max_residual = std::max(rep.max_residual, rep.residuals.back());
    }
    return rep;
}

namespace {

// One Crank-Nicolson step of U^(1)(dt) on a one-particle kernel: the forward
// step on the unprimed index, the conjugate step on the primed index.
void kernel_step(std::vector<cplx>& kern, int n, const FreePropagator& prop,
                 std::vector<cplx>& col) {
    for (int ip = 0; ip < n; ++ip) { // columns: fixed primed index
        for (int i = 0; i < n; ++i)
            col[i] = kern[static_cast<size_t>(i) * n + ip];
        prop.step_in_place(col);
        for (int i = 0; i < n; ++i)
            kern[static_cast<size_t>(i) * n + ip] = col[i];
    }
    for (int i = 0; i < n; ++i) { // rows: conjugate evolution
        cplx* row = &kern[static_cast<size_t>(i) * n];
        for (int ip = 0; ip < n; ++ip)
            col[ip] = std::conj(row[ip]);
        prop.step_in_place(col);
        for (int ip = 0; ip < n; ++ip)
            row[ip] = std::conj(col[ip]);
    }
}

} // namespace

DuhamelReport duhamel_check(const Trajectory& traj, double g) {
    if (traj.snapshots() == 1) {
        // t = 0: the mild form degenerates to gamma(0) = gamma(0)
        DuhamelReport rep;
        rep.time = traj.times[0];
        rep.defect = 0.0;
        rep.target_norm = kernel_l2_norm(DensityKernel::factorized(traj.fields[0], 1));
        return rep;
    }
    const double ds = snapshot_spacing(traj);
    const auto& grid = traj.grid;
    const int n = grid->size();
    const int last = traj.snapshots() - 1;

    // march U at the solver's own step so the free part matches run() exactly
    int substeps = 1;
    if (traj.dt > 0.0)
        substeps = std::max(1, static_cast<int>(std::lround(ds / traj.dt)));
    FreePropagator prop(grid, ds / substeps);

    auto fact1 = [&](int m) { return DensityKernel::factorized(traj.fields[m], 1); };

    // F_m = [a, gamma](s_m) - g * B gamma^(2)(s_m), built without the dense
    // two-particle tensor (solver grids are too fine for n^4 storage).
    auto integrand = [&](int m) {
        const auto rho = density(traj.fields[m]);
        const auto a = gauge::a_combined(*grid, rho, rho);
        auto f = potential_commutator(fact1(m), a);
        f.add_scaled(collision_factorized(traj.fields[m], 1, 1), cplx(-g));
        return f;
    };

    std::vector<cplx> col(n);

    // accumulator A_m = sum_{l<=m} c_l U(s_m - s_l) F_l, trapezoid weights
    DensityKernel acc(1, grid);
    auto f0 = integrand(0);
    acc.add_scaled(f0, cplx(0.5 * ds));
    auto gamma_t = fact1(0); // becomes U(t) gamma(0)
    for (int m = 1; m <= last; ++m) {
        for (int s = 0; s < substeps; ++s) {
            kernel_step(acc.data(), n, prop, col);
            kernel_step(gamma_t.data(), n, prop, col);
        }
        const double wgt = (m == last) ? 0.5 * ds : ds;
        acc.add_scaled(integrand(m), cplx(wgt));
    }

    // RHS = U(t) gamma(0) - i * acc
    gamma_t.add_scaled(acc, cplx(0.0, -1.0));

    auto target = fact1(last);
    target.add_scaled(gamma_t, cplx(-1.0));

    DuhamelReport rep;
    rep.time = traj.times[last];
    rep.defect = kernel_l2_norm(target);
    rep.target_norm = kernel_l2_norm(fact1(last));
    return rep;
}

} // namespace cssrad
