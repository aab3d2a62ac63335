#include "cssrad/propagator.hpp"

#include <cmath>
#include <stdexcept>

namespace cssrad {

FreePropagator::FreePropagator(GridPtr grid, double dt)
    : grid_(std::move(grid)), dt_(dt), lap_(*grid_) {
    if (!std::isfinite(dt))
        throw std::invalid_argument("FreePropagator: dt must be finite");
    const int n = grid_->size();
    const cplx itheta(0.0, dt / 2.0);
    b_sub_.resize(n);
    b_diag_.resize(n);
    b_sup_.resize(n);
    std::vector<cplx> m_diag(n), m_sup(n);
    m_sub_.resize(n);
    for (int i = 0; i < n; ++i) {
        b_sub_[i] = itheta * lap_.sub[i];
        b_diag_[i] = 1.0 + itheta * lap_.diag[i];
        b_sup_[i] = itheta * lap_.sup[i];
        m_sub_[i] = -itheta * lap_.sub[i];
        m_diag[i] = 1.0 - itheta * lap_.diag[i];
        m_sup[i] = -itheta * lap_.sup[i];
    }
    // Thomas forward elimination of M, reused by every solve.
    m_cprime_.resize(n);
    m_inv_denom_.resize(n);
    cplx denom = m_diag[0];
    if (denom == cplx(0.0))
        throw std::runtime_error("FreePropagator: singular tridiagonal system");
    m_inv_denom_[0] = 1.0 / denom;
    m_cprime_[0] = m_sup[0] * m_inv_denom_[0];
    for (int i = 1; i < n; ++i) {
        denom = m_diag[i] - m_sub_[i] * m_cprime_[i - 1];
        if (denom == cplx(0.0))
            throw std::runtime_error("FreePropagator: singular tridiagonal system");
        m_inv_denom_[i] = 1.0 / denom;
        if (i < n - 1)
            m_cprime_[i] = m_sup[i] * m_inv_denom_[i];
    }
    scratch_.resize(n);
}

void FreePropagator::step_in_place(std::span<cplx> v) const {
    const int n = grid_->size();
    auto& rhs = scratch_;
    for (int i = 0; i < n; ++i) {
        cplx acc = b_diag_[i] * v[i];
        if (i > 0)
            acc += b_sub_[i] * v[i - 1];
        if (i < n - 1)
            acc += b_sup_[i] * v[i + 1];
        rhs[i] = acc;
    }
    rhs[0] *= m_inv_denom_[0];
    for (int i = 1; i < n; ++i)
        rhs[i] = (rhs[i] - m_sub_[i] * rhs[i - 1]) * m_inv_denom_[i];
    v[n - 1] = rhs[n - 1];
    for (int i = n - 2; i >= 0; --i)
        v[i] = rhs[i] - m_cprime_[i] * v[i + 1];
}

RadialField FreePropagator::step(const RadialField& f) const {
    RadialField out = f;
    step_in_place(out.values);
    out.time = f.time + dt_;
    return out;
}

RadialField FreePropagator::advance(const RadialField& f, int nsteps) const {
    if (nsteps < 0)
        throw std::invalid_argument("FreePropagator::advance: negative step count");
    RadialField out = f;
    for (int s = 0; s < nsteps; ++s)
        step_in_place(out.values);
    out.time = f.time + nsteps * dt_;
    return out;
}

RadialField free_propagate(const RadialField& f, double dt) {
    if (dt == 0.0)
        return f;
    FreePropagator prop(f.grid, dt);
    return prop.step(f);
}

} // namespace cssrad
