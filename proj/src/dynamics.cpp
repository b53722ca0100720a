#include "qbm/dynamics.hpp"

#include "qbm/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

namespace qbm::dynamics {

namespace {

using Complex = std::complex<double>;
using wigner::RMatrix;
using wigner::WignerDistribution;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

// Interleaved row r: even -> node row r/2, odd -> half row r/2.
double row_value(const WignerDistribution& w, long r, Eigen::Index k) {
    return (r % 2 == 0) ? w.w(r / 2, k) : w.w_half(r / 2, k);
}

void axpy(WignerDistribution& y, double a, const WignerDistribution& x) {
    y.w += a * x.w;
    y.w_half += a * x.w_half;
}

StepDiagnostics diagnose(const GridStateOperator& rho, double t) {
    return {t, rho.trace().real(), rho.purity(), grid::position_expectation(rho), grid::momentum_expectation(rho)};
}

} // namespace

WignerDistribution free_liouville_rhs(const WignerDistribution& w, double m) {
    if (!(m > 0.0)) throw_invalid("free_liouville_rhs", "mass must be positive");
    const long n = static_cast<long>(w.grid.n());
    const long rows = 2 * n;
    const double h = 0.5 * w.grid.dxbar();
    WignerDistribution out{w.grid, RMatrix(n, n), RMatrix(n, n), 0.0};
    for (long r = 0; r < rows; ++r) {
        for (Eigen::Index k = 0; k < n; ++k) {
            double d;
            if (r == 0) d = (row_value(w, 1, k) - row_value(w, 0, k)) / h;
            else if (r == rows - 1) d = (row_value(w, r, k) - row_value(w, r - 1, k)) / h;
            else d = (row_value(w, r + 1, k) - row_value(w, r - 1, k)) / (2.0 * h);
            const double v = -(w.grid.p(k) / m) * d;
            if (r % 2 == 0) out.w(r / 2, k) = v;
            else out.w_half(r / 2, k) = v;
        }
    }
    return out;
}

double free_liouville_dt_bound(const wigner::PhaseSpaceGrid& g, double m) {
    return 0.5 * g.dxbar() * m / g.p.cwiseAbs().maxCoeff();
}

WignerDistribution evolve_free_liouville(const WignerDistribution& w0, double m, double dt, std::size_t steps) {
    const double bound = free_liouville_dt_bound(w0.grid, m);
    if (!(dt > 0.0) || dt > bound) {
        throw ConfigurationError("evolve_free_liouville: dt = " + fmt(dt) + " must lie in (0, " + fmt(bound) +
                                 "] (bound (dx/2) m / max|p|)");
    }
    WignerDistribution w = w0;
    for (std::size_t s = 0; s < steps; ++s) {
        const auto k1 = free_liouville_rhs(w, m);
        auto tmp = w;
        axpy(tmp, 0.5 * dt, k1);
        const auto k2 = free_liouville_rhs(tmp, m);
        tmp = w;
        axpy(tmp, 0.5 * dt, k2);
        const auto k3 = free_liouville_rhs(tmp, m);
        tmp = w;
        axpy(tmp, dt, k3);
        const auto k4 = free_liouville_rhs(tmp, m);
        axpy(w, dt / 6.0, k1);
        axpy(w, dt / 3.0, k2);
        axpy(w, dt / 3.0, k3);
        axpy(w, dt / 6.0, k4);
    }
    return w;
}

double decoherence_coefficient(const PhysParams& params) {
    return 2.0 * params.m_S() * params.gamma() * params.kT() / (params.hbar() * params.hbar());
}

CMatrix master_rhs(const GridStateOperator& rho, const PhysParams& params, const TermMask& mask) {
    if (!mask.any()) throw_invalid("master_rhs", "term mask enables no term");
    const auto& g = rho.grid;
    const Eigen::Index n = static_cast<Eigen::Index>(g.n());
    const CMatrix& r = rho.rho;
    const double dx = g.dx();
    const Complex c_free(0.0, params.hbar() / (2.0 * params.m_S() * dx * dx));
    const double c_damp = params.gamma() / (2.0 * dx);
    const double c_dec = decoherence_coefficient(params);
    auto at = [&](Eigen::Index i, Eigen::Index j) -> Complex {
        return (i < 0 || i >= n || j < 0 || j >= n) ? Complex(0.0) : r(i, j);
    };

    CMatrix out(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        const double y = g.x(static_cast<std::size_t>(j));
        for (Eigen::Index i = 0; i < n; ++i) {
            const double x = g.x(static_cast<std::size_t>(i));
            const Complex c = r(i, j);
            Complex v(0.0);
            if (mask.free) {
                // (d_x^2 - d_y^2) rho: the -2c terms cancel between the two second differences
                v += c_free * ((at(i + 1, j) + at(i - 1, j)) - (at(i, j + 1) + at(i, j - 1)));
            }
            if (mask.damping) {
                v -= c_damp * (x - y) * ((at(i + 1, j) - at(i - 1, j)) - (at(i, j + 1) - at(i, j - 1)));
            }
            if (mask.decoherence) v -= c_dec * (x - y) * (x - y) * c;
            out(i, j) = v;
        }
    }
    return out;
}

StepBounds step_bounds(const grid::SpatialGrid& g, const PhysParams& params, const TermMask& mask) {
    const double range = g.x_max() - g.x_min();
    constexpr double inf = std::numeric_limits<double>::infinity();
    StepBounds b;
    b.free = 0.5 * params.m_S() * g.dx() * g.dx() / params.hbar();
    b.decoherence = 0.1 / (decoherence_coefficient(params) * range * range);
    b.damping = g.dx() / (2.0 * params.gamma() * range);
    b.limit = std::min({mask.free ? b.free : inf, mask.decoherence ? b.decoherence : inf,
                        mask.damping ? b.damping : inf});
    return b;
}

Trajectory evolve_rk4(const GridStateOperator& rho0, const PhysParams& params, const TermMask& mask, double dt,
                      std::size_t steps, std::size_t store_every) {
    if (!mask.any()) throw ConfigurationError("evolve_rk4: term mask enables no term");
    if (store_every == 0) throw ConfigurationError("evolve_rk4: store_every must be >= 1");
    if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigurationError("evolve_rk4: dt must be positive");
    const StepBounds b = step_bounds(rho0.grid, params, mask);
    auto check = [&](bool on, double bound, const char* what) {
        if (on && dt > bound) {
            throw ConfigurationError("evolve_rk4: dt = " + fmt(dt) + " exceeds the " + what + " bound " + fmt(bound));
        }
    };
    check(mask.free, b.free, "free-term (0.5 m_S dx^2 / hbar)");
    check(mask.decoherence, b.decoherence, "decoherence (0.1 / (2 m_S gamma k T range^2 / hbar^2))");
    check(mask.damping, b.damping, "damping (dx / (2 gamma range))");

    Trajectory traj;
    GridStateOperator rho = rho0;
    const double tr0 = rho0.trace().real();
    auto store = [&](double t) {
        traj.times.push_back(t);
        traj.states.push_back(rho);
        traj.diagnostics.push_back(diagnose(rho, t));
    };
    store(0.0);
    traj.purity_per_step.push_back(rho.purity());
    traj.min_diagonal = rho.rho.diagonal().real().minCoeff();

    GridStateOperator tmp = rho;
    for (std::size_t s = 1; s <= steps; ++s) {
        const CMatrix k1 = master_rhs(rho, params, mask);
        tmp.rho = rho.rho + (0.5 * dt) * k1;
        const CMatrix k2 = master_rhs(tmp, params, mask);
        tmp.rho = rho.rho + (0.5 * dt) * k2;
        const CMatrix k3 = master_rhs(tmp, params, mask);
        tmp.rho = rho.rho + dt * k3;
        const CMatrix k4 = master_rhs(tmp, params, mask);
        rho.rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

        const double herr = rho.hermitian_error();
        traj.max_hermitian_error = std::max(traj.max_hermitian_error, herr);
        traj.max_symmetrization_correction = std::max(traj.max_symmetrization_correction, 0.5 * herr);
        rho.rho = 0.5 * (rho.rho + rho.rho.adjoint()).eval();

        traj.max_trace_drift = std::max(traj.max_trace_drift, std::abs(rho.trace().real() - tr0));
        traj.min_diagonal = std::min(traj.min_diagonal, rho.rho.diagonal().real().minCoeff());
        traj.purity_per_step.push_back(rho.purity());
        if (s % store_every == 0 || s == steps) store(static_cast<double>(s) * dt);
    }
    return traj;
}

GridStateOperator simplified_decoherence(const GridStateOperator& rho0, double t, const PhysParams& params) {
    if (!(t >= 0.0)) throw_invalid("simplified_decoherence", "t must be nonnegative");
    const double c = decoherence_coefficient(params) * t;
    GridStateOperator out = rho0;
    const auto& g = rho0.grid;
    for (std::size_t j = 0; j < g.n(); ++j)
        for (std::size_t i = 0; i < g.n(); ++i) {
            if (i == j) continue;
            const double d = g.x(i) - g.x(j);
            out.rho(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) *= std::exp(-c * d * d);
        }
    return out;
}

double decoherence_time(const PhysParams& params, double x, double y) {
    if (x == y) throw DomainError("decoherence_time: x == y has no decoherence (infinite e-folding time)");
    const double d = x - y;
    return 1.0 / (decoherence_coefficient(params) * d * d);
}

DampingCheck damping_check(const GridStateOperator& rho, const PhysParams& params) {
    DampingCheck c;
    c.lhs = grid::momentum_functional(master_rhs(rho, params, TermMask::only_damping()), rho.grid);
    const double p = grid::momentum_expectation(rho);
    c.rhs = -params.gamma() * p;
    c.rhs_two_gamma = -2.0 * params.gamma() * p;
    c.agrees = std::abs(c.lhs - c.rhs) <= 1e-3 * std::abs(c.rhs) + 1e-6;
    c.agrees_two_gamma = std::abs(c.lhs - c.rhs_two_gamma) <= 1e-3 * std::abs(c.rhs_two_gamma) + 1e-6;
    return c;
}

} // namespace qbm::dynamics
