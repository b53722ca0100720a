// dynamics.hpp — time evolution: free Liouville flow of W, the three-term quantum Brownian
// motion master equation on rho(x, y), its decoherence-only closed-form solution, and the
// damping diagnostic.
//
// Master equation (hbar kept explicit, natural units when hbar = 1):
//   d rho/dt = (i hbar / 2 m_S)(d_x^2 - d_y^2) rho
//              - gamma (x - y)(d_x - d_y) rho
//              - (2 m_S gamma k T / hbar^2)(x - y)^2 rho
// All stencils are centered, O(dx^2), with Dirichlet zero outside the grid.

#pragma once

#include "qbm/grid.hpp"
#include "qbm/wigner.hpp"

#include <cstddef>
#include <vector>

namespace qbm::dynamics {

using grid::CMatrix;
using grid::GridStateOperator;
using grid::PhysParams;

struct TermMask {
    bool free = true;
    bool damping = true;
    bool decoherence = true;

    bool any() const noexcept { return free || damping || decoherence; }
    static TermMask only_free() { return {true, false, false}; }
    static TermMask only_damping() { return {false, true, false}; }
    static TermMask only_decoherence() { return {false, false, true}; }
};

// -(p/m) d W / d xbar on node and half rows.  The two row sets interleave with spacing dx/2,
// so a node row is differenced against its neighbouring half rows and vice versa.
wigner::WignerDistribution free_liouville_rhs(const wigner::WignerDistribution& w, double m);
// RK4 limit for the Liouville flow: dt <= (dx/2) m / max|p|.
double free_liouville_dt_bound(const wigner::PhaseSpaceGrid& g, double m);
wigner::WignerDistribution evolve_free_liouville(const wigner::WignerDistribution& w0, double m, double dt,
                                                 std::size_t steps);

// 2 m_S gamma k T / hbar^2
double decoherence_coefficient(const PhysParams& params);

CMatrix master_rhs(const GridStateOperator& rho, const PhysParams& params, const TermMask& mask);

struct StepBounds {
    double free = 0.0;        // 0.5 m_S dx^2 / hbar
    double decoherence = 0.0; // 0.1 / (coefficient * range^2)
    double damping = 0.0;     // dx / (2 gamma range)
    double limit = 0.0;       // min over enabled terms
};
StepBounds step_bounds(const grid::SpatialGrid& g, const PhysParams& params, const TermMask& mask);

struct StepDiagnostics {
    double t = 0.0;
    double trace = 0.0;
    double purity = 0.0;
    double ex = 0.0;
    double ep = 0.0;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<GridStateOperator> states;
    std::vector<StepDiagnostics> diagnostics;
    // Per run maxima over all steps.
    double max_hermitian_error = 0.0;      // before re-symmetrization
    double max_symmetrization_correction = 0.0;
    double max_trace_drift = 0.0;          // |Tr - Tr0|
    double min_diagonal = 0.0;             // most negative rho(x, x) seen (logged, not repaired)
    std::vector<double> purity_per_step;   // purity after every step, t = 0 included
};

// Throws ConfigurationError when dt exceeds the bound of any enabled term.
Trajectory evolve_rk4(const GridStateOperator& rho0, const PhysParams& params, const TermMask& mask, double dt,
                      std::size_t steps, std::size_t store_every);

// rho(x, y, t) = rho(x, y, 0) exp(-coefficient (x - y)^2 t)
GridStateOperator simplified_decoherence(const GridStateOperator& rho0, double t, const PhysParams& params);

// hbar^2 / (2 m_S gamma k T (x - y)^2); DomainError when x == y.
double decoherence_time(const PhysParams& params, double x, double y);

struct DampingCheck {
    double lhs = 0.0;           // d<P>/dt from the damping term alone
    double rhs = 0.0;           // -gamma <P>
    double rhs_two_gamma = 0.0; // -2 gamma <P>, what the damping term actually produces
    bool agrees = false;        // |lhs - rhs| <= 1e-3 |rhs| + 1e-6
    bool agrees_two_gamma = false;
};
DampingCheck damping_check(const GridStateOperator& rho, const PhysParams& params);

} // namespace qbm::dynamics
