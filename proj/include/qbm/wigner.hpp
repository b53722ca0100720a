// wigner.hpp — Wigner phase-space transforms on the position grid.
//
// Discretization: the difference coordinate delta is sampled with step 2*dx, so
// xbar +- delta/2 are grid nodes.  Rows at xbar = x_i ("node rows") pair rho(i+j, i-j);
// rows at xbar = x_i + dx/2 ("half rows") pair rho(i+j+1, i-j).  Together they touch
// every matrix element exactly once, which makes the inverse exact.  The momentum axis is
// p_k = pi (k - n/2) / (n dx), the reciprocal lattice of the delta grid.

#pragma once

#include "qbm/grid.hpp"
#include "qbm/phase_polynomial.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace qbm::wigner {

using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

struct PhaseSpaceGrid {
    grid::SpatialGrid space;
    RVector xbar; // node positions, same as space.points()
    RVector p;
    double dp = 0.0;

    explicit PhaseSpaceGrid(const grid::SpatialGrid& g);

    std::size_t n() const noexcept { return space.n(); }
    double dxbar() const noexcept { return space.dx(); }
    double delta_step() const noexcept { return 2.0 * space.dx(); }
    double xbar_half(std::size_t i) const noexcept { return space.x(i) + 0.5 * space.dx(); }

    friend bool operator==(const PhaseSpaceGrid& a, const PhaseSpaceGrid& b) noexcept { return a.space == b.space; }
};

struct WignerDistribution {
    PhaseSpaceGrid grid;
    RMatrix w;      // w(i, k) = W(x_i, p_k)
    RMatrix w_half; // w_half(i, k) = W(x_i + dx/2, p_k)
    double imag_residual = 0.0;

    // sum w dxbar dp over node rows
    double total_mass() const;
};

WignerDistribution wigner_transform(const grid::GridStateOperator& rho);
grid::GridStateOperator inverse_wigner(const WignerDistribution& w);

// Integral over p at each node xbar_i.
RVector position_marginal(const WignerDistribution& w);
// Integral over xbar at each p_k, using node and half rows (spacing dx/2).
RVector momentum_marginal(const WignerDistribution& w);
// <p|rho|p> = (dx^2 / 2 pi) sum_ab exp(-i p (x_a - x_b)) rho_ab on the given momenta.
RVector momentum_density(const grid::GridStateOperator& rho, const RVector& p);

// Oscillator closed forms (m = omega = hbar = 1), n = 0..3.  n > 3 throws UnsupportedError.
const PhasePolynomial& sho_wigner_polynomial(int n);
double sho_wigner_closed(int n, double xbar, double p);
// Samples a closed form on both row sets of the phase-space grid.
WignerDistribution sample_closed_form(int n, const PhaseSpaceGrid& g);

// W_{1+2}(x1, p1, x2, p2) = W1(x1, p1) W2(x2, p2).  The first factor keeps both row sets
// so that project_out returns an invertible distribution.
class CompositeWigner {
public:
    CompositeWigner(const WignerDistribution& w1, const WignerDistribution& w2);

    const PhaseSpaceGrid& grid() const noexcept { return grid_; }
    std::size_t n() const noexcept { return n_; }
    double operator()(std::size_t i1, std::size_t k1, std::size_t i2, std::size_t k2) const {
        return data_[((i1 * n_ + k1) * n_ + i2) * n_ + k2];
    }
    double half(std::size_t i1, std::size_t k1, std::size_t i2, std::size_t k2) const {
        return data_[offset_ + ((i1 * n_ + k1) * n_ + i2) * n_ + k2];
    }

    static constexpr std::size_t kMaxElements = std::size_t{1} << 27;

private:
    PhaseSpaceGrid grid_;
    std::size_t n_;
    std::size_t offset_;
    std::vector<double> data_;
};

CompositeWigner composite_wigner(const WignerDistribution& w1, const WignerDistribution& w2);
// Integrates out (x2, p2).
WignerDistribution project_out(const CompositeWigner& wc);

struct ConvolutionDiagnostics {
    double mass_before = 0.0;
    double mass_after = 0.0;
    double mass_ratio = 0.0; // after / before; pi for the unnormalized unit kernel
    double min_value = 0.0;
    double max_value = 0.0;
};

// W^c(X, P) = int dxbar dp W(xbar, p) exp(-(X - xbar)^2 - (P - p)^2), unnormalized kernel.
WignerDistribution gaussian_convolve(const WignerDistribution& w, ConvolutionDiagnostics* diag = nullptr);

} // namespace qbm::wigner
