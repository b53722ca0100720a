#include "qbm/grid.hpp"

#include "qbm/errors.hpp"

#include <cmath>
#include <cstdio>
#include <string>

namespace qbm::grid {

namespace {

Eigen::Index idx(std::size_t i) { return static_cast<Eigen::Index>(i); }

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

// Boundary samples must be negligible relative to the peak.
bool is_localized(const CVector& psi) {
    const double peak = psi.cwiseAbs().maxCoeff();
    const Eigen::Index last = psi.size() - 1;
    return std::abs(psi(0)) <= 1e-6 * peak && std::abs(psi(last)) <= 1e-6 * peak;
}

} // namespace

SpatialGrid::SpatialGrid(std::size_t n, double x_min, double x_max)
    : n_(n), x_min_(x_min), x_max_(x_max), dx_((x_max - x_min) / static_cast<double>(n)) {
    if (n < 32 || n % 2 != 0) throw_invalid("SpatialGrid", "n must be even and >= 32 (got " + std::to_string(n) + ")");
    if (!std::isfinite(x_min) || !std::isfinite(x_max) || !(x_max > x_min)) {
        throw_invalid("SpatialGrid", "require finite x_min < x_max");
    }
}

RVector SpatialGrid::points() const {
    RVector p(idx(n_));
    for (std::size_t i = 0; i < n_; ++i) p(idx(i)) = x(i);
    return p;
}

RVector SpatialGrid::weights() const {
    RVector w = RVector::Constant(idx(n_), dx_);
    w(0) *= 0.5;
    w(idx(n_ - 1)) *= 0.5;
    return w;
}

double GridWavefunction::norm_squared() const {
    return (grid.weights().array() * psi.array().abs2()).sum();
}

Complex GridStateOperator::trace() const {
    return (grid.weights().cast<Complex>().array() * rho.diagonal().array()).sum();
}

double GridStateOperator::purity() const {
    return rho.cwiseAbs2().sum() * grid.dx() * grid.dx();
}

double GridStateOperator::hermitian_error() const {
    return (rho - rho.adjoint()).cwiseAbs().maxCoeff();
}

PhysParams::PhysParams(double m_S, double m_E, double Gamma, double k_B, double T, double hbar)
    : m_S_(m_S), m_E_(m_E), Gamma_(Gamma), gamma_(0.0), k_B_(k_B), T_(T), hbar_(hbar) {
    const double all[] = {m_S, m_E, Gamma, k_B, T, hbar};
    for (double v : all) {
        if (!(v > 0.0) || !std::isfinite(v)) throw_invalid("PhysParams", "all parameters must be positive and finite");
    }
    gamma_ = (m_E_ / m_S_) * Gamma_;
    if (m_E_ / m_S_ >= 0.1) {
        warnings_.push_back("m_E/m_S = " + fmt(m_E_ / m_S_) +
                            " violates the light-environment assumption m_E/m_S << 1 (warned at >= 0.1)");
    }
}

GridWavefunction sho_eigenfunction(int n, double m, double omega, const SpatialGrid& grid) {
    if (n < 0 || n > kMaxShoLevel) throw_invalid("sho_eigenfunction", "level must lie in [0, 20]");
    if (!(m > 0.0) || !(omega > 0.0)) throw_invalid("sho_eigenfunction", "mass and frequency must be positive");
    const double turning = std::sqrt((2.0 * n + 1.0) / (m * omega));
    const double extent = std::min(-grid.x_min(), grid.x_max());
    if (turning > 0.6 * extent) {
        throw DomainError("sho_eigenfunction: grid too narrow for level " + std::to_string(n) +
                          "; require x_max >= " + fmt(turning / 0.6) + " (turning point " + fmt(turning) + ")");
    }
    const double s = std::sqrt(m * omega);
    const double c0 = std::pow(m * omega / M_PI, 0.25);
    CVector psi(idx(grid.n()));
    for (std::size_t i = 0; i < grid.n(); ++i) {
        const double xi = s * grid.x(i);
        double prev = 0.0;
        double cur = c0 * std::exp(-0.5 * xi * xi);
        for (int k = 0; k < n; ++k) {
            const double next = std::sqrt(2.0 / (k + 1.0)) * xi * cur - std::sqrt(k / (k + 1.0)) * prev;
            prev = cur;
            cur = next;
        }
        psi(idx(i)) = cur;
    }
    GridWavefunction out{grid, std::move(psi), false};
    out.normalized = std::abs(out.norm_squared() - 1.0) <= 1e-6;
    if (!out.normalized) {
        throw DomainError("sho_eigenfunction: level " + std::to_string(n) + " is not resolved by this grid spacing");
    }
    return out;
}

double sho_energy(int n, double omega) {
    if (n < 0) throw_invalid("sho_energy", "level must be nonnegative");
    return (n + 0.5) * omega;
}

GridWavefunction gaussian_wavepacket(double x0, double p0, double sigma, const SpatialGrid& grid) {
    if (!(sigma > 2.0 * grid.dx())) {
        throw_invalid("gaussian_wavepacket", "sigma must exceed 2*dx = " + fmt(2.0 * grid.dx()));
    }
    const double c = std::pow(2.0 * M_PI * sigma * sigma, -0.25);
    CVector psi(idx(grid.n()));
    for (std::size_t i = 0; i < grid.n(); ++i) {
        const double x = grid.x(i);
        const double u = x - x0;
        psi(idx(i)) = c * std::exp(-u * u / (4.0 * sigma * sigma)) * std::polar(1.0, p0 * x);
    }
    GridWavefunction out{grid, std::move(psi), false};
    if (!is_localized(out.psi) || std::abs(out.norm_squared() - 1.0) > 1e-6) {
        throw DomainError("gaussian_wavepacket: packet at x0 = " + fmt(x0) + " with sigma = " + fmt(sigma) +
                          " is clipped by the grid boundary");
    }
    out.normalized = true;
    return out;
}

GridStateOperator pure_state_operator(const GridWavefunction& psi) {
    if (!psi.normalized || std::abs(psi.norm_squared() - 1.0) > 1e-6) {
        throw_invalid("pure_state_operator", "wavefunction is not normalized");
    }
    return {psi.grid, psi.psi * psi.psi.adjoint()};
}

GridStateOperator mixed_state_operator(const std::vector<double>& weights,
                                       const std::vector<GridWavefunction>& states) {
    if (weights.empty() || weights.size() != states.size()) {
        throw_invalid("mixed_state_operator", "need one weight per state");
    }
    double total = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0)) throw_invalid("mixed_state_operator", "weights must be nonnegative");
        total += w;
    }
    if (std::abs(total - 1.0) > 1e-12) throw_invalid("mixed_state_operator", "weights must sum to 1");
    GridStateOperator out{states.front().grid, CMatrix::Zero(idx(states.front().grid.n()), idx(states.front().grid.n()))};
    for (std::size_t k = 0; k < states.size(); ++k) {
        if (!(states[k].grid == out.grid)) throw_invalid("mixed_state_operator", "grid mismatch");
        out.rho += weights[k] * pure_state_operator(states[k]).rho;
    }
    return out;
}

RVector harmonic_potential(const SpatialGrid& grid, double m, double omega) {
    return 0.5 * m * omega * omega * grid.points().array().square();
}

GridWavefunction apply_hamiltonian(const GridWavefunction& psi, const RVector& potential, double m) {
    const std::size_t n = psi.grid.n();
    if (static_cast<std::size_t>(potential.size()) != n) throw_invalid("apply_hamiltonian", "potential size mismatch");
    const double k = -1.0 / (2.0 * m * psi.grid.dx() * psi.grid.dx());
    CVector out(idx(n));
    for (std::size_t i = 0; i < n; ++i) {
        const Complex left = i > 0 ? psi.psi(idx(i - 1)) : Complex(0.0);
        const Complex right = i + 1 < n ? psi.psi(idx(i + 1)) : Complex(0.0);
        out(idx(i)) = k * (right - 2.0 * psi.psi(idx(i)) + left) + potential(idx(i)) * psi.psi(idx(i));
    }
    return {psi.grid, std::move(out), false};
}

double hamiltonian_residual(const GridWavefunction& psi, const RVector& potential, double m, double energy) {
    GridWavefunction r = apply_hamiltonian(psi, potential, m);
    r.psi -= energy * psi.psi;
    return std::sqrt(r.norm_squared() / psi.norm_squared());
}

Complex inner_product(const GridWavefunction& a, const GridWavefunction& b) {
    if (!(a.grid == b.grid)) throw_invalid("inner_product", "grid mismatch");
    return (a.grid.weights().cast<Complex>().array() * a.psi.conjugate().array() * b.psi.array()).sum();
}

double momentum_functional(const CMatrix& m, const SpatialGrid& grid) {
    const std::size_t n = grid.n();
    const double inv = 1.0 / (2.0 * grid.dx());
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Complex up = i + 1 < n ? m(idx(i + 1), idx(i)) : Complex(0.0);
        const Complex down = i > 0 ? m(idx(i - 1), idx(i)) : Complex(0.0);
        total += grid.weight(i) * ((up - down) * inv).imag();
    }
    return total;
}

double momentum_expectation(const GridStateOperator& rho) {
    return momentum_functional(rho.rho, rho.grid);
}

double position_expectation(const GridStateOperator& rho) {
    double total = 0.0;
    for (std::size_t i = 0; i < rho.grid.n(); ++i) {
        total += rho.grid.weight(i) * rho.grid.x(i) * rho.rho(idx(i), idx(i)).real();
    }
    return total;
}

} // namespace qbm::grid
