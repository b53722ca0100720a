// grid.hpp — position-basis discretization: uniform grids, oscillator eigenfunctions,
// wave packets, grid state operators rho(x_i, x_j) and finite-difference Hamiltonians.
//
// Natural units (hbar = 1) throughout this header unless a PhysParams says otherwise.

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

namespace qbm::grid {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;

// x_i = x_min + i*dx, i = 0..n-1, dx = (x_max - x_min)/n.  With x_min = -x_max the
// point x_{n/2} is exactly 0.
class SpatialGrid {
public:
    SpatialGrid(std::size_t n, double x_min, double x_max);
    static SpatialGrid symmetric(std::size_t n, double x_max) { return SpatialGrid(n, -x_max, x_max); }

    std::size_t n() const noexcept { return n_; }
    double x_min() const noexcept { return x_min_; }
    double x_max() const noexcept { return x_max_; }
    double dx() const noexcept { return dx_; }
    double x(std::size_t i) const noexcept { return x_min_ + static_cast<double>(i) * dx_; }
    RVector points() const;
    // Trapezoid weights: dx in the interior, dx/2 at both ends.
    RVector weights() const;
    double weight(std::size_t i) const noexcept { return (i == 0 || i + 1 == n_) ? 0.5 * dx_ : dx_; }

    friend bool operator==(const SpatialGrid& a, const SpatialGrid& b) noexcept {
        return a.n_ == b.n_ && a.x_min_ == b.x_min_ && a.x_max_ == b.x_max_;
    }

private:
    std::size_t n_;
    double x_min_;
    double x_max_;
    double dx_;
};

struct GridWavefunction {
    SpatialGrid grid;
    CVector psi;
    bool normalized = false;

    double norm_squared() const; // trapezoid sum |psi|^2 dx
};

struct GridStateOperator {
    SpatialGrid grid;
    CMatrix rho;

    Complex trace() const;            // sum_i w_i rho_ii
    double purity() const;            // sum_ij |rho_ij|^2 dx^2
    double hermitian_error() const;   // max |rho_ij - conj(rho_ji)|
};

// Master-equation parameters.  gamma = (m_E/m_S)*Gamma is fixed at construction.
class PhysParams {
public:
    PhysParams(double m_S, double m_E, double Gamma, double k_B, double T, double hbar = 1.0);

    double m_S() const noexcept { return m_S_; }
    double m_E() const noexcept { return m_E_; }
    double Gamma() const noexcept { return Gamma_; }
    double gamma() const noexcept { return gamma_; }
    double k_B() const noexcept { return k_B_; }
    double T() const noexcept { return T_; }
    double hbar() const noexcept { return hbar_; }
    double kT() const noexcept { return k_B_ * T_; }
    double mass_ratio() const noexcept { return m_E_ / m_S_; }

    // Populated when an assumption of the derivation is not met (e.g. m_E/m_S >= 0.1).
    const std::vector<std::string>& warnings() const noexcept { return warnings_; }

private:
    double m_S_, m_E_, Gamma_, gamma_, k_B_, T_, hbar_;
    std::vector<std::string> warnings_;
};

inline constexpr int kMaxShoLevel = 20;

// Orthonormal Hermite function psi_n(x) for mass m and angular frequency omega.
// Throws DomainError if the classical turning point exceeds 0.6*x_max.
GridWavefunction sho_eigenfunction(int n, double m, double omega, const SpatialGrid& grid);
double sho_energy(int n, double omega);

// (2 pi sigma^2)^{-1/4} exp(-(x-x0)^2/(4 sigma^2)) exp(i p0 x)
GridWavefunction gaussian_wavepacket(double x0, double p0, double sigma, const SpatialGrid& grid);

// rho_ij = psi_i conj(psi_j)
GridStateOperator pure_state_operator(const GridWavefunction& psi);
// sum_k weights[k] |psi_k><psi_k|; weights must be nonnegative and sum to 1.
GridStateOperator mixed_state_operator(const std::vector<double>& weights,
                                       const std::vector<GridWavefunction>& states);

RVector harmonic_potential(const SpatialGrid& grid, double m, double omega);

// -(1/2m) second difference + V psi, Dirichlet zero outside the grid.
GridWavefunction apply_hamiltonian(const GridWavefunction& psi, const RVector& potential, double m);
// ||H psi - E psi|| / ||psi|| in the trapezoid norm.
double hamiltonian_residual(const GridWavefunction& psi, const RVector& potential, double m, double energy);

// Trapezoid inner product <a|b>.
Complex inner_product(const GridWavefunction& a, const GridWavefunction& b);

// <P> = sum_i w_i Im( (rho_{i+1,i} - rho_{i-1,i}) / (2 dx) )
double momentum_expectation(const GridStateOperator& rho);
// Same stencil applied to an arbitrary (not necessarily Hermitian) matrix, e.g. a rate d rho/dt.
double momentum_functional(const CMatrix& m, const SpatialGrid& grid);
double position_expectation(const GridStateOperator& rho);

} // namespace qbm::grid
