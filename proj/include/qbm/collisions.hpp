// collisions.hpp — elastic-collision kinematics, the single-collision coefficients A, B, C,
// thermal bath sampling, and a Monte Carlo estimate of the change Delta W of a system
// Wigner distribution after one collision with a bath particle.

#pragma once

#include "qbm/phase_polynomial.hpp"

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace qbm::collisions {

struct CollisionOutcome {
    double p_S_out = 0.0;
    double p_E_out = 0.0;
    double x_S_out_exact = 0.0;
    double x_E_out_exact = 0.0;
    double x_S_out_approx = 0.0;
    double x_E_out_approx = 0.0;
};

// One-dimensional elastic collision (momenta fields only).  The map is an involution with
// unit |determinant| for all positive masses.
CollisionOutcome elastic_collision(double p_S, double p_E, double m_S, double m_E);

struct PostPositions {
    double x_S_exact = 0.0;
    double x_E_exact = 0.0;
    double x_S_approx = 0.0; // x_S
    double x_E_approx = 0.0; // 2 x_S - x_E
    double gap = 0.0;        // max |exact - approx| over both particles
};
PostPositions post_positions(double x_S, double x_E, double m_S, double m_E);

struct Coefficients {
    double A = 0.0;
    double B = 0.0;
    double C = 0.0;
};
struct CoefficientPair {
    Coefficients exact;
    Coefficients truncated; // first order in m_E/m_S
};
// Delta W ~ A W + B dW/dp + C d^2W/dp^2 for a single bath momentum p_E.
// DomainError when m_E >= m_S.
CoefficientPair coefficients(double m_S, double m_E, double p_S, double p_E);

enum class BathDistribution { Gaussian, TwoPoint };

struct BathSpec {
    double m_E = 0.0;
    double T = 0.0;
    double k_B = 1.0;
    double Gamma = 0.0;
    std::uint64_t seed = 0;

    double second_moment() const noexcept { return m_E * k_B * T; } // <p_E^2>
};

// i.i.d. momenta with mean 0 and variance m_E k_B T, drawn from the stream seeded with bath.seed.
std::vector<double> sample_bath_momentum(const BathSpec& bath, std::size_t n,
                                         BathDistribution dist = BathDistribution::Gaussian);

struct MonteCarloConfig {
    std::size_t n_samples = 1000000;
    std::size_t shards = 16;
    std::size_t threads = 1;
    BathDistribution distribution = BathDistribution::Gaussian;
    std::vector<double> xbar_nodes = {-1.0, 0.0, 1.0};
    std::vector<double> p_nodes; // empty -> -3..3 in steps of 0.25
};

struct NodeEstimate {
    double xbar = 0.0;
    double p = 0.0;
    double estimate = 0.0;
    double stderr_ = 0.0;
    double prediction = 0.0; // 2 r d_p(p W) + (2 + 8 r) <p_E^2> d_p^2 W
    double drift_field = 0.0;     // d_p(p W)
    double diffusion_field = 0.0; // d_p^2 W
    bool checked = false;         // |prediction| > 1e-4
    bool agrees = false;          // within max(3 stderr, 10% |prediction|)
};

struct MonteCarloResult {
    std::vector<NodeEstimate> nodes;
    std::size_t n_samples = 0;
    double mass_ratio = 0.0;
    double drift_coeff_fit = 0.0;
    double drift_coeff_sigma = 0.0;
    double diffusion_coeff_fit = 0.0;
    double diffusion_coeff_sigma = 0.0;
    double expected_drift = 0.0;     // 2 m_E/m_S
    double expected_diffusion = 0.0; // (2 + 8 m_E/m_S) m_E k_B T
    std::size_t nodes_checked = 0;
    std::size_t nodes_agreeing = 0;
    std::vector<std::string> warnings;
};

// Each sample draws a bath momentum v and scores J W(x, p_pre) - W(x, p), where p_pre is the
// pre-collision system momentum that the collision maps onto p, and J = (m_S + m_E)/(m_S - m_E)
// is the Jacobian of trading the post-collision bath momentum for v.  Positions are left
// unchanged (collisions are local).  Shards use seeds bath.seed + shard and are reduced in
// shard order, so the result does not depend on the thread count.  When the two derivative
// fields are collinear on the nodes (the ground state) the fitted coefficients are NaN and a
// warning is attached.
MonteCarloResult monte_carlo_delta_w(const PhasePolynomial& w_S, const BathSpec& bath, double m_S,
                                     const MonteCarloConfig& cfg);

} // namespace qbm::collisions
