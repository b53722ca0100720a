#include "doctest.h"

#include "generators.hpp"
#include "qbm/errors.hpp"
#include "qbm/grid.hpp"

#include <cmath>
#include <complex>
#include <vector>

using namespace qbm::grid;

namespace {

const SpatialGrid kGrid = SpatialGrid::symmetric(512, 10.0);

// Paper's listed position-space closed forms (m = omega = 1).
double rho_closed(int n, double x, double y) {
    const double g = std::exp(-0.5 * (x * x + y * y)) / std::sqrt(M_PI);
    switch (n) {
    case 0: return g;
    case 1: return 2.0 * x * y * g;
    case 2: return (4.0 * x * x - 2.0) * (4.0 * y * y - 2.0) * g / 8.0;
    case 3: return (12.0 * x - 8.0 * x * x * x) * (12.0 * y - 8.0 * y * y * y) * g / 48.0;
    default: return NAN;
    }
}

// <n|p^8|n> from ladder operators in a truncated Fock basis; p = i (a^dag - a)/sqrt 2.
double p8_moment(int n) {
    const int d = n + 12;
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(d, d);
    for (int k = 1; k < d; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
    const Eigen::MatrixXcd p = std::complex<double>(0.0, 1.0 / std::sqrt(2.0)) * (a.adjoint() - a);
    Eigen::MatrixXcd p2 = p * p;
    Eigen::MatrixXcd p8 = p2 * p2 * p2 * p2;
    return p8(n, n).real();
}

// Spectral <P> from a direct Fourier sum on a fine momentum grid.
double spectral_momentum(const GridWavefunction& psi) {
    const auto& g = psi.grid;
    const int np = 4096;
    const double pmax = M_PI / g.dx();
    const double dp = 2.0 * pmax / np;
    double mean = 0.0, mass = 0.0;
    for (int k = 0; k < np; ++k) {
        const double p = -pmax + k * dp;
        std::complex<double> phi = 0.0;
        for (std::size_t a = 0; a < g.n(); ++a) phi += psi.psi(static_cast<Eigen::Index>(a)) * std::polar(g.dx(), -p * g.x(a));
        const double dens = std::norm(phi) / (2.0 * M_PI);
        mean += p * dens * dp;
        mass += dens * dp;
    }
    return mean / mass;
}

} // namespace

TEST_CASE("spatial grid layout") {
    CHECK(kGrid.dx() == doctest::Approx(20.0 / 512.0));
    CHECK(kGrid.x(256) == 0.0);
    CHECK(kGrid.weights().sum() == doctest::Approx(20.0 - 20.0 / 512.0));
    CHECK_THROWS_AS(SpatialGrid(31, -1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(SpatialGrid(33, -1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(SpatialGrid(64, 1.0, -1.0), std::invalid_argument);
}

TEST_CASE("oscillator eigenfunction examples") {
    const auto psi0 = sho_eigenfunction(0, 1.0, 1.0, kGrid);
    CHECK(psi0.psi(256).real() == doctest::Approx(std::pow(M_PI, -0.25)).epsilon(1e-14));
    CHECK(psi0.psi(256).real() == doctest::Approx(0.7511).epsilon(1e-4));
    for (double m : {0.5, 1.0, 3.0}) {
        CHECK(std::abs(sho_eigenfunction(1, m, 2.0, kGrid).psi(256)) == 0.0);
    }
    int parity_failures = 0;
    for (int n = 0; n <= 6; ++n) {
        const auto psi = sho_eigenfunction(n, 1.0, 1.0, kGrid);
        CHECK(psi.normalized);
        CHECK(psi.psi.imag().cwiseAbs().maxCoeff() == 0.0);
        const double sgn = (n % 2 == 0) ? 1.0 : -1.0;
        for (std::size_t i = 1; i < 256; ++i)
            if (std::abs(psi.psi(256 + i).real() - sgn * psi.psi(256 - i).real()) > 1e-12) ++parity_failures;
    }
    CHECK(parity_failures == 0);
}

TEST_CASE("orthonormality of the first six levels") {
    std::vector<GridWavefunction> psi;
    for (int n = 0; n <= 5; ++n) psi.push_back(sho_eigenfunction(n, 1.0, 1.0, kGrid));
    double worst = 0.0;
    for (int a = 0; a <= 5; ++a)
        for (int b = 0; b <= 5; ++b)
            worst = std::max(worst, std::abs(inner_product(psi[a], psi[b]) - (a == b ? 1.0 : 0.0)));
    CHECK(worst <= 1e-6);
}

TEST_CASE("turning-point guard reports the required extent") {
    CHECK_THROWS_AS(sho_eigenfunction(20, 1.0, 1.0, kGrid), qbm::DomainError);
    try {
        sho_eigenfunction(20, 1.0, 1.0, kGrid);
    } catch (const qbm::DomainError& e) {
        CHECK(std::string(e.what()).find("x_max >=") != std::string::npos);
    }
    CHECK_NOTHROW(sho_eigenfunction(20, 1.0, 1.0, SpatialGrid::symmetric(512, 11.0)));
    CHECK_THROWS_AS(sho_eigenfunction(21, 1.0, 1.0, SpatialGrid::symmetric(512, 20.0)), std::invalid_argument);
}

TEST_CASE("oscillator energies") {
    CHECK(sho_energy(0, 1.0) == 0.5);
    CHECK(sho_energy(3, 1.0) == 3.5);
    CHECK(sho_energy(0, 2.0) == 1.0);
}

TEST_CASE("pure state operators match the listed closed forms") {
    for (int n = 0; n <= 3; ++n) {
        const auto rho = pure_state_operator(sho_eigenfunction(n, 1.0, 1.0, kGrid));
        double worst = 0.0;
        for (std::size_t i = 0; i < kGrid.n(); i += 3)
            for (std::size_t j = 0; j < kGrid.n(); j += 3)
                worst = std::max(worst, std::abs(rho.rho(i, j) - rho_closed(n, kGrid.x(i), kGrid.x(j))));
        CHECK_MESSAGE(worst <= 1e-8, "n = " << n);
        CHECK((rho.rho - rho.rho.transpose()).cwiseAbs().maxCoeff() == 0.0);
    }
    GridWavefunction unnorm = sho_eigenfunction(0, 1.0, 1.0, kGrid);
    unnorm.psi *= 2.0;
    CHECK_THROWS_AS(pure_state_operator(unnorm), std::invalid_argument);
}

TEST_CASE("property: pure_state_operator output is a valid grid state operator") {
    qbm::Stream s(41);
    const SpatialGrid g = SpatialGrid::symmetric(128, 10.0);
    for (int rep = 0; rep < 20; ++rep) {
        Eigen::VectorXcd c = gen::random_vector(s, 5);
        c.normalize();
        GridWavefunction psi{g, Eigen::VectorXcd::Zero(128), false};
        for (int n = 0; n < 5; ++n) psi.psi += c(n) * sho_eigenfunction(n, 1.0, 1.0, g).psi;
        psi.normalized = std::abs(psi.norm_squared() - 1.0) <= 1e-6;
        REQUIRE(psi.normalized);
        const auto rho = pure_state_operator(psi);
        CHECK(rho.hermitian_error() <= 1e-8);
        CHECK(std::abs(rho.trace() - 1.0) <= 1e-6);
        CHECK(std::abs(rho.purity() - 1.0) <= 1e-4);
        CHECK(std::abs(rho.rho(0, 127)) <= 1e-12);
    }
}

TEST_CASE("wave packet examples") {
    const auto flat = gaussian_wavepacket(0.0, 0.0, 1.0, kGrid);
    CHECK(flat.psi.imag().cwiseAbs().maxCoeff() == 0.0);
    CHECK(std::abs(flat.psi(200) - flat.psi(312)) == 0.0);

    const auto g0 = gaussian_wavepacket(0.0, 0.0, 1.0 / std::sqrt(2.0), kGrid);
    const auto psi0 = sho_eigenfunction(0, 1.0, 1.0, kGrid);
    CHECK((g0.psi - psi0.psi).cwiseAbs().maxCoeff() <= 1e-8);

    SUBCASE("moments of a boosted packet") {
        const auto w = gaussian_wavepacket(0.0, 2.0, 1.0, kGrid);
        const auto rho = pure_state_operator(w);
        CHECK(std::abs(position_expectation(rho)) <= 1e-4);
        // the state carries <P> = p0 exactly (spectral oracle)
        CHECK(std::abs(spectral_momentum(w) - 2.0) <= 1e-4);
        // the centered-difference estimator has its own O(dx^2) bias:
        // sin(p0 dx)/dx * exp(-dx^2 / (8 sigma^2))
        const double dx = kGrid.dx();
        const double stencil = std::sin(2.0 * dx) / dx * std::exp(-dx * dx / 8.0);
        CHECK(std::abs(momentum_expectation(rho) - stencil) <= 1e-8);
        CHECK(std::abs(momentum_expectation(rho) - 2.0) <= 3e-3);
    }
    SUBCASE("displaced packet") {
        const auto rho = pure_state_operator(gaussian_wavepacket(1.5, -0.7, 1.0, kGrid));
        CHECK(position_expectation(rho) == doctest::Approx(1.5).epsilon(1e-3));
        CHECK(std::abs(momentum_expectation(rho) + 0.7) <= 1e-3);
    }
    CHECK_THROWS_AS(gaussian_wavepacket(9.0, 0.0, 1.0, kGrid), qbm::DomainError);
    CHECK_THROWS_AS(gaussian_wavepacket(0.0, 0.0, kGrid.dx(), kGrid), std::invalid_argument);
}

TEST_CASE("expectations of symmetric states") {
    const auto r0 = pure_state_operator(sho_eigenfunction(0, 1.0, 1.0, kGrid));
    CHECK(std::abs(momentum_expectation(r0)) <= 1e-12);
    CHECK(std::abs(position_expectation(r0)) <= 1e-12);
    const auto r1 = pure_state_operator(sho_eigenfunction(1, 1.0, 1.0, kGrid));
    CHECK(std::abs(position_expectation(r1)) <= 1e-12);
}

TEST_CASE("Hamiltonian residual matches the O(dx^2) stencil prediction") {
    const auto v = harmonic_potential(kGrid, 1.0, 1.0);
    // leading truncation of the 3-point Laplacian: (dx^2/24) ||p^4 psi|| / ||psi||
    const double dx2 = kGrid.dx() * kGrid.dx();
    for (int n = 0; n <= 5; ++n) {
        const auto psi = sho_eigenfunction(n, 1.0, 1.0, kGrid);
        const double r = hamiltonian_residual(psi, v, 1.0, sho_energy(n, 1.0));
        const double predicted = dx2 / 24.0 * std::sqrt(p8_moment(n));
        CHECK_MESSAGE(std::abs(r / predicted - 1.0) <= 0.02, "n = " << n << " residual " << r);
    }
    const auto psi0 = sho_eigenfunction(0, 1.0, 1.0, kGrid);
    CHECK(hamiltonian_residual(psi0, v, 1.0, 0.5) <= 1e-3);
    CHECK(hamiltonian_residual(sho_eigenfunction(1, 1.0, 1.0, kGrid), v, 1.0, 1.5) <= 1e-3);
}

TEST_CASE("property: residual converges at second order under refinement") {
    const SpatialGrid coarse = SpatialGrid::symmetric(256, 10.0);
    for (int n = 0; n <= 5; ++n) {
        const double rc = hamiltonian_residual(sho_eigenfunction(n, 1.0, 1.0, coarse),
                                               harmonic_potential(coarse, 1.0, 1.0), 1.0, n + 0.5);
        const double rf = hamiltonian_residual(sho_eigenfunction(n, 1.0, 1.0, kGrid),
                                               harmonic_potential(kGrid, 1.0, 1.0), 1.0, n + 0.5);
        CHECK_MESSAGE(rc / rf == doctest::Approx(4.0).epsilon(0.2), "n = " << n);
    }
}

TEST_CASE("free Hamiltonian annihilates a constant in the interior") {
    GridWavefunction c{kGrid, Eigen::VectorXcd::Constant(512, 0.3), false};
    const auto h = apply_hamiltonian(c, RVector::Zero(512), 1.0);
    CHECK(h.psi.segment(1, 510).cwiseAbs().maxCoeff() <= 1e-10);
    // Dirichlet boundary: the end points see a missing neighbour
    CHECK(std::abs(h.psi(0)) > 1.0);
}

TEST_CASE("physical parameters") {
    const PhysParams p(1.0, 0.01, 10.0, 1.0, 2.0);
    CHECK(p.gamma() == doctest::Approx(0.1));
    CHECK(p.kT() == 2.0);
    CHECK(p.warnings().empty());
    const PhysParams heavy(1.0, 0.2, 1.0, 1.0, 1.0);
    CHECK(heavy.warnings().size() == 1);
    CHECK_THROWS_AS(PhysParams(1.0, 0.0, 1.0, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(PhysParams(1.0, 0.1, 1.0, 1.0, -1.0), std::invalid_argument);
}

TEST_CASE("mixtures") {
    const auto a = sho_eigenfunction(0, 1.0, 1.0, kGrid);
    const auto b = sho_eigenfunction(1, 1.0, 1.0, kGrid);
    const auto rho = mixed_state_operator({0.25, 0.75}, {a, b});
    CHECK(std::abs(rho.trace() - 1.0) <= 1e-10);
    CHECK(rho.purity() == doctest::Approx(0.25 * 0.25 + 0.75 * 0.75).epsilon(1e-8));
    CHECK_THROWS_AS(mixed_state_operator({0.5, 0.6}, {a, b}), std::invalid_argument);
}
