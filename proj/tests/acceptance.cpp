// acceptance.cpp — one PASS/FAIL line per acceptance criterion; exits nonzero on any FAIL.

#include "generators.hpp"
#include "qbm/collisions.hpp"
#include "qbm/dynamics.hpp"
#include "qbm/formal.hpp"
#include "qbm/rational.hpp"
#include "qbm/wigner.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>

using namespace qbm;
using grid::GridStateOperator;
using grid::PhysParams;
using grid::SpatialGrid;

namespace {

int failures = 0;

void report(int id, const char* title, bool ok, const std::string& detail) {
    std::printf("%s [%2d] %s: %s\n", ok ? "PASS" : "FAIL", id, title, detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, a, b, c, d);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Independent oracle: W_n = (-1)^n / pi exp(-u) L_n(2u), u = x^2 + p^2.
double laguerre(int n, double z) {
    double a = 1.0, b = 1.0 - z;
    if (n == 0) return a;
    for (int k = 1; k < n; ++k) {
        const double c = ((2 * k + 1 - z) * b - k * a) / (k + 1);
        a = b;
        b = c;
    }
    return b;
}
double w_oracle(int n, double x, double p) {
    const double u = x * x + p * p;
    return (n % 2 ? -1.0 : 1.0) / M_PI * std::exp(-u) * laguerre(n, 2.0 * u);
}

GridStateOperator sho(int n, const SpatialGrid& g) {
    return grid::pure_state_operator(grid::sho_eigenfunction(n, 1.0, 1.0, g));
}

std::size_t node(const SpatialGrid& g, double x) {
    return static_cast<std::size_t>(std::llround((x - g.x_min()) / g.dx()));
}

// ---------------------------------------------------------------------------------------

void criterion_1() {
    const SpatialGrid g = SpatialGrid::symmetric(512, 10.0);
    double worst = 0.0, slowest = 0.0;
    for (int n = 0; n <= 3; ++n) {
        const auto t0 = std::chrono::steady_clock::now();
        const auto w = wigner::wigner_transform(sho(n, g));
        slowest = std::max(slowest, seconds_since(t0));
        for (Eigen::Index i = 0; i < 512; ++i)
            for (Eigen::Index k = 0; k < 512; ++k) {
                worst = std::max(worst, std::abs(w.w(i, k) - w_oracle(n, w.grid.xbar(i), w.grid.p(k))));
                worst = std::max(worst, std::abs(w.w_half(i, k) - w_oracle(n, w.grid.xbar_half(i), w.grid.p(k))));
            }
    }
    report(1, "Wigner oracle W0..W3 (n=512, x_max=10)", worst <= 2e-3 && slowest < 10.0,
           fmt("max |W_num - W_closed| = %.3e (tol 2e-3); slowest state %.2f s (limit 10 s)", worst, slowest));
}

// Unit-trace inputs shared by criteria 2 and 3: psi_0..psi_4, random mixtures of them, and
// random mixtures of displaced packets.
std::vector<GridStateOperator> marginal_inputs(const SpatialGrid& g) {
    std::vector<GridStateOperator> v;
    std::vector<grid::GridWavefunction> levels;
    for (int n = 0; n <= 4; ++n) {
        levels.push_back(grid::sho_eigenfunction(n, 1.0, 1.0, g));
        v.push_back(grid::pure_state_operator(levels.back()));
    }
    Stream s(2024);
    for (int rep = 0; rep < 3; ++rep) v.push_back(grid::mixed_state_operator(gen::random_weights(s, 5), levels));
    for (int rep = 0; rep < 3; ++rep) {
        std::vector<grid::GridWavefunction> packets;
        for (int k = 0; k < 3; ++k)
            packets.push_back(grid::gaussian_wavepacket(3.0 * s.uniform() - 1.5, 3.0 * s.uniform() - 1.5, 0.6 + 0.4 * s.uniform(), g));
        v.push_back(grid::mixed_state_operator(gen::random_weights(s, 3), packets));
    }
    return v;
}

void criteria_2_3() {
    const SpatialGrid g = SpatialGrid::symmetric(256, 10.0);
    double pos = 0.0, mom = 0.0, imag = 0.0, mass = 0.0;
    const auto inputs = marginal_inputs(g);
    for (const auto& rho : inputs) {
        const auto w = wigner::wigner_transform(rho);
        pos = std::max(pos, (wigner::position_marginal(w) - rho.rho.diagonal().real()).cwiseAbs().maxCoeff());
        mom = std::max(mom, (wigner::momentum_marginal(w) - wigner::momentum_density(rho, w.grid.p)).cwiseAbs().maxCoeff());
        imag = std::max(imag, w.imag_residual);
        mass = std::max(mass, std::abs(w.total_mass() - rho.trace()));
    }
    report(2, "Marginals (psi_0..psi_4 and random mixtures)", pos <= 1e-4 && mom <= 1e-4,
           fmt("max |int W dp - diag rho| = %.3e, max |int W dxbar - <p|rho|p>| = %.3e (tol 1e-4) over %.0f inputs",
               pos, mom, static_cast<double>(inputs.size())));
    report(3, "Reality and normalization", imag <= 1e-8 && mass <= 1e-4,
           fmt("max discarded imaginary part = %.3e (tol 1e-8); max |mass - 1| = %.3e (tol 1e-4)", imag, mass));
}

void criterion_4() {
    using exact::ComplexRational;
    using exact::Rational;
    const auto rho = exact::bell_state();
    const auto red = exact::partial_trace(rho, 2, 2, true);
    const ComplexRational one{Rational(1), Rational(0)}, half{Rational(1, 2), Rational(0)}, zero{};
    const auto r = exact::bloch(red);
    const bool ok = exact::purity(rho) == one && red(0, 0) == half && red(1, 1) == half && red(0, 1) == zero &&
                    red(1, 0) == zero && exact::purity(red) == half && r[0] == zero && r[1] == zero && r[2] == zero;
    const auto fred = formal::partial_trace(formal::bell_state(), {2, 2}, formal::Subsystem::B);
    const bool fok = std::abs(formal::purity(formal::bell_state()) - 1.0) <= 1e-12 &&
                     std::abs(formal::purity(fred) - 0.5) <= 1e-12 && formal::bloch_from_state(fred).norm() <= 1e-12;
    report(4, "Bell state", ok && fok,
           "exact: Tr rho^2 = " + exact::purity(rho).re.str() + ", reduced = diag(" + red(0, 0).re.str() + ", " +
               red(1, 1).re.str() + "), reduced purity = " + exact::purity(red).re.str() + ", |r| = 0; float path " +
               (fok ? "agrees" : "disagrees"));
}

void criterion_5() {
    const SpatialGrid g = SpatialGrid::symmetric(512, 10.0), fine = SpatialGrid::symmetric(1024, 10.0);
    const auto V = grid::harmonic_potential(g, 1.0, 1.0), Vf = grid::harmonic_potential(fine, 1.0, 1.0);
    double worst = 0.0, rmin = 1e300, rmax = 0.0;
    std::string levels;
    for (int n = 0; n <= 5; ++n) {
        const double e = grid::sho_energy(n, 1.0);
        const double r = grid::hamiltonian_residual(grid::sho_eigenfunction(n, 1.0, 1.0, g), V, 1.0, e);
        const double rf = grid::hamiltonian_residual(grid::sho_eigenfunction(n, 1.0, 1.0, fine), Vf, 1.0, e);
        worst = std::max(worst, r);
        rmin = std::min(rmin, r / rf);
        rmax = std::max(rmax, r / rf);
        levels += fmt("%.2e ", r);
    }
    report(5, "Schroedinger residual n<=5 (n=512, x_max=10)", worst <= 1e-3 && rmin >= 3.2 && rmax <= 4.8,
           "residuals " + levels + fmt("(tol 1e-3); refinement ratio %.3f..%.3f (want 4 +- 0.8)", rmin, rmax));
}

void criterion_6() {
    const auto t0 = std::chrono::steady_clock::now();
    const SpatialGrid g = SpatialGrid::symmetric(256, 10.0);
    const PhysParams p(1.0, 0.01, 10.0, 1.0, 1.0); // gamma = 0.1
    const auto rho0 = grid::pure_state_operator(grid::gaussian_wavepacket(0.0, 1.0, 1.0, g));
    const auto traj = dynamics::evolve_rk4(rho0, p, dynamics::TermMask::only_damping(), 0.005, 200, 20);
    double worst = 0.0, worst2 = 0.0;
    for (const auto& d : traj.diagnostics) {
        const double ratio = d.ep / traj.diagnostics.front().ep;
        worst = std::max(worst, std::abs(ratio / std::exp(-p.gamma() * d.t) - 1.0));
        worst2 = std::max(worst2, std::abs(ratio / std::exp(-2.0 * p.gamma() * d.t) - 1.0));
    }
    const double elapsed = seconds_since(t0);
    const double ratio1 = traj.diagnostics.back().ep / traj.diagnostics.front().ep;
    report(6, "Damping law <P>(t) = <P>(0) exp(-gamma t) (gamma = 0.1, t <= 1)",
           worst <= 1e-3 && elapsed < 30.0,
           fmt("<P>(1)/<P>(0) = %.5f vs exp(-0.1) = %.5f; max rel. error %.3e (tol 1e-3); %.2f s", ratio1,
               std::exp(-0.1), worst, elapsed));
    std::printf("     [ 6] diagnostic: against exp(-2 gamma t) the max rel. error is %.3e; the damping term as "
                "written gives d<P>/dt = -2 gamma <P>\n",
                worst2);
}

void criterion_7() {
    // analytic
    const SpatialGrid g = SpatialGrid::symmetric(256, 8.0);
    const PhysParams p(1.0, 0.01, 10.0, 1.0, 2.5);
    const auto rho0 = sho(0, g);
    const double td = dynamics::decoherence_time(p, 1.0, -1.0);
    const auto i = node(g, 1.0), j = node(g, -1.0);
    const double analytic = (dynamics::simplified_decoherence(rho0, td, p).rho(i, j) / rho0.rho(i, j)).real();
    // full RK4, decoherence dominated: 2 m gamma kT = 50, range^2 = 144
    const SpatialGrid gc = SpatialGrid::symmetric(96, 6.0);
    const PhysParams pc(1.0, 0.001, 10.0, 1.0, 2500.0);
    const auto rc = sho(0, gc);
    const double tdc = dynamics::decoherence_time(pc, 1.0, -1.0);
    const auto bound = dynamics::step_bounds(gc, pc, dynamics::TermMask{}).limit;
    const auto steps = static_cast<std::size_t>(std::ceil(tdc / bound));
    const auto traj = dynamics::evolve_rk4(rc, pc, dynamics::TermMask{}, tdc / steps, steps, steps);
    const auto ic = node(gc, 1.0), jc = node(gc, -1.0);
    const double full = std::abs(traj.states.back().rho(ic, jc) / rc.rho(ic, jc));
    const double e1 = std::exp(-1.0);
    report(7, "Decoherence e-folding at t = t_d",
           std::abs(analytic - e1) <= 1e-6 && std::abs(full / e1 - 1.0) <= 0.05,
           fmt("analytic ratio %.9f (|.-1/e| = %.1e, tol 1e-6); full RK4 ratio %.5f (rel. %.2e, tol 5%%)", analytic,
               std::abs(analytic - e1), full, std::abs(full / e1 - 1.0)));
}

void criterion_8() {
    const SpatialGrid g = SpatialGrid::symmetric(256, 8.0);
    const PhysParams p(1.0, 0.01, 10.0, 1.0, 2.5);
    const auto psi = grid::sho_eigenfunction(3, 1.0, 1.0, g);
    const auto rho0 = grid::pure_state_operator(psi);
    const double t = 20.0 * dynamics::decoherence_time(p, 0.0, g.dx());
    const auto late = dynamics::simplified_decoherence(rho0, t, p);
    double off = 0.0, off0 = 0.0;
    for (Eigen::Index a = 0; a < 256; ++a)
        for (Eigen::Index b = 0; b < 256; ++b)
            if (a != b) {
                off = std::max(off, std::abs(late.rho(a, b)));
                off0 = std::max(off0, std::abs(rho0.rho(a, b)));
            }
    const double diag = (late.rho.diagonal().real() - psi.psi.cwiseAbs2()).cwiseAbs().maxCoeff();
    report(8, "Classical limit of psi_3", diag <= 1e-10 && off <= 1e-6 * off0,
           fmt("max |diag - |psi_3|^2| = %.2e (tol 1e-10); off-diagonal max / initial = %.2e (tol 1e-6)", diag,
               off / off0));
}

void criterion_9() {
    Stream s(9);
    double wp = 0.0, we = 0.0;
    for (int k = 0; k < 1000000; ++k) {
        const double mS = std::exp(4.0 * s.uniform() - 2.0), mE = std::exp(4.0 * s.uniform() - 2.0);
        const double pS = 20.0 * s.uniform() - 10.0, pE = 20.0 * s.uniform() - 10.0;
        const auto c = collisions::elastic_collision(pS, pE, mS, mE);
        const double e0 = pS * pS / (2 * mS) + pE * pE / (2 * mE);
        const double e1 = c.p_S_out * c.p_S_out / (2 * mS) + c.p_E_out * c.p_E_out / (2 * mE);
        wp = std::max(wp, std::abs(c.p_S_out + c.p_E_out - pS - pE) / (std::abs(pS) + std::abs(pE)));
        we = std::max(we, std::abs(e1 - e0) / e0);
    }
    auto sup = [](double r, double collisions::Coefficients::*f) {
        double w = 0.0;
        for (int i = -20; i <= 20; ++i)
            for (int j = -20; j <= 20; ++j) {
                const auto c = collisions::coefficients(1.0, r, 0.5 * i, 0.5 * j);
                w = std::max(w, std::abs(c.exact.*f - c.truncated.*f));
            }
        return w;
    };
    double rlo = 1e300, rhi = 0.0;
    for (auto f : {&collisions::Coefficients::A, &collisions::Coefficients::B, &collisions::Coefficients::C}) {
        const double q = sup(0.01, f) / sup(0.005, f);
        rlo = std::min(rlo, q);
        rhi = std::max(rhi, q);
    }
    report(9, "Collision microphysics", wp <= 1e-12 && we <= 1e-12 && rlo >= 3.6 && rhi <= 4.4,
           fmt("1e6 collisions: max rel. momentum error %.1e, energy error %.1e (tol 1e-12); truncation ratio "
               "r=0.01 vs 0.005: %.3f..%.3f (want 4 +- 10%%)",
               wp, we, rlo, rhi));
}

void criterion_10() {
    const auto t0 = std::chrono::steady_clock::now();
    // <p_E^2> = m_E k T = 1e-3
    const collisions::BathSpec bath{0.01, 0.1, 1.0, 10.0, 1};
    collisions::MonteCarloConfig cfg;
    cfg.n_samples = 1000000;
    const auto res = collisions::monte_carlo_delta_w(wigner::sho_wigner_polynomial(1), bath, 1.0, cfg);
    const double elapsed = seconds_since(t0);
    const double td = std::max(3.0 * res.drift_coeff_sigma, 0.1 * res.expected_drift);
    const double tf = std::max(3.0 * res.diffusion_coeff_sigma, 0.1 * res.expected_diffusion);
    const bool ok = std::abs(res.drift_coeff_fit - res.expected_drift) <= td &&
                    std::abs(res.diffusion_coeff_fit - res.expected_diffusion) <= tf && elapsed < 60.0;
    report(10, "Monte Carlo vs single-collision expression (m_E/m_S = 0.01, 1e6 samples)", ok,
           fmt("drift %.5f vs %.5f, diffusion %.6f vs %.6f", res.drift_coeff_fit, res.expected_drift,
               res.diffusion_coeff_fit, res.expected_diffusion) +
               fmt(" (tol max(3 sigma, 10%%)); %.1f s; per-node agreement %.0f/%.0f", elapsed,
                   static_cast<double>(res.nodes_agreeing), static_cast<double>(res.nodes_checked)));
}

void criterion_11() {
    const SpatialGrid g = SpatialGrid::symmetric(256, 10.0);
    double worst = 1e300;
    for (int n = 0; n <= 10; ++n) {
        wigner::ConvolutionDiagnostics d;
        wigner::gaussian_convolve(wigner::wigner_transform(sho(n, g)), &d);
        worst = std::min(worst, d.min_value / d.max_value);
    }
    report(11, "Convolution positivity psi_0..psi_10", worst >= -1e-6,
           fmt("min over states of min W^c / max W^c = %.3e (tol >= -1e-6)", worst));
}

void criterion_12() {
    const PhysParams si(1e-20, 1e-26, 1e10, 1.381e-23, 300.0, 1.0546e-34);
    const double td = dynamics::decoherence_time(si, 0.0, 1e-9);
    const double direct = 1.0546e-34 * 1.0546e-34 / (2.0 * 1e-26 * 1e10 * 1.381e-23 * 300.0 * 1e-18);
    report(12, "Decoherence-time arithmetic (SI footnote parameters)",
           std::abs(td / direct - 1.0) <= 1e-12 && std::abs(td / 1.34e-14 - 1.0) <= 0.01,
           fmt("t_d = %.4e s (formula value; stated order 1e-19 s differs by %.1f orders of magnitude)", td,
               std::log10(td / 1e-19)));
}

} // namespace

int main() {
    const std::vector<std::function<void()>> criteria = {criterion_1, criteria_2_3, criterion_4,  criterion_5,
                                                         criterion_6, criterion_7,  criterion_8,  criterion_9,
                                                         criterion_10, criterion_11, criterion_12};
    for (const auto& c : criteria) {
        try {
            c();
        } catch (const std::exception& e) {
            std::printf("FAIL (exception) %s\n", e.what());
            ++failures;
        }
    }
    std::printf("%d criterion/criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
