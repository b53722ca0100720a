#include "qbm/collisions.hpp"

#include "qbm/errors.hpp"
#include "qbm/rng.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <thread>

namespace qbm::collisions {

namespace {

void require_masses(double m_S, double m_E, const char* where) {
    if (!(m_S > 0.0) || !(m_E > 0.0)) throw_invalid(where, "masses must be positive");
}

double draw(Stream& s, BathDistribution dist, double sd) {
    return dist == BathDistribution::Gaussian ? sd * s.normal() : sd * s.sign();
}

struct ShardSums {
    std::size_t count = 0;
    std::vector<double> s1, s2; // per node: sum delta, sum delta^2
    double a1 = 0.0, a2 = 0.0;  // regressed drift coefficient per sample
    double b1 = 0.0, b2 = 0.0;  // regressed diffusion coefficient per sample
};

} // namespace

CollisionOutcome elastic_collision(double p_S, double p_E, double m_S, double m_E) {
    require_masses(m_S, m_E, "elastic_collision");
    const double M = m_S + m_E;
    CollisionOutcome c;
    c.p_S_out = ((m_S - m_E) / M) * p_S + (2.0 * m_S / M) * p_E;
    c.p_E_out = -((m_S - m_E) / M) * p_E + (2.0 * m_E / M) * p_S;
    return c;
}

PostPositions post_positions(double x_S, double x_E, double m_S, double m_E) {
    require_masses(m_S, m_E, "post_positions");
    const double M = m_S + m_E;
    PostPositions out;
    out.x_S_exact = ((m_S - m_E) / M) * x_S + (2.0 * m_E / M) * x_E;
    out.x_E_exact = (2.0 * m_S / M) * x_S - ((m_S - m_E) / M) * x_E;
    out.x_S_approx = x_S;
    out.x_E_approx = 2.0 * x_S - x_E;
    out.gap = std::max(std::abs(out.x_S_exact - out.x_S_approx), std::abs(out.x_E_exact - out.x_E_approx));
    return out;
}

CoefficientPair coefficients(double m_S, double m_E, double p_S, double p_E) {
    require_masses(m_S, m_E, "coefficients");
    if (m_E >= m_S) {
        throw DomainError("coefficients: expansion requires m_E < m_S (got m_E/m_S = " + std::to_string(m_E / m_S) + ")");
    }
    const double r = m_E / m_S;
    const double J = (m_S + m_E) / (m_S - m_E);
    // momentum shift of the system in the change of variables
    const double shift = 2.0 * (m_E * p_S - m_S * p_E) / (m_S - m_E);
    CoefficientPair c;
    c.exact.A = J - 1.0;
    c.exact.B = J * shift;
    c.exact.C = J * (2.0 * m_S * m_S * p_E * p_E - 4.0 * m_E * m_S * p_E * p_S + 2.0 * m_E * m_E * p_S * p_S) /
                ((m_E - m_S) * (m_E - m_S));
    c.truncated.A = 2.0 * r;
    c.truncated.B = 2.0 * p_S * r - (2.0 + 6.0 * r) * p_E;
    c.truncated.C = (2.0 + 8.0 * r) * p_E * p_E - 4.0 * p_E * p_S * r;
    return c;
}

std::vector<double> sample_bath_momentum(const BathSpec& bath, std::size_t n, BathDistribution dist) {
    if (n == 0) throw_invalid("sample_bath_momentum", "n must be >= 1");
    if (!(bath.second_moment() > 0.0)) throw_invalid("sample_bath_momentum", "m_E k_B T must be positive");
    Stream s(bath.seed);
    const double sd = std::sqrt(bath.second_moment());
    std::vector<double> out(n);
    for (auto& v : out) v = draw(s, dist, sd);
    return out;
}

MonteCarloResult monte_carlo_delta_w(const PhasePolynomial& w_S, const BathSpec& bath, double m_S,
                                     const MonteCarloConfig& cfg) {
    const double m_E = bath.m_E;
    require_masses(m_S, m_E, "monte_carlo_delta_w");
    if (m_E >= m_S) throw DomainError("monte_carlo_delta_w: requires m_E < m_S");
    if (cfg.n_samples == 0 || cfg.shards == 0) throw_invalid("monte_carlo_delta_w", "need samples and shards");
    if (!(bath.second_moment() > 0.0)) throw_invalid("monte_carlo_delta_w", "m_E k_B T must be positive");

    MonteCarloResult res;
    res.n_samples = cfg.n_samples;
    res.mass_ratio = m_E / m_S;
    res.expected_drift = 2.0 * res.mass_ratio;
    res.expected_diffusion = (2.0 + 8.0 * res.mass_ratio) * bath.second_moment();
    if (res.mass_ratio > 0.05) res.warnings.push_back("mass ratio above 0.05: first-order expansion is loose");
    if (cfg.n_samples < 100000) res.warnings.push_back("fewer than 1e5 samples: standard errors are large");

    std::vector<double> p_nodes = cfg.p_nodes;
    if (p_nodes.empty())
        for (int k = -12; k <= 12; ++k) p_nodes.push_back(0.25 * k);
    const PhasePolynomial drift = w_S.times_p().d_dp();
    const PhasePolynomial diffusion = w_S.d_dp().d_dp();
    for (double x : cfg.xbar_nodes)
        for (double p : p_nodes) {
            NodeEstimate ne;
            ne.xbar = x;
            ne.p = p;
            ne.drift_field = drift(x, p);
            ne.diffusion_field = diffusion(x, p);
            ne.prediction = res.expected_drift * ne.drift_field + res.expected_diffusion * ne.diffusion_field;
            res.nodes.push_back(ne);
        }
    const std::size_t nn = res.nodes.size();

    // Least-squares projector onto the (drift, diffusion) fields; applied per sample so the
    // fitted coefficients are themselves sample means with exact standard errors.
    Eigen::MatrixXd F(static_cast<Eigen::Index>(nn), 2);
    for (std::size_t i = 0; i < nn; ++i) {
        F(static_cast<Eigen::Index>(i), 0) = res.nodes[i].drift_field;
        F(static_cast<Eigen::Index>(i), 1) = res.nodes[i].diffusion_field;
    }
    const Eigen::Matrix2d gram = F.transpose() * F;
    const bool collinear = gram.determinant() <= 1e-10 * gram(0, 0) * gram(1, 1);
    if (collinear)
        res.warnings.push_back("drift and diffusion fields are collinear for this state: coefficients are not separately identifiable");
    const Eigen::MatrixXd proj = collinear ? Eigen::MatrixXd::Zero(2, static_cast<Eigen::Index>(nn))
                                           : Eigen::MatrixXd(gram.ldlt().solve(F.transpose()));

    const double J = (m_S + m_E) / (m_S - m_E);
    const double c_pre = 2.0 * m_E / (m_S + m_E);
    const double sd = std::sqrt(bath.second_moment());
    std::vector<double> base(nn);
    for (std::size_t i = 0; i < nn; ++i) base[i] = w_S(res.nodes[i].xbar, res.nodes[i].p);

    std::vector<ShardSums> shards(cfg.shards);
    auto run_shard = [&](std::size_t s) {
        ShardSums& acc = shards[s];
        acc.count = cfg.n_samples / cfg.shards + (s < cfg.n_samples % cfg.shards ? 1 : 0);
        acc.s1.assign(nn, 0.0);
        acc.s2.assign(nn, 0.0);
        Stream stream(bath.seed + s);
        std::vector<double> delta(nn);
        for (std::size_t k = 0; k < acc.count; ++k) {
            const double v = draw(stream, cfg.distribution, sd);
            for (std::size_t i = 0; i < nn; ++i) {
                const double p = res.nodes[i].p;
                // bath momentum after the collision that turns (p_pre, v) into p
                const double q = J * (c_pre * p - v);
                const double p_pre = elastic_collision(p, q, m_S, m_E).p_S_out;
                delta[i] = J * w_S(res.nodes[i].xbar, p_pre) - base[i];
                acc.s1[i] += delta[i];
                acc.s2[i] += delta[i] * delta[i];
            }
            double a = 0.0, b = 0.0;
            for (std::size_t i = 0; i < nn; ++i) {
                a += proj(0, static_cast<Eigen::Index>(i)) * delta[i];
                b += proj(1, static_cast<Eigen::Index>(i)) * delta[i];
            }
            acc.a1 += a;
            acc.a2 += a * a;
            acc.b1 += b;
            acc.b2 += b * b;
        }
    };

    const std::size_t nthreads = std::max<std::size_t>(1, std::min(cfg.threads, cfg.shards));
    if (nthreads == 1) {
        for (std::size_t s = 0; s < cfg.shards; ++s) run_shard(s);
    } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < nthreads; ++t) {
            pool.emplace_back([&, t] {
                for (std::size_t s = t; s < cfg.shards; s += nthreads) run_shard(s);
            });
        }
        for (auto& th : pool) th.join();
    }

    // Fixed-order reduction.
    std::vector<double> s1(nn, 0.0), s2(nn, 0.0);
    double a1 = 0.0, a2 = 0.0, b1 = 0.0, b2 = 0.0;
    for (const auto& sh : shards) {
        for (std::size_t i = 0; i < nn; ++i) {
            s1[i] += sh.s1[i];
            s2[i] += sh.s2[i];
        }
        a1 += sh.a1;
        a2 += sh.a2;
        b1 += sh.b1;
        b2 += sh.b2;
    }
    const double N = static_cast<double>(cfg.n_samples);
    auto sem = [N](double sum, double sumsq) {
        const double mean = sum / N;
        const double var = std::max(0.0, sumsq / N - mean * mean) * N / std::max(1.0, N - 1.0);
        return std::sqrt(var / N);
    };
    for (std::size_t i = 0; i < nn; ++i) {
        auto& ne = res.nodes[i];
        ne.estimate = s1[i] / N;
        ne.stderr_ = sem(s1[i], s2[i]);
        ne.checked = std::abs(ne.prediction) > 1e-4;
        ne.agrees = std::abs(ne.estimate - ne.prediction) <= std::max(3.0 * ne.stderr_, 0.1 * std::abs(ne.prediction));
        if (ne.checked) {
            ++res.nodes_checked;
            if (ne.agrees) ++res.nodes_agreeing;
        }
    }
    if (collinear) {
        res.drift_coeff_fit = res.drift_coeff_sigma = std::nan("");
        res.diffusion_coeff_fit = res.diffusion_coeff_sigma = std::nan("");
        return res;
    }
    res.drift_coeff_fit = a1 / N;
    res.drift_coeff_sigma = sem(a1, a2);
    res.diffusion_coeff_fit = b1 / N;
    res.diffusion_coeff_sigma = sem(b1, b2);
    return res;
}

} // namespace qbm::collisions
