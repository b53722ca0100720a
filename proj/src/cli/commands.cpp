#include "qbm/cli.hpp"

#include "qbm/collisions.hpp"
#include "qbm/formal.hpp"
#include "qbm/grid_io.hpp"
#include "qbm/rational.hpp"
#include "qbm/wigner.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>

namespace qbm::cli {

namespace {

using io::format_double;

class OutputDir {
public:
    OutputDir(const std::string& dir, Manifest& man) : dir_(dir), man_(man) {
        std::filesystem::create_directories(dir_);
    }
    std::ofstream open(const std::string& name) {
        const auto path = (dir_ / name).string();
        std::ofstream os(path);
        if (!os) throw std::runtime_error("cannot write " + path);
        man_.add_output(name);
        return os;
    }

private:
    std::filesystem::path dir_;
    Manifest& man_;
};

int finish(const Manifest& man, const GlobalOptions& opt, const std::string& command, std::ostream& out) {
    const std::string path = man.write(opt.out_dir);
    std::size_t total = 0, ok = 0;
    for (const auto& c : man.checks()) {
        if (c.diagnostic) continue;
        ++total;
        if (c.passed) {
            ++ok;
        } else {
            out << "  FAIL " << c.name << ": " << format_double(c.value) << " " << c.relation << " "
                << format_double(c.threshold) << (c.note.empty() ? "" : "  (" + c.note + ")") << '\n';
        }
    }
    out << "qbm " << command << ": " << ok << "/" << total << " checks passed; manifest " << path << '\n';
    return man.exit_code();
}

// Library precondition failures while building inputs are configuration errors.
template <class F>
auto guarded(const std::string& path, F&& f) {
    try {
        return f();
    } catch (const SchemaError&) {
        throw;
    } catch (const std::invalid_argument& e) {
        throw SchemaError(path, e.what());
    } catch (const DomainError& e) {
        throw SchemaError(path, e.what());
    }
}

std::size_t grid_node(const grid::SpatialGrid& g, double x, const std::string& path) {
    const double s = (x - g.x_min()) / g.dx();
    const double r = std::round(s);
    if (r < 0 || r > static_cast<double>(g.n() - 1) || std::abs(s - r) > 1e-9)
        throw SchemaError(path, "position " + format_double(x) + " is not a grid node");
    return static_cast<std::size_t>(r);
}

double max_offdiag(const grid::CMatrix& m) {
    double worst = 0.0;
    for (Eigen::Index a = 0; a < m.rows(); ++a)
        for (Eigen::Index b = 0; b < m.cols(); ++b)
            if (a != b) worst = std::max(worst, std::abs(m(a, b)));
    return worst;
}

} // namespace

// ---------------------------------------------------------------------------------------

int cmd_wigner(const json& config, const GlobalOptions& opt, std::ostream& out) {
    const Tolerances tol = Tolerances::profile(opt.tolerance_profile);
    Manifest man("wigner", opt, tol);
    ConfigReader root(config, "$");
    const auto g = read_grid(root, 512, 10.0);
    std::vector<int> states;
    if (root.has("n_max")) {
        const auto n_max = root.integer("n_max");
        if (n_max < 0 || n_max > 20) throw SchemaError(root.at("n_max"), "must lie in 0..20");
        for (int n = 0; n <= n_max; ++n) states.push_back(n);
    } else {
        const auto n = root.integer("state", 0);
        if (n < 0 || n > 20) throw SchemaError(root.at("state"), "must lie in 0..20");
        states.push_back(static_cast<int>(n));
    }
    const bool convolve = root.boolean("convolve", false) || opt.convolve;
    root.finish();
    json inputs = root.resolved();
    inputs["convolve"] = convolve;
    man.set_inputs(inputs);

    OutputDir dir(opt.out_dir, man);
    json summary = json::array();
    for (int n : states) {
        const std::string tag = std::to_string(n);
        const auto psi = guarded("$.grid", [&] { return grid::sho_eigenfunction(n, 1.0, 1.0, g); });
        const auto rho = grid::pure_state_operator(psi);
        const auto w = wigner::wigner_transform(rho);
        {
            auto os = dir.open("rho_" + tag + ".csv");
            io::write_csv(os, rho);
        }
        {
            auto os = dir.open("wigner_" + tag + ".csv");
            io::write_csv(os, w);
        }
        json s = {{"state", n}};
        man.check_le("state_" + tag + ".imag_residual", w.imag_residual, tol.imag_residual);
        man.check_le("state_" + tag + ".mass_error", std::abs(w.total_mass() - 1.0), tol.mass);
        const double pos_err = (wigner::position_marginal(w) - rho.rho.diagonal().real()).cwiseAbs().maxCoeff();
        const double mom_err =
            (wigner::momentum_marginal(w) - wigner::momentum_density(rho, w.grid.p)).cwiseAbs().maxCoeff();
        man.check_le("state_" + tag + ".position_marginal_error", pos_err, tol.marginal);
        man.check_le("state_" + tag + ".momentum_marginal_error", mom_err, tol.marginal);
        const double origin = w.w(static_cast<Eigen::Index>(g.n() / 2), static_cast<Eigen::Index>(g.n() / 2));
        s["w_origin"] = origin;
        man.check_true("state_" + tag + ".origin_sign", (n % 2 == 0) ? origin > 0.0 : origin < 0.0,
                       "W_n(0,0) = (-1)^n / pi");
        if (n <= 3) {
            const auto closed = wigner::sample_closed_form(n, w.grid);
            const double diff = std::max((w.w - closed.w).cwiseAbs().maxCoeff(), (w.w_half - closed.w_half).cwiseAbs().maxCoeff());
            s["oracle_max_diff"] = diff;
            man.check_le("state_" + tag + ".closed_form_max_diff", diff, tol.wigner_oracle);
        }
        if (convolve) {
            wigner::ConvolutionDiagnostics d;
            const auto wc = wigner::gaussian_convolve(w, &d);
            auto os = dir.open("wigner_" + tag + "_convolved.csv");
            io::write_csv(os, wc);
            s["convolved_min"] = d.min_value;
            s["convolved_max"] = d.max_value;
            s["convolved_mass_ratio"] = d.mass_ratio;
            man.check_ge("state_" + tag + ".convolved_min_over_max", d.min_value / d.max_value, -tol.convolution);
        }
        summary.push_back(s);
    }
    man.set_result("states", summary);
    return finish(man, opt, "wigner", out);
}

// ---------------------------------------------------------------------------------------

int cmd_evolve(const json& config, const GlobalOptions& opt, std::ostream& out) {
    const Tolerances tol = Tolerances::profile(opt.tolerance_profile);
    Manifest man("evolve", opt, tol);
    ConfigReader root(config, "$");
    const auto g = read_grid(root, 256, 10.0);
    const auto params = guarded("$.params", [&] { return read_params(root); });
    const auto mask = read_mask(root);
    const auto rho0 = read_initial(root, g);
    const auto bounds = dynamics::step_bounds(g, params, mask);
    const double dt = root.positive("dt", 0.9 * bounds.limit);
    const auto steps = root.integer("steps", 200);
    const auto store_every = root.integer("store_every", 10);
    const bool write_final = root.boolean("write_final_state", true);
    if (steps < 1) throw SchemaError(root.at("steps"), "must be >= 1");
    if (store_every < 1) throw SchemaError(root.at("store_every"), "must be >= 1");
    root.finish();
    man.set_inputs(root.resolved());
    for (const auto& w : params.warnings()) man.add_warning(w);

    const auto traj = dynamics::evolve_rk4(rho0, params, mask, dt, static_cast<std::size_t>(steps),
                                           static_cast<std::size_t>(store_every));
    OutputDir dir(opt.out_dir, man);
    {
        auto os = dir.open("trajectory.csv");
        os << "t,trace,purity,ex,ep\n";
        for (const auto& d : traj.diagnostics)
            os << format_double(d.t) << ',' << format_double(d.trace) << ',' << format_double(d.purity) << ','
               << format_double(d.ex) << ',' << format_double(d.ep) << '\n';
    }
    if (write_final) {
        auto os = dir.open("final_state.csv");
        io::write_csv(os, traj.states.back());
    }

    man.check_le("trace_drift", traj.max_trace_drift, tol.trace);
    man.check_le("hermitian_error_before_symmetrization", traj.max_hermitian_error, tol.hermitian);
    man.diagnostic("max_symmetrization_correction", traj.max_symmetrization_correction);
    man.diagnostic("min_diagonal", traj.min_diagonal, "negativity is logged, not repaired");

    const auto& first = traj.diagnostics.front();
    const auto& last = traj.diagnostics.back();
    const double t = last.t;
    if (mask.damping && !mask.free && !mask.decoherence && std::abs(first.ep) > 1e-8) {
        const double ratio = last.ep / first.ep;
        const double expected = std::exp(-params.gamma() * t);
        man.set_result("momentum_ratio", ratio);
        man.set_result("momentum_ratio_expected", expected);
        man.check_le("damping_law_rel_error", std::abs(ratio / expected - 1.0), tol.damping_rel,
                     "<P>(t)/<P>(0) against exp(-gamma t)");
        man.diagnostic("damping_law_two_gamma_rel_error", std::abs(ratio / std::exp(-2.0 * params.gamma() * t) - 1.0),
                       "<P>(t)/<P>(0) against exp(-2 gamma t)");
        if (t > 0.0) man.diagnostic("damping_rate_over_gamma", -std::log(ratio) / (t * params.gamma()));
    }
    if (mask.decoherence && !mask.free && !mask.damping) {
        const double diag = (traj.states.back().rho.diagonal() - rho0.rho.diagonal()).cwiseAbs().maxCoeff();
        man.check_le("diagonal_change", diag, tol.hermitian);
        double rise = 0.0;
        for (std::size_t s = 1; s < traj.purity_per_step.size(); ++s)
            rise = std::max(rise, traj.purity_per_step[s] - traj.purity_per_step[s - 1]);
        man.check_le("purity_max_step_increase", rise, tol.purity_step);
    }
    man.set_result("final", {{"t", t}, {"trace", last.trace}, {"purity", last.purity}, {"ex", last.ex}, {"ep", last.ep}});
    man.set_result("step_bounds", {{"free", bounds.free}, {"damping", bounds.damping},
                                   {"decoherence", bounds.decoherence}, {"limit", bounds.limit}});
    return finish(man, opt, "evolve", out);
}

// ---------------------------------------------------------------------------------------

int cmd_decohere(const json& config, const GlobalOptions& opt, std::ostream& out) {
    const Tolerances tol = Tolerances::profile(opt.tolerance_profile);
    Manifest man("decohere", opt, tol);
    ConfigReader root(config, "$");
    const auto g = read_grid(root, 256, 8.0);
    const auto params = guarded("$.params", [&] { return read_params(root); });
    const auto rho0 = read_initial(root, g, json{{"kind", "sho"}, {"n", 3}});
    const auto t_values = root.numbers("t_values", std::vector<double>{0.0, 1.0, 10.0});
    const std::string units = root.string("units", {"t_d", "absolute"}, "t_d");
    const double x = root.number("x", 1.0);
    const double y = root.number("y", -1.0);
    const bool classical = root.boolean("classical_limit", true);
    root.finish();
    man.set_inputs(root.resolved());
    for (double t : t_values)
        if (t < 0.0) throw SchemaError(root.at("t_values"), "times must be >= 0");
    const auto i = grid_node(g, x, root.at("x"));
    const auto j = grid_node(g, y, root.at("y"));
    const double td = guarded(root.at("y"), [&] { return dynamics::decoherence_time(params, x, y); });
    const auto r0 = rho0.rho(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    if (std::abs(r0) < 1e-300) throw SchemaError(root.at("x"), "initial rho(x, y) vanishes; ratio undefined");
    man.set_result("decoherence_time", td);

    OutputDir dir(opt.out_dir, man);
    auto os = dir.open("decohere.csv");
    os << "t,t_over_td,ratio,expected,offdiag_max_ratio\n";
    const double off0 = max_offdiag(rho0.rho);
    for (std::size_t k = 0; k < t_values.size(); ++k) {
        const double t = units == "t_d" ? t_values[k] * td : t_values[k];
        const auto rt = dynamics::simplified_decoherence(rho0, t, params);
        const double ratio = (rt.rho(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) / r0).real();
        const double expected = std::exp(-t / td);
        os << format_double(t) << ',' << format_double(t / td) << ',' << format_double(ratio) << ','
           << format_double(expected) << ',' << format_double(max_offdiag(rt.rho) / off0) << '\n';
        man.check_le("ratio_rel_error[" + std::to_string(k) + "]", std::abs(ratio - expected) / expected,
                     tol.decoherence_rel, "t/t_d = " + format_double(t / td));
    }
    if (classical) {
        // twenty e-folds for the closest off-diagonal pair
        const double t_cl = 20.0 * dynamics::decoherence_time(params, 0.0, g.dx());
        const auto late = dynamics::simplified_decoherence(rho0, t_cl, params);
        const double diag = (late.rho.diagonal() - rho0.rho.diagonal()).cwiseAbs().maxCoeff();
        man.set_result("classical_limit_time", t_cl);
        man.check_le("classical_limit.diagonal_error", diag, tol.classical_diag);
        man.check_le("classical_limit.offdiag_over_initial", max_offdiag(late.rho) / off0, tol.classical_offdiag);
    }

    // Footnote parameters in SI units: m_E = 1e-26 kg, Gamma = 1e10 /s, T = 300 K, |x - y| = 1 nm.
    const grid::PhysParams si(1e-20, 1e-26, 1e10, 1.381e-23, 300.0, 1.0546e-34);
    const double td_si = dynamics::decoherence_time(si, 0.0, 1e-9);
    const double direct = 1.0546e-34 * 1.0546e-34 / (2.0 * 1e-26 * 1e10 * 1.381e-23 * 300.0 * 1e-18);
    man.check_le("si_decoherence_time_formula_rel_error", std::abs(td_si / direct - 1.0), tol.exact);
    man.set_result("si_footnote", {{"decoherence_time_s", td_si},
                                   {"stated_order_s", 1e-19},
                                   {"discrepancy_orders_of_magnitude", std::log10(td_si / 1e-19)},
                                   {"note", "the stated order is not reproduced by the formula with the listed "
                                            "parameters; the formula value is reported"}});
    return finish(man, opt, "decohere", out);
}

// ---------------------------------------------------------------------------------------

int cmd_collide_mc(const json& config, const GlobalOptions& opt, std::ostream& out) {
    const Tolerances tol = Tolerances::profile(opt.tolerance_profile);
    Manifest man("collide-mc", opt, tol);
    ConfigReader root(config, "$");
    ConfigReader b = root.object("bath");
    collisions::BathSpec bath;
    bath.m_E = b.positive("m_E", 0.01);
    bath.T = b.positive("T", 0.1);
    bath.k_B = b.positive("k_B", 1.0);
    bath.Gamma = b.positive("Gamma", 10.0);
    const std::string dist = b.string("distribution", {"gaussian", "two_point"}, "gaussian");
    root.adopt("bath", b);
    const double m_S = root.positive("m_S", 1.0);
    const auto n_samples = root.integer("n_samples", 1000000);
    const auto state = root.integer("state", 1);
    const auto shards = root.integer("shards", 16);
    const auto seed = root.integer("seed", 1);
    collisions::MonteCarloConfig cfg;
    cfg.xbar_nodes = root.numbers("xbar_nodes", cfg.xbar_nodes);
    std::vector<double> p_default;
    for (int k = -12; k <= 12; ++k) p_default.push_back(0.25 * k);
    cfg.p_nodes = root.numbers("p_nodes", p_default);
    root.finish();
    if (n_samples < 1) throw SchemaError(root.at("n_samples"), "must be >= 1");
    if (shards < 1) throw SchemaError(root.at("shards"), "must be >= 1");
    if (state < 0 || state > 3) throw SchemaError(root.at("state"), "closed forms exist for 0..3");
    if (seed < 0) throw SchemaError(root.at("seed"), "must be >= 0");
    if (!(bath.m_E < m_S)) throw SchemaError("$.bath.m_E", "must be below m_S");
    if (cfg.xbar_nodes.empty() || cfg.p_nodes.empty()) throw SchemaError("$.p_nodes", "node lists must be nonempty");
    bath.seed = opt.seed ? *opt.seed : static_cast<std::uint64_t>(seed);
    cfg.n_samples = static_cast<std::size_t>(n_samples);
    cfg.shards = static_cast<std::size_t>(shards);
    cfg.threads = opt.threads;
    cfg.distribution = dist == "gaussian" ? collisions::BathDistribution::Gaussian : collisions::BathDistribution::TwoPoint;
    json inputs = root.resolved();
    inputs["seed"] = bath.seed;
    man.set_inputs(inputs);

    const auto res = collisions::monte_carlo_delta_w(wigner::sho_wigner_polynomial(static_cast<int>(state)), bath, m_S, cfg);
    for (const auto& w : res.warnings) man.add_warning(w);
    OutputDir dir(opt.out_dir, man);
    {
        auto os = dir.open("collide_mc.csv");
        os << "xbar,p,estimate,stderr,prediction\n";
        for (const auto& ne : res.nodes)
            os << format_double(ne.xbar) << ',' << format_double(ne.p) << ',' << format_double(ne.estimate) << ','
               << format_double(ne.stderr_) << ',' << format_double(ne.prediction) << '\n';
    }
    auto num = [](double v) { return std::isfinite(v) ? json(v) : json(format_double(v)); };
    const json summary = {{"n_samples", res.n_samples},
                          {"mass_ratio", res.mass_ratio},
                          {"drift_coeff_fit", num(res.drift_coeff_fit)},
                          {"drift_coeff_sigma", num(res.drift_coeff_sigma)},
                          {"diffusion_coeff_fit", num(res.diffusion_coeff_fit)},
                          {"diffusion_coeff_sigma", num(res.diffusion_coeff_sigma)},
                          {"expected_drift", res.expected_drift},
                          {"expected_diffusion", res.expected_diffusion}};
    {
        auto os = dir.open("summary.json");
        os << summary.dump(2) << '\n';
    }
    man.set_result("summary", summary);
    const double drift_tol = std::max(tol.mc_sigmas * res.drift_coeff_sigma, tol.mc_rel * res.expected_drift);
    const double diff_tol = std::max(tol.mc_sigmas * res.diffusion_coeff_sigma, tol.mc_rel * res.expected_diffusion);
    const double drift_err = std::abs(res.drift_coeff_fit - res.expected_drift);
    const double diff_err = std::abs(res.diffusion_coeff_fit - res.expected_diffusion);
    man.check_le("drift_coeff_abs_error", std::isfinite(drift_err) ? drift_err : INFINITY,
                 std::isfinite(drift_tol) ? drift_tol : 0.0, "max(3 sigma, 10%) of 2 m_E/m_S");
    man.check_le("diffusion_coeff_abs_error", std::isfinite(diff_err) ? diff_err : INFINITY,
                 std::isfinite(diff_tol) ? diff_tol : 0.0, "max(3 sigma, 10%) of (2 + 8 m_E/m_S) <p_E^2>");
    man.diagnostic("nodes_checked", static_cast<double>(res.nodes_checked));
    man.diagnostic("nodes_agreeing", static_cast<double>(res.nodes_agreeing),
                   "per-node rule max(3 stderr, 10% |prediction|) on nodes with |prediction| > 1e-4");
    return finish(man, opt, "collide-mc", out);
}

// ---------------------------------------------------------------------------------------

int cmd_bloch(const json& config, const GlobalOptions& opt, std::ostream& out) {
    const Tolerances tol = Tolerances::profile(opt.tolerance_profile);
    Manifest man("bloch", opt, tol);
    ConfigReader root(config, "$");
    const double theta = root.number("theta", M_PI / 2.0);
    const double phi = root.number("phi", 0.0);
    root.finish();
    man.set_inputs(root.resolved());

    const auto ket = formal::state_from_angles(theta, phi);
    const auto rho = formal::StateOperator::pure(ket);
    const auto r = formal::bloch_from_state(rho);
    const double pur = formal::purity(rho);
    const std::array<double, 3> expect{std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
    double r_err = 0.0;
    for (int k = 0; k < 3; ++k) r_err = std::max(r_err, std::abs(r.r[k] - expect[k]));
    const auto back = formal::state_from_bloch(r);

    out << "ket: (" << format_double(ket[0].real()) << (ket[0].imag() < 0 ? "" : "+") << format_double(ket[0].imag())
        << "i, " << format_double(ket[1].real()) << (ket[1].imag() < 0 ? "" : "+") << format_double(ket[1].imag())
        << "i)\n";
    out << "bloch: (" << format_double(r.r[0]) << ", " << format_double(r.r[1]) << ", " << format_double(r.r[2]) << ")\n";
    out << "|r|: " << format_double(r.norm()) << "\npurity: " << format_double(pur) << '\n';

    man.check_le("bloch_norm_error", std::abs(r.norm() - 1.0), tol.exact);
    man.check_le("bloch_angles_error", r_err, tol.exact);
    man.check_le("purity_error", std::abs(pur - 1.0), tol.exact);
    man.check_le("bloch_round_trip_error", (back.matrix() - rho.matrix()).cwiseAbs().maxCoeff(), tol.exact);
    man.set_result("bloch", {r.r[0], r.r[1], r.r[2]});
    man.set_result("purity", pur);
    return finish(man, opt, "bloch", out);
}

// ---------------------------------------------------------------------------------------

int cmd_bell(const json& config, const GlobalOptions& opt, std::ostream& out) {
    const Tolerances tol = Tolerances::profile(opt.tolerance_profile);
    Manifest man("bell", opt, tol);
    ConfigReader root(config, "$");
    root.finish();
    man.set_inputs(root.resolved());

    using exact::ComplexRational;
    using exact::Rational;
    const auto rho = exact::bell_state();
    const auto red = exact::partial_trace(rho, 2, 2, true);
    const auto pur = exact::purity(rho);
    const auto red_pur = exact::purity(red);
    const auto r = exact::bloch(red);
    auto str = [](const ComplexRational& z) {
        if (z.im == Rational(0)) return z.re.str();
        return z.re.str() + (z.im.num() < 0 ? "" : "+") + z.im.str() + "i";
    };
    out << "rho:\n";
    for (std::size_t a = 0; a < 4; ++a) {
        for (std::size_t b = 0; b < 4; ++b) out << (b ? " " : "  ") << str(rho(a, b));
        out << '\n';
    }
    out << "purity: " << str(pur) << "\nreduced:\n";
    for (std::size_t a = 0; a < 2; ++a) out << "  " << str(red(a, 0)) << " " << str(red(a, 1)) << '\n';
    out << "reduced purity: " << str(red_pur) << "\nreduced bloch: (" << str(r[0]) << ", " << str(r[1]) << ", "
        << str(r[2]) << ")\n";

    const ComplexRational half{Rational(1, 2), Rational(0)}, zero{}, one{Rational(1), Rational(0)};
    man.check_true("purity_is_one", pur == one);
    man.check_true("reduced_is_half_identity",
                   red(0, 0) == half && red(1, 1) == half && red(0, 1) == zero && red(1, 0) == zero);
    man.check_true("reduced_purity_is_half", red_pur == half);
    man.check_true("reduced_bloch_is_zero", r[0] == zero && r[1] == zero && r[2] == zero);

    // floating-point path through the general formalism
    const auto frho = formal::bell_state();
    const auto fred = formal::partial_trace(frho, {2, 2}, formal::Subsystem::A);
    man.check_le("float_purity_error", std::abs(formal::purity(frho) - 1.0), tol.exact);
    man.check_le("float_reduced_purity_error", std::abs(formal::purity(fred) - 0.5), tol.exact);
    man.check_le("float_reduced_bloch_norm", formal::bloch_from_state(fred).norm(), tol.exact);
    man.set_result("purity", str(pur));
    man.set_result("reduced_purity", str(red_pur));
    return finish(man, opt, "bell", out);
}

} // namespace qbm::cli
