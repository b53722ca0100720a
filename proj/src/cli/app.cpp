#include "qbm/cli.hpp"

#include "CLI11.hpp"

#include <ostream>

namespace qbm::cli {

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"qbm: quantum Brownian motion scenarios (Wigner distributions, master-equation "
                 "evolution, decoherence, collision Monte Carlo, qubit states)"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOptions opt;
    std::uint64_t seed = 0;
    app.add_option("--config", opt.config_path, "JSON scenario file");
    app.add_option("--out", opt.out_dir, "output directory")->capture_default_str();
    auto* seed_opt = app.add_option("--seed", seed, "64-bit RNG seed (overrides the config)");
    app.add_option("--tolerance-profile", opt.tolerance_profile, "check tolerances")
        ->check(CLI::IsMember({"strict", "default"}))
        ->capture_default_str();
    app.add_option("--threads", opt.threads, "worker threads for Monte Carlo shards")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_flag("--convolve", opt.convolve, "also emit Gaussian-smoothed Wigner distributions");

    app.add_subcommand("wigner", "oscillator Wigner distributions against the closed forms");
    app.add_subcommand("evolve", "integrate the master equation");
    app.add_subcommand("decohere", "simplified decoherence and the decoherence time");
    app.add_subcommand("collide-mc", "Monte Carlo change of W after one bath collision");
    auto* bloch = app.add_subcommand("bloch", "pure qubit state from Bloch angles");
    double theta = 0.0, phi = 0.0;
    auto* theta_opt = bloch->add_option("--theta", theta, "polar angle");
    auto* phi_opt = bloch->add_option("--phi", phi, "azimuthal angle");
    app.add_subcommand("bell", "Bell state and its reduced state");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? kPass : kConfigError;
    }
    if (seed_opt->count() > 0) opt.seed = seed;
    const std::string command = app.get_subcommands().front()->get_name();

    try {
        json config = load_config(opt.config_path);
        if (!config.is_object()) throw SchemaError("$", "expected an object");
        if (theta_opt->count() > 0) config["theta"] = theta;
        if (phi_opt->count() > 0) config["phi"] = phi;
        if (command == "wigner") return cmd_wigner(config, opt, out);
        if (command == "evolve") return cmd_evolve(config, opt, out);
        if (command == "decohere") return cmd_decohere(config, opt, out);
        if (command == "collide-mc") return cmd_collide_mc(config, opt, out);
        if (command == "bloch") return cmd_bloch(config, opt, out);
        return cmd_bell(config, opt, out);
    } catch (const SchemaError& e) {
        err << "config error at " << e.what() << '\n';
    } catch (const ConfigurationError& e) {
        err << "config error: " << e.what() << '\n';
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
    }
    return kConfigError;
}

} // namespace qbm::cli
