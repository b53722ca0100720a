// cli.hpp — scenario driver: schema-checked JSON configs, run manifests and the six
// subcommands behind the `qbm` executable.

#pragma once

#include "qbm/errors.hpp"
#include "qbm/grid.hpp"
#include "qbm/dynamics.hpp"

#include "json.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace qbm::cli {

using nlohmann::json;

enum ExitCode : int { kPass = 0, kToleranceBreach = 1, kConfigError = 2 };

// Invalid configuration; `path` is the JSON pointer-like location ("$.grid.n").
class SchemaError : public ConfigurationError {
public:
    SchemaError(std::string path, const std::string& what)
        : ConfigurationError(path + ": " + what), path_(std::move(path)) {}
    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

// Typed, defaulting view of one JSON object.  Every key read is echoed (with the value
// actually used) into `resolved()`; `finish()` rejects keys that were never read.
class ConfigReader {
public:
    ConfigReader(const json& j, std::string path);

    bool has(const std::string& key) const;
    double number(const std::string& key, std::optional<double> fallback = std::nullopt);
    double positive(const std::string& key, std::optional<double> fallback = std::nullopt);
    std::int64_t integer(const std::string& key, std::optional<std::int64_t> fallback = std::nullopt);
    bool boolean(const std::string& key, std::optional<bool> fallback = std::nullopt);
    std::string string(const std::string& key, const std::vector<std::string>& allowed,
                       std::optional<std::string> fallback = std::nullopt);
    std::vector<double> numbers(const std::string& key, std::optional<std::vector<double>> fallback = std::nullopt);
    // Missing objects read as {}.
    ConfigReader object(const std::string& key);
    // Merges a finished child reader's resolved values under `key`.
    void adopt(const std::string& key, ConfigReader& child);

    void finish();
    const json& resolved() const noexcept { return resolved_; }
    const std::string& path() const noexcept { return path_; }
    std::string at(const std::string& key) const { return path_ + "." + key; }

private:
    const json* lookup(const std::string& key, const char* type);

    json j_;
    std::string path_;
    json resolved_ = json::object();
    std::vector<std::string> seen_;
};

json load_config(const std::string& path); // {} when path is empty

// Shared config blocks
grid::SpatialGrid read_grid(ConfigReader& r, std::size_t default_n, double default_x_max);
grid::PhysParams read_params(ConfigReader& r);
dynamics::TermMask read_mask(ConfigReader& r);
// `fallback` is used when the config has no "initial" block.
grid::GridStateOperator read_initial(ConfigReader& r, const grid::SpatialGrid& g, const json& fallback = json::object());

struct Tolerances {
    double wigner_oracle = 2e-3;
    double imag_residual = 1e-8;
    double mass = 1e-4;
    double marginal = 1e-4;
    double trace = 1e-4;
    double hermitian = 1e-6;
    double damping_rel = 1e-3;
    double decoherence_rel = 1e-6;
    double classical_diag = 1e-10;
    double classical_offdiag = 1e-6;
    double convolution = 1e-6;
    double purity_step = 1e-8;
    double mc_rel = 0.1;
    double mc_sigmas = 3.0;
    double exact = 1e-12;
    bool warnings_fail = false;

    static Tolerances profile(const std::string& name); // "default" | "strict"
    json to_json() const;
};

struct GlobalOptions {
    std::string config_path;
    std::string out_dir = "qbm_out";
    std::optional<std::uint64_t> seed;
    std::string tolerance_profile = "default";
    std::size_t threads = 1;
    bool convolve = false;
};

// One manifest entry.  Checks decide the exit code; diagnostics are recorded only.
struct Check {
    std::string name;
    double value = 0.0;
    double threshold = 0.0;
    std::string relation; // "<=", ">=", "=="
    bool passed = false;
    bool diagnostic = false;
    std::string note;
};

class Manifest {
public:
    Manifest(std::string command, const GlobalOptions& opt, const Tolerances& tol);

    void set_inputs(json inputs) { inputs_ = std::move(inputs); }
    // value <= threshold
    bool check_le(const std::string& name, double value, double threshold, std::string note = {});
    bool check_ge(const std::string& name, double value, double threshold, std::string note = {});
    bool check_true(const std::string& name, bool ok, std::string note = {});
    void diagnostic(const std::string& name, double value, std::string note = {});
    void add_output(const std::string& path) { outputs_.push_back(path); }
    void add_warning(const std::string& w) { warnings_.push_back(w); }
    void set_result(const std::string& key, json value) { results_[key] = std::move(value); }

    bool passed() const;
    const std::vector<Check>& checks() const noexcept { return checks_; }
    json to_json() const;
    // Writes <out_dir>/<command>.manifest.json and returns its path.
    std::string write(const std::string& out_dir) const;
    int exit_code() const { return passed() ? kPass : kToleranceBreach; }

private:
    std::string command_;
    json options_;
    json tolerances_;
    json inputs_ = json::object();
    json results_ = json::object();
    bool warnings_fail_ = false;
    std::vector<Check> checks_;
    std::vector<std::string> outputs_;
    std::vector<std::string> warnings_;
};

json versions();

int cmd_wigner(const json& config, const GlobalOptions& opt, std::ostream& out);
int cmd_evolve(const json& config, const GlobalOptions& opt, std::ostream& out);
int cmd_decohere(const json& config, const GlobalOptions& opt, std::ostream& out);
int cmd_collide_mc(const json& config, const GlobalOptions& opt, std::ostream& out);
int cmd_bloch(const json& config, const GlobalOptions& opt, std::ostream& out);
int cmd_bell(const json& config, const GlobalOptions& opt, std::ostream& out);

// Parses argv, dispatches, maps exceptions onto the exit-code contract.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace qbm::cli
