#include "qbm/cli.hpp"

#include "qbm/dft.hpp"
#include "qbm/grid_io.hpp"

#include <Eigen/Core>

#include <cmath>
#include <filesystem>
#include <fstream>

namespace qbm::cli {

namespace {

// JSON has no NaN/inf; non-finite values are written as strings.
json number_or_string(double v) {
    if (std::isfinite(v)) return v;
    return io::format_double(v);
}

} // namespace

Tolerances Tolerances::profile(const std::string& name) {
    Tolerances t;
    if (name == "default") return t;
    if (name != "strict") throw SchemaError("--tolerance-profile", "must be 'strict' or 'default'");
    // strict: halve every numerical tolerance and let library warnings fail the run.
    for (double* v : {&t.wigner_oracle, &t.imag_residual, &t.mass, &t.marginal, &t.trace, &t.hermitian, &t.damping_rel,
                      &t.decoherence_rel, &t.classical_diag, &t.classical_offdiag, &t.convolution, &t.purity_step,
                      &t.mc_rel})
        *v *= 0.5;
    t.warnings_fail = true;
    return t;
}

json Tolerances::to_json() const {
    return {{"wigner_oracle", wigner_oracle},
            {"imag_residual", imag_residual},
            {"mass", mass},
            {"marginal", marginal},
            {"trace", trace},
            {"hermitian", hermitian},
            {"damping_rel", damping_rel},
            {"decoherence_rel", decoherence_rel},
            {"classical_diag", classical_diag},
            {"classical_offdiag", classical_offdiag},
            {"convolution", convolution},
            {"purity_step", purity_step},
            {"mc_rel", mc_rel},
            {"mc_sigmas", mc_sigmas},
            {"exact", exact},
            {"warnings_fail", warnings_fail}};
}

json versions() {
    return {{"qbm", "1.0.0"},
            {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                          std::to_string(EIGEN_MINOR_VERSION)},
            {"fftw", dft::backend_version()},
            {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                  std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                  std::to_string(NLOHMANN_JSON_VERSION_PATCH)}};
}

Manifest::Manifest(std::string command, const GlobalOptions& opt, const Tolerances& tol)
    : command_(std::move(command)), tolerances_(tol.to_json()), warnings_fail_(tol.warnings_fail) {
    options_ = {{"config", opt.config_path},
                {"tolerance_profile", opt.tolerance_profile},
                {"threads", opt.threads},
                {"convolve", opt.convolve}};
    options_["seed"] = opt.seed ? json(*opt.seed) : json(nullptr);
}

bool Manifest::check_le(const std::string& name, double value, double threshold, std::string note) {
    Check c{name, value, threshold, "<=", value <= threshold, false, std::move(note)};
    checks_.push_back(c);
    return c.passed;
}

bool Manifest::check_ge(const std::string& name, double value, double threshold, std::string note) {
    Check c{name, value, threshold, ">=", value >= threshold, false, std::move(note)};
    checks_.push_back(c);
    return c.passed;
}

bool Manifest::check_true(const std::string& name, bool ok, std::string note) {
    checks_.push_back(Check{name, ok ? 1.0 : 0.0, 1.0, "==", ok, false, std::move(note)});
    return ok;
}

void Manifest::diagnostic(const std::string& name, double value, std::string note) {
    checks_.push_back(Check{name, value, 0.0, "", true, true, std::move(note)});
}

bool Manifest::passed() const {
    if (warnings_fail_ && !warnings_.empty()) return false;
    for (const auto& c : checks_)
        if (!c.diagnostic && !c.passed) return false;
    return true;
}

json Manifest::to_json() const {
    json checks = json::array(), diagnostics = json::array();
    for (const auto& c : checks_) {
        json e = {{"name", c.name}, {"value", number_or_string(c.value)}};
        if (!c.note.empty()) e["note"] = c.note;
        if (c.diagnostic) {
            diagnostics.push_back(e);
            continue;
        }
        e["relation"] = c.relation;
        e["threshold"] = number_or_string(c.threshold);
        e["passed"] = c.passed;
        checks.push_back(e);
    }
    return {{"command", command_}, {"versions", versions()}, {"options", options_},
            {"inputs", inputs_},   {"tolerances", tolerances_}, {"checks", checks},
            {"diagnostics", diagnostics}, {"results", results_}, {"warnings", warnings_},
            {"outputs", outputs_}, {"passed", passed()}};
}

std::string Manifest::write(const std::string& out_dir) const {
    std::filesystem::create_directories(out_dir);
    const std::string path = (std::filesystem::path(out_dir) / (command_ + ".manifest.json")).string();
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write " + path);
    os << to_json().dump(2) << '\n';
    return path;
}

} // namespace qbm::cli
