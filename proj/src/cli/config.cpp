#include "qbm/cli.hpp"

#include "qbm/grid_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

namespace qbm::cli {

ConfigReader::ConfigReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw SchemaError(path_, "expected an object");
}

bool ConfigReader::has(const std::string& key) const { return j_.contains(key); }

const json* ConfigReader::lookup(const std::string& key, const char* type) {
    seen_.push_back(key);
    if (!j_.contains(key)) return nullptr;
    const json& v = j_.at(key);
    const std::string t = type;
    const bool ok = (t == "number" && v.is_number()) || (t == "integer" && v.is_number_integer()) ||
                    (t == "boolean" && v.is_boolean()) || (t == "string" && v.is_string()) ||
                    (t == "array" && v.is_array()) || (t == "object" && v.is_object());
    if (!ok) throw SchemaError(at(key), std::string("expected ") + type + ", got " + v.type_name());
    return &v;
}

double ConfigReader::number(const std::string& key, std::optional<double> fallback) {
    const json* v = lookup(key, "number");
    if (!v && !fallback) throw SchemaError(at(key), "required number is missing");
    const double d = v ? v->get<double>() : *fallback;
    if (!std::isfinite(d)) throw SchemaError(at(key), "must be finite");
    resolved_[key] = d;
    return d;
}

double ConfigReader::positive(const std::string& key, std::optional<double> fallback) {
    const double d = number(key, fallback);
    if (!(d > 0.0)) throw SchemaError(at(key), "must be > 0");
    return d;
}

std::int64_t ConfigReader::integer(const std::string& key, std::optional<std::int64_t> fallback) {
    const json* v = lookup(key, "integer");
    if (!v && !fallback) throw SchemaError(at(key), "required integer is missing");
    const std::int64_t i = v ? v->get<std::int64_t>() : *fallback;
    resolved_[key] = i;
    return i;
}

bool ConfigReader::boolean(const std::string& key, std::optional<bool> fallback) {
    const json* v = lookup(key, "boolean");
    if (!v && !fallback) throw SchemaError(at(key), "required boolean is missing");
    const bool b = v ? v->get<bool>() : *fallback;
    resolved_[key] = b;
    return b;
}

std::string ConfigReader::string(const std::string& key, const std::vector<std::string>& allowed,
                                 std::optional<std::string> fallback) {
    const json* v = lookup(key, "string");
    if (!v && !fallback) throw SchemaError(at(key), "required string is missing");
    std::string s = v ? v->get<std::string>() : *fallback;
    if (!allowed.empty() && std::find(allowed.begin(), allowed.end(), s) == allowed.end()) {
        std::string list;
        for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
        throw SchemaError(at(key), "\"" + s + "\" is not one of {" + list + "}");
    }
    resolved_[key] = s;
    return s;
}

std::vector<double> ConfigReader::numbers(const std::string& key, std::optional<std::vector<double>> fallback) {
    const json* v = lookup(key, "array");
    if (!v && !fallback) throw SchemaError(at(key), "required array is missing");
    std::vector<double> out;
    if (v) {
        for (std::size_t i = 0; i < v->size(); ++i) {
            const json& e = (*v)[i];
            if (!e.is_number()) throw SchemaError(at(key) + "[" + std::to_string(i) + "]", "expected number");
            out.push_back(e.get<double>());
        }
    } else {
        out = *fallback;
    }
    resolved_[key] = out;
    return out;
}

ConfigReader ConfigReader::object(const std::string& key) {
    const json* v = lookup(key, "object");
    return ConfigReader(v ? *v : json::object(), at(key));
}

void ConfigReader::adopt(const std::string& key, ConfigReader& child) {
    child.finish();
    resolved_[key] = child.resolved();
}

void ConfigReader::finish() {
    for (const auto& item : j_.items())
        if (std::find(seen_.begin(), seen_.end(), item.key()) == seen_.end())
            throw SchemaError(at(item.key()), "unknown key");
}

json load_config(const std::string& path) {
    if (path.empty()) return json::object();
    std::ifstream in(path);
    if (!in) throw SchemaError("$", "cannot open config file '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw SchemaError("$", std::string("malformed JSON: ") + e.what());
    }
}

grid::SpatialGrid read_grid(ConfigReader& parent, std::size_t default_n, double default_x_max) {
    ConfigReader r = parent.object("grid");
    const auto n = r.integer("n", static_cast<std::int64_t>(default_n));
    const double x_max = r.positive("x_max", default_x_max);
    if (n < 32 || n % 2 != 0) throw SchemaError(r.at("n"), "must be even and >= 32");
    parent.adopt("grid", r);
    return grid::SpatialGrid::symmetric(static_cast<std::size_t>(n), x_max);
}

grid::PhysParams read_params(ConfigReader& parent) {
    ConfigReader r = parent.object("params");
    const double m_S = r.positive("m_S", 1.0);
    const double m_E = r.positive("m_E", 0.01);
    const double Gamma = r.positive("Gamma", 10.0);
    const double T = r.positive("T", 1.0);
    const double k_B = r.positive("k_B", 1.0);
    const double hbar = r.positive("hbar", 1.0);
    parent.adopt("params", r);
    return grid::PhysParams(m_S, m_E, Gamma, k_B, T, hbar);
}

dynamics::TermMask read_mask(ConfigReader& parent) {
    ConfigReader r = parent.object("mask");
    dynamics::TermMask m;
    m.free = r.boolean("free", true);
    m.damping = r.boolean("damping", true);
    m.decoherence = r.boolean("decoherence", true);
    parent.adopt("mask", r);
    if (!m.any()) throw SchemaError(parent.at("mask"), "enables no term");
    return m;
}

grid::GridStateOperator read_initial(ConfigReader& parent, const grid::SpatialGrid& g, const json& fallback) {
    const bool given = parent.has("initial");
    ConfigReader r = parent.object("initial");
    if (!given) r = ConfigReader(fallback, parent.at("initial"));
    const std::string kind = r.string("kind", {"sho", "wavepacket", "file"}, "sho");
    grid::GridStateOperator rho{g, {}};
    try {
        if (kind == "sho") {
            const auto n = r.integer("n", 0);
            const double m = r.positive("m", 1.0);
            const double omega = r.positive("omega", 1.0);
            if (n < 0 || n > 20) throw SchemaError(r.at("n"), "must lie in 0..20");
            rho = grid::pure_state_operator(grid::sho_eigenfunction(static_cast<int>(n), m, omega, g));
        } else if (kind == "wavepacket") {
            const double x0 = r.number("x0", 0.0);
            const double p0 = r.number("p0", 1.0);
            const double sigma = r.positive("sigma", 1.0);
            rho = grid::pure_state_operator(grid::gaussian_wavepacket(x0, p0, sigma, g));
        } else {
            const std::string path = r.string("path", {});
            rho = io::load_state(path);
            if (!(rho.grid == g)) throw SchemaError(r.at("path"), "state grid does not match $.grid");
        }
    } catch (const SchemaError&) {
        throw;
    } catch (const std::exception& e) {
        throw SchemaError(parent.at("initial"), e.what());
    }
    parent.adopt("initial", r);
    return rho;
}

} // namespace qbm::cli
