#include "qbm/grid_io.hpp"

#include "qbm/errors.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

namespace qbm::io {

namespace {

static_assert(std::endian::native == std::endian::little, "binary containers assume a little-endian host");

Eigen::Index idx(std::size_t i) { return static_cast<Eigen::Index>(i); }

template <typename T>
void put(std::ostream& os, T v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <typename T>
T get(std::istream& is) {
    T v{};
    if (!is.read(reinterpret_cast<char*>(&v), sizeof v)) throw FormatError("binary container: truncated input");
    return v;
}

void write_header(std::ostream& os, const char* magic, const grid::SpatialGrid& g) {
    if (g.x_min() != -g.x_max()) throw FormatError("binary container: grid must be symmetric about 0");
    os.write(magic, 4);
    put<std::uint32_t>(os, kFormatVersion);
    put<std::uint32_t>(os, static_cast<std::uint32_t>(g.n()));
    put<float>(os, static_cast<float>(g.x_max()));
}

grid::SpatialGrid read_header(std::istream& is, const char* magic) {
    char m[4];
    if (!is.read(m, 4)) throw FormatError("binary container: truncated header");
    if (std::memcmp(m, magic, 4) != 0) {
        throw FormatError(std::string("binary container: bad magic, expected ") + std::string(magic, 4));
    }
    const auto version = get<std::uint32_t>(is);
    if (version != kFormatVersion) throw FormatError("binary container: unsupported version " + std::to_string(version));
    const auto n = get<std::uint32_t>(is);
    const auto x_max = get<float>(is);
    if (n > (1U << 16)) throw FormatError("binary container: implausible n = " + std::to_string(n));
    try {
        return grid::SpatialGrid::symmetric(n, static_cast<double>(x_max));
    } catch (const std::invalid_argument& e) {
        throw FormatError(std::string("binary container: invalid grid: ") + e.what());
    }
}

std::vector<double> parse_row(const std::string& line, std::size_t expect, std::size_t lineno) {
    std::vector<double> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        char* end = nullptr;
        const double v = std::strtod(cell.c_str(), &end);
        if (end == cell.c_str()) throw FormatError("csv line " + std::to_string(lineno) + ": not a number: " + cell);
        out.push_back(v);
    }
    if (out.size() != expect) throw FormatError("csv line " + std::to_string(lineno) + ": wrong column count");
    return out;
}

} // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_csv(std::ostream& os, const grid::GridStateOperator& rho) {
    os << "x,y,re,im\n";
    const auto& g = rho.grid;
    for (std::size_t i = 0; i < g.n(); ++i)
        for (std::size_t j = 0; j < g.n(); ++j) {
            const auto v = rho.rho(idx(i), idx(j));
            os << format_double(g.x(i)) << ',' << format_double(g.x(j)) << ',' << format_double(v.real()) << ','
               << format_double(v.imag()) << '\n';
        }
}

grid::GridStateOperator read_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line != "x,y,re,im") throw FormatError("csv: expected header x,y,re,im");
    std::vector<std::vector<double>> rows;
    std::size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        rows.push_back(parse_row(line, 4, lineno));
    }
    const auto n = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(rows.size()))));
    if (n * n != rows.size() || n < 2) throw FormatError("csv: element count is not a square");
    const double x_min = rows.front()[0];
    const double dx = rows[n][0] - rows[0][0];
    grid::SpatialGrid g = [&] {
        try {
            return grid::SpatialGrid(n, x_min, x_min + dx * static_cast<double>(n));
        } catch (const std::invalid_argument& e) {
            throw FormatError(std::string("csv: invalid grid: ") + e.what());
        }
    }();
    // Snap to the symmetric grid when the file was written from one.
    if (std::abs(g.x_min() + g.x_max()) <= 1e-9 * g.x_max()) g = grid::SpatialGrid::symmetric(n, -x_min);
    grid::GridStateOperator out{g, grid::CMatrix(idx(n), idx(n))};
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const auto& r = rows[i * n + j];
            if (std::abs(r[0] - g.x(i)) > 1e-9 * (1.0 + std::abs(g.x(i))) ||
                std::abs(r[1] - g.x(j)) > 1e-9 * (1.0 + std::abs(g.x(j)))) {
                throw FormatError("csv: element " + std::to_string(i * n + j) + " is out of x/y order");
            }
            out.rho(idx(i), idx(j)) = {r[2], r[3]};
        }
    return out;
}

void write_binary(std::ostream& os, const grid::GridStateOperator& rho) {
    write_header(os, "DLAB", rho.grid);
    for (std::size_t i = 0; i < rho.grid.n(); ++i)
        for (std::size_t j = 0; j < rho.grid.n(); ++j) {
            put<double>(os, rho.rho(idx(i), idx(j)).real());
            put<double>(os, rho.rho(idx(i), idx(j)).imag());
        }
}

grid::GridStateOperator read_binary(std::istream& is) {
    const auto g = read_header(is, "DLAB");
    grid::GridStateOperator out{g, grid::CMatrix(idx(g.n()), idx(g.n()))};
    for (std::size_t i = 0; i < g.n(); ++i)
        for (std::size_t j = 0; j < g.n(); ++j) {
            const double re = get<double>(is);
            const double im = get<double>(is);
            out.rho(idx(i), idx(j)) = {re, im};
        }
    return out;
}

void write_csv(std::ostream& os, const wigner::WignerDistribution& w) {
    os << "xbar,p,w\n";
    for (std::size_t i = 0; i < w.grid.n(); ++i)
        for (std::size_t k = 0; k < w.grid.n(); ++k) {
            os << format_double(w.grid.xbar(idx(i))) << ',' << format_double(w.grid.p(idx(k))) << ','
               << format_double(w.w(idx(i), idx(k))) << '\n';
        }
}

void write_binary(std::ostream& os, const wigner::WignerDistribution& w) {
    write_header(os, "DLBW", w.grid.space);
    for (const auto* m : {&w.w, &w.w_half})
        for (std::size_t i = 0; i < w.grid.n(); ++i)
            for (std::size_t k = 0; k < w.grid.n(); ++k) put<double>(os, (*m)(idx(i), idx(k)));
}

wigner::WignerDistribution read_wigner_binary(std::istream& is) {
    const auto g = read_header(is, "DLBW");
    const std::size_t n = g.n();
    wigner::WignerDistribution out{wigner::PhaseSpaceGrid(g), wigner::RMatrix(idx(n), idx(n)),
                                   wigner::RMatrix(idx(n), idx(n)), 0.0};
    for (auto* m : {&out.w, &out.w_half})
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < n; ++k) (*m)(idx(i), idx(k)) = get<double>(is);
    return out;
}

namespace {
bool ends_with(const std::string& s, const std::string& suf) {
    return s.size() >= suf.size() && s.compare(s.size() - suf.size(), suf.size(), suf) == 0;
}
} // namespace

void save(const std::string& path, const grid::GridStateOperator& rho) {
    const bool bin = ends_with(path, ".bin");
    std::ofstream os(path, bin ? std::ios::binary : std::ios::out);
    if (!os) throw std::runtime_error("cannot open " + path + " for writing");
    if (bin) write_binary(os, rho);
    else write_csv(os, rho);
}

grid::GridStateOperator load_state(const std::string& path) {
    const bool bin = ends_with(path, ".bin");
    std::ifstream is(path, bin ? std::ios::binary : std::ios::in);
    if (!is) throw std::runtime_error("cannot open " + path);
    return bin ? read_binary(is) : read_csv(is);
}

} // namespace qbm::io
