// grid_io.hpp — CSV and binary containers for grid state operators and Wigner distributions.
//
// Binary layout (little-endian): 4-byte magic, u32 version, u32 n, f32 x_max, then the
// payload as f64.  "DLAB": n*n (re, im) pairs of rho, row-major.  "DLBW": n*n node-row
// values followed by n*n half-row values.  Grids are assumed symmetric (x_min = -x_max).

#pragma once

#include "qbm/grid.hpp"
#include "qbm/wigner.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>

namespace qbm::io {

inline constexpr std::uint32_t kFormatVersion = 1;

// Header `x,y,re,im`, one row per element, i outer and j inner, 17 significant digits.
void write_csv(std::ostream& os, const grid::GridStateOperator& rho);
grid::GridStateOperator read_csv(std::istream& is);

void write_binary(std::ostream& os, const grid::GridStateOperator& rho);
grid::GridStateOperator read_binary(std::istream& is);

// Header `xbar,p,w`, node rows only.
void write_csv(std::ostream& os, const wigner::WignerDistribution& w);
void write_binary(std::ostream& os, const wigner::WignerDistribution& w);
wigner::WignerDistribution read_wigner_binary(std::istream& is);

// File helpers; the format is chosen from the extension (.csv or .bin).
void save(const std::string& path, const grid::GridStateOperator& rho);
grid::GridStateOperator load_state(const std::string& path);

std::string format_double(double v); // "%.17g"

} // namespace qbm::io
