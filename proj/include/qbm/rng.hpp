// rng.hpp — reproducible random streams.
//
// Engine: std::mt19937_64 (fully specified by the standard, so streams are identical on
// every conforming library).  Uniforms take the top 53 bits; normals use the Box-Muller
// transform implemented here rather than std::normal_distribution, whose algorithm is
// implementation-defined.

#pragma once

#include <cstdint>
#include <random>

namespace qbm {

class Stream {
public:
    explicit Stream(std::uint64_t seed) : eng_(seed) {}

    // Uniform on [0, 1).
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
    // Standard normal.
    double normal();
    // +1 or -1 with equal probability.
    double sign() { return (eng_() >> 63) ? 1.0 : -1.0; }

private:
    std::mt19937_64 eng_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace qbm
