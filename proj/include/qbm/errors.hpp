// errors.hpp — exception types shared by all qbm modules

#pragma once

#include <stdexcept>
#include <string>

namespace qbm {

// A quantity lies outside the domain where the requested computation is defined
// (grid too narrow for a state, diagonal decoherence time, invalid expansion).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// A run configuration violates a numerical bound (time step, sample count).
class ConfigurationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// The request is well formed but not implemented (e.g. closed forms beyond n = 3).
class UnsupportedError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// Malformed or truncated serialized data.
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

[[noreturn]] void throw_invalid(const std::string& where, const std::string& what);

} // namespace qbm
