// rational.hpp — exact rational arithmetic for small-dimension state-operator checks.

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace qbm::exact {

// Normalized fraction num/den with den > 0 and gcd(num, den) = 1.
// Overflow of the 64-bit intermediates throws std::overflow_error.
class Rational {
public:
    Rational() = default;
    Rational(std::int64_t n) : num_(n) {} // NOLINT(implicit)
    Rational(std::int64_t n, std::int64_t d);

    std::int64_t num() const noexcept { return num_; }
    std::int64_t den() const noexcept { return den_; }
    double to_double() const noexcept { return static_cast<double>(num_) / static_cast<double>(den_); }
    std::string str() const;

    friend Rational operator+(const Rational& a, const Rational& b);
    friend Rational operator-(const Rational& a, const Rational& b);
    friend Rational operator*(const Rational& a, const Rational& b);
    friend Rational operator/(const Rational& a, const Rational& b);
    Rational operator-() const { return Rational(-num_, den_); }
    Rational& operator+=(const Rational& b) { return *this = *this + b; }

    friend bool operator==(const Rational& a, const Rational& b) noexcept {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }

private:
    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

// Gaussian rational re + i·im.
struct ComplexRational {
    Rational re;
    Rational im;

    friend ComplexRational operator+(const ComplexRational& a, const ComplexRational& b) {
        return {a.re + b.re, a.im + b.im};
    }
    friend ComplexRational operator*(const ComplexRational& a, const ComplexRational& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend bool operator==(const ComplexRational& a, const ComplexRational& b) {
        return a.re == b.re && a.im == b.im;
    }
};

// Dense square matrix of complex rationals, row-major.
class RationalMatrix {
public:
    explicit RationalMatrix(std::size_t dim);

    std::size_t dim() const noexcept { return dim_; }
    ComplexRational& operator()(std::size_t i, std::size_t j) { return a_[i * dim_ + j]; }
    const ComplexRational& operator()(std::size_t i, std::size_t j) const { return a_[i * dim_ + j]; }

    friend RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b);
    friend bool operator==(const RationalMatrix& a, const RationalMatrix& b) { return a.a_ == b.a_; }

private:
    std::size_t dim_;
    std::vector<ComplexRational> a_;
};

RationalMatrix kron(const RationalMatrix& a, const RationalMatrix& b);
ComplexRational trace(const RationalMatrix& a);
// Reduced matrix keeping the first (keep_first = true) or second factor of a dA×dB product.
RationalMatrix partial_trace(const RationalMatrix& rho, std::size_t da, std::size_t db, bool keep_first);
// Tr(ρ²)
ComplexRational purity(const RationalMatrix& rho);
// r_k = Tr(ρ σ_k) for a 2×2 input.
std::vector<ComplexRational> bloch(const RationalMatrix& rho);

// (|00> + |11>)(<00| + <11|)/2 in exact arithmetic.
RationalMatrix bell_state();

} // namespace qbm::exact
