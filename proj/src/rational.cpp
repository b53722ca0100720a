#include "qbm/rational.hpp"

#include "qbm/errors.hpp"

#include <numeric>
#include <stdexcept>

namespace qbm::exact {

namespace {

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
    std::int64_t out = 0;
    if (__builtin_mul_overflow(a, b, &out)) throw std::overflow_error("Rational: multiplication overflow");
    return out;
}

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
    std::int64_t out = 0;
    if (__builtin_add_overflow(a, b, &out)) throw std::overflow_error("Rational: addition overflow");
    return out;
}

} // namespace

Rational::Rational(std::int64_t n, std::int64_t d) {
    if (d == 0) throw_invalid("Rational", "zero denominator");
    if (d < 0) {
        n = -n;
        d = -d;
    }
    const std::int64_t g = std::gcd(n, d);
    num_ = n / g;
    den_ = d / g;
}

std::string Rational::str() const {
    return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
}

Rational operator+(const Rational& a, const Rational& b) {
    const std::int64_t g = std::gcd(a.den_, b.den_);
    const std::int64_t l = checked_mul(a.den_ / g, b.den_);
    return Rational(checked_add(checked_mul(a.num_, l / a.den_), checked_mul(b.num_, l / b.den_)), l);
}

Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }

Rational operator*(const Rational& a, const Rational& b) {
    // cross-cancel before multiplying to keep intermediates small
    const std::int64_t g1 = std::gcd(a.num_, b.den_);
    const std::int64_t g2 = std::gcd(b.num_, a.den_);
    return Rational(checked_mul(a.num_ / g1, b.num_ / g2), checked_mul(a.den_ / g2, b.den_ / g1));
}

Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw std::domain_error("Rational: division by zero");
    return a * Rational(b.den_, b.num_);
}

RationalMatrix::RationalMatrix(std::size_t dim) : dim_(dim), a_(dim * dim) {
    if (dim == 0) throw_invalid("RationalMatrix", "zero dimension");
}

RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b) {
    if (a.dim_ != b.dim_) throw_invalid("RationalMatrix::*", "dimension mismatch");
    RationalMatrix out(a.dim_);
    for (std::size_t i = 0; i < a.dim_; ++i)
        for (std::size_t j = 0; j < a.dim_; ++j)
            for (std::size_t k = 0; k < a.dim_; ++k) out(i, j) = out(i, j) + a(i, k) * b(k, j);
    return out;
}

RationalMatrix kron(const RationalMatrix& a, const RationalMatrix& b) {
    const std::size_t da = a.dim(), db = b.dim();
    RationalMatrix out(da * db);
    for (std::size_t i = 0; i < da; ++i)
        for (std::size_t j = 0; j < da; ++j)
            for (std::size_t k = 0; k < db; ++k)
                for (std::size_t l = 0; l < db; ++l) out(i * db + k, j * db + l) = a(i, j) * b(k, l);
    return out;
}

ComplexRational trace(const RationalMatrix& a) {
    ComplexRational t;
    for (std::size_t i = 0; i < a.dim(); ++i) t = t + a(i, i);
    return t;
}

RationalMatrix partial_trace(const RationalMatrix& rho, std::size_t da, std::size_t db, bool keep_first) {
    if (da == 0 || db == 0 || da * db != rho.dim()) throw_invalid("exact::partial_trace", "dims mismatch");
    if (keep_first) {
        RationalMatrix out(da);
        for (std::size_t i = 0; i < da; ++i)
            for (std::size_t j = 0; j < da; ++j)
                for (std::size_t k = 0; k < db; ++k) out(i, j) = out(i, j) + rho(i * db + k, j * db + k);
        return out;
    }
    RationalMatrix out(db);
    for (std::size_t k = 0; k < db; ++k)
        for (std::size_t l = 0; l < db; ++l)
            for (std::size_t i = 0; i < da; ++i) out(k, l) = out(k, l) + rho(i * db + k, i * db + l);
    return out;
}

ComplexRational purity(const RationalMatrix& rho) { return trace(rho * rho); }

std::vector<ComplexRational> bloch(const RationalMatrix& rho) {
    if (rho.dim() != 2) throw_invalid("exact::bloch", "state operator must be 2x2");
    // Tr(ρσx) = ρ01 + ρ10, Tr(ρσy) = i(ρ01 − ρ10), Tr(ρσz) = ρ00 − ρ11
    const ComplexRational i_unit{Rational(0), Rational(1)};
    const ComplexRational minus_one{Rational(-1), Rational(0)};
    const ComplexRational rx = rho(0, 1) + rho(1, 0);
    const ComplexRational ry = i_unit * (rho(0, 1) + minus_one * rho(1, 0));
    const ComplexRational rz = rho(0, 0) + minus_one * rho(1, 1);
    return {rx, ry, rz};
}

RationalMatrix bell_state() {
    RationalMatrix rho(4);
    const ComplexRational half{Rational(1, 2), Rational(0)};
    rho(0, 0) = half;
    rho(0, 3) = half;
    rho(3, 0) = half;
    rho(3, 3) = half;
    return rho;
}

} // namespace qbm::exact
