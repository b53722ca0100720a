// phase_polynomial.hpp — exact polynomials sum c_ab x^a p^b times exp(-x^2 - p^2).
//
// Closed under d/dp and multiplication by p, which is all the oscillator oracles and the
// collision drift/diffusion fields need.

#pragma once

#include <vector>

namespace qbm {

class PhasePolynomial {
public:
    PhasePolynomial() = default;
    // coeffs[a][b] multiplies x^a p^b.
    explicit PhasePolynomial(std::vector<std::vector<double>> coeffs);

    double operator()(double x, double p) const;

    PhasePolynomial d_dp() const;
    PhasePolynomial times_p() const;
    PhasePolynomial scaled(double s) const;

    double coeff(std::size_t a, std::size_t b) const;

private:
    std::vector<std::vector<double>> c_;
};

} // namespace qbm
