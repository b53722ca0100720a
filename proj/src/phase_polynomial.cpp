#include "qbm/phase_polynomial.hpp"

#include <algorithm>
#include <cmath>

namespace qbm {

PhasePolynomial::PhasePolynomial(std::vector<std::vector<double>> coeffs) : c_(std::move(coeffs)) {}

double PhasePolynomial::coeff(std::size_t a, std::size_t b) const {
    if (a >= c_.size() || b >= c_[a].size()) return 0.0;
    return c_[a][b];
}

double PhasePolynomial::operator()(double x, double p) const {
    // Horner in p for each power of x, then Horner in x.
    double acc = 0.0;
    for (std::size_t a = c_.size(); a-- > 0;) {
        double row = 0.0;
        for (std::size_t b = c_[a].size(); b-- > 0;) row = row * p + c_[a][b];
        acc = acc * x + row;
    }
    return acc * std::exp(-x * x - p * p);
}

PhasePolynomial PhasePolynomial::d_dp() const {
    // d/dp [p^b e^{-p^2}] = b p^{b-1} e^{-p^2} - 2 p^{b+1} e^{-p^2}
    std::vector<std::vector<double>> out(c_.size());
    for (std::size_t a = 0; a < c_.size(); ++a) {
        out[a].assign(c_[a].size() + 1, 0.0);
        for (std::size_t b = 0; b < c_[a].size(); ++b) {
            if (b > 0) out[a][b - 1] += static_cast<double>(b) * c_[a][b];
            out[a][b + 1] -= 2.0 * c_[a][b];
        }
    }
    return PhasePolynomial(std::move(out));
}

PhasePolynomial PhasePolynomial::times_p() const {
    std::vector<std::vector<double>> out(c_.size());
    for (std::size_t a = 0; a < c_.size(); ++a) {
        out[a].assign(c_[a].size() + 1, 0.0);
        std::copy(c_[a].begin(), c_[a].end(), out[a].begin() + 1);
    }
    return PhasePolynomial(std::move(out));
}

PhasePolynomial PhasePolynomial::scaled(double s) const {
    auto out = c_;
    for (auto& row : out)
        for (auto& v : row) v *= s;
    return PhasePolynomial(std::move(out));
}

} // namespace qbm
