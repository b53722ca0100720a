#include "qbm/wigner.hpp"

#include "qbm/dft.hpp"
#include "qbm/errors.hpp"

#include <array>
#include <cmath>
#include <complex>
#include <string>

namespace qbm::wigner {

namespace {

using Complex = std::complex<double>;
using grid::GridStateOperator;

Eigen::Index idx(std::size_t i) { return static_cast<Eigen::Index>(i); }
double parity(std::size_t k) { return (k & 1U) ? -1.0 : 1.0; }

// exp(-i pi (k - n/2) / n): the extra half-step phase carried by half rows.
std::vector<Complex> half_row_phase(std::size_t n, double sign) {
    std::vector<Complex> ph(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double s = static_cast<double>(k) - 0.5 * static_cast<double>(n);
        ph[k] = std::polar(1.0, sign * M_PI * s / static_cast<double>(n));
    }
    return ph;
}

// Forward transform of one row.  `shift` is 0 for node rows, 1 for half rows.
double transform_row(const grid::CMatrix& rho, std::size_t i, int shift, const std::vector<Complex>* phase,
                     std::vector<Complex>& buf, double c, Eigen::Ref<RVector> out) {
    const std::size_t n = buf.size();
    const long half = static_cast<long>(n / 2);
    const long nn = static_cast<long>(n);
    for (std::size_t m = 0; m < n; ++m) {
        const long j = static_cast<long>(m) - half;
        const long a = static_cast<long>(i) + j + shift;
        const long b = static_cast<long>(i) - j;
        const Complex v = (a >= 0 && a < nn && b >= 0 && b < nn) ? rho(a, b) : Complex(0.0);
        buf[m] = parity(m) * v;
    }
    dft::forward(buf.data(), n);
    double imag = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        Complex v = c * parity(k + n / 2) * buf[k];
        if (phase) v *= (*phase)[k];
        out(idx(k)) = v.real();
        imag = std::max(imag, std::abs(v.imag()));
    }
    return imag;
}

void inverse_row(const RVector& row, std::size_t i, int shift, const std::vector<Complex>* phase,
                 std::vector<Complex>& buf, double dp, grid::CMatrix& rho) {
    const std::size_t n = buf.size();
    const long half = static_cast<long>(n / 2);
    const long nn = static_cast<long>(n);
    for (std::size_t k = 0; k < n; ++k) {
        Complex v = parity(k) * row(idx(k));
        if (phase) v *= (*phase)[k];
        buf[k] = v;
    }
    dft::backward(buf.data(), n);
    for (std::size_t m = 0; m < n; ++m) {
        const long j = static_cast<long>(m) - half;
        const long a = static_cast<long>(i) + j + shift;
        const long b = static_cast<long>(i) - j;
        if (a >= 0 && a < nn && b >= 0 && b < nn) rho(a, b) = dp * parity(m + n / 2) * buf[m];
    }
}

PhasePolynomial make_poly(std::vector<std::vector<double>> c, double scale) {
    return PhasePolynomial(std::move(c)).scaled(scale);
}

} // namespace

PhaseSpaceGrid::PhaseSpaceGrid(const grid::SpatialGrid& g)
    : space(g), xbar(g.points()), p(idx(g.n())), dp(M_PI / (static_cast<double>(g.n()) * g.dx())) {
    for (std::size_t k = 0; k < g.n(); ++k) p(idx(k)) = dp * (static_cast<double>(k) - 0.5 * static_cast<double>(g.n()));
}

double WignerDistribution::total_mass() const {
    return w.sum() * grid.dxbar() * grid.dp;
}

WignerDistribution wigner_transform(const GridStateOperator& rho) {
    const std::size_t n = rho.grid.n();
    WignerDistribution out{PhaseSpaceGrid(rho.grid), RMatrix(idx(n), idx(n)), RMatrix(idx(n), idx(n)), 0.0};
    const double c = rho.grid.dx() / M_PI; // delta step (2 dx) / (2 pi)
    const auto phase = half_row_phase(n, -1.0);
    std::vector<Complex> buf(n);
    RVector row(idx(n));
    for (std::size_t i = 0; i < n; ++i) {
        double im = transform_row(rho.rho, i, 0, nullptr, buf, c, row);
        out.w.row(idx(i)) = row.transpose();
        im = std::max(im, transform_row(rho.rho, i, 1, &phase, buf, c, row));
        out.w_half.row(idx(i)) = row.transpose();
        out.imag_residual = std::max(out.imag_residual, im);
    }
    return out;
}

GridStateOperator inverse_wigner(const WignerDistribution& w) {
    const std::size_t n = w.grid.n();
    GridStateOperator out{w.grid.space, grid::CMatrix::Zero(idx(n), idx(n))};
    const auto phase = half_row_phase(n, +1.0);
    std::vector<Complex> buf(n);
    for (std::size_t i = 0; i < n; ++i) {
        inverse_row(w.w.row(idx(i)).transpose(), i, 0, nullptr, buf, w.grid.dp, out.rho);
        inverse_row(w.w_half.row(idx(i)).transpose(), i, 1, &phase, buf, w.grid.dp, out.rho);
    }
    return out;
}

RVector position_marginal(const WignerDistribution& w) {
    return w.w.rowwise().sum() * w.grid.dp;
}

RVector momentum_marginal(const WignerDistribution& w) {
    return (w.w.colwise().sum() + w.w_half.colwise().sum()).transpose() * (0.5 * w.grid.dxbar());
}

RVector momentum_density(const GridStateOperator& rho, const RVector& p) {
    const std::size_t n = rho.grid.n();
    grid::CMatrix f(p.size(), idx(n));
    for (Eigen::Index k = 0; k < p.size(); ++k)
        for (std::size_t a = 0; a < n; ++a) f(k, idx(a)) = std::polar(1.0, -p(k) * rho.grid.x(a));
    const grid::CMatrix fr = f * rho.rho;
    RVector out(p.size());
    const double c = rho.grid.dx() * rho.grid.dx() / (2.0 * M_PI);
    for (Eigen::Index k = 0; k < p.size(); ++k) out(k) = c * fr.row(k).dot(f.row(k)).real();
    return out;
}

const PhasePolynomial& sho_wigner_polynomial(int n) {
    // coeffs[a][b] multiplies xbar^a p^b
    static const std::array<PhasePolynomial, 4> table = {
        make_poly({{1.0}}, 1.0 / M_PI),
        make_poly({{-1.0, 0.0, 2.0}, {}, {2.0}}, 1.0 / M_PI),
        make_poly({{1.0, 0.0, -4.0, 0.0, 2.0}, {}, {-4.0, 0.0, 4.0}, {}, {2.0}}, 1.0 / M_PI),
        make_poly({{-3.0, 0.0, 18.0, 0.0, -18.0, 0.0, 4.0},
                   {},
                   {18.0, 0.0, -36.0, 0.0, 12.0},
                   {},
                   {-18.0, 0.0, 12.0},
                   {},
                   {4.0}},
                  1.0 / (3.0 * M_PI)),
    };
    if (n < 0 || n > 3) {
        throw UnsupportedError("sho_wigner_closed: closed forms exist only for n = 0..3 (got " +
                               std::to_string(n) + ")");
    }
    return table[static_cast<std::size_t>(n)];
}

double sho_wigner_closed(int n, double xbar, double p) {
    return sho_wigner_polynomial(n)(xbar, p);
}

WignerDistribution sample_closed_form(int n, const PhaseSpaceGrid& g) {
    const auto& poly = sho_wigner_polynomial(n);
    const std::size_t sz = g.n();
    WignerDistribution out{g, RMatrix(idx(sz), idx(sz)), RMatrix(idx(sz), idx(sz)), 0.0};
    for (std::size_t i = 0; i < sz; ++i)
        for (std::size_t k = 0; k < sz; ++k) {
            out.w(idx(i), idx(k)) = poly(g.xbar(idx(i)), g.p(idx(k)));
            out.w_half(idx(i), idx(k)) = poly(g.xbar_half(i), g.p(idx(k)));
        }
    return out;
}

CompositeWigner::CompositeWigner(const WignerDistribution& w1, const WignerDistribution& w2)
    : grid_(w1.grid), n_(w1.grid.n()), offset_(0) {
    if (!(w1.grid == w2.grid)) throw_invalid("composite_wigner", "phase-space grids differ");
    const std::size_t per = n_ * n_ * n_ * n_;
    if (n_ > 0 && (per / n_ / n_ / n_ != n_ || 2 * per > kMaxElements)) {
        throw_invalid("composite_wigner", "grid with n = " + std::to_string(n_) +
                                              " exceeds the composite size limit (2 n^4 <= 2^27)");
    }
    offset_ = per;
    data_.resize(2 * per);
    for (std::size_t i1 = 0; i1 < n_; ++i1)
        for (std::size_t k1 = 0; k1 < n_; ++k1) {
            const double a = w1.w(idx(i1), idx(k1));
            const double ah = w1.w_half(idx(i1), idx(k1));
            double* dst = data_.data() + (i1 * n_ + k1) * n_ * n_;
            double* dsth = dst + offset_;
            for (std::size_t i2 = 0; i2 < n_; ++i2)
                for (std::size_t k2 = 0; k2 < n_; ++k2) {
                    const double b = w2.w(idx(i2), idx(k2));
                    dst[i2 * n_ + k2] = a * b;
                    dsth[i2 * n_ + k2] = ah * b;
                }
        }
}

CompositeWigner composite_wigner(const WignerDistribution& w1, const WignerDistribution& w2) {
    return CompositeWigner(w1, w2);
}

WignerDistribution project_out(const CompositeWigner& wc) {
    const std::size_t n = wc.n();
    const double cell = wc.grid().dxbar() * wc.grid().dp;
    WignerDistribution out{wc.grid(), RMatrix(idx(n), idx(n)), RMatrix(idx(n), idx(n)), 0.0};
    for (std::size_t i1 = 0; i1 < n; ++i1)
        for (std::size_t k1 = 0; k1 < n; ++k1) {
            double s = 0.0, sh = 0.0;
            for (std::size_t i2 = 0; i2 < n; ++i2)
                for (std::size_t k2 = 0; k2 < n; ++k2) {
                    s += wc(i1, k1, i2, k2);
                    sh += wc.half(i1, k1, i2, k2);
                }
            out.w(idx(i1), idx(k1)) = s * cell;
            out.w_half(idx(i1), idx(k1)) = sh * cell;
        }
    return out;
}

WignerDistribution gaussian_convolve(const WignerDistribution& w, ConvolutionDiagnostics* diag) {
    constexpr double kCut = 12.0; // exp(-144) is far below double resolution of the peak
    const std::size_t n = w.grid.n();
    const double dp = w.grid.dp;
    const double h = 0.5 * w.grid.dxbar(); // interleaved row spacing

    // Pass 1: along p on every one of the 2n interleaved rows (even = node, odd = half).
    const long kp = static_cast<long>(std::floor(kCut / dp));
    std::vector<double> kern_p(static_cast<std::size_t>(2 * kp + 1));
    for (long d = -kp; d <= kp; ++d) kern_p[static_cast<std::size_t>(d + kp)] = dp * std::exp(-(d * dp) * (d * dp));
    RMatrix a(idx(2 * n), idx(n));
    for (std::size_t r = 0; r < 2 * n; ++r) {
        const RMatrix& src = (r % 2 == 0) ? w.w : w.w_half;
        const Eigen::Index row = idx(r / 2);
        for (long k = 0; k < static_cast<long>(n); ++k) {
            double s = 0.0;
            const long lo = std::max(0L, k - kp), hi = std::min(static_cast<long>(n) - 1, k + kp);
            for (long q = lo; q <= hi; ++q) s += kern_p[static_cast<std::size_t>(q - k + kp)] * src(row, q);
            a(idx(r), k) = s;
        }
    }

    // Pass 2: along xbar across the interleaved rows.
    const long kx = static_cast<long>(std::floor(kCut / h));
    std::vector<double> kern_x(static_cast<std::size_t>(2 * kx + 1));
    for (long d = -kx; d <= kx; ++d) kern_x[static_cast<std::size_t>(d + kx)] = h * std::exp(-(d * h) * (d * h));
    WignerDistribution out{w.grid, RMatrix::Zero(idx(n), idx(n)), RMatrix::Zero(idx(n), idx(n)), 0.0};
    const long rows = static_cast<long>(2 * n);
    for (long s = 0; s < rows; ++s) {
        RVector acc = RVector::Zero(idx(n));
        const long lo = std::max(0L, s - kx), hi = std::min(rows - 1, s + kx);
        for (long r = lo; r <= hi; ++r) acc += kern_x[static_cast<std::size_t>(r - s + kx)] * a.row(r).transpose();
        if (s % 2 == 0) out.w.row(s / 2) = acc.transpose();
        else out.w_half.row(s / 2) = acc.transpose();
    }

    if (diag) {
        diag->mass_before = w.total_mass();
        diag->mass_after = out.total_mass();
        diag->mass_ratio = diag->mass_after / diag->mass_before;
        diag->min_value = std::min(out.w.minCoeff(), out.w_half.minCoeff());
        diag->max_value = std::max(out.w.maxCoeff(), out.w_half.maxCoeff());
    }
    return out;
}

} // namespace qbm::wigner
