#include "qbm/formal.hpp"

#include "qbm/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qbm::formal {

namespace {

Eigen::Index idx(std::size_t i) { return static_cast<Eigen::Index>(i); }

} // namespace

Operator::Operator(Matrix entries) : m_(std::move(entries)) {
    if (m_.rows() == 0 || m_.rows() != m_.cols()) {
        throw_invalid("Operator", "entries must be a non-empty square matrix (got " +
                                      std::to_string(m_.rows()) + "x" + std::to_string(m_.cols()) + ")");
    }
}

Operator Operator::identity(std::size_t dim) {
    return Operator(Matrix::Identity(idx(dim), idx(dim)));
}

Operator Operator::zero(std::size_t dim) {
    return Operator(Matrix::Zero(idx(dim), idx(dim)));
}

double Operator::self_adjoint_error() const {
    return (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
}

bool Operator::is_unit_trace(double tol) const {
    return std::abs(m_.trace() - Complex(1.0, 0.0)) <= tol;
}

Operator operator+(const Operator& a, const Operator& b) {
    if (a.dim() != b.dim()) throw_invalid("Operator::+", "dimension mismatch");
    return Operator(a.m_ + b.m_);
}

Operator operator-(const Operator& a, const Operator& b) {
    if (a.dim() != b.dim()) throw_invalid("Operator::-", "dimension mismatch");
    return Operator(a.m_ - b.m_);
}

Operator operator*(const Operator& a, const Operator& b) {
    if (a.dim() != b.dim()) throw_invalid("Operator::*", "dimension mismatch");
    return Operator(a.m_ * b.m_);
}

Operator operator*(Complex s, const Operator& a) {
    return Operator(s * a.m_);
}

Ket::Ket(Vector amplitudes) : v_(std::move(amplitudes)) {
    if (v_.size() == 0) throw_invalid("Ket", "amplitudes must be non-empty");
}

Ket Ket::normalized(Vector amplitudes) {
    const double n = amplitudes.norm();
    if (!(n > 0.0)) throw_invalid("Ket::normalized", "zero vector cannot be normalized");
    Ket k(amplitudes / n);
    k.normalized_ = true;
    return k;
}

Ket Ket::basis(std::size_t dim, std::size_t index) {
    if (index >= dim) throw_invalid("Ket::basis", "index out of range");
    Vector v = Vector::Zero(idx(dim));
    v(idx(index)) = 1.0;
    Ket k(std::move(v));
    k.normalized_ = true;
    return k;
}

Operator Ket::projector() const {
    return Operator(v_ * v_.adjoint());
}

Ket operator*(const Operator& a, const Ket& v) {
    if (a.dim() != v.dim()) throw_invalid("Operator*Ket", "dimension mismatch");
    return Ket(a.matrix() * v.amplitudes());
}

StateOperator StateOperator::validated(Operator op) {
    StateOperator s(std::move(op));
    const auto report = s.validate();
    if (!report.ok) {
        throw_invalid("StateOperator", "not a valid state operator (self-adjoint error " +
                                           std::to_string(report.self_adjoint_error) + ", trace error " +
                                           std::to_string(report.trace_error) + ", min eigenvalue " +
                                           std::to_string(report.min_eigenvalue) + ")");
    }
    return s;
}

StateOperator StateOperator::pure(const Ket& psi) {
    return validated(psi.projector());
}

StateValidation StateOperator::validate(double tol) const {
    StateValidation r;
    const Matrix& m = op_.matrix();
    r.self_adjoint_error = op_.self_adjoint_error();
    r.trace_error = std::abs(m.trace() - Complex(1.0, 0.0));
    const Matrix herm = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> solver(herm, Eigen::EigenvaluesOnly);
    r.min_eigenvalue = solver.eigenvalues()(0);
    r.ok = r.self_adjoint_error <= tol && r.trace_error <= tol && r.min_eigenvalue >= -tol;
    return r;
}

double BlochVector::norm() const {
    return std::sqrt(r[0] * r[0] + r[1] * r[1] + r[2] * r[2]);
}

Operator pauli_x() {
    Matrix m(2, 2);
    m << 0.0, 1.0,
         1.0, 0.0;
    return Operator(m);
}

Operator pauli_y() {
    Matrix m(2, 2);
    m << 0.0, Complex(0.0, -1.0),
         Complex(0.0, 1.0), 0.0;
    return Operator(m);
}

Operator pauli_z() {
    Matrix m(2, 2);
    m << 1.0, 0.0,
         0.0, -1.0;
    return Operator(m);
}

Matrix kron(const Matrix& a, const Matrix& b) {
    if (a.size() == 0 || b.size() == 0) throw_invalid("tensor_product", "zero-dimension operand");
    const Eigen::Index ra = a.rows(), ca = a.cols(), rb = b.rows(), cb = b.cols();
    Matrix out(ra * rb, ca * cb);
    for (Eigen::Index i = 0; i < ra; ++i)
        for (Eigen::Index j = 0; j < ca; ++j)
            out.block(i * rb, j * cb, rb, cb) = a(i, j) * b;
    return out;
}

Vector kron(const Vector& a, const Vector& b) {
    if (a.size() == 0 || b.size() == 0) throw_invalid("tensor_product", "zero-dimension operand");
    Vector out(a.size() * b.size());
    for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
    return out;
}

Operator tensor_product(const Operator& a, const Operator& b) {
    return Operator(kron(a.matrix(), b.matrix()));
}

Ket tensor_product(const Ket& a, const Ket& b) {
    Ket k(kron(a.amplitudes(), b.amplitudes()));
    if (a.is_normalized() && b.is_normalized()) return Ket::normalized(k.amplitudes());
    return k;
}

Complex trace(const Operator& a) {
    return a.matrix().trace();
}

Operator partial_trace(const Operator& rho, BipartiteDims dims, Subsystem keep) {
    if (dims.a == 0 || dims.b == 0 || dims.a * dims.b != rho.dim()) {
        throw_invalid("partial_trace", "dims (" + std::to_string(dims.a) + ", " + std::to_string(dims.b) +
                                           ") do not factor dimension " + std::to_string(rho.dim()));
    }
    const Matrix& m = rho.matrix();
    const Eigen::Index da = idx(dims.a), db = idx(dims.b);
    if (keep == Subsystem::A) {
        Matrix out = Matrix::Zero(da, da);
        for (Eigen::Index i = 0; i < da; ++i)
            for (Eigen::Index j = 0; j < da; ++j)
                for (Eigen::Index k = 0; k < db; ++k) out(i, j) += m(i * db + k, j * db + k);
        return Operator(std::move(out));
    }
    Matrix out = Matrix::Zero(db, db);
    for (Eigen::Index k = 0; k < db; ++k)
        for (Eigen::Index l = 0; l < db; ++l)
            for (Eigen::Index i = 0; i < da; ++i) out(k, l) += m(i * db + k, i * db + l);
    return Operator(std::move(out));
}

StateOperator partial_trace(const StateOperator& rho, BipartiteDims dims, Subsystem keep) {
    return StateOperator::unchecked(partial_trace(rho.op(), dims, keep));
}

Expectation expectation(const StateOperator& rho, const Operator& observable) {
    if (observable.dim() != rho.dim()) throw_invalid("expectation", "dimension mismatch");
    if (!observable.is_self_adjoint()) throw_invalid("expectation", "observable is not self-adjoint");
    const Complex t = (rho.matrix() * observable.matrix()).trace();
    return {t.real(), std::abs(t.imag())};
}

double purity(const StateOperator& rho) {
    return (rho.matrix() * rho.matrix()).trace().real();
}

bool is_pure(const StateOperator& rho, double tol) {
    return std::abs(purity(rho) - 1.0) <= tol;
}

BlochVector bloch_from_state(const StateOperator& rho) {
    if (rho.dim() != 2) throw_invalid("bloch_from_state", "state operator must be 2x2");
    const Matrix& m = rho.matrix();
    BlochVector b;
    b.r[0] = (m * pauli_x().matrix()).trace().real();
    b.r[1] = (m * pauli_y().matrix()).trace().real();
    b.r[2] = (m * pauli_z().matrix()).trace().real();
    return b;
}

StateOperator state_from_bloch(const BlochVector& r) {
    const Matrix m = 0.5 * (Matrix::Identity(2, 2) + r.r[0] * pauli_x().matrix() +
                            r.r[1] * pauli_y().matrix() + r.r[2] * pauli_z().matrix());
    return StateOperator::unchecked(Operator(m));
}

Ket state_from_angles(double theta, double phi) {
    if (!std::isfinite(theta) || !std::isfinite(phi) || theta < 0.0 || theta > M_PI) {
        throw_invalid("state_from_angles", "theta must lie in [0, pi] and phi must be finite");
    }
    Vector v(2);
    v(0) = std::cos(0.5 * theta);
    v(1) = std::polar(1.0, phi) * std::sin(0.5 * theta);
    return Ket::normalized(v);
}

Ket bell_ket() {
    const Ket zero = Ket::basis(2, 0);
    const Ket one = Ket::basis(2, 1);
    const Vector v = (tensor_product(zero, zero).amplitudes() + tensor_product(one, one).amplitudes()) /
                     std::sqrt(2.0);
    return Ket::normalized(v);
}

StateOperator bell_state() {
    return StateOperator::pure(bell_ket());
}

std::vector<Eigenpair> spectral_decompose(const Operator& a) {
    const double scale = std::max(1.0, a.matrix().cwiseAbs().maxCoeff());
    if (a.self_adjoint_error() > kStateTolerance * scale) {
        throw_invalid("spectral_decompose", "operator is not self-adjoint");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> solver(a.matrix());
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("spectral_decompose: eigen decomposition failed");
    }
    std::vector<Eigenpair> out;
    out.reserve(a.dim());
    for (Eigen::Index k = 0; k < solver.eigenvalues().size(); ++k) {
        out.push_back({solver.eigenvalues()(k), Ket::normalized(solver.eigenvectors().col(k))});
    }
    return out;
}

Operator reconstruct(const std::vector<Eigenpair>& pairs) {
    if (pairs.empty()) throw_invalid("reconstruct", "no eigenpairs");
    Matrix m = Matrix::Zero(idx(pairs.front().vector.dim()), idx(pairs.front().vector.dim()));
    for (const auto& p : pairs) m += p.value * p.vector.projector().matrix();
    return Operator(m);
}

nlohmann::json to_json(const Operator& a) {
    nlohmann::json re = nlohmann::json::array();
    nlohmann::json im = nlohmann::json::array();
    for (std::size_t i = 0; i < a.dim(); ++i) {
        nlohmann::json rr = nlohmann::json::array();
        nlohmann::json ri = nlohmann::json::array();
        for (std::size_t j = 0; j < a.dim(); ++j) {
            rr.push_back(a(i, j).real());
            ri.push_back(a(i, j).imag());
        }
        re.push_back(std::move(rr));
        im.push_back(std::move(ri));
    }
    return {{"dim", a.dim()}, {"re", std::move(re)}, {"im", std::move(im)}};
}

Operator operator_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("dim") || !j.contains("re") || !j.contains("im")) {
        throw FormatError("operator json: expected object with dim, re, im");
    }
    const auto n = j.at("dim").get<std::size_t>();
    const auto& re = j.at("re");
    const auto& im = j.at("im");
    if (n == 0 || !re.is_array() || !im.is_array() || re.size() != n || im.size() != n) {
        throw FormatError("operator json: re/im must be dim x dim arrays");
    }
    Matrix m(idx(n), idx(n));
    for (std::size_t r = 0; r < n; ++r) {
        if (!re[r].is_array() || !im[r].is_array() || re[r].size() != n || im[r].size() != n) {
            throw FormatError("operator json: row " + std::to_string(r) + " has wrong length");
        }
        for (std::size_t c = 0; c < n; ++c) {
            m(idx(r), idx(c)) = Complex(re[r][c].get<double>(), im[r][c].get<double>());
        }
    }
    return Operator(std::move(m));
}

} // namespace qbm::formal
