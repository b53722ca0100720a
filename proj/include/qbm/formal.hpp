// formal.hpp — finite-dimensional Dirac formalism: operators, kets, state operators,
// tensor products, (partial) traces, purity, Bloch geometry and spectral decomposition.

#pragma once

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <cstddef>
#include <vector>

#include "json.hpp"

namespace qbm::formal {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr double kStateTolerance = 1e-10;

// Dense square complex matrix; entries(i, j) = <e_i|A|e_j>.
class Operator {
public:
    explicit Operator(Matrix entries);

    static Operator identity(std::size_t dim);
    static Operator zero(std::size_t dim);

    std::size_t dim() const noexcept { return static_cast<std::size_t>(m_.rows()); }
    const Matrix& matrix() const noexcept { return m_; }
    Complex operator()(std::size_t i, std::size_t j) const {
        return m_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }

    // max |A_ij - conj(A_ji)|
    double self_adjoint_error() const;
    bool is_self_adjoint(double tol = kStateTolerance) const { return self_adjoint_error() <= tol; }
    bool is_unit_trace(double tol = kStateTolerance) const;

    Operator adjoint() const { return Operator(m_.adjoint()); }

    friend Operator operator+(const Operator& a, const Operator& b);
    friend Operator operator-(const Operator& a, const Operator& b);
    friend Operator operator*(const Operator& a, const Operator& b);
    friend Operator operator*(Complex s, const Operator& a);

private:
    Matrix m_;
};

class Ket {
public:
    explicit Ket(Vector amplitudes);

    // Rescales to unit norm and marks the ket normalized.
    static Ket normalized(Vector amplitudes);
    static Ket basis(std::size_t dim, std::size_t index);

    std::size_t dim() const noexcept { return static_cast<std::size_t>(v_.size()); }
    const Vector& amplitudes() const noexcept { return v_; }
    Complex operator[](std::size_t i) const { return v_(static_cast<Eigen::Index>(i)); }
    bool is_normalized() const noexcept { return normalized_; }
    double squared_norm() const { return v_.squaredNorm(); }

    // |v><v|
    Operator projector() const;

private:
    Vector v_;
    bool normalized_ = false;
};

Ket operator*(const Operator& a, const Ket& v);

struct StateValidation {
    double self_adjoint_error = 0.0;
    double trace_error = 0.0;
    double min_eigenvalue = 0.0;
    bool ok = false;
};

// Self-adjoint, unit-trace, nonnegative operator. `validated` enforces the
// invariants at kStateTolerance; `unchecked` skips them for intermediate arithmetic.
class StateOperator {
public:
    static StateOperator validated(Operator op);
    static StateOperator unchecked(Operator op) { return StateOperator(std::move(op)); }
    static StateOperator pure(const Ket& psi);

    const Operator& op() const noexcept { return op_; }
    const Matrix& matrix() const noexcept { return op_.matrix(); }
    std::size_t dim() const noexcept { return op_.dim(); }

    StateValidation validate(double tol = kStateTolerance) const;

private:
    explicit StateOperator(Operator op) : op_(std::move(op)) {}
    Operator op_;
};

struct BlochVector {
    std::array<double, 3> r{0.0, 0.0, 0.0};
    double norm() const;
};

Operator pauli_x();
Operator pauli_y();
Operator pauli_z();

// Standard Kronecker ordering: out(i*db + k, j*db + l) = a(i,j) * b(k,l).
Matrix kron(const Matrix& a, const Matrix& b);
Vector kron(const Vector& a, const Vector& b);
Operator tensor_product(const Operator& a, const Operator& b);
Ket tensor_product(const Ket& a, const Ket& b);

Complex trace(const Operator& a);

enum class Subsystem { A, B };
struct BipartiteDims {
    std::size_t a = 0;
    std::size_t b = 0;
};

Operator partial_trace(const Operator& rho, BipartiteDims dims, Subsystem keep);
StateOperator partial_trace(const StateOperator& rho, BipartiteDims dims, Subsystem keep);

struct Expectation {
    double value = 0.0;
    double imag_residual = 0.0;
};

Expectation expectation(const StateOperator& rho, const Operator& observable);

double purity(const StateOperator& rho);
bool is_pure(const StateOperator& rho, double tol = kStateTolerance);

BlochVector bloch_from_state(const StateOperator& rho);
StateOperator state_from_bloch(const BlochVector& r);
Ket state_from_angles(double theta, double phi);

Ket bell_ket();
StateOperator bell_state();

struct Eigenpair {
    double value = 0.0;
    Ket vector;
};

// Eigenvalues ascending, orthonormal eigenvectors.
std::vector<Eigenpair> spectral_decompose(const Operator& a);
Operator reconstruct(const std::vector<Eigenpair>& pairs);

// {"dim": n, "re": [[...]], "im": [[...]]}
nlohmann::json to_json(const Operator& a);
Operator operator_from_json(const nlohmann::json& j);

} // namespace qbm::formal
