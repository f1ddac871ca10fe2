/// Dense complex matrix kernel for small operator algebra (dims <= 16):
/// products, exponentials of anti-Hermitian generators, Hermitian spectra
/// and distance metrics. Everything is a pure function of its inputs.
#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace holq {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Tolerance for validating structural preconditions (Hermitian,
/// anti-Hermitian, unitary inputs).
inline constexpr double kInputCheckTol = 1e-10;

/// Unitarity guaranteed for matrices produced by this module.
inline constexpr double kUnitaryOutputTol = 1e-12;

/// Thrown when an argument violates an operation's precondition.
class InvalidInputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

inline double frobenius_distance(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw InvalidInputError("frobenius_distance: shape mismatch");
    }
    return (a - b).norm();
}

/// ||m - m†||_F; zero iff Hermitian.
inline double hermiticity_defect(const Matrix& m) {
    return (m - m.adjoint()).norm();
}

/// ||m + m†||_F; zero iff anti-Hermitian.
inline double antihermiticity_defect(const Matrix& m) {
    return (m + m.adjoint()).norm();
}

/// Frobenius norm of (u†u - I).
inline double unitarity_distance(const Matrix& u) {
    if (u.rows() != u.cols()) {
        throw InvalidInputError("unitarity_distance: matrix must be square");
    }
    return (u.adjoint() * u - Matrix::Identity(u.rows(), u.cols())).norm();
}

inline bool is_unitary(const Matrix& u, double tol = kInputCheckTol) {
    return u.rows() == u.cols() && unitarity_distance(u) <= tol;
}

/// Checked matrix product.
inline Matrix mat_mul(const Matrix& a, const Matrix& b) {
    if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows()) {
        throw InvalidInputError("mat_mul: dimension mismatch (" +
                                std::to_string(a.rows()) + "x" + std::to_string(a.cols()) + " vs " +
                                std::to_string(b.rows()) + "x" + std::to_string(b.cols()) + ")");
    }
    return a * b;
}

/// Kronecker product, row-major block layout (left factor most significant).
inline Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

namespace detail {

/// sin(x)/x with the removable singularity filled in below 1e-7.
inline double sinc(double x) {
    const double ax = std::abs(x);
    if (ax < 1e-7) {
        return 1.0 - x * x / 6.0;
    }
    return std::sin(x) / x;
}

/// exp of a 2x2 anti-Hermitian matrix through its Pauli decomposition
/// g = i(c0*I + c.sigma); exact up to rounding, exactly unitary.
inline Matrix expm_antihermitian_2x2(const Matrix& g) {
    const double c0 = 0.5 * (g(0, 0).imag() + g(1, 1).imag());
    const double c3 = 0.5 * (g(0, 0).imag() - g(1, 1).imag());
    const double c1 = 0.5 * (g(0, 1).imag() + g(1, 0).imag());
    const double c2 = 0.5 * (g(0, 1).real() - g(1, 0).real());
    const double r = std::sqrt(c1 * c1 + c2 * c2 + c3 * c3);
    const double q = sinc(r);
    const Complex phase = std::exp(Complex(0.0, c0));
    Matrix out(2, 2);
    out(0, 0) = phase * Complex(std::cos(r), q * c3);
    out(0, 1) = phase * Complex(q * c2, q * c1);
    out(1, 0) = phase * Complex(-q * c2, q * c1);
    out(1, 1) = phase * Complex(std::cos(r), -q * c3);
    return out;
}

inline double offdiagonal_norm(const Matrix& m) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (i != j) s += std::norm(m(i, j));
        }
    }
    return std::sqrt(s);
}

}  // namespace detail

/// exp(g) for anti-Hermitian g, through the spectral decomposition of the
/// Hermitian matrix i*g (closed forms for dim<=2 and diagonal inputs).
/// The result is unitary within kUnitaryOutputTol.
inline Matrix expm_antihermitian(const Matrix& g, double tol = kInputCheckTol) {
    if (g.rows() != g.cols()) {
        throw InvalidInputError("expm_antihermitian: matrix must be square");
    }
    if (antihermiticity_defect(g) > tol) {
        throw InvalidInputError("expm_antihermitian: input is not anti-Hermitian within tolerance");
    }
    const Eigen::Index n = g.rows();
    if (n == 1) {
        Matrix out(1, 1);
        out(0, 0) = std::exp(Complex(0.0, g(0, 0).imag()));
        return out;
    }
    if (n == 2) {
        return detail::expm_antihermitian_2x2(g);
    }
    if (detail::offdiagonal_norm(g) <= 1e-14) {
        Matrix out = Matrix::Zero(n, n);
        for (Eigen::Index i = 0; i < n; ++i) {
            out(i, i) = std::exp(Complex(0.0, g(i, i).imag()));
        }
        return out;
    }
    const Matrix ig = Complex(0.0, 1.0) * g;
    const Matrix h = 0.5 * (ig + ig.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
    const Vector phases =
        (Complex(0.0, -1.0) * solver.eigenvalues().cast<Complex>()).array().exp();
    return solver.eigenvectors() * phases.asDiagonal() * solver.eigenvectors().adjoint();
}

/// Ascending real eigenvalues of a Hermitian matrix.
inline std::vector<double> hermitian_eigenvalues(const Matrix& h, double tol = kInputCheckTol) {
    if (h.rows() != h.cols()) {
        throw InvalidInputError("hermitian_eigenvalues: matrix must be square");
    }
    if (hermiticity_defect(h) > tol) {
        throw InvalidInputError("hermitian_eigenvalues: input is not Hermitian within tolerance");
    }
    const Matrix hs = 0.5 * (h + h.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> solver(hs, Eigen::EigenvaluesOnly);
    const auto& ev = solver.eigenvalues();
    return std::vector<double>(ev.data(), ev.data() + ev.size());
}

}  // namespace holq
