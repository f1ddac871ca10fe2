/// Parametrized isospectral model families.
///
/// Two control manifolds drive everything downstream:
///
///  * the CP^2 single-qubit family on the full basis (|1>, |2>, |2~>) with
///    base Hamiltonian diag(0,0,1); control coordinates (theta1, phi1,
///    theta2, phi2) enter through U(z) = U1(z1) U2(z2), where each factor
///    rotates |alpha> against |2~> by z_alpha = theta_alpha e^{i phi_alpha};
///
///  * the two-qubit Grassmann interaction family on the 9-state product
///    basis (|13>, |14>, |23>, |24>, |14~>, |24~>, |2~3>, |2~4>, |2~4~>)
///    with base Hamiltonian diag(0,0,0,0,1,1,1,1,2); coordinates
///    (theta, phi) rotate |24> against |2~4~>.
///
/// These basis orders are fixed for the whole library; every matrix is
/// expressed in them. The degenerate (E=0) subspaces are spanned by the
/// leading basis states: (|1>, |2>) and (|13>, |14>, |23>, |24>).
///
/// The adiabatic connection component along coordinate a is the
/// degenerate-subspace block of U† dU/da, taken with no extra sign.
#pragma once

#include "holq/matrix.hpp"

#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace holq {

struct Cp2Point {
    double theta1 = 0.0;
    double phi1 = 0.0;
    double theta2 = 0.0;
    double phi2 = 0.0;

    RealVector coords() const {
        RealVector v(4);
        v << theta1, phi1, theta2, phi2;
        return v;
    }
};

struct GrassmannPoint {
    double theta = 0.0;
    double phi = 0.0;

    RealVector coords() const {
        RealVector v(2);
        v << theta, phi;
        return v;
    }
};

enum class ModelKind { Cp2, Grassmann };

namespace detail {

/// Coset rotation 1_perp + cos(theta) 1_z + sinc(theta) G(z) with
/// z = theta e^{i phi} and G(z) = z|i><j| - conj(z)|j><i|.
inline Matrix coset_rotation(int dim, int i, int j, double theta, double phi) {
    Matrix u = Matrix::Identity(dim, dim);
    const Complex z = theta * std::exp(Complex(0.0, phi));
    const double q = sinc(theta);
    u(i, i) = std::cos(theta);
    u(j, j) = std::cos(theta);
    u(i, j) = q * z;
    u(j, i) = -q * std::conj(z);
    return u;
}

inline Matrix coset_rotation_dtheta(int dim, int i, int j, double theta, double phi) {
    Matrix d = Matrix::Zero(dim, dim);
    const Complex eip = std::exp(Complex(0.0, phi));
    d(i, i) = -std::sin(theta);
    d(j, j) = -std::sin(theta);
    d(i, j) = std::cos(theta) * eip;
    d(j, i) = -std::cos(theta) * std::conj(eip);
    return d;
}

inline Matrix coset_rotation_dphi(int dim, int i, int j, double theta, double phi) {
    Matrix d = Matrix::Zero(dim, dim);
    const Complex eip = std::exp(Complex(0.0, phi));
    d(i, j) = Complex(0.0, 1.0) * std::sin(theta) * eip;
    d(j, i) = Complex(0.0, 1.0) * std::sin(theta) * std::conj(eip);
    return d;
}

}  // namespace detail

/// A parametrized isospectral family H(p) = U(p) H0 U(p)†. Instances are
/// immutable and shared; obtain them through model_family().
class ModelFamily {
public:
    virtual ~ModelFamily() = default;

    ModelKind kind() const { return kind_; }
    int full_dim() const { return static_cast<int>(base_hamiltonian_.rows()); }
    int num_params() const { return static_cast<int>(param_names_.size()); }
    const std::vector<std::string>& param_names() const { return param_names_; }
    const std::vector<int>& degenerate_indices() const { return degenerate_indices_; }
    const std::vector<std::string>& basis_labels() const { return basis_labels_; }
    const Matrix& base_hamiltonian() const { return base_hamiltonian_; }

    int param_index(std::string_view name) const {
        for (int i = 0; i < num_params(); ++i) {
            if (param_names_[i] == name) return i;
        }
        throw InvalidInputError("unknown coordinate label '" + std::string(name) + "'");
    }

    /// U(p) in the fixed full-space basis.
    virtual Matrix unitary(const RealVector& p) const = 0;

    /// Analytic dU/dp[coord].
    virtual Matrix partial(const RealVector& p, int coord) const = 0;

protected:
    ModelFamily(ModelKind kind, Matrix h0, std::vector<int> degenerate,
                std::vector<std::string> params, std::vector<std::string> basis)
        : kind_(kind),
          base_hamiltonian_(std::move(h0)),
          degenerate_indices_(std::move(degenerate)),
          param_names_(std::move(params)),
          basis_labels_(std::move(basis)) {}

    void check_point(const RealVector& p) const {
        if (p.size() != num_params()) {
            throw InvalidInputError("parameter point has wrong dimension");
        }
        if (!p.allFinite()) {
            throw InvalidInputError("parameter point has non-finite entries");
        }
    }

    void check_coord(int coord) const {
        if (coord < 0 || coord >= num_params()) {
            throw InvalidInputError("coordinate index out of range");
        }
    }

private:
    ModelKind kind_;
    Matrix base_hamiltonian_;
    std::vector<int> degenerate_indices_;
    std::vector<std::string> param_names_;
    std::vector<std::string> basis_labels_;
};

class Cp2Model final : public ModelFamily {
public:
    Cp2Model()
        : ModelFamily(ModelKind::Cp2, make_h0(), {0, 1},
                      {"theta1", "phi1", "theta2", "phi2"},
                      {"|1>", "|2>", "|2~>"}) {}

    Matrix unitary(const RealVector& p) const override {
        check_point(p);
        return factor1(p) * factor2(p);
    }

    Matrix partial(const RealVector& p, int coord) const override {
        check_point(p);
        check_coord(coord);
        switch (coord) {
            case 0: return detail::coset_rotation_dtheta(3, 0, 2, p[0], p[1]) * factor2(p);
            case 1: return detail::coset_rotation_dphi(3, 0, 2, p[0], p[1]) * factor2(p);
            case 2: return factor1(p) * detail::coset_rotation_dtheta(3, 1, 2, p[2], p[3]);
            default: return factor1(p) * detail::coset_rotation_dphi(3, 1, 2, p[2], p[3]);
        }
    }

private:
    static Matrix make_h0() {
        Matrix h = Matrix::Zero(3, 3);
        h(2, 2) = 1.0;
        return h;
    }
    static Matrix factor1(const RealVector& p) { return detail::coset_rotation(3, 0, 2, p[0], p[1]); }
    static Matrix factor2(const RealVector& p) { return detail::coset_rotation(3, 1, 2, p[2], p[3]); }
};

class GrassmannModel final : public ModelFamily {
public:
    /// Indices of the rotated pair |24>, |2~4~> in the fixed basis.
    static constexpr int kRotatedA = 3;
    static constexpr int kRotatedB = 8;

    GrassmannModel()
        : ModelFamily(ModelKind::Grassmann, make_h0(), {0, 1, 2, 3},
                      {"theta", "phi"},
                      {"|13>", "|14>", "|23>", "|24>", "|14~>", "|24~>", "|2~3>", "|2~4>", "|2~4~>"}) {}

    Matrix unitary(const RealVector& p) const override {
        check_point(p);
        return detail::coset_rotation(9, kRotatedA, kRotatedB, p[0], p[1]);
    }

    Matrix partial(const RealVector& p, int coord) const override {
        check_point(p);
        check_coord(coord);
        if (coord == 0) return detail::coset_rotation_dtheta(9, kRotatedA, kRotatedB, p[0], p[1]);
        return detail::coset_rotation_dphi(9, kRotatedA, kRotatedB, p[0], p[1]);
    }

private:
    static Matrix make_h0() {
        Matrix h = Matrix::Zero(9, 9);
        for (int i = 4; i < 8; ++i) h(i, i) = 1.0;
        h(8, 8) = 2.0;
        return h;
    }
};

/// Shared immutable instance for a model kind.
inline const ModelFamily& model_family(ModelKind kind) {
    static const Cp2Model cp2;
    static const GrassmannModel grassmann;
    return kind == ModelKind::Cp2 ? static_cast<const ModelFamily&>(cp2)
                                  : static_cast<const ModelFamily&>(grassmann);
}

inline Matrix cp2_unitary(const Cp2Point& p) {
    return model_family(ModelKind::Cp2).unitary(p.coords());
}

inline Matrix cp2_partial(const Cp2Point& p, std::string_view coord) {
    const ModelFamily& m = model_family(ModelKind::Cp2);
    return m.partial(p.coords(), m.param_index(coord));
}

inline Matrix grassmann_unitary(const GrassmannPoint& p) {
    return model_family(ModelKind::Grassmann).unitary(p.coords());
}

inline Matrix grassmann_partial(const GrassmannPoint& p, std::string_view coord) {
    const ModelFamily& m = model_family(ModelKind::Grassmann);
    return m.partial(p.coords(), m.param_index(coord));
}

/// Degenerate-subspace block of a full-space matrix, in the fixed order of
/// the degenerate basis.
inline Matrix degenerate_block(const ModelFamily& model, const Matrix& full) {
    if (full.rows() != model.full_dim() || full.cols() != model.full_dim()) {
        throw InvalidInputError("degenerate_block: matrix does not match model dimension");
    }
    const auto& deg = model.degenerate_indices();
    const int d = static_cast<int>(deg.size());
    Matrix out(d, d);
    for (int r = 0; r < d; ++r) {
        for (int c = 0; c < d; ++c) out(r, c) = full(deg[r], deg[c]);
    }
    return out;
}

/// Connection component A^a(p): the degenerate block of U† dU/da.
/// Anti-Hermitian by construction of the family.
inline Matrix connection_at(const ModelFamily& model, const RealVector& p, int coord) {
    const Matrix u = model.unitary(p);
    const Matrix du = model.partial(p, coord);
    const auto& deg = model.degenerate_indices();
    const int n = model.full_dim();
    const int d = static_cast<int>(deg.size());
    Matrix ucols(n, d), ducols(n, d);
    for (int k = 0; k < d; ++k) {
        ucols.col(k) = u.col(deg[k]);
        ducols.col(k) = du.col(deg[k]);
    }
    return ucols.adjoint() * ducols;
}

inline Matrix connection_at(const ModelFamily& model, const RealVector& p, std::string_view coord) {
    return connection_at(model, p, model.param_index(coord));
}

/// H(p) = U(p) H0 U(p)†; Hermitian with the spectrum of H0.
inline Matrix isospectral_hamiltonian(const ModelFamily& model, const RealVector& p) {
    const Matrix u = model.unitary(p);
    return u * model.base_hamiltonian() * u.adjoint();
}

}  // namespace holq
