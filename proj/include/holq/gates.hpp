/// Loop programs: sequences of plane loops and controlled-phase loops whose
/// composed holonomies realize logical gates on an m-qubit register.
///
/// Register encoding: each qubit is the degenerate pair (|1>, |2>) of one
/// CP^2 factor, register basis lexicographic with qubit 0 most significant.
/// Later steps multiply on the left, matching the holonomy ordering.
#pragma once

#include "holq/holonomy.hpp"

#include <algorithm>
#include <cmath>
#include <variant>
#include <vector>

namespace holq {

/// One closed loop on a single-qubit holonomy plane with signed projected
/// area; realizes analytic_plane_holonomy(plane, area) on `qubit`.
struct SingleQubitLoopStep {
    int qubit = 0;
    PlaneKind plane = PlaneKind::ThetaPhi1;
    double area = 0.0;
};

/// One Grassmann-plane loop between a pair of qubits; realizes
/// diag(1,1,1,e^{-i area}) on (control, target).
struct ControlledPhaseStep {
    int control = 0;
    int target = 1;
    double area = 0.0;
};

using LoopStep = std::variant<SingleQubitLoopStep, ControlledPhaseStep>;

struct LoopProgram {
    int num_qubits = 1;
    std::vector<LoopStep> steps;
};

/// Reduces an angle to the canonical interval (-pi, pi].
inline double canonical_angle(double x) {
    double y = std::remainder(x, 2.0 * M_PI);
    if (y <= -M_PI) y += 2.0 * M_PI;
    return y;
}

/// Embeds a 2x2 gate on one qubit of an m-qubit register.
inline Matrix embed_one_qubit(int num_qubits, int qubit, const Matrix& gate) {
    if (num_qubits < 1 || qubit < 0 || qubit >= num_qubits) {
        throw InvalidInputError("embed_one_qubit: qubit index out of range");
    }
    if (gate.rows() != 2 || gate.cols() != 2) {
        throw InvalidInputError("embed_one_qubit: gate must be 2x2");
    }
    const int dim = 1 << num_qubits;
    const int bit = 1 << (num_qubits - 1 - qubit);
    Matrix out = Matrix::Zero(dim, dim);
    for (int col = 0; col < dim; ++col) {
        const int rest = col & ~bit;
        const int cbit = (col & bit) ? 1 : 0;
        for (int rbit = 0; rbit < 2; ++rbit) {
            out(rest | (rbit ? bit : 0), col) = gate(rbit, cbit);
        }
    }
    return out;
}

/// Embeds a 4x4 gate on an ordered qubit pair (first index most
/// significant within the pair).
inline Matrix embed_two_qubit(int num_qubits, int qubit_a, int qubit_b, const Matrix& gate) {
    if (num_qubits < 2 || qubit_a < 0 || qubit_b < 0 || qubit_a >= num_qubits ||
        qubit_b >= num_qubits || qubit_a == qubit_b) {
        throw InvalidInputError("embed_two_qubit: invalid qubit pair");
    }
    if (gate.rows() != 4 || gate.cols() != 4) {
        throw InvalidInputError("embed_two_qubit: gate must be 4x4");
    }
    const int dim = 1 << num_qubits;
    const int bit_a = 1 << (num_qubits - 1 - qubit_a);
    const int bit_b = 1 << (num_qubits - 1 - qubit_b);
    Matrix out = Matrix::Zero(dim, dim);
    for (int col = 0; col < dim; ++col) {
        const int rest = col & ~(bit_a | bit_b);
        const int cpair = ((col & bit_a) ? 2 : 0) | ((col & bit_b) ? 1 : 0);
        for (int rpair = 0; rpair < 4; ++rpair) {
            const int row = rest | ((rpair & 2) ? bit_a : 0) | ((rpair & 1) ? bit_b : 0);
            out(row, col) = gate(rpair, cpair);
        }
    }
    return out;
}

namespace detail {

inline Matrix controlled_phase_gate(double area) {
    Matrix g = Matrix::Identity(4, 4);
    g(3, 3) = std::exp(Complex(0.0, -area));
    return g;
}

inline void check_step(const LoopProgram& program, const LoopStep& step) {
    if (const auto* single = std::get_if<SingleQubitLoopStep>(&step)) {
        if (single->qubit < 0 || single->qubit >= program.num_qubits) {
            throw InvalidInputError("loop step qubit index out of range");
        }
        if (PlaneSpec(single->plane).model() != ModelKind::Cp2) {
            throw InvalidInputError("single-qubit loop steps require a CP^2 plane");
        }
    } else {
        const auto& cp = std::get<ControlledPhaseStep>(step);
        if (cp.control < 0 || cp.target < 0 || cp.control >= program.num_qubits ||
            cp.target >= program.num_qubits) {
            throw InvalidInputError("controlled-phase indices out of range");
        }
        if (cp.control == cp.target) {
            throw InvalidInputError("controlled-phase requires distinct qubits");
        }
    }
}

}  // namespace detail

/// Product of the program's analytic step holonomies on the 2^m register,
/// later steps on the left.
inline Matrix evaluate_program(const LoopProgram& program) {
    if (program.num_qubits < 1 || program.num_qubits > 4) {
        throw InvalidInputError("evaluate_program supports 1 to 4 qubits");
    }
    const int dim = 1 << program.num_qubits;
    Matrix result = Matrix::Identity(dim, dim);
    for (const LoopStep& step : program.steps) {
        detail::check_step(program, step);
        Matrix gate;
        if (const auto* single = std::get_if<SingleQubitLoopStep>(&step)) {
            const Matrix g2 = analytic_plane_holonomy(PlaneSpec(single->plane), single->area);
            gate = program.num_qubits == 1 ? g2
                                           : embed_one_qubit(program.num_qubits, single->qubit, g2);
        } else {
            const auto& cp = std::get<ControlledPhaseStep>(step);
            gate = embed_two_qubit(program.num_qubits, cp.control, cp.target,
                                   detail::controlled_phase_gate(cp.area));
        }
        result = gate * result;
    }
    return result;
}

/// One controlled-phase loop between a pair of qubits. The register size
/// defaults to just covering the pair.
inline LoopProgram controlled_phase_program(int control, int target, double area,
                                            int num_qubits = -1) {
    if (num_qubits < 0) num_qubits = std::max(control, target) + 1;
    LoopProgram program{num_qubits, {ControlledPhaseStep{control, target, area}}};
    if (program.num_qubits < 2 || program.num_qubits > 4) {
        throw InvalidInputError("controlled_phase_program requires 2 to 4 qubits");
    }
    detail::check_step(program, program.steps.front());
    return program;
}

/// Decomposes a 2x2 unitary into at most four plane loops:
///   target = diag(e^{ia}, e^{ib}) * exp(-i S sigma2) * diag(1, e^{id}),
/// realized as phase loops on the (theta,phi) planes plus one rotation
/// loop on the phi = 0 theta-theta plane. Exact over U(2), global phase
/// included. Areas are canonicalized to (-pi, pi] and zero-area steps are
/// dropped, so the identity yields an empty program.
inline LoopProgram synthesize_single_qubit(const Matrix& target, double tol = kInputCheckTol) {
    if (target.rows() != 2 || target.cols() != 2) {
        throw InvalidInputError("synthesize_single_qubit: target must be 2x2");
    }
    if (unitarity_distance(target) > tol) {
        throw InvalidInputError("synthesize_single_qubit: target is not unitary within tolerance");
    }

    const double cos_part = 0.5 * (std::abs(target(0, 0)) + std::abs(target(1, 1)));
    const double sin_part = 0.5 * (std::abs(target(0, 1)) + std::abs(target(1, 0)));
    const double rotation = std::atan2(sin_part, cos_part);

    double alpha = 0.0, beta = 0.0, delta = 0.0;
    if (sin_part < 1e-9) {
        // Diagonal target: two phase loops suffice.
        alpha = std::arg(target(0, 0));
        beta = std::arg(target(1, 1));
    } else if (cos_part < 1e-9) {
        // Antidiagonal target.
        beta = std::arg(target(1, 0));
        delta = std::arg(-target(0, 1));
    } else {
        alpha = std::arg(target(0, 0));
        beta = std::arg(target(1, 0));
        delta = std::arg(target(1, 1)) - beta;
    }

    LoopProgram program{1, {}};
    auto push_phase_loop = [&](PlaneKind plane, double area) {
        area = canonical_angle(area);
        if (area != 0.0) program.steps.push_back(SingleQubitLoopStep{0, plane, area});
    };
    // Rightmost factor first: later steps multiply on the left.
    push_phase_loop(PlaneKind::ThetaPhi2, -delta);
    push_phase_loop(PlaneKind::ThetaThetaPhi0, canonical_angle(rotation));
    push_phase_loop(PlaneKind::ThetaPhi1, -alpha);
    push_phase_loop(PlaneKind::ThetaPhi2, -beta);
    return program;
}

/// The generators reachable by plane loops: -i|1><1|, -i|2><2|, -i sigma1,
/// -i sigma2 for one qubit; for two qubits the same set embedded on each
/// factor plus the controlled-phase generator diag(0,0,0,-i).
inline std::vector<Matrix> universal_generator_set(int num_qubits) {
    if (num_qubits != 1 && num_qubits != 2) {
        throw InvalidInputError("universal_generator_set supports 1 or 2 qubits");
    }
    const Complex mi(0.0, -1.0);
    std::vector<Matrix> single;
    Matrix p1 = Matrix::Zero(2, 2), p2 = Matrix::Zero(2, 2), s1(2, 2), s2(2, 2);
    p1(0, 0) = 1.0;
    p2(1, 1) = 1.0;
    s1 << 0, 1, 1, 0;
    s2 << 0, Complex(0, -1), Complex(0, 1), 0;
    for (const Matrix& g : {p1, p2, s1, s2}) single.push_back(mi * g);
    if (num_qubits == 1) return single;

    std::vector<Matrix> pair;
    for (const Matrix& g : single) {
        pair.push_back(embed_one_qubit(2, 0, g));
        pair.push_back(embed_one_qubit(2, 1, g));
    }
    Matrix cp = Matrix::Zero(4, 4);
    cp(3, 3) = mi;
    pair.push_back(cp);
    return pair;
}

/// Dimension of the real Lie algebra generated by anti-Hermitian matrices
/// under nested commutators (rank decided by Gram-Schmidt residuals against
/// `rank_tolerance`).
inline int lie_closure_dimension(const std::vector<Matrix>& generators,
                                 double rank_tolerance = 1e-9) {
    if (generators.empty()) return 0;
    const Eigen::Index n = generators.front().rows();
    for (const Matrix& g : generators) {
        if (g.rows() != n || g.cols() != n) {
            throw InvalidInputError("lie_closure_dimension: dimension mismatch");
        }
        if (antihermiticity_defect(g) > kInputCheckTol) {
            throw InvalidInputError("lie_closure_dimension: generator is not anti-Hermitian");
        }
    }

    std::vector<Matrix> basis;           // orthonormal w.r.t. Re tr(A† B)
    const int max_dim = static_cast<int>(n * n);
    auto try_add = [&](const Matrix& candidate) {
        const double scale = candidate.norm();
        if (!(scale > 0.0)) return;
        Matrix residual = candidate / scale;
        for (int pass = 0; pass < 2; ++pass) {
            for (const Matrix& b : basis) {
                const double coeff = (b.adjoint() * residual).trace().real();
                residual -= coeff * b;
            }
        }
        const double norm = residual.norm();
        if (norm > rank_tolerance) basis.push_back(residual / norm);
    };

    for (const Matrix& g : generators) try_add(g);
    for (std::size_t i = 1; i < basis.size() && static_cast<int>(basis.size()) < max_dim; ++i) {
        for (std::size_t j = 0; j < i && static_cast<int>(basis.size()) < max_dim; ++j) {
            try_add(basis[i] * basis[j] - basis[j] * basis[i]);
        }
    }
    return static_cast<int>(basis.size());
}

}  // namespace holq
