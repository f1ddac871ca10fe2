/// Closed loops in control-parameter space and their non-abelian holonomies.
///
/// The holonomy of a loop C is the ordered product
///     Gamma(C) = prod_i exp( sum_a A^a(mid_i) * dlambda_i^a ),
/// accumulated segment by segment with later segments multiplying on the
/// LEFT. Orientation reversal therefore gives the adjoint, and loop
/// concatenation composes with the later loop on the left.
///
/// Five planes admit closed-form holonomies because exactly one connection
/// component survives on them (off-plane coordinates are pinned to the
/// canonical positions listed below):
///
///   theta-phi-1          (theta1, phi1) at theta2 = 0        -> exp(-i S P1)
///   theta-phi-2          (theta2, phi2) at theta1 = 0        -> exp(-i S P2)
///   theta1-theta2-phi0   (theta1, theta2) at phi1 = phi2 = 0 -> exp(-i S sigma2)
///   theta1-theta2-phi90  (theta1, theta2) at phi1 = pi/2     -> exp(-i S sigma1)
///   grassmann            (theta, phi)                        -> diag(1,1,1,e^{-iS})
///
/// with P_a = |a><a| and S the projected area: the loop integral of
/// sin^2(theta) dphi on the (theta,phi)-type planes and of
/// sin(theta2) dtheta1 on the theta-theta planes.
#pragma once

#include "holq/models.hpp"

#include <algorithm>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace holq {

inline constexpr double kDefaultRefinementTol = 1e-8;
inline constexpr long kDefaultMaxSegments = 1L << 20;

enum class PlaneKind { ThetaPhi1, ThetaPhi2, ThetaThetaPhi0, ThetaThetaPhi90, Grassmann };

/// One of the five supported holonomy planes, together with the canonical
/// fixed values of the off-plane coordinates.
class PlaneSpec {
public:
    explicit PlaneSpec(PlaneKind kind) : kind_(kind) {}

    PlaneKind kind() const { return kind_; }

    ModelKind model() const {
        return kind_ == PlaneKind::Grassmann ? ModelKind::Grassmann : ModelKind::Cp2;
    }

    /// Coordinate indices spanning the plane, (u, v) order.
    int coord_u() const {
        switch (kind_) {
            case PlaneKind::ThetaPhi2: return 2;
            default: return 0;
        }
    }
    int coord_v() const {
        switch (kind_) {
            case PlaneKind::ThetaPhi1: return 1;
            case PlaneKind::ThetaPhi2: return 3;
            case PlaneKind::ThetaThetaPhi0:
            case PlaneKind::ThetaThetaPhi90: return 2;
            case PlaneKind::Grassmann: return 1;
        }
        return 1;
    }

    /// Full-coordinate point with in-plane coordinates zero and off-plane
    /// coordinates at their canonical fixed values.
    RealVector fixed_point() const {
        RealVector p = RealVector::Zero(model() == ModelKind::Cp2 ? 4 : 2);
        if (kind_ == PlaneKind::ThetaThetaPhi90) p[1] = M_PI / 2.0;
        return p;
    }

    RealVector lift(double u, double v) const {
        RealVector p = fixed_point();
        p[coord_u()] = u;
        p[coord_v()] = v;
        return p;
    }

    Eigen::Vector2d project(const RealVector& p) const {
        return {p[coord_u()], p[coord_v()]};
    }

    /// True when the off-plane coordinates of p sit at the canonical values.
    bool contains(const RealVector& p, double tol = 1e-12) const {
        const RealVector fixed = fixed_point();
        if (p.size() != fixed.size()) return false;
        for (int i = 0; i < p.size(); ++i) {
            if (i == coord_u() || i == coord_v()) continue;
            if (std::abs(p[i] - fixed[i]) > tol) return false;
        }
        return true;
    }

    /// Dimension of the degenerate subspace the holonomy acts on.
    int holonomy_dim() const { return model() == ModelKind::Grassmann ? 4 : 2; }

    /// (theta, phi)-type planes carry the sin^2(theta) dphi area functional;
    /// theta-theta planes carry sin(theta2) dtheta1.
    bool theta_phi_type() const {
        return kind_ == PlaneKind::ThetaPhi1 || kind_ == PlaneKind::ThetaPhi2 ||
               kind_ == PlaneKind::Grassmann;
    }

    std::string_view name() const {
        switch (kind_) {
            case PlaneKind::ThetaPhi1: return "theta-phi-1";
            case PlaneKind::ThetaPhi2: return "theta-phi-2";
            case PlaneKind::ThetaThetaPhi0: return "theta1-theta2-phi0";
            case PlaneKind::ThetaThetaPhi90: return "theta1-theta2-phi90";
            case PlaneKind::Grassmann: return "grassmann";
        }
        return "";
    }

    static PlaneSpec from_name(std::string_view name) {
        for (PlaneKind k : {PlaneKind::ThetaPhi1, PlaneKind::ThetaPhi2, PlaneKind::ThetaThetaPhi0,
                            PlaneKind::ThetaThetaPhi90, PlaneKind::Grassmann}) {
            if (PlaneSpec(k).name() == name) return PlaneSpec(k);
        }
        throw InvalidInputError("unknown plane '" + std::string(name) + "'");
    }

private:
    PlaneKind kind_;
};

/// Closed piecewise-linear path in a model's parameter space. The vertex
/// list includes the closing vertex (last == first, exactly).
struct ParameterLoop {
    ModelKind model = ModelKind::Cp2;
    std::vector<RealVector> vertices;
    /// Set by the planar factories; projected_area falls back to detection
    /// when absent.
    std::optional<PlaneSpec> plane;
    /// Declares an intentionally degenerate (point-like or zero-extent) loop.
    bool point_like_ok = false;
};

struct HolonomyResult {
    Matrix gamma;
    long steps_used = 0;
    double estimated_error = 0.0;
};

/// Raised when step-doubling hits the segment budget before reaching the
/// requested tolerance; carries the best result obtained.
class ConvergenceFailure : public std::runtime_error {
public:
    ConvergenceFailure(const std::string& what, HolonomyResult best_result)
        : std::runtime_error(what), best(std::move(best_result)) {}
    HolonomyResult best;
};

namespace detail {

inline int count_distinct_vertices(const std::vector<RealVector>& vs) {
    int distinct = 0;
    for (std::size_t i = 0; i + 1 < vs.size(); ++i) {  // last duplicates first
        bool seen = false;
        for (std::size_t j = 0; j < i; ++j) {
            if (vs[i] == vs[j]) { seen = true; break; }
        }
        if (!seen) ++distinct;
    }
    return std::max(distinct, vs.empty() ? 0 : 1);
}

}  // namespace detail

inline void validate_loop(const ParameterLoop& loop) {
    const ModelFamily& family = model_family(loop.model);
    if (loop.vertices.empty()) {
        throw InvalidInputError("loop has no vertices");
    }
    for (const auto& v : loop.vertices) {
        if (v.size() != family.num_params() || !v.allFinite()) {
            throw InvalidInputError("loop vertex does not match model coordinates");
        }
    }
    if (loop.vertices.front() != loop.vertices.back()) {
        throw InvalidInputError("loop is not closed (first and last vertices differ)");
    }
    const int distinct = detail::count_distinct_vertices(loop.vertices);
    if (distinct == 2 && !loop.point_like_ok) {
        throw InvalidInputError("degenerate two-vertex loop (declare it point-like if intended)");
    }
}

inline ParameterLoop point_loop(ModelKind model, const RealVector& p) {
    ParameterLoop loop{model, {p, p}, std::nullopt, true};
    validate_loop(loop);
    return loop;
}

/// Lifts closed 2D vertices into a plane. The 2D list must be closed.
inline ParameterLoop planar_loop(const PlaneSpec& plane, const std::vector<Eigen::Vector2d>& verts,
                                 bool point_like_ok = false) {
    if (verts.size() < 2 || verts.front() != verts.back()) {
        throw InvalidInputError("planar loop vertices must be closed");
    }
    ParameterLoop loop;
    loop.model = plane.model();
    loop.plane = plane;
    loop.point_like_ok = point_like_ok;
    loop.vertices.reserve(verts.size());
    for (const auto& v : verts) loop.vertices.push_back(plane.lift(v.x(), v.y()));
    validate_loop(loop);
    return loop;
}

/// Axis-aligned rectangle [0,a] x [0,b] traversed with the first-coordinate
/// edge first, each edge subdivided. Zero extents give a declared
/// point-like loop.
inline ParameterLoop rectangle_loop(const PlaneSpec& plane, double extent_a, double extent_b,
                                    int subdivisions = 1) {
    if (subdivisions < 1) {
        throw InvalidInputError("rectangle_loop: subdivisions must be >= 1");
    }
    const Eigen::Vector2d corners[4] = {
        {0.0, 0.0}, {extent_a, 0.0}, {extent_a, extent_b}, {0.0, extent_b}};
    std::vector<Eigen::Vector2d> verts;
    verts.reserve(4 * subdivisions + 1);
    for (int e = 0; e < 4; ++e) {
        const Eigen::Vector2d& from = corners[e];
        const Eigen::Vector2d& to = corners[(e + 1) % 4];
        for (int k = 0; k < subdivisions; ++k) {
            verts.push_back(from + (static_cast<double>(k) / subdivisions) * (to - from));
        }
    }
    verts.push_back(corners[0]);
    return planar_loop(plane, verts, extent_a == 0.0 || extent_b == 0.0);
}

inline ParameterLoop reversed(const ParameterLoop& loop) {
    ParameterLoop out = loop;
    std::reverse(out.vertices.begin(), out.vertices.end());
    return out;
}

inline bool is_point_loop(const ParameterLoop& loop) {
    return std::all_of(loop.vertices.begin(), loop.vertices.end(),
                       [&](const RealVector& v) { return v == loop.vertices.front(); });
}

/// Ordered product of per-segment exponentials at a fixed refinement:
/// every loop edge is split into `subdivisions` equal segments and the
/// connection is sampled at segment midpoints.
inline Matrix holonomy_ordered_product(const ParameterLoop& loop, int subdivisions) {
    if (subdivisions < 1) {
        throw InvalidInputError("holonomy_ordered_product: subdivisions must be >= 1");
    }
    const ModelFamily& family = model_family(loop.model);
    const int d = static_cast<int>(family.degenerate_indices().size());
    Matrix gamma = Matrix::Identity(d, d);
    for (std::size_t e = 0; e + 1 < loop.vertices.size(); ++e) {
        const RealVector& from = loop.vertices[e];
        const RealVector& to = loop.vertices[e + 1];
        if (from == to) continue;
        const RealVector delta = (to - from) / subdivisions;
        for (int k = 0; k < subdivisions; ++k) {
            const RealVector mid = from + (k + 0.5) * delta;
            Matrix segment = Matrix::Zero(d, d);
            for (int a = 0; a < family.num_params(); ++a) {
                if (delta[a] != 0.0) segment += connection_at(family, mid, a) * delta[a];
            }
            gamma = expm_antihermitian(segment) * gamma;
        }
    }
    return gamma;
}

/// Path-ordered holonomy with step-doubling refinement. Refines until two
/// successive levels agree within `refinement_tolerance` in Frobenius norm
/// (at least two levels are always evaluated so an error estimate exists);
/// raises ConvergenceFailure carrying the best result if the segment budget
/// runs out first. Point loops return the identity exactly.
inline HolonomyResult integrate_holonomy(const ParameterLoop& loop,
                                         double refinement_tolerance = kDefaultRefinementTol,
                                         long max_steps = kDefaultMaxSegments) {
    validate_loop(loop);
    if (!(refinement_tolerance > 0.0)) {
        throw InvalidInputError("integrate_holonomy: tolerance must be positive");
    }
    const ModelFamily& family = model_family(loop.model);
    const int d = static_cast<int>(family.degenerate_indices().size());
    if (is_point_loop(loop)) {
        return {Matrix::Identity(d, d), 0, 0.0};
    }
    const long base_segments = static_cast<long>(loop.vertices.size()) - 1;
    Matrix prev = holonomy_ordered_product(loop, 1);
    int subdivisions = 2;
    Matrix cur = holonomy_ordered_product(loop, subdivisions);
    double diff = (cur - prev).norm();
    while (diff >= refinement_tolerance) {
        if (base_segments * 2L * subdivisions > max_steps) {
            throw ConvergenceFailure(
                "integrate_holonomy: tolerance not reached within segment budget",
                {cur, base_segments * subdivisions, diff});
        }
        prev = cur;
        subdivisions *= 2;
        cur = holonomy_ordered_product(loop, subdivisions);
        diff = (cur - prev).norm();
    }
    return {cur, base_segments * subdivisions, diff};
}

namespace detail {

/// Mean of sin^2 over a linear sweep from u0 to u1.
inline double mean_sin_squared(double u0, double u1) {
    const double du = u1 - u0;
    if (std::abs(du) < 1e-9) {
        const double s = std::sin(0.5 * (u0 + u1));
        return s * s;
    }
    return 0.5 - (std::sin(2.0 * u1) - std::sin(2.0 * u0)) / (4.0 * du);
}

/// Mean of sin over a linear sweep from v0 to v1.
inline double mean_sin(double v0, double v1) {
    const double dv = v1 - v0;
    if (std::abs(dv) < 1e-9) {
        return std::sin(0.5 * (v0 + v1));
    }
    return (std::cos(v0) - std::cos(v1)) / dv;
}

}  // namespace detail

/// Finds the supported plane a loop lies in (off-plane coordinates at
/// canonical fixed values for every vertex).
inline PlaneSpec detect_plane(const ParameterLoop& loop, double tol = 1e-12) {
    std::vector<PlaneKind> candidates;
    if (loop.model == ModelKind::Grassmann) {
        candidates = {PlaneKind::Grassmann};
    } else {
        candidates = {PlaneKind::ThetaPhi1, PlaneKind::ThetaPhi2, PlaneKind::ThetaThetaPhi0,
                      PlaneKind::ThetaThetaPhi90};
    }
    for (PlaneKind k : candidates) {
        PlaneSpec plane(k);
        const bool all_in = std::all_of(
            loop.vertices.begin(), loop.vertices.end(),
            [&](const RealVector& v) { return plane.contains(v, tol); });
        if (all_in) return plane;
    }
    throw InvalidInputError("loop is not planar in a supported plane");
}

/// Signed projected area of a planar loop: the line integral of
/// sin^2(theta) dphi on (theta,phi)-type planes and of sin(theta2) dtheta1
/// on the theta-theta planes. Sign follows the traversal orientation.
inline double projected_area(const ParameterLoop& loop) {
    validate_loop(loop);
    const PlaneSpec plane = loop.plane ? *loop.plane : detect_plane(loop);
    double area = 0.0;
    for (std::size_t e = 0; e + 1 < loop.vertices.size(); ++e) {
        if (!plane.contains(loop.vertices[e])) {
            throw InvalidInputError("loop leaves its declared plane");
        }
        const Eigen::Vector2d from = plane.project(loop.vertices[e]);
        const Eigen::Vector2d to = plane.project(loop.vertices[e + 1]);
        if (plane.theta_phi_type()) {
            area += (to.y() - from.y()) * detail::mean_sin_squared(from.x(), to.x());
        } else {
            area += (to.x() - from.x()) * detail::mean_sin(from.y(), to.y());
        }
    }
    return area;
}

/// Closed-form holonomy of a plane-confined loop with projected area sigma.
inline Matrix analytic_plane_holonomy(const PlaneSpec& plane, double sigma) {
    const Complex phase = std::exp(Complex(0.0, -sigma));
    switch (plane.kind()) {
        case PlaneKind::ThetaPhi1: {
            Matrix g = Matrix::Identity(2, 2);
            g(0, 0) = phase;
            return g;
        }
        case PlaneKind::ThetaPhi2: {
            Matrix g = Matrix::Identity(2, 2);
            g(1, 1) = phase;
            return g;
        }
        case PlaneKind::ThetaThetaPhi0: {
            Matrix g(2, 2);
            g << std::cos(sigma), -std::sin(sigma), std::sin(sigma), std::cos(sigma);
            return g;
        }
        case PlaneKind::ThetaThetaPhi90: {
            Matrix g(2, 2);
            const Complex ms = Complex(0.0, -std::sin(sigma));
            g << Complex(std::cos(sigma), 0.0), ms, ms, Complex(std::cos(sigma), 0.0);
            return g;
        }
        case PlaneKind::Grassmann: {
            Matrix g = Matrix::Identity(4, 4);
            g(3, 3) = phase;
            return g;
        }
    }
    throw InvalidInputError("unsupported plane kind");
}

/// Curvature component F_ab = dA_b/da - dA_a/db + [A_a, A_b], with the
/// derivative terms from central finite differences (h = 1e-5).
inline Matrix field_strength(const ModelFamily& model, const RealVector& p, int coord_a,
                             int coord_b) {
    if (coord_a == coord_b) {
        throw InvalidInputError("field_strength: coordinates must differ");
    }
    if (coord_a < 0 || coord_a >= model.num_params() || coord_b < 0 ||
        coord_b >= model.num_params()) {
        throw InvalidInputError("field_strength: coordinate index out of range");
    }
    const double h = 1e-5;
    auto shifted = [&](int coord, double offset) {
        RealVector q = p;
        q[coord] += offset;
        return q;
    };
    const Matrix dadb = (connection_at(model, shifted(coord_a, h), coord_b) -
                         connection_at(model, shifted(coord_a, -h), coord_b)) /
                        (2.0 * h);
    const Matrix dbda = (connection_at(model, shifted(coord_b, h), coord_a) -
                         connection_at(model, shifted(coord_b, -h), coord_a)) /
                        (2.0 * h);
    const Matrix aa = connection_at(model, p, coord_a);
    const Matrix ab = connection_at(model, p, coord_b);
    return dadb - dbda + aa * ab - ab * aa;
}

inline Matrix field_strength(const ModelFamily& model, const RealVector& p,
                             std::string_view coord_a, std::string_view coord_b) {
    return field_strength(model, p, model.param_index(coord_a), model.param_index(coord_b));
}

}  // namespace holq
