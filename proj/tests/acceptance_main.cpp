// Acceptance suite: one pass/fail line per criterion, non-zero exit if any
// criterion fails. Criterion 8 shells out to the CLI, whose path is passed
// with --cli (ctest wires it up automatically).

#include "holq/holq.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <sys/wait.h>
#include <vector>

using namespace holq;

namespace {

std::string g_cli_path;

struct Outcome {
    bool pass;
    std::string detail;
};

double max_entry_distance(const Matrix& a, const Matrix& b) { return (a - b).norm(); }

std::string sci(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3g", x);
    return buf;
}

Matrix haar2(std::mt19937& rng) {
    std::normal_distribution<double> gauss;
    Matrix m(2, 2);
    for (int r = 0; r < 2; ++r) {
        for (int c = 0; c < 2; ++c) m(r, c) = Complex(gauss(rng), gauss(rng));
    }
    Eigen::HouseholderQR<Matrix> qr(m);
    Matrix q = qr.householderQ();
    const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int i = 0; i < 2; ++i) {
        const Complex d = r(i, i);
        q.col(i) *= std::abs(d) > 0 ? d / std::abs(d) : Complex(1, 0);
    }
    return q;
}

// 1. Connection reproduction on a 50-point theta grid, tolerance 1e-10.
Outcome criterion_connection() {
    const ModelFamily& g42 = model_family(ModelKind::Grassmann);
    double worst = 0.0;
    for (int k = 0; k < 50; ++k) {
        const double theta = M_PI * k / 49.0;
        RealVector p(2);
        p << theta, 0.37;
        worst = std::max(worst, connection_at(g42, p, "theta").norm());
        Matrix expected = Matrix::Zero(4, 4);
        expected(3, 3) = Complex(0.0, -std::sin(theta) * std::sin(theta));
        worst = std::max(worst, max_entry_distance(connection_at(g42, p, "phi"), expected));
    }
    return {worst < 1e-10, "max error " + sci(worst)};
}

// 2. Interaction-plane holonomies over a 5x5 extent grid plus the
//    area-only-dependence check, tolerance 1e-6.
Outcome criterion_interaction_holonomy() {
    const PlaneSpec plane(PlaneKind::Grassmann);
    double worst = 0.0;
    for (int i = 0; i < 5; ++i) {
        for (int j = 0; j < 5; ++j) {
            const double a = 0.3 + (M_PI / 2 - 0.3) * i / 4.0;
            const double b = 0.4 + (M_PI - 0.4) * j / 4.0;
            const ParameterLoop rect = rectangle_loop(plane, a, b, 1);
            Matrix expected = Matrix::Identity(4, 4);
            expected(3, 3) = std::exp(Complex(0, -projected_area(rect)));
            worst = std::max(worst,
                             max_entry_distance(integrate_holonomy(rect).gamma, expected));
        }
    }

    // Same area, different shapes: an L-shaped loop and a slanted triangle
    // against rectangles of matching projected area.
    const ParameterLoop lshape = planar_loop(
        plane, {{0, 0}, {M_PI / 2, 0}, {M_PI / 2, M_PI / 2}, {M_PI / 4, M_PI / 2},
                {M_PI / 4, M_PI}, {0, M_PI}, {0, 0}});
    const ParameterLoop rect_l = rectangle_loop(plane, M_PI / 2, projected_area(lshape), 1);
    worst = std::max(worst, max_entry_distance(integrate_holonomy(lshape).gamma,
                                               integrate_holonomy(rect_l).gamma));

    const ParameterLoop triangle = planar_loop(plane, {{0, 0}, {1.2, 0}, {1.2, 1.0}, {0, 0}});
    const ParameterLoop rect_t = rectangle_loop(plane, M_PI / 2, projected_area(triangle), 1);
    worst = std::max(worst, max_entry_distance(integrate_holonomy(triangle).gamma,
                                               integrate_holonomy(rect_t).gamma));

    return {worst < 1e-6, "max error " + sci(worst)};
}

// 3. Generator suite on the four CP^2 planes, tolerance 1e-6.
Outcome criterion_generator_suite() {
    double worst = 0.0;
    for (PlaneKind kind : {PlaneKind::ThetaPhi1, PlaneKind::ThetaPhi2, PlaneKind::ThetaThetaPhi0,
                           PlaneKind::ThetaThetaPhi90}) {
        const PlaneSpec plane(kind);
        for (double a : {0.3, 0.9, 1.3, M_PI / 2}) {
            for (double b : {0.4, 1.4, 2.3, M_PI}) {
                const ParameterLoop rect = rectangle_loop(plane, a, b, 1);
                const Matrix analytic = analytic_plane_holonomy(plane, projected_area(rect));
                worst = std::max(worst,
                                 max_entry_distance(integrate_holonomy(rect).gamma, analytic));
            }
        }
    }
    return {worst < 1e-6, "max error " + sci(worst)};
}

// 4. Adiabatic limit on the canonical rectangles: monotone deviation over
//    T in {25,...,400} with N = 20 T, final deviation and leakage < 1e-2.
Outcome criterion_adiabatic_limit() {
    const std::vector<std::pair<PlaneKind, std::pair<double, double>>> canonical = {
        {PlaneKind::ThetaPhi1, {0.7, 0.8}},
        {PlaneKind::ThetaPhi2, {0.7, 0.8}},
        {PlaneKind::ThetaThetaPhi0, {0.7, 0.9}},
        {PlaneKind::ThetaThetaPhi90, {0.7, 0.9}},
        {PlaneKind::Grassmann, {0.7, 0.9}},
    };
    double worst_dev = 0.0, worst_leak = 0.0;
    for (const auto& [kind, extents] : canonical) {
        const ParameterLoop loop =
            rectangle_loop(PlaneSpec(kind), extents.first, extents.second, 1);
        double prev = 1e100;
        EvolutionReport report;
        for (double t : {25.0, 50.0, 100.0, 200.0, 400.0}) {
            report = compare_to_holonomy({loop, t, static_cast<long>(20 * t)});
            if (report.deviation >= prev) {
                return {false, std::string("deviation not monotone on ") +
                                   std::string(PlaneSpec(kind).name())};
            }
            prev = report.deviation;
        }
        worst_dev = std::max(worst_dev, report.deviation);
        worst_leak = std::max(worst_leak, report.leakage);
    }
    return {worst_dev < 1e-2 && worst_leak < 1e-2,
            "final deviation " + sci(worst_dev) + ", leakage " + sci(worst_leak)};
}

// 5. Lie-closure dimensions 4 (one qubit) and 16 (two qubits).
Outcome criterion_universality() {
    const int one = lie_closure_dimension(universal_generator_set(1));
    const int two = lie_closure_dimension(universal_generator_set(2));
    return {one == 4 && two == 16,
            "dims " + std::to_string(one) + ", " + std::to_string(two)};
}

// 6. Synthesis round-trip over 200 Haar targets (1e-8) and the exact
//    controlled-phase gate (1e-12).
Outcome criterion_synthesis() {
    std::mt19937 rng(424242);
    double worst = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        const Matrix target = haar2(rng);
        worst = std::max(
            worst, max_entry_distance(evaluate_program(synthesize_single_qubit(target)), target));
    }
    if (worst >= 1e-8) return {false, "round-trip error " + sci(worst)};

    Matrix cz = Matrix::Identity(4, 4);
    cz(3, 3) = -1.0;
    const double cz_err =
        max_entry_distance(evaluate_program(controlled_phase_program(0, 1, M_PI)), cz);
    return {cz_err < 1e-12, "round-trip " + sci(worst) + ", U_CPH error " + sci(cz_err)};
}

// 7. Structural invariants over 1000 random samples.
Outcome criterion_structural() {
    std::mt19937 rng(1357);
    std::uniform_real_distribution<double> angle(-M_PI, M_PI);
    const ModelFamily& cp2 = model_family(ModelKind::Cp2);
    const ModelFamily& g42 = model_family(ModelKind::Grassmann);

    auto random_point = [&](const ModelFamily& family) {
        RealVector p(family.num_params());
        for (int i = 0; i < p.size(); ++i) p[i] = angle(rng);
        return p;
    };
    auto spectrum_error = [](const ModelFamily& family, const Matrix& h) {
        const auto got = hermitian_eigenvalues(h);
        const auto want = hermitian_eigenvalues(family.base_hamiltonian());
        double err = 0.0;
        for (std::size_t i = 0; i < want.size(); ++i) err = std::max(err, std::abs(got[i] - want[i]));
        return err;
    };

    for (int trial = 0; trial < 500; ++trial) {
        for (const ModelFamily* family : {&cp2, &g42}) {
            const RealVector p = random_point(*family);
            const Matrix u = family->unitary(p);
            if (unitarity_distance(u) >= 1e-10) return {false, "unitarity violated"};
            const int coord = trial % family->num_params();
            if (antihermiticity_defect(connection_at(*family, p, coord)) >= 1e-10) {
                return {false, "connection not anti-Hermitian"};
            }
            if (spectrum_error(*family, isospectral_hamiltonian(*family, p)) >= 1e-9) {
                return {false, "isospectrality violated"};
            }
            RealVector up = p, down = p;
            up[coord] += 1e-6;
            down[coord] -= 1e-6;
            const Matrix fd = (family->unitary(up) - family->unitary(down)) / 2e-6;
            if ((family->partial(p, coord) - fd).norm() >= 1e-6) {
                return {false, "derivative mismatch"};
            }
        }
    }

    // Orientation reversal and point-loop identity.
    std::uniform_real_distribution<double> ext(0.2, 1.4);
    for (PlaneKind kind : {PlaneKind::ThetaPhi1, PlaneKind::ThetaPhi2, PlaneKind::ThetaThetaPhi0,
                           PlaneKind::ThetaThetaPhi90, PlaneKind::Grassmann}) {
        const PlaneSpec plane(kind);
        for (int trial = 0; trial < 6; ++trial) {
            const ParameterLoop rect = rectangle_loop(plane, ext(rng), ext(rng), 1);
            const HolonomyResult fwd = integrate_holonomy(rect);
            const HolonomyResult bwd = integrate_holonomy(reversed(rect));
            const double budget =
                std::max(2.0 * std::max(fwd.estimated_error, bwd.estimated_error), 1e-11);
            if ((bwd.gamma - fwd.gamma.adjoint()).norm() > budget) {
                return {false, "orientation reversal violated"};
            }
        }
        const RealVector base = plane.lift(0.8, 0.5);
        const HolonomyResult still = integrate_holonomy(point_loop(plane.model(), base));
        if ((still.gamma - Matrix::Identity(still.gamma.rows(), still.gamma.cols())).norm() !=
            0.0) {
            return {false, "point loop not exactly the identity"};
        }
    }
    return {true, "1000 samples clean"};
}

// 8. CLI determinism: byte-identical JSON output across two runs of a
//    fixed command corpus.
Outcome criterion_cli_determinism() {
    if (g_cli_path.empty()) return {false, "pass --cli <path-to-holq-binary>"};
    auto capture = [&](const std::string& args) -> std::pair<int, std::string> {
        FILE* pipe = popen((g_cli_path + " " + args + " 2>/dev/null").c_str(), "r");
        if (!pipe) return {-1, ""};
        std::string out;
        char buf[4096];
        while (std::size_t got = std::fread(buf, 1, sizeof(buf), pipe)) out.append(buf, got);
        const int status = pclose(pipe);
        return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
    };
    const std::vector<std::string> corpus = {
        "connection --model grassmann --point 0.7853981633974483,0.3 --coord phi --format json",
        "connection --model cp2 --point 0.9,0.1,1.3,-0.4 --coord theta1 --format json",
        "holonomy --plane grassmann --rect 1.5707963267948966,3.141592653589793 --format json",
        "holonomy --plane theta1-theta2-phi0 --rect 0.8,1.1 --format json",
        "evolve --plane grassmann --rect 0.7,0.9 --time 25 --steps 500 --format json",
        "synth --target 0.70710678118654757,0,0.70710678118654757,0,0.70710678118654757,0,"
        "-0.70710678118654757,0",
        "closure --qubits 2 --format json",
    };
    for (const std::string& command : corpus) {
        const auto first = capture(command);
        const auto second = capture(command);
        if (first.first != 0 || second.first != 0) {
            return {false, "command failed: " + command};
        }
        if (first.second.empty() || first.second != second.second) {
            return {false, "output differs: " + command};
        }
    }
    return {true, std::to_string(corpus.size()) + " commands byte-stable"};
}

}  // namespace

int main(int argc, char** argv) {
    for (int i = 1; i + 1 < argc; ++i) {
        if (std::string(argv[i]) == "--cli") g_cli_path = argv[i + 1];
    }

    struct Criterion {
        int number;
        const char* name;
        double time_limit_s;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria = {
        {1, "connection reproduction", 1.0, criterion_connection},
        {2, "interaction holonomy reproduction", 10.0, criterion_interaction_holonomy},
        {3, "generator suite", 10.0, criterion_generator_suite},
        {4, "adiabatic limit", 120.0, criterion_adiabatic_limit},
        {5, "universality closure", 5.0, criterion_universality},
        {6, "synthesis round-trip", 5.0, criterion_synthesis},
        {7, "structural invariants", 30.0, criterion_structural},
        {8, "cli determinism", 60.0, criterion_cli_determinism},
    };

    int failures = 0;
    for (const Criterion& criterion : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome outcome{false, "exception"};
        try {
            outcome = criterion.run();
        } catch (const std::exception& err) {
            outcome = {false, std::string("exception: ") + err.what()};
        }
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_time = elapsed < criterion.time_limit_s;
        const bool pass = outcome.pass && in_time;
        if (!pass) ++failures;
        std::printf("[%s] criterion %d: %s (%s; %.2fs%s)\n", pass ? "PASS" : "FAIL",
                    criterion.number, criterion.name, outcome.detail.c_str(), elapsed,
                    in_time ? "" : " OVER TIME LIMIT");
    }
    return failures == 0 ? 0 : 1;
}
