// Command-line surface for the holq library: connection components,
// holonomy integration, adiabatic comparisons, gate synthesis, loop-program
// evaluation and Lie-closure certification.
//
// Exit codes: 0 success, 1 usage, 2 convergence failure (best estimate is
// still printed), 3 invalid input or parse error. Results go to standard
// output, diagnostics to standard error. All output is deterministic;
// --format json prints full-precision row-major [re, im] entry arrays.

#include "holq/holq.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

namespace {

using namespace holq;
using nlohmann::json;

std::string format_complex_text(const Complex& z) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g%+.6gi", z.real(), z.imag());
    return buf;
}

void print_matrix_text(const Matrix& m) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            std::cout << (c ? "  " : "") << format_complex_text(m(r, c));
        }
        std::cout << "\n";
    }
}

void emit_json(const json& doc) { std::cout << doc.dump() << "\n"; }

struct ConnectionArgs {
    std::string model = "cp2";
    std::vector<double> point;
    std::string coord;
    std::string format = "text";
};

struct LoopArgs {
    std::string plane;
    std::vector<double> rect;
    int subdivisions = 1;
    double tol = kDefaultRefinementTol;
    long max_steps = kDefaultMaxSegments;
    std::string format = "text";
};

struct EvolveArgs {
    LoopArgs loop;
    double total_time = 0.0;
    long steps = 0;
};

ParameterLoop build_rectangle(const LoopArgs& args) {
    const PlaneSpec plane = PlaneSpec::from_name(args.plane);
    return rectangle_loop(plane, args.rect.at(0), args.rect.at(1), args.subdivisions);
}

int run_connection(const ConnectionArgs& args) {
    const ModelKind kind = args.model == "cp2" ? ModelKind::Cp2 : ModelKind::Grassmann;
    const ModelFamily& family = model_family(kind);
    RealVector p = RealVector::Zero(family.num_params());
    if (!args.point.empty()) {
        if (static_cast<int>(args.point.size()) != family.num_params()) {
            throw InvalidInputError("--point needs " + std::to_string(family.num_params()) +
                                    " comma-separated values for model " + args.model);
        }
        for (int i = 0; i < family.num_params(); ++i) p[i] = args.point[i];
    }
    const Matrix a = connection_at(family, p, args.coord);
    if (args.format == "json") {
        emit_json({{"model", args.model},
                   {"coord", args.coord},
                   {"point", std::vector<double>(p.data(), p.data() + p.size())},
                   {"dim", a.rows()},
                   {"matrix", matrix_to_json(a)}});
    } else {
        print_matrix_text(a);
    }
    return 0;
}

void emit_holonomy(const LoopArgs& args, const HolonomyResult& result) {
    if (args.format == "json") {
        emit_json({{"plane", args.plane},
                   {"rect", {args.rect.at(0), args.rect.at(1)}},
                   {"dim", result.gamma.rows()},
                   {"matrix", matrix_to_json(result.gamma)},
                   {"steps_used", result.steps_used},
                   {"estimated_error", result.estimated_error}});
    } else {
        print_matrix_text(result.gamma);
        std::cout << "steps_used: " << result.steps_used << "\n";
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.6g", result.estimated_error);
        std::cout << "estimated_error: " << buf << "\n";
    }
}

int run_holonomy(const LoopArgs& args) {
    const ParameterLoop loop = build_rectangle(args);
    try {
        emit_holonomy(args, integrate_holonomy(loop, args.tol, args.max_steps));
    } catch (const ConvergenceFailure& failure) {
        emit_holonomy(args, failure.best);
        std::cerr << "holq: " << failure.what() << "\n";
        return 2;
    }
    return 0;
}

int run_evolve(const EvolveArgs& args) {
    const ParameterLoop loop = build_rectangle(args.loop);
    const EvolutionSchedule schedule{loop, args.total_time, args.steps};
    EvolutionReport report;
    try {
        report = compare_to_holonomy(schedule, args.loop.tol, args.loop.max_steps);
    } catch (const ConvergenceFailure& failure) {
        std::cerr << "holq: " << failure.what() << "\n";
        return 2;
    }
    if (args.loop.format == "json") {
        emit_json({{"plane", args.loop.plane},
                   {"rect", {args.loop.rect.at(0), args.loop.rect.at(1)}},
                   {"time", args.total_time},
                   {"steps", args.steps},
                   {"dim", report.projected_map.rows()},
                   {"matrix", matrix_to_json(report.projected_map)},
                   {"leakage", report.leakage},
                   {"deviation", report.deviation}});
    } else {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "leakage: %.6g\ndeviation: %.6g", report.leakage,
                      report.deviation);
        std::cout << buf << "\n";
        print_matrix_text(report.projected_map);
    }
    return 0;
}

int run_synth(const std::vector<double>& target_entries) {
    Matrix target(2, 2);
    target(0, 0) = Complex(target_entries[0], target_entries[1]);
    target(0, 1) = Complex(target_entries[2], target_entries[3]);
    target(1, 0) = Complex(target_entries[4], target_entries[5]);
    target(1, 1) = Complex(target_entries[6], target_entries[7]);
    emit_json(program_to_json(synthesize_single_qubit(target)));
    return 0;
}

int run_program_file(const std::string& path, const std::string& format) {
    std::ifstream in(path);
    if (!in) {
        throw InvalidInputError("cannot open program file '" + path + "'");
    }
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& err) {
        throw InvalidInputError(std::string("program file is not valid JSON: ") + err.what());
    }
    const LoopProgram program = program_from_json(doc);
    const Matrix result = evaluate_program(program);
    if (format == "json") {
        emit_json({{"num_qubits", program.num_qubits},
                   {"dim", result.rows()},
                   {"matrix", matrix_to_json(result)}});
    } else {
        print_matrix_text(result);
    }
    return 0;
}

int run_closure(int qubits, const std::string& format) {
    const int dimension = lie_closure_dimension(universal_generator_set(qubits));
    if (format == "json") {
        emit_json({{"qubits", qubits}, {"dimension", dimension}});
    } else {
        std::cout << dimension << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"holonomic quantum gates on CP^2 / Grassmann control manifolds"};
    app.require_subcommand(1);

    const std::vector<std::string> formats = {"text", "json"};
    const std::vector<std::string> planes = {"theta-phi-1", "theta-phi-2", "theta1-theta2-phi0",
                                             "theta1-theta2-phi90", "grassmann"};

    ConnectionArgs conn;
    auto* connection = app.add_subcommand("connection", "Connection component at a point");
    connection->add_option("--model", conn.model, "Model family")
        ->check(CLI::IsMember({"cp2", "grassmann"}));
    connection->add_option("--point", conn.point,
                           "Comma-separated coordinates (cp2: theta1,phi1,theta2,phi2; "
                           "grassmann: theta,phi); defaults to the origin")
        ->delimiter(',');
    connection->add_option("--coord", conn.coord, "Coordinate label")
        ->required()
        ->check(CLI::IsMember({"theta1", "phi1", "theta2", "phi2", "theta", "phi"}));
    connection->add_option("--format", conn.format)->check(CLI::IsMember(formats));

    LoopArgs hol;
    auto* holonomy = app.add_subcommand("holonomy", "Integrate the holonomy of a rectangle loop");
    holonomy->add_option("--plane", hol.plane, "Holonomy plane")
        ->required()
        ->check(CLI::IsMember(planes));
    holonomy->add_option("--rect", hol.rect, "Rectangle extents a,b (radians)")
        ->required()
        ->delimiter(',')
        ->expected(2);
    holonomy->add_option("--subdivisions", hol.subdivisions, "Initial subdivisions per edge")
        ->check(CLI::PositiveNumber);
    holonomy->add_option("--tol", hol.tol, "Refinement tolerance");
    holonomy->add_option("--max-steps", hol.max_steps, "Segment budget");
    holonomy->add_option("--format", hol.format)->check(CLI::IsMember(formats));

    EvolveArgs evo;
    auto* evolve = app.add_subcommand("evolve", "Trotterized adiabatic evolution vs. holonomy");
    evolve->add_option("--plane", evo.loop.plane)->required()->check(CLI::IsMember(planes));
    evolve->add_option("--rect", evo.loop.rect)->required()->delimiter(',')->expected(2);
    evolve->add_option("--time", evo.total_time, "Total evolution time (units of the gap)")
        ->required();
    evolve->add_option("--steps", evo.steps, "Number of Trotter steps")->required();
    evolve->add_option("--tol", evo.loop.tol, "Holonomy refinement tolerance");
    evolve->add_option("--format", evo.loop.format)->check(CLI::IsMember(formats));

    std::vector<double> synth_target;
    auto* synth = app.add_subcommand("synth", "Synthesize a loop program for a 2x2 unitary");
    synth->add_option("--target", synth_target,
                      "Row-major re,im pairs: re00,im00,re01,im01,re10,im10,re11,im11")
        ->required()
        ->delimiter(',')
        ->expected(8);

    std::string program_path;
    std::string program_format = "text";
    auto* runprog = app.add_subcommand("run-program", "Evaluate a loop-program file");
    runprog->add_option("path", program_path, "Program JSON file")->required();
    runprog->add_option("--format", program_format)->check(CLI::IsMember(formats));

    int closure_qubits = 1;
    std::string closure_format = "text";
    auto* closure = app.add_subcommand("closure", "Lie-closure dimension of the generator set");
    closure->add_option("--qubits", closure_qubits)->required()->check(CLI::Range(1, 2));
    closure->add_option("--format", closure_format)->check(CLI::IsMember(formats));

    try {
        app.parse(argc, argv);
        if (app.got_subcommand(connection)) return run_connection(conn);
        if (app.got_subcommand(holonomy)) return run_holonomy(hol);
        if (app.got_subcommand(evolve)) return run_evolve(evo);
        if (app.got_subcommand(synth)) return run_synth(synth_target);
        if (app.got_subcommand(runprog)) return run_program_file(program_path, program_format);
        if (app.got_subcommand(closure)) return run_closure(closure_qubits, closure_format);
    } catch (const CLI::ParseError& err) {
        const int code = app.exit(err);
        return code == 0 ? 0 : 1;
    } catch (const InvalidInputError& err) {
        std::cerr << "holq: " << err.what() << "\n";
        return 3;
    } catch (const std::exception& err) {
        std::cerr << "holq: " << err.what() << "\n";
        return 3;
    }
    return 0;
}
