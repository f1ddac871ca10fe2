/// Versioned JSON serialization of loop programs, plus the row-major
/// [re, im] matrix encoding used by all machine-readable output.
///
/// Program files are strict: the version field is mandatory (current
/// version 1), unknown fields are rejected, and every step carries exactly
/// one of "area" or "rect" (a rectangle whose projected area in the step's
/// plane supplies the area).
#pragma once

#include "holq/gates.hpp"

#include <json.hpp>

#include <algorithm>
#include <string>
#include <vector>

namespace holq {

inline constexpr int kProgramFileVersion = 1;

/// Row-major [re, im] pair array; parses back bit-exactly.
inline nlohmann::json matrix_to_json(const Matrix& m) {
    nlohmann::json entries = nlohmann::json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            entries.push_back({m(r, c).real(), m(r, c).imag()});
        }
    }
    return entries;
}

inline Matrix matrix_from_json(const nlohmann::json& entries, int rows, int cols) {
    if (!entries.is_array() || entries.size() != static_cast<std::size_t>(rows) * cols) {
        throw InvalidInputError("matrix JSON has wrong number of entries");
    }
    Matrix m(rows, cols);
    std::size_t k = 0;
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c, ++k) {
            const auto& pair = entries[k];
            if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() ||
                !pair[1].is_number()) {
                throw InvalidInputError("matrix JSON entries must be [re, im] pairs");
            }
            m(r, c) = Complex(pair[0].get<double>(), pair[1].get<double>());
        }
    }
    return m;
}

inline nlohmann::json program_to_json(const LoopProgram& program) {
    nlohmann::json steps = nlohmann::json::array();
    for (const LoopStep& step : program.steps) {
        if (const auto* single = std::get_if<SingleQubitLoopStep>(&step)) {
            steps.push_back({{"kind", "single_qubit_plane_loop"},
                             {"qubit", single->qubit},
                             {"plane", std::string(PlaneSpec(single->plane).name())},
                             {"area", single->area}});
        } else {
            const auto& cp = std::get<ControlledPhaseStep>(step);
            steps.push_back({{"kind", "controlled_phase"},
                             {"control", cp.control},
                             {"target", cp.target},
                             {"area", cp.area}});
        }
    }
    return {{"version", kProgramFileVersion},
            {"num_qubits", program.num_qubits},
            {"steps", steps}};
}

namespace detail {

inline void require_keys(const nlohmann::json& obj, const std::vector<std::string>& required,
                         const std::vector<std::string>& optional, const std::string& what) {
    if (!obj.is_object()) {
        throw InvalidInputError(what + " must be a JSON object");
    }
    for (const auto& key : required) {
        if (!obj.contains(key)) {
            throw InvalidInputError(what + " is missing field '" + key + "'");
        }
    }
    for (const auto& item : obj.items()) {
        const std::string& key = item.key();
        const bool known =
            std::find(required.begin(), required.end(), key) != required.end() ||
            std::find(optional.begin(), optional.end(), key) != optional.end();
        if (!known) {
            throw InvalidInputError(what + " has unknown field '" + key + "'");
        }
    }
}

inline int get_int(const nlohmann::json& obj, const std::string& key, const std::string& what) {
    if (!obj.at(key).is_number_integer()) {
        throw InvalidInputError(what + " field '" + key + "' must be an integer");
    }
    return obj.at(key).get<int>();
}

/// Reads a step's area, either directly or through a rect whose projected
/// area in `plane` defines it.
inline double step_area(const nlohmann::json& step, const PlaneSpec& plane,
                        const std::string& what) {
    const bool has_area = step.contains("area");
    const bool has_rect = step.contains("rect");
    if (has_area == has_rect) {
        throw InvalidInputError(what + " needs exactly one of 'area' or 'rect'");
    }
    if (has_area) {
        if (!step.at("area").is_number()) {
            throw InvalidInputError(what + " field 'area' must be a number");
        }
        return step.at("area").get<double>();
    }
    const auto& rect = step.at("rect");
    require_keys(rect, {"a", "b"}, {}, what + " rect");
    if (!rect.at("a").is_number() || !rect.at("b").is_number()) {
        throw InvalidInputError(what + " rect extents must be numbers");
    }
    return projected_area(
        rectangle_loop(plane, rect.at("a").get<double>(), rect.at("b").get<double>(), 1));
}

}  // namespace detail

inline LoopProgram program_from_json(const nlohmann::json& doc) {
    detail::require_keys(doc, {"version", "num_qubits", "steps"}, {}, "program");
    const int version = detail::get_int(doc, "version", "program");
    if (version != kProgramFileVersion) {
        throw InvalidInputError("unknown program version " + std::to_string(version));
    }
    LoopProgram program;
    program.num_qubits = detail::get_int(doc, "num_qubits", "program");
    if (program.num_qubits < 1 || program.num_qubits > 4) {
        throw InvalidInputError("program num_qubits must be between 1 and 4");
    }
    if (!doc.at("steps").is_array()) {
        throw InvalidInputError("program field 'steps' must be an array");
    }
    for (const auto& step : doc.at("steps")) {
        detail::require_keys(step, {"kind"}, {"qubit", "plane", "control", "target", "area", "rect"},
                             "step");
        const std::string kind = step.at("kind").is_string() ? step.at("kind").get<std::string>()
                                                             : std::string();
        if (kind == "single_qubit_plane_loop") {
            detail::require_keys(step, {"kind", "qubit", "plane"}, {"area", "rect"}, "step");
            if (!step.at("plane").is_string()) {
                throw InvalidInputError("step field 'plane' must be a string");
            }
            const PlaneSpec plane = PlaneSpec::from_name(step.at("plane").get<std::string>());
            if (plane.model() != ModelKind::Cp2) {
                throw InvalidInputError("single-qubit loop steps require a CP^2 plane");
            }
            program.steps.push_back(SingleQubitLoopStep{
                detail::get_int(step, "qubit", "step"), plane.kind(),
                detail::step_area(step, plane, "step")});
        } else if (kind == "controlled_phase") {
            detail::require_keys(step, {"kind", "control", "target"}, {"area", "rect"}, "step");
            program.steps.push_back(ControlledPhaseStep{
                detail::get_int(step, "control", "step"), detail::get_int(step, "target", "step"),
                detail::step_area(step, PlaneSpec(PlaneKind::Grassmann), "step")});
        } else {
            throw InvalidInputError("unknown step kind '" + kind + "'");
        }
    }
    // Surface malformed steps now rather than at evaluation time.
    for (const LoopStep& step : program.steps) detail::check_step(program, step);
    return program;
}

}  // namespace holq
