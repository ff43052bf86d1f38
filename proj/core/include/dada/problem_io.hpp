#pragma once

#include <string>
#include <variant>

#include <nlohmann/json.hpp>

#include "dada/problems.hpp"

namespace dada {

using ProblemInstance =
    std::variant<QuadraticProblem, SoftmaxProblem, PolyhedronProblem, WorstCaseProblem>;

/// "quadratic", "softmax", "polyhedron" or "worst-case".
std::string problem_kind(const ProblemInstance& instance);

/// Full instance document: kind, generation parameters (including the seed)
/// and the data itself, matrices as arrays of rows. Doubles are written with
/// round-trip precision so a replayed instance is bit-identical.
nlohmann::json problem_to_json(const ProblemInstance& instance);

/// Inverse of problem_to_json. Throws std::invalid_argument naming the
/// offending field.
ProblemInstance problem_from_json(const nlohmann::json& doc);

/// The quadratic oracle is taken in the norm of `ctx`; the other problems are
/// defined in standard coordinates.
FirstOrderOracle make_oracle(const ProblemInstance& instance, const NormContext& ctx);

Eigen::Index problem_dimension(const ProblemInstance& instance);

}  // namespace dada
