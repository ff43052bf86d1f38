#include "dada/problem_io.hpp"

#include <memory>
#include <sstream>

namespace dada {
namespace {

using nlohmann::json;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

[[noreturn]] void field_error(const std::string& field, const std::string& what) {
  throw std::invalid_argument("problem." + field + ": " + what);
}

const json& require(const json& doc, const std::string& field) {
  if (!doc.is_object() || !doc.contains(field)) field_error(field, "missing");
  return doc.at(field);
}

double get_number(const json& doc, const std::string& field) {
  const json& v = require(doc, field);
  if (!v.is_number()) field_error(field, "expected a number");
  return v.get<double>();
}

Eigen::Index get_index(const json& doc, const std::string& field) {
  const json& v = require(doc, field);
  if (!v.is_number_integer() || v.get<long long>() < 1) field_error(field, "expected a positive integer");
  return static_cast<Eigen::Index>(v.get<long long>());
}

json vector_to_json(const Vector& v) { return json(std::vector<double>(v.data(), v.data() + v.size())); }

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Vector vector_from_json(const json& doc, const std::string& field) {
  const json& v = require(doc, field);
  if (!v.is_array()) field_error(field, "expected an array of numbers");
  Vector out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) field_error(field + "[" + std::to_string(i) + "]", "expected a number");
    out[static_cast<Eigen::Index>(i)] = v[i].get<double>();
  }
  return out;
}

Matrix matrix_from_json(const json& doc, const std::string& field) {
  const json& rows = require(doc, field);
  if (!rows.is_array() || rows.empty()) field_error(field, "expected a non-empty array of rows");
  const std::size_t cols = rows[0].is_array() ? rows[0].size() : 0;
  if (cols == 0) field_error(field, "rows must be non-empty arrays");
  Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::string row_field = field + "[" + std::to_string(i) + "]";
    if (!rows[i].is_array() || rows[i].size() != cols) field_error(row_field, "ragged row");
    for (std::size_t j = 0; j < cols; ++j) {
      if (!rows[i][j].is_number()) field_error(row_field, "expected numbers");
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j].get<double>();
    }
  }
  return m;
}

std::optional<std::uint64_t> optional_seed(const json& params) {
  if (params.is_object() && params.contains("seed") && params["seed"].is_number_unsigned()) {
    return params["seed"].get<std::uint64_t>();
  }
  return std::nullopt;
}

}  // namespace

std::string problem_kind(const ProblemInstance& instance) {
  return std::visit(Overloaded{
                        [](const QuadraticProblem&) { return std::string("quadratic"); },
                        [](const SoftmaxProblem&) { return std::string("softmax"); },
                        [](const PolyhedronProblem&) { return std::string("polyhedron"); },
                        [](const WorstCaseProblem&) { return std::string("worst-case"); },
                    },
                    instance);
}

Eigen::Index problem_dimension(const ProblemInstance& instance) {
  return std::visit(Overloaded{
                        [](const QuadraticProblem& p) { return p.d; },
                        [](const SoftmaxProblem& p) { return p.A.cols(); },
                        [](const PolyhedronProblem& p) { return p.A.cols(); },
                        [](const WorstCaseProblem& p) { return p.d; },
                    },
                    instance);
}

json problem_to_json(const ProblemInstance& instance) {
  json doc;
  doc["kind"] = problem_kind(instance);
  std::visit(Overloaded{
                 [&](const QuadraticProblem& p) { doc["d"] = p.d; },
                 [&](const SoftmaxProblem& p) {
                   json params{{"n", p.A.rows()}, {"d", p.A.cols()}, {"mu", p.mu}};
                   if (p.seed) params["seed"] = *p.seed;
                   doc["params"] = params;
                   doc["mu"] = p.mu;
                   doc["recentered"] = p.recentered;
                   doc["A"] = matrix_to_json(p.A);
                   doc["b"] = vector_to_json(p.b);
                 },
                 [&](const PolyhedronProblem& p) {
                   json params{{"n", p.A.rows()}, {"d", p.A.cols()}, {"R", p.R}, {"q", p.q}};
                   if (p.seed) params["seed"] = *p.seed;
                   doc["params"] = params;
                   doc["q"] = p.q;
                   doc["A"] = matrix_to_json(p.A);
                   doc["b"] = vector_to_json(p.b);
                   doc["planted_solution"] = vector_to_json(p.planted_solution);
                 },
                 [&](const WorstCaseProblem& p) {
                   doc["d"] = p.d;
                   doc["p"] = p.p;
                 },
             },
             instance);
  return doc;
}

ProblemInstance problem_from_json(const json& doc) {
  const json& kind_field = require(doc, "kind");
  if (!kind_field.is_string()) field_error("kind", "expected a string");
  const std::string kind = kind_field.get<std::string>();
  if (kind == "quadratic") return QuadraticProblem{get_index(doc, "d")};
  if (kind == "worst-case") {
    WorstCaseProblem p{get_index(doc, "d"), get_number(doc, "p")};
    if (!(p.p >= 2.0)) field_error("p", "must be >= 2");
    return p;
  }
  if (kind == "softmax") {
    SoftmaxProblem p;
    p.A = matrix_from_json(doc, "A");
    p.b = vector_from_json(doc, "b");
    p.mu = get_number(doc, "mu");
    if (!(p.mu > 0.0)) field_error("mu", "must be positive");
    if (p.b.size() != p.A.rows()) field_error("b", "length must equal the number of rows of A");
    p.recentered = doc.value("recentered", false);
    p.seed = optional_seed(doc.value("params", json::object()));
    return p;
  }
  if (kind == "polyhedron") {
    PolyhedronProblem p;
    p.A = matrix_from_json(doc, "A");
    p.b = vector_from_json(doc, "b");
    p.q = get_number(doc, "q");
    if (!(p.q >= 1.0 && p.q <= 2.0)) field_error("q", "must lie in [1, 2]");
    if (p.b.size() != p.A.rows()) field_error("b", "length must equal the number of rows of A");
    if (doc.contains("planted_solution")) {
      p.planted_solution = vector_from_json(doc, "planted_solution");
      if (p.planted_solution.size() != p.A.cols()) field_error("planted_solution", "wrong length");
    }
    const json params = doc.value("params", json::object());
    if (params.contains("R") && params["R"].is_number()) p.R = params["R"].get<double>();
    p.seed = optional_seed(params);
    return p;
  }
  field_error("kind", "unknown problem kind '" + kind + "'");
}

FirstOrderOracle make_oracle(const ProblemInstance& instance, const NormContext& ctx) {
  return std::visit(Overloaded{
                        [&](const QuadraticProblem& p) {
                          if (p.d != ctx.dimension()) {
                            throw DimensionError("quadratic: dimension does not match the norm");
                          }
                          return make_quadratic_oracle(ctx);
                        },
                        [](const SoftmaxProblem& p) {
                          return make_oracle(std::make_shared<const SoftmaxProblem>(p));
                        },
                        [](const PolyhedronProblem& p) {
                          return make_oracle(std::make_shared<const PolyhedronProblem>(p));
                        },
                        [](const WorstCaseProblem& p) { return make_oracle(p); },
                    },
                    instance);
}

}  // namespace dada
