#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "dada/harness.hpp"
#include "dada/problems.hpp"

namespace dada::harness {
namespace {

using nlohmann::json;

// Allowed generator parameters per problem kind; all are required.
struct KindParams {
  const char* kind;
  std::vector<const char*> integers;
  std::vector<const char*> reals;
};

const std::vector<KindParams>& problem_kinds() {
  static const std::vector<KindParams> kinds{
      {"quadratic", {"d"}, {}},
      {"softmax", {"n", "d"}, {"mu"}},
      {"polyhedron", {"n", "d"}, {"R", "q"}},
      {"worst-case", {"d"}, {"p"}},
  };
  return kinds;
}

// Locates the config text that a field path refers to, for diagnostics.
class Source {
 public:
  explicit Source(std::string text) : text_(std::move(text)) {}

  [[noreturn]] void fail(const std::vector<std::string>& path, const std::string& what) const {
    std::ostringstream msg;
    if (auto line = locate(path)) msg << "line " << *line << ": ";
    msg << "field '" << dotted(path) << "': " << what;
    throw ConfigError(msg.str());
  }

  const std::string& text() const { return text_; }

 private:
  static std::string dotted(const std::vector<std::string>& path) {
    std::string out;
    for (const auto& seg : path) {
      if (!seg.empty() && seg.front() == '[') {
        out += seg;
      } else {
        if (!out.empty()) out += '.';
        out += seg;
      }
    }
    return out;
  }

  // Line of the last key of `path` found by scanning the keys in order.
  std::optional<std::size_t> locate(const std::vector<std::string>& path) const {
    std::size_t pos = 0;
    bool found = false;
    for (const auto& seg : path) {
      if (!seg.empty() && seg.front() == '[') continue;
      const auto hit = text_.find('"' + seg + '"', pos);
      if (hit == std::string::npos) break;
      pos = hit;
      found = true;
    }
    if (!found) return std::nullopt;
    return 1 + static_cast<std::size_t>(std::count(text_.begin(), text_.begin() + pos, '\n'));
  }

  std::string text_;
};

using Path = std::vector<std::string>;

Path child(Path path, const std::string& key) {
  path.push_back(key);
  return path;
}

Path element(Path path, std::size_t i) {
  path.push_back("[" + std::to_string(i) + "]");
  return path;
}

void reject_unknown(const Source& src, const json& obj, const Path& path,
                    const std::set<std::string>& allowed) {
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) src.fail(child(path, key), "unknown field");
  }
}

double number(const Source& src, const json& v, const Path& path) {
  if (!v.is_number()) src.fail(path, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) src.fail(path, "must be finite");
  return x;
}

double positive(const Source& src, const json& v, const Path& path) {
  const double x = number(src, v, path);
  if (!(x > 0.0)) src.fail(path, "must be positive");
  return x;
}

std::int64_t positive_integer(const Source& src, const json& v, const Path& path) {
  if (!v.is_number_integer() || v.get<long long>() < 1) src.fail(path, "expected a positive integer");
  return v.get<std::int64_t>();
}

ProblemSpec problem_from(const Source& src, const json& doc, const Path& path) {
  if (!doc.is_object()) src.fail(path, "expected an object");
  ProblemSpec spec;
  if (doc.contains("instance")) {
    reject_unknown(src, doc, path, {"instance"});
    if (!doc["instance"].is_string()) src.fail(child(path, "instance"), "expected a file path");
    spec.kind = "instance";
    spec.instance_file = doc["instance"].get<std::string>();
    return spec;
  }
  if (!doc.contains("kind") || !doc["kind"].is_string()) {
    src.fail(child(path, "kind"), "missing (one of quadratic, softmax, polyhedron, worst-case)");
  }
  spec.kind = doc["kind"].get<std::string>();
  const KindParams* kind = nullptr;
  for (const auto& k : problem_kinds()) {
    if (spec.kind == k.kind) kind = &k;
  }
  if (!kind) src.fail(child(path, "kind"), "unknown problem kind '" + spec.kind + "'");
  std::set<std::string> allowed{"kind", "seed"};
  for (const char* name : kind->integers) {
    allowed.insert(name);
    if (!doc.contains(name)) src.fail(child(path, name), "missing");
    spec.params[name] = positive_integer(src, doc[name], child(path, name));
  }
  for (const char* name : kind->reals) {
    allowed.insert(name);
    if (!doc.contains(name)) src.fail(child(path, name), "missing");
    spec.params[name] = number(src, doc[name], child(path, name));
  }
  reject_unknown(src, doc, path, allowed);
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned()) src.fail(child(path, "seed"), "expected a nonnegative integer");
    spec.seed = doc["seed"].get<std::uint64_t>();
  }
  return spec;
}

SolverSpec solver_from(const Source& src, const json& doc, const Path& path) {
  const json obj = doc.is_string() ? json{{"kind", doc}} : doc;
  if (!obj.is_object()) src.fail(path, "expected a solver name or object");
  if (!obj.contains("kind") || !obj["kind"].is_string()) src.fail(child(path, "kind"), "missing");
  const std::string kind = obj["kind"].get<std::string>();
  SolverSpec spec;
  std::set<std::string> allowed{"kind", "label"};
  if (kind == "dada") {
    spec.kind = SolverKind::kDada;
    allowed.insert({"c", "rbar"});
  } else if (kind == "wda") {
    spec.kind = SolverKind::kWda;
    allowed.insert("d0_hat");
  } else if (kind == "simplified-dog") {
    spec.kind = SolverKind::kSimplifiedDog;
    allowed.insert("rbar");
  } else {
    src.fail(child(path, "kind"), "unknown solver '" + kind + "' (expected dada, wda or simplified-dog)");
  }
  reject_unknown(src, obj, path, allowed);
  spec.label = kind;
  if (obj.contains("label")) {
    if (!obj["label"].is_string() || obj["label"].get<std::string>().empty()) {
      src.fail(child(path, "label"), "expected a non-empty string");
    }
    spec.label = obj["label"].get<std::string>();
    if (spec.label.find_first_of("/\\,") != std::string::npos) {
      src.fail(child(path, "label"), "must not contain '/', '\\' or ','");
    }
  }
  if (obj.contains("c")) {
    spec.c = number(src, obj["c"], child(path, "c"));
    if (!(*spec.c > std::numbers::sqrt2)) src.fail(child(path, "c"), "must exceed sqrt(2)");
  }
  if (obj.contains("rbar")) spec.rbar = positive(src, obj["rbar"], child(path, "rbar"));
  if (obj.contains("d0_hat")) spec.d0_hat = positive(src, obj["d0_hat"], child(path, "d0_hat"));
  return spec;
}

void check_vector_field(const Source& src, const json& v, const Path& path) {
  if (v.is_number()) return;
  if (!v.is_array()) src.fail(path, "expected a number or an array of numbers");
  for (std::size_t i = 0; i < v.size(); ++i) number(src, v[i], element(path, i));
}

void check_norm(const Source& src, const json& doc, const Path& path) {
  if (!doc.is_object() || !doc.contains("kind") || !doc["kind"].is_string()) {
    src.fail(child(path, "kind"), "missing (one of identity, diagonal, dense)");
  }
  const std::string kind = doc["kind"].get<std::string>();
  if (kind == "identity") {
    reject_unknown(src, doc, path, {"kind"});
  } else if (kind == "diagonal") {
    reject_unknown(src, doc, path, {"kind", "weights"});
    if (!doc.contains("weights")) src.fail(child(path, "weights"), "missing");
    check_vector_field(src, doc["weights"], child(path, "weights"));
  } else if (kind == "dense") {
    reject_unknown(src, doc, path, {"kind", "matrix"});
    if (!doc.contains("matrix") || !doc["matrix"].is_array()) {
      src.fail(child(path, "matrix"), "expected an array of rows");
    }
  } else {
    src.fail(child(path, "kind"), "unknown norm '" + kind + "'");
  }
}

void check_set(const Source& src, const json& doc, const Path& path) {
  if (!doc.is_object() || !doc.contains("kind") || !doc["kind"].is_string()) {
    src.fail(child(path, "kind"), "missing (one of whole_space, ball, box)");
  }
  const std::string kind = doc["kind"].get<std::string>();
  if (kind == "whole_space") {
    reject_unknown(src, doc, path, {"kind"});
  } else if (kind == "ball") {
    reject_unknown(src, doc, path, {"kind", "center", "radius"});
    if (!doc.contains("radius")) src.fail(child(path, "radius"), "missing");
    positive(src, doc["radius"], child(path, "radius"));
    if (doc.contains("center")) check_vector_field(src, doc["center"], child(path, "center"));
  } else if (kind == "box") {
    reject_unknown(src, doc, path, {"kind", "lower", "upper"});
    for (const char* side : {"lower", "upper"}) {
      if (!doc.contains(side)) src.fail(child(path, side), "missing");
      check_vector_field(src, doc[side], child(path, side));
    }
  } else {
    src.fail(child(path, "kind"), "unknown set '" + kind + "'");
  }
}

Vector broadcast(const json& v, Eigen::Index d, const std::string& field) {
  if (v.is_number()) return Vector::Constant(d, v.get<double>());
  if (static_cast<Eigen::Index>(v.size()) != d) {
    throw ConfigError("field '" + field + "': expected " + std::to_string(d) + " entries, got " +
                      std::to_string(v.size()));
  }
  Vector out(d);
  for (Eigen::Index i = 0; i < d; ++i) out[i] = v[static_cast<std::size_t>(i)].get<double>();
  return out;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const std::size_t byte = std::min<std::size_t>(e.byte, text.size());
    const std::size_t line = 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + byte, '\n'));
    const std::size_t line_start = text.rfind('\n', byte == 0 ? 0 : byte - 1);
    const std::size_t column = line_start == std::string::npos ? byte : byte - line_start - 1;
    std::ostringstream msg;
    msg << "line " << line << ", column " << column << ": malformed JSON";
    throw ConfigError(msg.str());
  }
  const Source src(text);
  Path root;
  if (doc.is_object() && doc.contains("config") && doc.contains("results")) {
    doc = doc["config"];
    root = {"config"};
  }
  if (!doc.is_object()) src.fail(root, "expected a JSON object");
  reject_unknown(src, doc, root, {"problem", "solvers", "T", "x0", "norm", "set", "retain_full", "out"});

  ExperimentConfig cfg;
  if (!doc.contains("problem")) src.fail(child(root, "problem"), "missing");
  cfg.problem = problem_from(src, doc["problem"], child(root, "problem"));

  if (!doc.contains("solvers") || !doc["solvers"].is_array() || doc["solvers"].empty()) {
    src.fail(child(root, "solvers"), "expected a non-empty array");
  }
  std::set<std::string> labels;
  for (std::size_t i = 0; i < doc["solvers"].size(); ++i) {
    SolverSpec s = solver_from(src, doc["solvers"][i], element(child(root, "solvers"), i));
    const std::string base = s.label;
    for (int n = 2; labels.count(s.label); ++n) s.label = base + "-" + std::to_string(n);
    labels.insert(s.label);
    cfg.solvers.push_back(std::move(s));
  }

  if (!doc.contains("T")) src.fail(child(root, "T"), "missing");
  cfg.T = positive_integer(src, doc["T"], child(root, "T"));

  if (doc.contains("x0")) {
    check_vector_field(src, doc["x0"], child(root, "x0"));
    cfg.x0 = doc["x0"];
  }
  if (doc.contains("norm")) {
    check_norm(src, doc["norm"], child(root, "norm"));
    cfg.norm = doc["norm"];
  }
  if (doc.contains("set")) {
    check_set(src, doc["set"], child(root, "set"));
    cfg.set = doc["set"];
  }
  if (doc.contains("retain_full")) {
    if (!doc["retain_full"].is_boolean()) src.fail(child(root, "retain_full"), "expected true or false");
    cfg.retain_full = doc["retain_full"].get<bool>();
  }
  if (doc.contains("out")) {
    if (!doc["out"].is_string()) src.fail(child(root, "out"), "expected a directory path");
    cfg.out = doc["out"].get<std::string>();
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  ExperimentConfig cfg = parse_config(buf.str());
  if (cfg.problem.instance_file && cfg.problem.instance_file->is_relative()) {
    cfg.problem.instance_file = path.parent_path() / *cfg.problem.instance_file;
  }
  return cfg;
}

ProblemSpec parse_problem_spec(const std::string& text, std::uint64_t seed) {
  const auto colon = text.find(':');
  json doc;
  doc["kind"] = text.substr(0, colon);
  if (colon != std::string::npos) {
    std::stringstream rest(text.substr(colon + 1));
    std::string item;
    while (std::getline(rest, item, ',')) {
      if (item.empty()) continue;
      const auto eq = item.find('=');
      if (eq == std::string::npos || eq == 0) {
        throw std::invalid_argument("problem spec: expected key=value, got '" + item + "'");
      }
      const std::string key = item.substr(0, eq);
      const std::string value = item.substr(eq + 1);
      std::size_t used = 0;
      try {
        if (value.find_first_of(".eE") == std::string::npos) {
          doc[key] = std::stoll(value, &used);
        } else {
          doc[key] = std::stod(value, &used);
        }
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != value.size() || value.empty()) {
        throw std::invalid_argument("problem spec: '" + key + "' needs a numeric value, got '" + value + "'");
      }
    }
  }
  doc["seed"] = seed;
  try {
    return problem_from(Source(doc.dump()), doc, {"problem"});
  } catch (const ConfigError& e) {
    throw std::invalid_argument(std::string("problem spec: ") + e.what());
  }
}

ProblemInstance build_problem(const ProblemSpec& spec) {
  if (spec.instance_file) {
    std::ifstream in(*spec.instance_file);
    if (!in) throw ConfigError("field 'problem.instance': cannot open " + spec.instance_file->string());
    try {
      return problem_from_json(json::parse(in));
    } catch (const json::exception& e) {
      throw ConfigError("field 'problem.instance': " + std::string(e.what()));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("instance file: ") + e.what());
    }
  }
  const json& p = spec.params;
  const auto integer = [&](const char* k) { return static_cast<Eigen::Index>(p.at(k).get<std::int64_t>()); };
  const auto real = [&](const char* k) { return p.at(k).get<double>(); };
  try {
    if (spec.kind == "quadratic") return QuadraticProblem{integer("d")};
    if (spec.kind == "softmax") return gen_softmax(integer("n"), integer("d"), real("mu"), spec.seed);
    if (spec.kind == "polyhedron") {
      return gen_polyhedron(integer("n"), integer("d"), real("R"), real("q"), spec.seed);
    }
    if (spec.kind == "worst-case") {
      const double power = real("p");
      if (!(power >= 2.0)) throw std::invalid_argument("p must be >= 2");
      return WorstCaseProblem{integer("d"), power};
    }
  } catch (const std::exception& e) {
    throw ConfigError("field 'problem': " + std::string(e.what()));
  }
  throw ConfigError("field 'problem.kind': unknown problem kind '" + spec.kind + "'");
}

NormContext build_norm(const json& norm, Eigen::Index d) {
  const std::string kind = norm.at("kind").get<std::string>();
  try {
    if (kind == "identity") return NormContext::identity(d);
    if (kind == "diagonal") return NormContext::diagonal(broadcast(norm.at("weights"), d, "norm.weights"));
    const json& rows = norm.at("matrix");
    if (static_cast<Eigen::Index>(rows.size()) != d) {
      throw ConfigError("field 'norm.matrix': expected " + std::to_string(d) + " rows");
    }
    Matrix B(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
      B.row(i) = broadcast(rows[static_cast<std::size_t>(i)], d, "norm.matrix").transpose();
    }
    return NormContext::dense(B);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError("field 'norm': " + std::string(e.what()));
  }
}

Vector resolve_x0(const ExperimentConfig& cfg, Eigen::Index d) {
  if (cfg.x0.is_null()) return Vector::Ones(d);
  return broadcast(cfg.x0, d, "x0");
}

FeasibleSet build_set(const json& set, Eigen::Index d) {
  const std::string kind = set.at("kind").get<std::string>();
  if (kind == "whole_space") return WholeSpace{};
  if (kind == "ball") {
    const Vector center = set.contains("center") ? broadcast(set["center"], d, "set.center") : Vector::Zero(d);
    return EuclideanBall{center, set.at("radius").get<double>()};
  }
  return Box{broadcast(set.at("lower"), d, "set.lower"), broadcast(set.at("upper"), d, "set.upper")};
}

}  // namespace dada::harness
