#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dada/feasible_set.hpp"
#include "dada/normed_space.hpp"
#include "dada/problem_io.hpp"
#include "dada/solvers.hpp"

namespace dada::harness {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Invalid experiment configuration. `what()` carries the line (when known)
/// and the dotted field path.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Either a generator call (kind + params + seed) or a saved instance file.
struct ProblemSpec {
  std::string kind;
  nlohmann::json params = nlohmann::json::object();
  std::uint64_t seed = 1;
  std::optional<std::filesystem::path> instance_file;
};

struct SolverSpec {
  SolverKind kind = SolverKind::kDada;
  std::string label;
  std::optional<double> c;       // dada
  std::optional<double> rbar;    // dada, simplified-dog
  std::optional<double> d0_hat;  // wda
};

struct ExperimentConfig {
  ProblemSpec problem;
  nlohmann::json norm = {{"kind", "identity"}};
  nlohmann::json set = {{"kind", "whole_space"}};
  std::vector<SolverSpec> solvers;
  std::int64_t T = 1000;
  nlohmann::json x0;  // number (filled) or array; null means all ones
  bool retain_full = false;
  std::optional<std::filesystem::path> out;
};

/// Parses an experiment config. A run summary is accepted as well (its
/// `config` member is used), which is how runs are replayed.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// `kind:key=value,...`, e.g. `softmax:n=100,d=200,mu=0.1`.
ProblemSpec parse_problem_spec(const std::string& text, std::uint64_t seed);
ProblemInstance build_problem(const ProblemSpec& spec);

NormContext build_norm(const nlohmann::json& norm, Eigen::Index d);
FeasibleSet build_set(const nlohmann::json& set, Eigen::Index d);
Vector resolve_x0(const ExperimentConfig& cfg, Eigen::Index d);

struct RunOptions {
  std::filesystem::path config;
  std::optional<std::filesystem::path> out;
  bool retain_full = false;
};

struct CheckResult {
  std::string name;
  bool passed = false;
  double max_violation = 0.0;
  double runtime_seconds = 0.0;
  nlohmann::json details = nlohmann::json::object();
};

/// Names accepted by `verify --check`, in suite order.
const std::vector<std::string>& check_names();

/// Runs one named check. `inject_c` overrides c in the DADA runs used by the
/// distance checks (values <= sqrt 2 make them fail). Throws
/// std::invalid_argument for an unknown name.
CheckResult run_check(const std::string& name, std::uint64_t seed,
                      std::optional<double> inject_c = std::nullopt);

struct VerifyOptions {
  std::optional<std::string> check;
  std::uint64_t seed = 0;
  std::optional<double> inject_c;
  std::optional<std::filesystem::path> report;
};

struct PlotOptions {
  std::vector<std::filesystem::path> traces;
  std::filesystem::path out;
};

struct GenOptions {
  std::string problem;
  std::uint64_t seed = 0;
  std::optional<std::filesystem::path> out;
};

int cmd_run(const RunOptions& opts, std::ostream& out, std::ostream& err);
int cmd_verify(const VerifyOptions& opts, std::ostream& out, std::ostream& err);
int cmd_plotdata(const PlotOptions& opts, std::ostream& out, std::ostream& err);
int cmd_gen(const GenOptions& opts, std::ostream& out, std::ostream& err);

/// Build and version information recorded in every summary and report.
nlohmann::json fingerprint(std::uint64_t seed);

}  // namespace dada::harness
