#include <fstream>
#include <ostream>

#include <Eigen/Core>

#include "dada/harness.hpp"

#ifndef DADA_VERSION
#define DADA_VERSION "unknown"
#endif

namespace dada::harness {

nlohmann::json fingerprint(std::uint64_t seed) {
  nlohmann::json fp;
  fp["version"] = DADA_VERSION;
  fp["seed"] = seed;
#if defined(__clang__)
  fp["compiler"] = "clang " __clang_version__;
#elif defined(__GNUC__)
  fp["compiler"] = "gcc " __VERSION__;
#else
  fp["compiler"] = "unknown";
#endif
#ifdef NDEBUG
  fp["assertions"] = false;
#else
  fp["assertions"] = true;
#endif
  fp["eigen"] = std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                std::to_string(EIGEN_MINOR_VERSION);
  fp["rng"] = "mt19937_64";
  return fp;
}

int cmd_gen(const GenOptions& opts, std::ostream& out, std::ostream& err) {
  ProblemInstance instance;
  try {
    instance = build_problem(parse_problem_spec(opts.problem, opts.seed));
  } catch (const std::exception& e) {
    err << "gen: " << e.what() << '\n';
    return kExitUsage;
  }
  const std::string text = problem_to_json(instance).dump() + "\n";
  if (!opts.out) {
    out << text;
    return kExitOk;
  }
  std::ofstream file(*opts.out);
  if (!file) {
    err << "gen: cannot write " << opts.out->string() << '\n';
    return kExitFailure;
  }
  file << text;
  return kExitOk;
}

}  // namespace dada::harness
