#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dada/solvers.hpp"

namespace dada {

/// Exact header of every trace CSV. v and D are empty when x* is unknown;
/// NaN entries (e.g. beta for simplified DoG) are also written empty.
inline constexpr const char* kTraceHeader = "k,f,best_f,gnorm,a,beta,r,rbar,v,D";

class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shortest decimal text that round-trips the double ("" for NaN).
std::string format_double(double x);

void write_trace_csv(std::ostream& out, const RunTrace& trace);
void write_trace_csv(const std::filesystem::path& path, const RunTrace& trace);

/// Rows of a trace CSV. Throws SchemaError if the header differs from
/// kTraceHeader or a row is malformed.
std::vector<TraceRow> read_trace_csv(std::istream& in);
std::vector<TraceRow> read_trace_csv(const std::filesystem::path& path);

/// Solver parameters, termination reason, best value, call count, wall time.
nlohmann::json trace_summary_json(const RunTrace& trace);

}  // namespace dada
