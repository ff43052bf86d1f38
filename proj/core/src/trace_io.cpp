#include "dada/trace_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

namespace dada {
namespace {

std::vector<std::string> split_commas(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_double(const std::string& text, std::size_t line_no) {
  if (text.empty()) return std::nan("");
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    // from_chars rejects "inf"/"nan" spellings that strtod accepts.
    char* end = nullptr;
    value = std::strtod(text.c_str(), &end);
    if (end != text.c_str() + text.size()) {
      throw SchemaError("trace CSV line " + std::to_string(line_no) + ": bad number '" + text + "'");
    }
  }
  return value;
}

std::optional<double> optional_field(const std::string& text, std::size_t line_no) {
  if (text.empty()) return std::nullopt;
  return parse_double(text, line_no);
}

}  // namespace

std::string format_double(double x) {
  if (std::isnan(x)) return "";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return ec == std::errc() ? std::string(buf, ptr) : std::string("nan");
}

void write_trace_csv(std::ostream& out, const RunTrace& trace) {
  out << kTraceHeader << '\n';
  for (const TraceRow& row : trace.rows) {
    out << row.k << ',' << format_double(row.f) << ',' << format_double(row.best_f) << ','
        << format_double(row.gnorm) << ',' << format_double(row.a) << ',' << format_double(row.beta)
        << ',' << format_double(row.r) << ',' << format_double(row.rbar) << ','
        << (row.v ? format_double(*row.v) : "") << ',' << (row.D ? format_double(*row.D) : "")
        << '\n';
  }
}

void write_trace_csv(const std::filesystem::path& path, const RunTrace& trace) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_trace_csv(out, trace);
}

std::vector<TraceRow> read_trace_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw SchemaError("trace CSV is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kTraceHeader) {
    throw SchemaError("trace CSV header mismatch: expected '" + std::string(kTraceHeader) +
                      "', got '" + line + "'");
  }
  std::vector<TraceRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_commas(line);
    if (fields.size() != 10) {
      throw SchemaError("trace CSV line " + std::to_string(line_no) + ": expected 10 fields, got " +
                        std::to_string(fields.size()));
    }
    TraceRow row;
    row.k = static_cast<std::int64_t>(parse_double(fields[0], line_no));
    row.f = parse_double(fields[1], line_no);
    row.best_f = parse_double(fields[2], line_no);
    row.gnorm = parse_double(fields[3], line_no);
    row.a = parse_double(fields[4], line_no);
    row.beta = parse_double(fields[5], line_no);
    row.r = parse_double(fields[6], line_no);
    row.rbar = parse_double(fields[7], line_no);
    row.v = optional_field(fields[8], line_no);
    row.D = optional_field(fields[9], line_no);
    rows.push_back(row);
  }
  return rows;
}

std::vector<TraceRow> read_trace_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_trace_csv(in);
}

nlohmann::json trace_summary_json(const RunTrace& trace) {
  nlohmann::json j;
  j["solver"] = to_string(trace.solver);
  switch (trace.solver) {
    case SolverKind::kDada:
      j["params"] = {{"c", trace.c}, {"rbar", trace.rbar_init}};
      break;
    case SolverKind::kWda:
      j["params"] = {{"d0_hat", trace.d0_hat}};
      break;
    case SolverKind::kSimplifiedDog:
      j["params"] = {{"rbar", trace.rbar_init}};
      break;
  }
  j["termination"] = to_string(trace.termination);
  if (!trace.message.empty()) j["message"] = trace.message;
  j["oracle_calls"] = trace.oracle_calls;
  if (!trace.rows.empty()) {
    j["best_f"] = trace.best_f;
    j["best_index"] = trace.best_index;
  } else {
    j["best_f"] = nullptr;
  }
  j["v_clamped"] = trace.v_clamped;
  j["wall_seconds"] = trace.wall_seconds;
  return j;
}

}  // namespace dada
