#include "rscatter/trace.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "rscatter/errors.hpp"
#include "rscatter/scenario.hpp"

namespace rscatter {

namespace {

using nlohmann::json;

constexpr const char* kFormat = "rscatter-trace";
constexpr int kVersion = 1;

void put_point(std::ostream& out, Point p) { out << '[' << format_real(p.x) << ',' << format_real(p.y) << ']'; }

void put_points(std::ostream& out, const std::vector<Point>& pts) {
  out << '[';
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i) out << ',';
    put_point(out, pts[i]);
  }
  out << ']';
}

Point get_point(const json& j, std::size_t line) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw TraceFormatError(line, "expected a point [x, y]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

std::vector<Point> get_points(const json& j, std::size_t line) {
  if (!j.is_array()) throw TraceFormatError(line, "expected an array of points");
  std::vector<Point> out;
  out.reserve(j.size());
  for (const auto& p : j) out.push_back(get_point(p, line));
  return out;
}

const json& field(const json& j, const char* key, std::size_t line) {
  auto it = j.find(key);
  if (it == j.end()) throw TraceFormatError(line, std::string("missing field '") + key + "'");
  return *it;
}

}  // namespace

std::vector<ActivationSet> Trace::activations() const {
  std::vector<ActivationSet> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(r.active);
  return out;
}

const char* to_string(RunStatus status) {
  return status == RunStatus::stopped ? "stopped" : "budget_exhausted";
}

std::string format_digest(std::uint64_t digest) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(digest));
  return buf;
}

void write_trace(std::ostream& out, const Trace& trace) {
  out << "{\"format\":\"" << kFormat << "\",\"version\":" << kVersion << ",\"seed\":" << trace.seed
      << ",\"digest\":\"" << format_digest(trace.digest) << "\",\"scenario\":" << json(trace.scenario_text).dump()
      << ",\"initial\":";
  put_points(out, trace.initial.positions);
  out << "}\n";

  for (const auto& r : trace.records) {
    out << "{\"t\":" << r.t << ",\"active\":[";
    for (std::size_t i = 0; i < r.active.size(); ++i) out << (i ? "," : "") << r.active[i];
    out << "],\"coins\":[";
    for (std::size_t i = 0; i < r.coins.size(); ++i) {
      if (i) out << ',';
      if (r.coins[i]) {
        out << static_cast<int>(*r.coins[i]);
      } else {
        out << "null";
      }
    }
    out << "],\"targets\":";
    put_points(out, r.targets);
    out << ",\"positions\":";
    put_points(out, r.positions.positions);
    out << "}\n";
  }

  out << "{\"end\":\"" << to_string(trace.status) << "\",\"instants\":" << trace.records.size() << "}\n";
}

std::string write_trace(const Trace& trace) {
  std::ostringstream out;
  write_trace(out, trace);
  return out.str();
}

Trace read_trace(std::istream& in) {
  Trace trace;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  bool have_end = false;

  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (have_end) throw TraceFormatError(line_no, "content after the end record");

    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw TraceFormatError(line_no, std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw TraceFormatError(line_no, "expected a JSON object");

    try {
      if (!have_header) {
        if (field(j, "format", line_no) != kFormat) throw TraceFormatError(line_no, "not an rscatter trace");
        if (field(j, "version", line_no) != kVersion) throw TraceFormatError(line_no, "unsupported trace version");
        trace.seed = field(j, "seed", line_no).get<std::uint64_t>();
        const auto digest = field(j, "digest", line_no).get<std::string>();
        std::size_t used = 0;
        trace.digest = std::stoull(digest, &used, 16);
        if (used != digest.size() || digest.size() != 16) throw TraceFormatError(line_no, "bad digest");
        trace.scenario_text = field(j, "scenario", line_no).get<std::string>();
        trace.initial.positions = get_points(field(j, "initial", line_no), line_no);
        have_header = true;
        continue;
      }

      if (j.contains("end")) {
        const auto status = j["end"].get<std::string>();
        if (status == "stopped") {
          trace.status = RunStatus::stopped;
        } else if (status == "budget_exhausted") {
          trace.status = RunStatus::budget_exhausted;
        } else {
          throw TraceFormatError(line_no, "unknown end status '" + status + "'");
        }
        if (field(j, "instants", line_no).get<std::size_t>() != trace.records.size()) {
          throw TraceFormatError(line_no, "instant count does not match the records");
        }
        have_end = true;
        continue;
      }

      StepRecord r;
      r.t = field(j, "t", line_no).get<std::size_t>();
      if (r.t != trace.records.size()) throw TraceFormatError(line_no, "instants out of sequence");
      r.active = field(j, "active", line_no).get<ActivationSet>();
      for (const auto& c : field(j, "coins", line_no)) {
        if (c.is_null()) {
          r.coins.emplace_back();
        } else {
          const int v = c.get<int>();
          if (v != 0 && v != 1) throw TraceFormatError(line_no, "coin must be 0, 1 or null");
          r.coins.emplace_back(v == 0 ? Coin::zero : Coin::one);
        }
      }
      r.targets = get_points(field(j, "targets", line_no), line_no);
      r.positions.positions = get_points(field(j, "positions", line_no), line_no);
      if (r.coins.size() != r.active.size() || r.targets.size() != r.active.size()) {
        throw TraceFormatError(line_no, "coins/targets not aligned with the activation set");
      }
      if (r.positions.size() != trace.initial.size()) {
        throw TraceFormatError(line_no, "position count differs from the population");
      }
      trace.records.push_back(std::move(r));
    } catch (const json::exception& e) {
      throw TraceFormatError(line_no, std::string("bad field type: ") + e.what());
    } catch (const std::logic_error&) {
      throw TraceFormatError(line_no, "bad digest");
    }
  }

  if (!have_header) throw TraceFormatError(line_no, "empty trace");
  if (!have_end) throw TraceFormatError(line_no, "missing end record");
  return trace;
}

Trace read_trace_string(const std::string& text) {
  std::istringstream in(text);
  return read_trace(in);
}

}  // namespace rscatter
