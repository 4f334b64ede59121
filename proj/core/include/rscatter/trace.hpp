#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rscatter/protocols.hpp"
#include "rscatter/scheduler.hpp"
#include "rscatter/world.hpp"

namespace rscatter {

/// One computation step. `coins` and `targets` are aligned with `active`;
/// targets are the intended global targets before the travel cap.
struct StepRecord {
  std::size_t t = 0;
  ActivationSet active;
  std::vector<std::optional<Coin>> coins;
  std::vector<Point> targets;
  Configuration positions;  // configuration after the step

  friend bool operator==(const StepRecord&, const StepRecord&) = default;
};

enum class RunStatus { stopped, budget_exhausted };

struct Trace {
  std::string scenario_text;  // canonical scenario
  std::uint64_t digest = 0;
  std::uint64_t seed = 0;
  Configuration initial;
  std::vector<StepRecord> records;
  RunStatus status = RunStatus::budget_exhausted;

  std::size_t population() const { return initial.size(); }
  /// Instant 0 is the initial configuration; instant k follows record k - 1.
  const Configuration& configuration_at(std::size_t instant) const {
    return instant == 0 ? initial : records.at(instant - 1).positions;
  }
  std::vector<ActivationSet> activations() const;

  friend bool operator==(const Trace&, const Trace&) = default;
};

const char* to_string(RunStatus status);

/// Line-delimited JSON, one object per line:
///   {"format":"rscatter-trace","version":1,"seed":S,"digest":"<16 hex>",
///    "scenario":"<canonical text>","initial":[[x,y],...]}
///   {"t":0,"active":[...],"coins":[0|1|null,...],"targets":[[x,y],...],
///    "positions":[[x,y],...]}                       (one per instant)
///   {"end":"stopped"|"budget_exhausted","instants":K}
/// Reals are written with 17 significant digits, so values round-trip exactly.
void write_trace(std::ostream& out, const Trace& trace);
std::string write_trace(const Trace& trace);

/// Throws TraceFormatError with the offending line number.
Trace read_trace(std::istream& in);
Trace read_trace_string(const std::string& text);

std::string format_digest(std::uint64_t digest);

}  // namespace rscatter
