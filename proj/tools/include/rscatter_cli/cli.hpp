#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rscatter/trace.hpp"

namespace rscatter::cli {

/// Exit statuses shared by every command.
inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;  // a verification criterion or replay comparison failed
inline constexpr int kExitUsage = 2;        // bad arguments, unparsable input, invalid scenario

/// Environment variable naming the default output directory.
inline constexpr const char* kOutDirEnv = "RSCATTER_OUT_DIR";

/// Entry point behind the `rscatter` executable. `args` excludes the program name.
int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Individual commands. Each writes its report to `out`, diagnostics to `err`,
// and returns an exit status.

struct RunOptions {
  std::string scenario_path;
  std::string out_path;  // empty: <out dir>/<scenario stem>.trace.jsonl
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> max_steps;
  std::string scheduler;  // empty: keep the scenario's
};
int cmd_run(const RunOptions& options, std::ostream& out, std::ostream& err);

int cmd_verify(const std::string& suite, std::size_t trials, std::uint64_t seed, std::ostream& out,
               std::ostream& err);

int cmd_replay(const std::string& trace_path, std::ostream& out, std::ostream& err);

struct ExportOptions {
  std::string trace_path;
  std::string format;    // csv-positions | csv-summary
  std::string out_path;  // empty: standard output
};
int cmd_export(const ExportOptions& options, std::ostream& out, std::ostream& err);

struct CampaignOptions {
  std::string scenario_path;
  std::size_t trials = 10;  // per sweep cell
  std::uint64_t seed = 0;
  std::vector<std::size_t> sweep_n;
  std::vector<std::string> sweep_scheduler;
  std::vector<double> sweep_sigma;
  std::optional<std::size_t> max_steps;
  std::string out_path;  // empty: <out dir>/<scenario stem>.campaign.csv
};
int cmd_campaign(const CampaignOptions& options, std::ostream& out, std::ostream& err);

/// CSV renderers used by `export`; the first line of each is a version tag.
void write_positions_csv(std::ostream& out, const Trace& trace);
void write_summary_csv(std::ostream& out, const Trace& trace);

}  // namespace rscatter::cli
