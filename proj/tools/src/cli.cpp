#include "rscatter_cli/cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "rscatter/analysis.hpp"
#include "rscatter/engine.hpp"
#include "rscatter/errors.hpp"
#include "rscatter/scenario.hpp"

namespace rscatter::cli {

namespace fs = std::filesystem;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string default_path(const std::string& source, const std::string& suffix) {
  fs::path dir = ".";
  if (const char* env = std::getenv(kOutDirEnv); env && *env) dir = env;
  return (dir / (fs::path(source).stem().string() + suffix)).string();
}

// Opens `path` for writing, creating parent directories.
std::ofstream open_output(const std::string& path) {
  const fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  return out;
}

std::size_t multiplicity_count(const Configuration& c) { return multiplicity_points(c).size(); }

bool gathered(const Configuration& c) {
  for (Point p : c.positions)
    if (p != c.positions.front()) return false;
  return true;
}

void apply_overrides(Scenario& s, std::optional<std::uint64_t> seed, std::optional<std::size_t> max_steps,
                     const std::string& scheduler) {
  if (seed) s.seed = *seed;
  if (max_steps) s.max_steps = *max_steps;
  if (!scheduler.empty()) s.scheduler = parse_scheduler_spec(scheduler);
}

const char* verdict(bool pass) { return pass ? "PASS" : "FAIL"; }

bool probabilistic_suite(const std::string& suite) {
  return suite == "closure" || suite == "gather" || suite == "pattern" || suite == "decay" ||
         suite == "separation";
}

}  // namespace

// ---------------------------------------------------------------------------

int cmd_run(const RunOptions& options, std::ostream& out, std::ostream& err) {
  Scenario scenario;
  try {
    scenario = parse_scenario(read_file(options.scenario_path));
    apply_overrides(scenario, options.seed, options.max_steps, options.scheduler);
    validate(scenario);
  } catch (const std::exception& e) {
    err << options.scenario_path << ": " << e.what() << '\n';
    return kExitUsage;
  }

  const Trace trace = run(scenario);
  const std::string path =
      options.out_path.empty() ? default_path(options.scenario_path, ".trace.jsonl") : options.out_path;
  try {
    auto file = open_output(path);
    write_trace(file, trace);
  } catch (const std::exception& e) {
    err << e.what() << '\n';
    return kExitUsage;
  }
  const Configuration& last = trace.configuration_at(trace.records.size());
  out << "status=" << to_string(trace.status) << " instants=" << trace.records.size()
      << " multiplicities=" << multiplicity_count(last) << " trace=" << path << '\n';
  return kExitOk;
}

int cmd_verify(const std::string& suite, std::size_t trials, std::uint64_t seed, std::ostream& out,
               std::ostream& err) {
  SuiteReport report;
  try {
    report = run_suite(suite, trials, seed);
  } catch (const std::invalid_argument& e) {
    err << e.what() << "\nknown suites:";
    for (const char* name : suite_names()) err << ' ' << name;
    err << '\n';
    return kExitUsage;
  }
  out << "# rscatter-verify v1 suite=" << suite << " trials=" << (trials ? std::to_string(trials) : "default")
      << " seed=" << seed << '\n';
  for (const auto& c : report.criteria) {
    out << verdict(c.pass) << ' ' << c.name << " measured=" << c.measured << " expected=" << c.expected << '\n';
  }
  out << "suite " << suite << ": " << verdict(report.pass()) << " (" << report.criteria.size() << " criteria)";
  if (report.pass() && probabilistic_suite(suite)) out << "; bounded-budget campaign, consistent with probability 1";
  out << '\n';
  return report.pass() ? kExitOk : kExitCheckFailed;
}

int cmd_replay(const std::string& trace_path, std::ostream& out, std::ostream& err) {
  Trace trace;
  try {
    std::ifstream in(trace_path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + trace_path + "'");
    trace = read_trace(in);
  } catch (const std::exception& e) {
    err << trace_path << ": " << e.what() << '\n';
    return kExitUsage;
  }
  try {
    const ReplayVerdict v = replay(trace);
    if (v.identical) {
      out << "identical\n";
      return kExitOk;
    }
    out << "divergence at instant " << (v.divergence_instant ? std::to_string(*v.divergence_instant) : "end") << ": "
        << v.detail << '\n';
    return kExitCheckFailed;
  } catch (const DigestMismatchError& e) {
    out << "divergence at header: " << e.what() << '\n';
    return kExitCheckFailed;
  } catch (const std::exception& e) {
    err << trace_path << ": " << e.what() << '\n';
    return kExitUsage;
  }
}

void write_positions_csv(std::ostream& out, const Trace& trace) {
  out << "# rscatter-csv-positions v1\n";
  out << "t,robot,x,y\n";
  for (const auto& r : trace.records) {
    for (std::size_t i = 0; i < r.positions.size(); ++i) {
      const Point p = r.positions.positions[i];
      out << r.t << ',' << i << ',' << format_real(p.x) << ',' << format_real(p.y) << '\n';
    }
  }
}

void write_summary_csv(std::ostream& out, const Trace& trace) {
  std::size_t activations = 0;
  std::size_t moves = 0;
  for (std::size_t k = 0; k < trace.records.size(); ++k) {
    const auto& r = trace.records[k];
    activations += r.active.size();
    const Configuration& before = trace.configuration_at(k);
    for (std::size_t i = 0; i < r.positions.size(); ++i) moves += r.positions.positions[i] != before.positions[i];
  }
  const ClosureVerdict closure = check_closure(trace);
  const Configuration& last = trace.configuration_at(trace.records.size());

  out << "# rscatter-csv-summary v1\n";
  out << "digest,seed,robots,instants,status,activations,moves,first_distinct_instant,final_multiplicity_points,"
         "gathered\n";
  out << format_digest(trace.digest) << ',' << trace.seed << ',' << trace.population() << ','
      << trace.records.size() << ',' << to_string(trace.status) << ',' << activations << ',' << moves << ','
      << (closure.first_distinct_instant ? std::to_string(*closure.first_distinct_instant) : "") << ','
      << multiplicity_count(last) << ',' << (gathered(last) ? 1 : 0) << '\n';
}

int cmd_export(const ExportOptions& options, std::ostream& out, std::ostream& err) {
  if (options.format != "csv-positions" && options.format != "csv-summary") {
    err << "unknown export format '" << options.format << "' (expected csv-positions or csv-summary)\n";
    return kExitUsage;
  }
  Trace trace;
  try {
    std::ifstream in(options.trace_path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + options.trace_path + "'");
    trace = read_trace(in);
  } catch (const std::exception& e) {
    err << options.trace_path << ": " << e.what() << '\n';
    return kExitUsage;
  }
  auto render = [&](std::ostream& sink) {
    if (options.format == "csv-positions") {
      write_positions_csv(sink, trace);
    } else {
      write_summary_csv(sink, trace);
    }
  };
  if (options.out_path.empty()) {
    render(out);
    return kExitOk;
  }
  try {
    auto file = open_output(options.out_path);
    render(file);
  } catch (const std::exception& e) {
    err << e.what() << '\n';
    return kExitUsage;
  }
  return kExitOk;
}

int cmd_campaign(const CampaignOptions& options, std::ostream& out, std::ostream& err) {
  Scenario base;
  try {
    base = parse_scenario(read_file(options.scenario_path));
    if (options.max_steps) base.max_steps = *options.max_steps;
  } catch (const std::exception& e) {
    err << options.scenario_path << ": " << e.what() << '\n';
    return kExitUsage;
  }

  const std::vector<std::size_t> ns = options.sweep_n.empty() ? std::vector{base.count} : options.sweep_n;
  const std::vector<std::string> schedulers =
      options.sweep_scheduler.empty() ? std::vector{to_string(base.scheduler)} : options.sweep_scheduler;
  const std::vector<double> sigmas = options.sweep_sigma.empty() ? std::vector{base.sigma_of(0)} : options.sweep_sigma;

  // Build and validate every cell before running anything.
  std::vector<Scenario> cells;
  try {
    for (std::size_t n : ns) {
      for (const auto& sched : schedulers) {
        for (double sigma : sigmas) {
          Scenario s = base;
          s.count = n;
          s.scheduler = parse_scheduler_spec(sched);
          if (!options.sweep_sigma.empty() || s.sigmas.size() != 1) s.sigmas = {sigma};
          validate(s);
          cells.push_back(std::move(s));
        }
      }
    }
  } catch (const std::exception& e) {
    err << options.scenario_path << ": " << e.what() << '\n';
    return kExitUsage;
  }

  std::ostringstream csv;
  csv << "# rscatter-campaign v1 digest=" << format_digest(scenario_digest(write_scenario(base))) << '\n';
  csv << "trial,n,scheduler,sigma,seed,status,instants,final_multiplicity_points,gathered\n";
  std::size_t trial = 0;
  std::size_t stopped = 0;
  for (const auto& cell : cells) {
    for (std::size_t i = 0; i < options.trials; ++i, ++trial) {
      Scenario s = cell;
      s.seed = splitmix64(options.seed + trial);  // one global counter keeps seeds disjoint across cells
      const Trace t = run(s);
      const Configuration& last = t.configuration_at(t.records.size());
      stopped += t.status == RunStatus::stopped;
      csv << trial << ',' << s.count << ',' << to_string(s.scheduler) << ',' << format_real(s.sigma_of(0)) << ','
          << s.seed << ',' << to_string(t.status) << ',' << t.records.size() << ',' << multiplicity_count(last)
          << ',' << (gathered(last) ? 1 : 0) << '\n';
    }
  }

  const std::string path =
      options.out_path.empty() ? default_path(options.scenario_path, ".campaign.csv") : options.out_path;
  try {
    auto file = open_output(path);
    file << csv.str();
  } catch (const std::exception& e) {
    err << e.what() << '\n';
    return kExitUsage;
  }
  out << "trials=" << trial << " stopped=" << stopped << " summary=" << path << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------------------

int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Randomized scattering of oblivious robots: simulation, replay and verification", "rscatter"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "rscatter 1.0.0");

  RunOptions run_opts;
  std::uint64_t run_seed = 0;
  std::size_t run_max = 0;
  auto* run_cmd = app.add_subcommand("run", "Run a scenario file and write its trace");
  run_cmd->add_option("scenario", run_opts.scenario_path, "Scenario file")->required();
  run_cmd->add_option("--out", run_opts.out_path, "Trace output path");
  auto* run_seed_opt = run_cmd->add_option("--seed", run_seed, "Override the scenario seed");
  auto* run_max_opt = run_cmd->add_option("--max-steps", run_max, "Override the step budget");
  run_cmd->add_option("--scheduler", run_opts.scheduler, "Override the scheduler (kind[:param])");

  std::string suite;
  std::size_t verify_trials = 0;
  std::uint64_t verify_seed = 1;
  auto* verify_cmd = app.add_subcommand("verify", "Run a named verification suite");
  verify_cmd->add_option("suite", suite, "Suite name")->required();
  verify_cmd->add_option("--trials", verify_trials, "Campaign size (0: suite default)");
  verify_cmd->add_option("--seed", verify_seed, "Campaign seed");

  std::string replay_path;
  auto* replay_cmd = app.add_subcommand("replay", "Re-execute a trace and compare bit for bit");
  replay_cmd->add_option("trace", replay_path, "Trace file")->required();

  ExportOptions export_opts;
  auto* export_cmd = app.add_subcommand("export", "Export a trace as CSV");
  export_cmd->add_option("trace", export_opts.trace_path, "Trace file")->required();
  export_cmd->add_option("--format", export_opts.format, "csv-positions | csv-summary")->required();
  export_cmd->add_option("--out", export_opts.out_path, "Output path (default: standard output)");

  CampaignOptions camp;
  std::size_t camp_max = 0;
  auto* camp_cmd = app.add_subcommand("campaign", "Run a seeded sweep over a base scenario");
  camp_cmd->add_option("scenario", camp.scenario_path, "Base scenario file")->required();
  camp_cmd->add_option("--trials", camp.trials, "Trials per sweep cell");
  camp_cmd->add_option("--seed", camp.seed, "Base seed");
  camp_cmd->add_option("--n", camp.sweep_n, "Robot counts to sweep")->delimiter(',');
  camp_cmd->add_option("--scheduler", camp.sweep_scheduler, "Schedulers to sweep")->delimiter(',');
  camp_cmd->add_option("--sigma", camp.sweep_sigma, "Uniform sigmas to sweep")->delimiter(',');
  auto* camp_max_opt = camp_cmd->add_option("--max-steps", camp_max, "Override the step budget");
  camp_cmd->add_option("--out", camp.out_path, "Summary CSV path");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (*run_cmd) {
    if (*run_seed_opt) run_opts.seed = run_seed;
    if (*run_max_opt) run_opts.max_steps = run_max;
    return cmd_run(run_opts, out, err);
  }
  if (*verify_cmd) return cmd_verify(suite, verify_trials, verify_seed, out, err);
  if (*replay_cmd) return cmd_replay(replay_path, out, err);
  if (*export_cmd) return cmd_export(export_opts, out, err);
  if (*camp_cmd) {
    if (*camp_max_opt) camp.max_steps = camp_max;
    return cmd_campaign(camp, out, err);
  }
  return kExitUsage;
}

}  // namespace rscatter::cli
