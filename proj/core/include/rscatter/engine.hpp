#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rscatter/protocols.hpp"
#include "rscatter/rng.hpp"
#include "rscatter/scenario.hpp"
#include "rscatter/scheduler.hpp"
#include "rscatter/trace.hpp"
#include "rscatter/world.hpp"

namespace rscatter {

struct StepOutcome {
  std::size_t activated_count = 0;
  std::size_t moved_count = 0;
};

struct RobotDecision {
  std::size_t robot = 0;
  std::optional<Coin> coin;
  Point target;  // global, before the travel cap
};

struct StepResult {
  Configuration next;
  StepOutcome outcome;
  std::vector<RobotDecision> decisions;  // ascending robot ordinal
};

/// Moves from `from` toward `target`: exactly onto it when it is within
/// `sigma`, otherwise along the segment to a point whose distance from
/// `from` does not exceed `sigma`.
Point capped_move(Point from, Point target, double sigma);

/// One SSM computation step. Every active robot reads the same pre-step
/// configuration. Random draws are consumed in this order: coins for the
/// active robots in ascending ordinal, then each robot's sampling draws in
/// ascending ordinal. Targets that coincide with a point of the robot's view
/// resolve to that point's exact global coordinates.
StepResult step(const Configuration& config, const ActivationSet& activation, std::span<const Robot> robots,
                const Protocol& protocol, const Capabilities& caps, Rng& rng);

bool stop_rule_met(StopRule rule, const Configuration& config, const ProtocolSpec& protocol);

/// A running scenario. The random source is seeded from the scenario and
/// consumed as: initial positions (generated modes), frames (random mode),
/// then per instant the scheduler, the coins and the sampling draws.
class Simulation {
 public:
  explicit Simulation(Scenario scenario);
  /// Runs `protocol` in place of the one the scenario names (test harnesses).
  Simulation(Scenario scenario, ProtocolPtr protocol);

  const Scenario& scenario() const { return scenario_; }
  const Configuration& configuration() const { return config_; }
  std::span<const Robot> robots() const { return robots_; }
  std::size_t instant() const { return instant_; }
  const Rng& rng() const { return rng_; }

  bool stop_rule_met() const;

  /// Executes one instant and returns its record.
  StepRecord advance(StepOutcome* outcome = nullptr);

  /// Runs until the stop rule fires or the step budget is spent.
  Trace run();

 private:
  Scenario scenario_;
  ProtocolPtr protocol_;
  Rng rng_;
  std::vector<Robot> robots_;
  Configuration config_;
  Configuration initial_;
  Scheduler scheduler_;
  std::size_t instant_ = 0;
};

Trace run(const Scenario& scenario);

struct ReplayVerdict {
  bool identical = true;
  std::optional<std::size_t> divergence_instant;  // record index t
  std::string detail;
};

/// Re-executes the embedded scenario and compares instant by instant.
/// Throws DigestMismatchError if the embedded scenario does not match the
/// recorded digest or seed.
ReplayVerdict replay(const Trace& trace);

}  // namespace rscatter
