#include "rscatter/engine.hpp"

#include <algorithm>
#include <cmath>

#include "rscatter/errors.hpp"

namespace rscatter {

Point capped_move(Point from, Point target, double sigma) {
  const double d = distance(from, target);
  if (d <= sigma) return target;
  double scale = sigma / d;
  Point p = from + (target - from) * scale;
  while (distance(from, p) > sigma) {
    scale = std::nextafter(scale, 0.0);
    p = from + (target - from) * scale;
  }
  return p;
}

StepResult step(const Configuration& config, const ActivationSet& activation, std::span<const Robot> robots,
                const Protocol& protocol, const Capabilities& caps, Rng& rng) {
  if (activation.empty()) throw ContractError("step: activation set must be non-empty");

  struct Pending {
    const Robot* robot;
    detail::SourcedView seen;
    std::optional<Coin> coin;
  };
  std::vector<Pending> pending;
  pending.reserve(activation.size());
  for (std::size_t i : activation) {
    if (i >= robots.size()) throw ContractError("step: activation names an unknown robot");
    pending.push_back({&robots[i], detail::build_sourced_view(config, robots[i], caps), std::nullopt});
  }

  for (auto& p : pending) {
    if (protocol.wants_coin(p.seen.view, caps)) p.coin = draw_coin(rng);
  }

  StepResult result;
  result.next = config;
  result.outcome.activated_count = pending.size();
  for (auto& p : pending) {
    const Robot& robot = *p.robot;
    const LocalFrame frame = effective_frame(robot, caps);
    const double local_sigma = robot.sigma / frame.unit;
    const Point local = protocol.decide(p.seen.view, caps, local_sigma, p.coin, rng);
    if (!is_finite(local)) throw ContractError("protocol produced a non-finite target");

    Point target = to_global(frame, local);
    const auto& pts = p.seen.view.points;
    if (auto it = std::find(pts.begin(), pts.end(), local); it != pts.end()) {
      target = config.positions[p.seen.sources[static_cast<std::size_t>(it - pts.begin())]];
    }

    const Point from = config.positions[robot.index];
    const Point to = capped_move(from, target, robot.sigma);
    result.next.positions[robot.index] = to;
    if (to != from) ++result.outcome.moved_count;
    result.decisions.push_back({robot.index, p.coin, target});
  }
  return result;
}

bool stop_rule_met(StopRule rule, const Configuration& config, const ProtocolSpec& protocol) {
  switch (rule) {
    case StopRule::none:
      return false;
    case StopRule::no_multiplicity:
      return all_distinct(config);
    case StopRule::gathered:
      return std::all_of(config.positions.begin(), config.positions.end(),
                         [&](Point p) { return p == config.positions.front(); });
    case StopRule::pattern_reached: {
      auto have = config.positions;
      auto want = protocol.pattern;
      std::sort(have.begin(), have.end(), lex_less);
      std::sort(want.begin(), want.end(), lex_less);
      return have == want;
    }
  }
  return false;
}

namespace {

Scenario validated(Scenario s) {
  validate(s);
  return s;
}

}  // namespace

Simulation::Simulation(Scenario scenario) : Simulation(scenario, make_protocol(scenario.protocol)) {}

Simulation::Simulation(Scenario scenario, ProtocolPtr protocol)
    : scenario_(validated(std::move(scenario))),
      protocol_(std::move(protocol)),
      rng_(scenario_.seed),
      scheduler_(scenario_.scheduler, scenario_.count) {
  config_ = initial_configuration(scenario_, rng_);
  robots_ = make_robots(scenario_, rng_);
  initial_ = config_;
}

bool Simulation::stop_rule_met() const {
  return rscatter::stop_rule_met(scenario_.stop_rule, config_, scenario_.protocol);
}

StepRecord Simulation::advance(StepOutcome* outcome) {
  StepRecord record;
  record.t = instant_;
  record.active = scheduler_.next_activation(rng_);
  StepResult result = step(config_, record.active, robots_, *protocol_, scenario_.caps, rng_);
  for (const auto& d : result.decisions) {
    record.coins.push_back(d.coin);
    record.targets.push_back(d.target);
  }
  config_ = std::move(result.next);
  record.positions = config_;
  if (outcome) *outcome = result.outcome;
  ++instant_;
  return record;
}

Trace Simulation::run() {
  Trace trace;
  trace.scenario_text = write_scenario(scenario_);
  trace.digest = scenario_digest(trace.scenario_text);
  trace.seed = scenario_.seed;
  trace.initial = initial_;
  while (!stop_rule_met() && instant_ < scenario_.max_steps) trace.records.push_back(advance());
  trace.status = stop_rule_met() ? RunStatus::stopped : RunStatus::budget_exhausted;
  return trace;
}

Trace run(const Scenario& scenario) { return Simulation(scenario).run(); }

namespace {

bool same_bits(Point a, Point b) {
  return std::signbit(a.x) == std::signbit(b.x) && std::signbit(a.y) == std::signbit(b.y) && a == b;
}

bool same_bits(const std::vector<Point>& a, const std::vector<Point>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!same_bits(a[i], b[i])) return false;
  }
  return true;
}

ReplayVerdict diverged(std::size_t t, std::string detail) {
  return {false, t, std::move(detail)};
}

}  // namespace

ReplayVerdict replay(const Trace& trace) {
  if (scenario_digest(trace.scenario_text) != trace.digest) {
    throw DigestMismatchError("embedded scenario does not match digest " + format_digest(trace.digest));
  }
  const Scenario scenario = parse_scenario(trace.scenario_text);
  if (scenario.seed != trace.seed) {
    throw DigestMismatchError("trace seed differs from the embedded scenario's seed");
  }

  Simulation sim(scenario);
  if (!same_bits(sim.configuration().positions, trace.initial.positions)) {
    return {false, std::nullopt, "initial configuration differs"};
  }

  for (const auto& recorded : trace.records) {
    if (sim.stop_rule_met() || sim.instant() >= scenario.max_steps) {
      return diverged(recorded.t, "replay stopped before instant " + std::to_string(recorded.t));
    }
    const StepRecord fresh = sim.advance();
    if (fresh.active != recorded.active) return diverged(recorded.t, "activation set differs");
    if (fresh.coins != recorded.coins) return diverged(recorded.t, "coin draws differ");
    if (!same_bits(fresh.targets, recorded.targets)) return diverged(recorded.t, "targets differ");
    if (!same_bits(fresh.positions.positions, recorded.positions.positions)) {
      return diverged(recorded.t, "positions differ");
    }
  }

  const bool stopped = sim.stop_rule_met();
  const bool exhausted = sim.instant() >= scenario.max_steps;
  if (!stopped && !exhausted) {
    return diverged(trace.records.size(), "replay continues past the recorded end");
  }
  const RunStatus status = stopped ? RunStatus::stopped : RunStatus::budget_exhausted;
  if (status != trace.status) return diverged(trace.records.size(), "final status differs");
  return {true, std::nullopt, "identical"};
}

}  // namespace rscatter
