#include "rscatter/analysis.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "rscatter/errors.hpp"

namespace rscatter {

namespace {

std::string num(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

std::string count_str(std::size_t v) { return std::to_string(v); }

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

bool colocated(const Configuration& c) {
  return std::all_of(c.positions.begin(), c.positions.end(), [&](Point p) { return p == c.positions.front(); });
}

}  // namespace

// ---------------------------------------------------------------------------

ClosureVerdict check_closure(std::span<const Configuration> configurations) {
  ClosureVerdict v;
  for (std::size_t t = 0; t < configurations.size(); ++t) {
    const bool distinct = all_distinct(configurations[t]);
    if (!v.first_distinct_instant) {
      if (distinct) v.first_distinct_instant = t;
      continue;
    }
    if (!distinct) {
      v.pass = false;
      v.violation_instant = t;
      return v;
    }
  }
  return v;
}

ClosureVerdict check_closure(const Trace& trace) {
  std::vector<Configuration> configs;
  configs.reserve(trace.records.size() + 1);
  configs.push_back(trace.initial);
  for (const auto& r : trace.records) configs.push_back(r.positions);
  return check_closure(configs);
}

// ---------------------------------------------------------------------------

PairOutcome classify_pair_instant(bool first_active, bool second_active, bool first_moved, bool second_moved) {
  if ((first_moved && !first_active) || (second_moved && !second_active)) {
    throw ContractError("an inactive robot cannot move");
  }
  const int active = int{first_active} + int{second_active};
  const int moved = int{first_moved} + int{second_moved};
  if (active == 0) return PairOutcome::both_inactive;
  if (active == 1) return moved == 0 ? PairOutcome::lone_active_stays : PairOutcome::lone_active_moves;
  if (moved == 0) return PairOutcome::both_active_stay;
  if (moved == 1) return PairOutcome::both_active_one_moves;
  return PairOutcome::both_active_both_move;
}

const char* to_string(PairOutcome outcome) {
  switch (outcome) {
    case PairOutcome::both_inactive:
      return "both_inactive";
    case PairOutcome::lone_active_stays:
      return "lone_active_stays";
    case PairOutcome::lone_active_moves:
      return "lone_active_moves";
    case PairOutcome::both_active_stay:
      return "both_active_stay";
    case PairOutcome::both_active_one_moves:
      return "both_active_one_moves";
    case PairOutcome::both_active_both_move:
      return "both_active_both_move";
  }
  return "?";
}

void PairEventTally::add(PairOutcome outcome, bool landed_together) {
  ++counts[static_cast<std::size_t>(outcome)];
  if (outcome == PairOutcome::both_active_both_move && landed_together) ++coincident;
}

std::size_t PairEventTally::total() const { return std::accumulate(counts.begin(), counts.end(), std::size_t{0}); }

std::size_t PairEventTally::persisted_active() const {
  return count(PairOutcome::lone_active_stays) + count(PairOutcome::both_active_stay) + coincident;
}

void PairEventTally::merge(const PairEventTally& other) {
  for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += other.counts[i];
  coincident += other.coincident;
}

namespace {

Scenario pair_scenario(const SchedulerSpec& scheduler, std::uint64_t seed, std::size_t bystanders) {
  Scenario s;
  s.count = 2 + bystanders;
  s.positions.mode = PositionMode::explicit_list;
  s.positions.points = {{0.0, 0.0}, {0.0, 0.0}};
  for (std::size_t k = 0; k < bystanders; ++k) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(bystanders);
    s.positions.points.push_back({3.0 * std::cos(angle), 3.0 * std::sin(angle)});
  }
  s.sigmas = {1.0};
  s.scheduler = scheduler;
  s.protocol.kind = ProtocolKind::scatter;
  s.seed = seed;
  s.max_steps = std::numeric_limits<std::size_t>::max();
  return s;
}

PairTrial pair_trial(const SchedulerSpec& scheduler, std::uint64_t seed, std::size_t max_active,
                     std::size_t bystanders) {
  Simulation sim(pair_scenario(scheduler, seed, bystanders));
  PairTrial trial;
  // Generous ceiling on inactive instants so a pathological scheduler cannot hang a campaign.
  const std::size_t ceiling = 1000 * (max_active + 1);
  while (trial.active_instants < max_active && trial.instants < ceiling) {
    const Configuration before = sim.configuration();
    const StepRecord r = sim.advance();
    const bool a0 = std::binary_search(r.active.begin(), r.active.end(), std::size_t{0});
    const bool a1 = std::binary_search(r.active.begin(), r.active.end(), std::size_t{1});
    const Point p0 = r.positions.positions[0];
    const Point p1 = r.positions.positions[1];
    const auto outcome = classify_pair_instant(a0, a1, p0 != before.positions[0], p1 != before.positions[1]);
    trial.tally.add(outcome, p0 == p1);
    ++trial.instants;
    if (a0 || a1) {
      ++trial.active_instants;
    } else {
      ++trial.inactive_instants;
    }
    if (p0 != p1) {
      trial.separated = true;
      break;
    }
  }
  return trial;
}

}  // namespace

PairTrial run_pair_trial(const SchedulerSpec& scheduler, std::uint64_t seed, std::size_t max_active_instants,
                         std::size_t bystanders) {
  return pair_trial(scheduler, seed, max_active_instants, bystanders);
}

ConvergenceStats convergence_stats(std::span<const PairTrial> trials) {
  ConvergenceStats s;
  s.trials = trials.size();
  for (const auto& t : trials) {
    s.steps_to_all_distinct.push_back(t.instants);
    s.active_pair_instants.push_back(t.active_instants);
    s.inactive_pair_instants.push_back(t.inactive_instants);
  }
  return s;
}

SeparationEstimate estimate_pair_separation(const SchedulerSpec& scheduler, std::size_t trials, std::uint64_t seed) {
  SeparationEstimate est;
  est.trials = trials;
  for (std::size_t i = 0; i < trials; ++i) {
    const PairTrial t = pair_trial(scheduler, splitmix64(seed + i), 1, 0);
    if (t.separated) ++est.separations;
    est.tally.merge(t.tally);
  }
  if (trials == 0) return est;
  const double n = static_cast<double>(trials);
  est.rate = static_cast<double>(est.separations) / n;
  est.wilson = wilson_interval(est.separations, trials);

  const auto active = static_cast<double>(est.tally.active_instants());
  est.persistence = active > 0 ? static_cast<double>(est.tally.persisted_active()) / active : 0.0;
  est.both_move_rate =
      active > 0 ? static_cast<double>(est.tally.count(PairOutcome::both_active_both_move)) / active : 0.0;
  const std::size_t lone =
      est.tally.count(PairOutcome::lone_active_stays) + est.tally.count(PairOutcome::lone_active_moves);
  if (lone > 0) {
    est.lone_stay_rate =
        static_cast<double>(est.tally.count(PairOutcome::lone_active_stays)) / static_cast<double>(lone);
  }
  return est;
}

// ---------------------------------------------------------------------------

bool DecayCurve::pass() const {
  return std::all_of(points.begin(), points.end(), [](const DecayPoint& p) { return p.within_bound; });
}

DecayCurve verify_decay_bound(std::span<const PairTrial> trials, std::size_t max_a) {
  DecayCurve curve;
  curve.trials = trials.size();
  for (std::size_t a = 0; a <= max_a; ++a) {
    std::size_t alive = 0;
    for (const auto& t : trials) {
      // Separation happens at the trial's last active instant.
      const bool survived = t.separated ? t.active_instants > a : t.active_instants >= a;
      if (survived) ++alive;
    }
    DecayPoint p;
    p.active_instants = a;
    p.survival = trials.empty() ? 1.0 : static_cast<double>(alive) / static_cast<double>(trials.size());
    p.bound = std::pow(0.75, static_cast<double>(a));
    p.standard_error = standard_error(p.survival, trials.size());
    p.within_bound = p.survival <= p.bound + 3.0 * p.standard_error;
    curve.points.push_back(p);
  }
  return curve;
}

// ---------------------------------------------------------------------------

ImpossibilityVerdict impossibility_demo(ProtocolPtr protocol, std::size_t steps, std::size_t n, Capabilities caps) {
  if (!protocol) throw std::invalid_argument("impossibility_demo needs a protocol");
  Scenario s;
  s.count = n;
  s.positions.mode = PositionMode::colocated;
  s.positions.at = {0.0, 0.0};
  s.sigmas = {1.0};
  s.caps = caps;
  s.scheduler.kind = SchedulerKind::full_synchronous;
  s.protocol.kind = ProtocolKind::deterministic_stub;
  s.max_steps = std::max<std::size_t>(steps, 1);

  Simulation sim(s, std::move(protocol));
  ImpossibilityVerdict v;
  for (std::size_t t = 0; t < steps; ++t) {
    sim.advance();
    if (sim.rng().draws() != 0) {
      throw NotDeterministicError("protocol consumed " + std::to_string(sim.rng().draws()) +
                                  " random draws; the impossibility harness needs a coin-free protocol");
    }
    ++v.instants;
    if (colocated(sim.configuration())) {
      ++v.colocated_instants;
    } else {
      v.colocated_throughout = false;
    }
  }
  v.draws = sim.rng().draws();
  return v;
}

std::vector<ProtocolPtr> coin_free_protocols() {
  using Fn = ViewFunctionProtocol::Fn;
  auto make = [](const char* name, Fn fn) { return std::make_shared<ViewFunctionProtocol>(name, std::move(fn)); };
  return {
      make_deterministic_stub(),
      make("toward_centroid_offset",
           [](const View& v) {
             Point c{};
             for (Point p : v.points) c = c + p;
             return c * (1.0 / static_cast<double>(v.points.size())) + Point{0.5, -0.25};
           }),
      make("quarter_turn", [](const View& v) { return Point{1.0 - v.self.y, v.self.x}; }),
      make("down_by_view_size",
           [](const View& v) { return v.self + Point{0.0, -0.5 * static_cast<double>(v.points.size())}; }),
      make("past_largest_point", [](const View& v) { return v.points.back() + Point{0.3, 0.7}; }),
  };
}

// ---------------------------------------------------------------------------

std::vector<GatherTrial> gather_trials(std::span<const Scenario> batch) {
  std::vector<GatherTrial> out;
  out.reserve(batch.size());
  for (Scenario s : batch) {
    s.stop_rule = StopRule::gathered;
    Simulation sim(s);
    while (!sim.stop_rule_met() && sim.instant() < s.max_steps) sim.advance();
    out.push_back({sim.stop_rule_met(), sim.instant()});
  }
  return out;
}

GatherSummary gather_stats(std::span<const GatherTrial> trials) {
  GatherSummary g;
  g.trials = trials.size();
  double total = 0.0;
  for (const auto& t : trials) {
    if (!t.gathered) continue;
    ++g.gathered;
    total += static_cast<double>(t.steps);
    g.max_steps = std::max(g.max_steps, t.steps);
  }
  g.mean_steps = g.gathered ? total / static_cast<double>(g.gathered) : 0.0;
  return g;
}

GatherSummary gather_stats(std::span<const Scenario> batch) {
  const auto trials = gather_trials(batch);
  return gather_stats(std::span<const GatherTrial>(trials));
}

Scenario pair_gather_scenario(std::uint64_t seed, std::size_t max_steps) {
  Scenario s;
  s.count = 2;
  s.positions.mode = PositionMode::random;
  s.positions.extent = 1.0;
  s.sigmas = {2.0};  // >= sqrt(2), the largest possible separation
  s.scheduler.kind = SchedulerKind::full_synchronous;
  s.protocol.kind = ProtocolKind::pair_gather;
  s.seed = seed;
  s.max_steps = max_steps;
  s.stop_rule = StopRule::gathered;
  return s;
}

Scenario ssa_gp_scenario(std::size_t n, std::uint64_t seed, std::size_t max_steps) {
  Scenario s;
  s.count = n;
  s.positions.mode = PositionMode::random_with_duplicates;
  s.positions.extent = 10.0;
  s.sigmas = {1.0};
  s.caps = {true, true};
  s.scheduler = {SchedulerKind::bounded_delay, 0.5, 1, 3};
  s.protocol.kind = ProtocolKind::ssa_gp;
  s.seed = seed;
  s.max_steps = max_steps;
  s.stop_rule = StopRule::gathered;
  return s;
}

std::vector<Point> fixed_pattern(std::size_t n) {
  std::vector<Point> out;
  for (std::size_t k = 0; k < n; ++k) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
    out.push_back({5.0 + 3.0 * std::cos(angle), 5.0 + 3.0 * std::sin(angle)});
  }
  return out;
}

Scenario ssa_pf_scenario(std::size_t n, std::uint64_t seed, std::size_t max_steps) {
  Scenario s = ssa_gp_scenario(n, seed, max_steps);
  s.protocol.kind = ProtocolKind::ssa_pf;
  s.protocol.pattern = fixed_pattern(n);
  s.stop_rule = StopRule::pattern_reached;
  return s;
}

std::size_t nearest_site(std::span<const Point> sites, Point q, double* second_gap) {
  if (sites.empty()) throw std::invalid_argument("nearest_site needs at least one site");
  std::size_t best = 0;
  std::size_t runner = sites.size();
  for (std::size_t i = 1; i < sites.size(); ++i) {
    const double d = distance(q, sites[i]);
    if (d < distance(q, sites[best])) {
      runner = best;
      best = i;
    } else if (runner == sites.size() || d < distance(q, sites[runner])) {
      runner = i;
    }
  }
  if (second_gap) {
    if (runner == sites.size()) {
      *second_gap = std::numeric_limits<double>::infinity();
    } else {
      const double d1 = distance(q, sites[best]);
      const double d2 = distance(q, sites[runner]);
      *second_gap = (d2 * d2 - d1 * d1) / (2.0 * distance(sites[best], sites[runner]));
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// Suites

bool SuiteReport::pass() const {
  return !criteria.empty() &&
         std::all_of(criteria.begin(), criteria.end(), [](const CriterionResult& c) { return c.pass; });
}

namespace {

constexpr const char* kSuites[] = {"closure", "separation",     "decay",   "impossibility", "gather",
                                   "fairness", "voronoi-oracle", "pattern", "determinism"};

std::vector<SchedulerSpec> all_scheduler_kinds() {
  return {
      {SchedulerKind::full_synchronous, 0.5, 1, 1},
      {SchedulerKind::bernoulli, 0.5, 1, 1},
      {SchedulerKind::round_robin, 0.5, 1, 1},
      {SchedulerKind::bounded_delay, 0.5, 1, 3},
  };
}

SuiteReport suite_voronoi(std::size_t queries, std::uint64_t seed) {
  const auto start = std::chrono::steady_clock::now();
  Rng rng(seed);
  std::size_t checked = 0;
  std::size_t excluded = 0;
  std::size_t mismatches = 0;
  std::size_t overlaps = 0;
  std::size_t done = 0;
  while (done < queries) {
    const std::size_t n = 2 + static_cast<std::size_t>(rng.uniform01() * 9.0);
    std::vector<Point> sites;
    while (sites.size() < n) {
      const Point p{rng.uniform(0.0, 10.0), rng.uniform(0.0, 10.0)};
      if (std::find(sites.begin(), sites.end(), p) == sites.end()) sites.push_back(p);
    }
    const VoronoiDiagram diagram = compute_voronoi(sites);
    for (std::size_t k = 0; k < 100 && done < queries; ++k, ++done) {
      const Point q{rng.uniform(-5.0, 15.0), rng.uniform(-5.0, 15.0)};
      std::size_t inside = 0;
      for (const auto& cell : diagram.cells) inside += cell_contains(cell, q) ? 1 : 0;
      if (inside > 1) ++overlaps;
      double gap = 0.0;
      const std::size_t best = nearest_site(sites, q, &gap);
      if (gap < 1e-9) {
        ++excluded;
        continue;
      }
      ++checked;
      if (inside != 1 || !cell_contains(diagram.cells[best], q)) ++mismatches;
    }
  }
  const double secs = seconds_since(start);
  SuiteReport r{"voronoi-oracle", {}};
  r.criteria.push_back({"voronoi.oracle_mismatches", mismatches == 0,
                        count_str(mismatches) + " of " + count_str(checked) + " (" + count_str(excluded) +
                            " excluded)",
                        "0"});
  r.criteria.push_back({"voronoi.cells_disjoint", overlaps == 0, count_str(overlaps) + " overlaps", "0"});
  r.criteria.push_back({"voronoi.runtime", secs < 5.0, num(secs, 3) + " s", "< 5 s"});
  return r;
}

SuiteReport suite_closure(std::size_t runs, std::uint64_t seed) {
  const auto kinds = all_scheduler_kinds();
  std::size_t violations = 0;
  std::size_t reached = 0;
  std::size_t first_bad = runs;
  for (std::size_t i = 0; i < runs; ++i) {
    Scenario s;
    s.count = 2 + i % 7;
    s.positions.mode = PositionMode::random_with_duplicates;
    s.positions.extent = 10.0;
    s.frames = FrameMode::random;
    s.sigmas = {1.0};
    s.scheduler = kinds[i % kinds.size()];
    s.protocol.kind = ProtocolKind::scatter;
    s.seed = splitmix64(seed + i);
    s.max_steps = 200;
    const ClosureVerdict v = check_closure(run(s));
    if (v.first_distinct_instant) ++reached;
    if (!v.pass) {
      ++violations;
      first_bad = std::min(first_bad, i);
    }
  }
  SuiteReport r{"closure", {}};
  r.criteria.push_back({"closure.violations", violations == 0,
                        count_str(violations) + " of " + count_str(runs) + " runs" +
                            (violations ? " (first: run " + count_str(first_bad) + ")" : std::string{}),
                        "0"});
  r.criteria.push_back({"closure.runs_reaching_distinct", reached > 0,
                        count_str(reached) + " of " + count_str(runs), "> 0 (non-vacuous)"});
  return r;
}

SuiteReport suite_separation(std::size_t trials, std::uint64_t seed) {
  SuiteReport r{"separation", {}};
  const auto start = std::chrono::steady_clock::now();
  const auto full = estimate_pair_separation({SchedulerKind::full_synchronous}, trials, seed);
  const double secs = seconds_since(start);
  r.criteria.push_back({"separation.full_synchronous_rate", std::abs(full.rate - 0.75) <= 0.01,
                        num(full.rate) + " [" + num(full.wilson.lo) + ", " + num(full.wilson.hi) + "]",
                        "0.75 +/- 0.01"});
  r.criteria.push_back({"separation.full_synchronous_runtime", secs < 30.0, num(secs, 3) + " s", "< 30 s"});

  const auto single = estimate_pair_separation({SchedulerKind::round_robin, 0.5, 1, 1}, trials, seed + trials);
  r.criteria.push_back({"separation.singleton_rate", std::abs(single.rate - 0.5) <= 0.01, num(single.rate),
                        "0.50 +/- 0.01"});

  // Seed ranges of the individual estimates never overlap.
  std::uint64_t offset = 2 * trials;
  for (const auto& spec : all_scheduler_kinds()) {
    const auto est = estimate_pair_separation(spec, trials, seed + offset);
    offset += trials;
    const double active = static_cast<double>(est.tally.active_instants());
    r.criteria.push_back({"separation.persistence_bound[" + to_string(spec) + "]", est.persistence <= 0.76,
                          num(est.persistence), "<= 0.75 + 0.01"});
    if (est.lone_stay_rate) {
      const double lone = static_cast<double>(est.tally.count(PairOutcome::lone_active_stays) +
                                              est.tally.count(PairOutcome::lone_active_moves));
      const double se = standard_error(0.5, static_cast<std::size_t>(lone));
      r.criteria.push_back({"separation.lone_stay_bound[" + to_string(spec) + "]",
                            *est.lone_stay_rate <= 0.5 + 3.0 * se, num(*est.lone_stay_rate),
                            "<= 0.5 + 3 SE"});
    }
    const double se = standard_error(0.25, static_cast<std::size_t>(active));
    r.criteria.push_back({"separation.both_move_bound[" + to_string(spec) + "]",
                          est.both_move_rate <= 0.25 + 3.0 * se, num(est.both_move_rate), "<= 0.25 + 3 SE"});
    r.criteria.push_back({"separation.coincident_landings[" + to_string(spec) + "]", est.tally.coincident == 0,
                          count_str(est.tally.coincident), "0"});
  }
  return r;
}

SuiteReport suite_decay(std::size_t trials, std::uint64_t seed) {
  struct Setup {
    SchedulerSpec spec;
    std::size_t bystanders;
  };
  const Setup setups[] = {
      {{SchedulerKind::full_synchronous, 0.5, 1, 1}, 0},
      {{SchedulerKind::bernoulli, 0.5, 1, 1}, 0},
      {{SchedulerKind::round_robin, 0.5, 1, 1}, 0},
      {{SchedulerKind::bernoulli, 0.5, 1, 1}, 2},
  };
  SuiteReport r{"decay", {}};
  std::uint64_t offset = 0;
  for (const auto& [spec, bystanders] : setups) {
    std::vector<PairTrial> runs;
    runs.reserve(trials);
    for (std::size_t i = 0; i < trials; ++i) {
      runs.push_back(run_pair_trial(spec, splitmix64(seed + offset + i), 15, bystanders));
    }
    offset += trials;
    const DecayCurve curve = verify_decay_bound(runs, 15);

    // Report the point closest to its bound, ignoring the trivial a = 0.
    std::size_t tight = curve.points.size() > 1 ? 1 : 0;
    for (std::size_t a = tight; a < curve.points.size(); ++a) {
      const auto& p = curve.points[a];
      const auto& q = curve.points[tight];
      if (p.survival - p.bound - 3.0 * p.standard_error > q.survival - q.bound - 3.0 * q.standard_error) tight = a;
    }
    const auto& p = curve.points[tight];
    std::string label = to_string(spec);
    if (bystanders) label += "+" + count_str(bystanders) + " bystanders";
    r.criteria.push_back({"decay.survival_bound[" + label + "]", curve.pass(),
                          "tightest a=" + count_str(tight) + " survival=" + num(p.survival) + " bound=" +
                              num(p.bound) + " 3SE=" + num(3.0 * p.standard_error),
                          "survival(a) <= 0.75^a + 3 SE for a in [0, 15]"});

    bool balanced = true;
    std::size_t idle = 0;
    for (const auto& t : runs) {
      balanced = balanced && t.active_instants + t.inactive_instants == t.instants;
      idle += t.inactive_instants;
    }
    r.criteria.push_back({"decay.a_plus_na_equals_k[" + label + "]", balanced,
                          (balanced ? std::string("holds for every trial") : std::string("violated")) +
                              ", total na=" + count_str(idle),
                          "a + na = k"});
  }
  return r;
}

SuiteReport suite_impossibility(std::size_t steps, std::uint64_t /*seed*/) {
  SuiteReport r{"impossibility", {}};
  for (const auto& protocol : coin_free_protocols()) {
    const auto v = impossibility_demo(protocol, steps);
    r.criteria.push_back({"impossibility.colocated[" + std::string(protocol->name()) + "]",
                          v.colocated_throughout && v.colocated_instants == steps,
                          count_str(v.colocated_instants) + "/" + count_str(steps) + " instants co-located",
                          count_str(steps) + "/" + count_str(steps)});
  }
  bool rejected = false;
  try {
    impossibility_demo(std::make_shared<ScatterProtocol>(), steps);
  } catch (const NotDeterministicError&) {
    rejected = true;
  }
  r.criteria.push_back({"impossibility.rejects_randomized", rejected, rejected ? "rejected" : "accepted",
                        "scatter rejected"});
  return r;
}

SuiteReport suite_gather(std::size_t trials, std::uint64_t seed) {
  SuiteReport r{"gather", {}};
  std::vector<Scenario> pairs;
  for (std::size_t i = 0; i < trials; ++i) pairs.push_back(pair_gather_scenario(splitmix64(seed + i), 10000));
  const auto pair_trials = gather_trials(pairs);
  const auto pair = gather_stats(std::span<const GatherTrial>(pair_trials));
  const auto first = static_cast<std::size_t>(
      std::count_if(pair_trials.begin(), pair_trials.end(), [](const GatherTrial& t) { return t.steps == 1; }));
  const double meet = static_cast<double>(first) / static_cast<double>(std::max<std::size_t>(trials, 1));
  r.criteria.push_back({"gather.pair_meet_rate", std::abs(meet - 0.5) <= 0.01, num(meet), "0.50 +/- 0.01"});
  r.criteria.push_back({"gather.pair_mean_steps", pair.gathered == trials && std::abs(pair.mean_steps - 2.0) <= 0.1,
                        num(pair.mean_steps) + " (" + count_str(pair.gathered) + "/" + count_str(trials) + ")",
                        "2.0 +/- 0.1"});

  const std::size_t per_n = std::max<std::size_t>(trials / 10, 1);
  for (std::size_t n = 3; n <= 8; ++n) {
    std::vector<Scenario> batch;
    for (std::size_t i = 0; i < per_n; ++i) batch.push_back(ssa_gp_scenario(n, splitmix64(seed + 1000003 * n + i), 10000));
    const auto g = gather_stats(std::span<const Scenario>(batch));
    r.criteria.push_back({"gather.ssa_gp[n=" + count_str(n) + "]", g.gathered == g.trials,
                          count_str(g.gathered) + "/" + count_str(g.trials) + " gathered, mean " + num(g.mean_steps) +
                              " max " + count_str(g.max_steps) + " instants",
                          "100% within 10^4 instants"});
  }
  return r;
}

SuiteReport suite_pattern(std::size_t trials, std::uint64_t seed) {
  SuiteReport r{"pattern", {}};
  for (std::size_t n = 3; n <= 6; ++n) {
    std::size_t reached = 0;
    std::size_t worst = 0;
    for (std::size_t i = 0; i < trials; ++i) {
      Simulation sim(ssa_pf_scenario(n, splitmix64(seed + 7919 * n + i), 10000));
      while (!sim.stop_rule_met() && sim.instant() < 10000) sim.advance();
      if (sim.stop_rule_met()) ++reached;
      worst = std::max(worst, sim.instant());
    }
    r.criteria.push_back({"pattern.ssa_pf[n=" + count_str(n) + "]", reached == trials,
                          count_str(reached) + "/" + count_str(trials) + " formed, max " + count_str(worst) +
                              " instants",
                          "100% within 10^4 instants"});
  }
  return r;
}

Scenario random_scenario(std::uint64_t seed) {
  Rng pick(seed);
  const auto kinds = all_scheduler_kinds();
  Scenario s;
  s.seed = seed;
  s.max_steps = 50 + pick.next() % 100;
  s.scheduler = kinds[pick.next() % kinds.size()];
  s.positions.mode = PositionMode::random_with_duplicates;
  s.positions.extent = 5.0;
  s.sigmas = {0.5 + pick.uniform01()};
  switch (pick.next() % 4) {
    case 0:
      s.count = 2 + pick.next() % 6;
      s.protocol.kind = ProtocolKind::scatter;
      s.frames = FrameMode::random;
      break;
    case 1:
      s.count = 3 + pick.next() % 4;
      s.caps = {true, true};
      s.protocol.kind = ProtocolKind::ssa_gp;
      s.stop_rule = StopRule::gathered;
      break;
    case 2:
      s.count = 3 + pick.next() % 3;
      s.caps = {true, true};
      s.protocol.kind = ProtocolKind::ssa_pf;
      s.protocol.pattern = fixed_pattern(s.count);
      s.stop_rule = StopRule::pattern_reached;
      break;
    default:
      s.count = 2;
      s.positions.mode = PositionMode::random;
      s.sigmas = {1.0};
      s.frames = FrameMode::random;
      s.protocol.kind = ProtocolKind::pair_gather;
      s.stop_rule = StopRule::gathered;
      break;
  }
  return s;
}

SuiteReport suite_determinism(std::size_t scenarios, std::uint64_t seed) {
  SuiteReport r{"determinism", {}};
  std::size_t divergences = 0;
  std::size_t unstable = 0;
  for (std::size_t i = 0; i < scenarios; ++i) {
    const Scenario s = random_scenario(splitmix64(seed + i));
    const std::string first = write_trace(run(s));
    const std::string second = write_trace(run(s));
    if (first != second) ++unstable;
    const ReplayVerdict v = replay(read_trace_string(first));
    if (!v.identical) ++divergences;
  }
  r.criteria.push_back({"determinism.replay_divergences", divergences == 0,
                        count_str(divergences) + " of " + count_str(scenarios), "0"});
  r.criteria.push_back({"determinism.byte_identical_reruns", unstable == 0,
                        count_str(unstable) + " of " + count_str(scenarios) + " differ", "0"});
  return r;
}

SuiteReport suite_fairness(std::size_t seeds, std::uint64_t seed) {
  SuiteReport r{"fairness", {}};
  for (std::size_t delay : {1, 3, 5}) {
    std::size_t passed = 0;
    std::size_t worst = 0;
    for (std::size_t i = 0; i < seeds; ++i) {
      Scheduler sched({SchedulerKind::bounded_delay, 0.5, 1, delay}, 6);
      Rng rng(splitmix64(seed + 31 * delay + i));
      std::vector<ActivationSet> sets;
      for (int t = 0; t < 1000; ++t) sets.push_back(sched.next_activation(rng));
      const auto v = audit_fairness(sets, 6, delay);
      if (v.outcome == FairnessOutcome::pass) ++passed;
      worst = std::max(worst, v.max_gap);
    }
    r.criteria.push_back({"fairness.bounded_delay[D=" + count_str(delay) + "]", passed == seeds,
                          count_str(passed) + "/" + count_str(seeds) + " pass, worst gap " + count_str(worst),
                          "all pass with window D"});
  }

  std::vector<ActivationSet> unfair;
  for (int t = 0; t < 100; ++t) unfair.push_back(t % 2 ? ActivationSet{0, 1} : ActivationSet{1, 3});
  const auto v = audit_fairness(unfair, 4, 10);
  const bool caught = v.outcome == FairnessOutcome::fail && v.culprit == std::size_t{2};
  r.criteria.push_back({"fairness.rejects_starved_robot", caught,
                        std::string(to_string(v.outcome)) +
                            (v.culprit ? ", culprit robot " + count_str(*v.culprit) : std::string{}),
                        "fail, culprit robot 2"});
  return r;
}

}  // namespace

std::span<const char* const> suite_names() { return kSuites; }

SuiteReport run_suite(const std::string& name, std::size_t trials, std::uint64_t seed) {
  auto size = [&](std::size_t fallback) { return trials ? trials : fallback; };
  if (name == "voronoi-oracle") return suite_voronoi(size(10000), seed);
  if (name == "closure") return suite_closure(size(1000), seed);
  if (name == "separation") return suite_separation(size(100000), seed);
  if (name == "decay") return suite_decay(size(100000), seed);
  if (name == "impossibility") return suite_impossibility(size(100), seed);
  if (name == "gather") return suite_gather(size(10000), seed);
  if (name == "fairness") return suite_fairness(size(100), seed);
  if (name == "pattern") return suite_pattern(size(500), seed);
  if (name == "determinism") return suite_determinism(size(50), seed);
  throw std::invalid_argument("unknown suite '" + name + "'");
}

}  // namespace rscatter
