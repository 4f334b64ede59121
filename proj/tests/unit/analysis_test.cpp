#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "rscatter/analysis.hpp"
#include "rscatter/errors.hpp"

namespace rscatter {
namespace {

const SchedulerSpec kFull{SchedulerKind::full_synchronous, 0.5, 1, 1};
const SchedulerSpec kSingle{SchedulerKind::round_robin, 0.5, 1, 1};

Configuration cfg(std::vector<Point> p) { return Configuration{std::move(p)}; }

TEST(Closure, DistinctThroughoutPasses) {
  const std::vector<Configuration> c{cfg({{0, 0}, {1, 0}}), cfg({{0, 1}, {1, 0}})};
  const auto v = check_closure(c);
  EXPECT_TRUE(v.pass);
  EXPECT_EQ(v.first_distinct_instant, 0u);
}

TEST(Closure, ReintroducedDuplicateFailsAtItsInstant) {
  const std::vector<Configuration> c{cfg({{0, 0}, {0, 0}}), cfg({{0, 0}, {0, 0}}), cfg({{0, 0}, {1, 0}}),
                                     cfg({{0, 0}, {2, 0}}), cfg({{2, 0}, {2, 0}})};
  const auto v = check_closure(c);
  EXPECT_FALSE(v.pass);
  EXPECT_EQ(v.first_distinct_instant, 2u);
  EXPECT_EQ(v.violation_instant, 4u);
}

TEST(Closure, NeverDistinctIsVacuouslyFine) {
  const std::vector<Configuration> c{cfg({{0, 0}, {0, 0}})};
  const auto v = check_closure(c);
  EXPECT_TRUE(v.pass);
  EXPECT_FALSE(v.first_distinct_instant.has_value());
}

TEST(Closure, ScatterTracesAcrossSchedulers) {
  for (auto spec : {kFull, SchedulerSpec{SchedulerKind::bernoulli, 0.3, 1, 1}, kSingle,
                    SchedulerSpec{SchedulerKind::bounded_delay, 0.5, 1, 4}}) {
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
      Scenario s;
      s.count = 6;
      s.positions.mode = PositionMode::random_with_duplicates;
      s.positions.extent = 1.0;
      s.frames = FrameMode::random;
      s.scheduler = spec;
      s.seed = seed;
      s.max_steps = 200;
      const auto v = check_closure(run(s));
      ASSERT_TRUE(v.pass) << to_string(spec) << " seed " << seed;
    }
  }
}

TEST(PairOutcome, PartitionIsExhaustiveAndExclusive) {
  std::set<PairOutcome> seen;
  int valid = 0;
  for (int bits = 0; bits < 16; ++bits) {
    const bool a0 = bits & 1, a1 = bits & 2, m0 = bits & 4, m1 = bits & 8;
    if ((m0 && !a0) || (m1 && !a1)) {
      EXPECT_THROW(classify_pair_instant(a0, a1, m0, m1), ContractError);
      continue;
    }
    ++valid;
    seen.insert(classify_pair_instant(a0, a1, m0, m1));
  }
  EXPECT_EQ(valid, 9);
  EXPECT_EQ(seen.size(), kPairOutcomeCount);
  EXPECT_EQ(classify_pair_instant(true, false, false, false), PairOutcome::lone_active_stays);
  EXPECT_EQ(classify_pair_instant(false, true, false, true), PairOutcome::lone_active_moves);
  EXPECT_EQ(classify_pair_instant(true, true, true, true), PairOutcome::both_active_both_move);
}

TEST(PairTrial, TallyMatchesInstantsAndAPlusNaIsK) {
  for (std::size_t bystanders : {0u, 3u}) {
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
      const auto t = run_pair_trial({SchedulerKind::bernoulli, 0.5, 1, 1}, seed, 15, bystanders);
      ASSERT_EQ(t.active_instants + t.inactive_instants, t.instants);
      ASSERT_EQ(t.tally.total(), t.instants);
      ASSERT_EQ(t.tally.active_instants(), t.active_instants);
      ASSERT_EQ(t.tally.count(PairOutcome::both_inactive), t.inactive_instants);
      ASSERT_EQ(t.tally.coincident, 0u);
      if (bystanders == 0) ASSERT_EQ(t.inactive_instants, 0u);
    }
  }
}

TEST(PairTrial, BystandersProduceInactiveInstants) {
  std::size_t idle = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    idle += run_pair_trial({SchedulerKind::bernoulli, 0.5, 1, 1}, seed, 15, 2).inactive_instants;
  }
  EXPECT_GT(idle, 0u);
}

TEST(ConvergenceStats, CollectsPerTrialCounters) {
  std::vector<PairTrial> trials;
  for (std::uint64_t seed = 0; seed < 10; ++seed) trials.push_back(run_pair_trial(kSingle, seed, 20));
  const auto s = convergence_stats(trials);
  EXPECT_EQ(s.trials, 10u);
  for (std::size_t i = 0; i < 10; ++i) {
    EXPECT_EQ(s.active_pair_instants[i] + s.inactive_pair_instants[i], s.steps_to_all_distinct[i]);
  }
}

// Coin enumeration for one fully synchronous instant of a co-located pair:
// the pair persists only when both coins are 1 (two coin-0 draws land on
// distinct points with probability 1). Checked here against scatter_step.
double enumerated_persistence() {
  const View v{{{0, 0}}, std::vector<int>{2}, {0, 0}};
  Rng rng(1);
  int persisted = 0;
  for (Coin a : {Coin::zero, Coin::one}) {
    for (Coin b : {Coin::zero, Coin::one}) {
      persisted += scatter_step(v, 1.0, a, rng) == scatter_step(v, 1.0, b, rng);
    }
  }
  return persisted / 4.0;
}

TEST(Separation, FullSynchronousMatchesCoinEnumeration) {
  const double persistence = enumerated_persistence();
  EXPECT_EQ(persistence, 0.25);
  const auto est = estimate_pair_separation(kFull, 100000, 17);
  EXPECT_NEAR(est.rate, 1.0 - persistence, 0.01);
  EXPECT_LE(est.wilson.lo, est.rate);
  EXPECT_GE(est.wilson.hi, est.rate);
  EXPECT_NEAR(est.persistence, persistence, 0.01);
  EXPECT_EQ(est.tally.coincident, 0u);
  EXPECT_FALSE(est.lone_stay_rate.has_value());
}

TEST(Separation, SingletonSchedulerSeparatesHalfTheTime) {
  const auto est = estimate_pair_separation(kSingle, 100000, 18);
  EXPECT_NEAR(est.rate, 0.5, 0.01);
  ASSERT_TRUE(est.lone_stay_rate.has_value());
  EXPECT_NEAR(*est.lone_stay_rate, 0.5, 0.01);
  EXPECT_EQ(est.both_move_rate, 0.0);
}

TEST(Separation, PersistenceBoundAcrossSchedulers) {
  for (auto spec : {kFull, kSingle, SchedulerSpec{SchedulerKind::bernoulli, 0.8, 1, 1},
                    SchedulerSpec{SchedulerKind::bounded_delay, 0.5, 1, 2}}) {
    const auto est = estimate_pair_separation(spec, 20000, 19);
    const double se = standard_error(0.75, 20000);
    EXPECT_LE(est.persistence, 0.75 + 3 * se) << to_string(spec);
    EXPECT_LE(est.both_move_rate, 0.25 + 3 * standard_error(0.25, est.tally.active_instants())) << to_string(spec);
  }
}

TEST(Separation, TrialsAreIndependentOfOrder) {
  // Aggregation is a sum over per-trial seeds, so splitting the range gives the same totals.
  const auto whole = estimate_pair_separation(kFull, 1000, 5);
  const auto first = estimate_pair_separation(kFull, 400, 5);
  const auto rest = estimate_pair_separation(kFull, 600, 405);
  EXPECT_EQ(whole.separations, first.separations + rest.separations);
  PairEventTally merged = first.tally;
  merged.merge(rest.tally);
  EXPECT_EQ(merged.counts, whole.tally.counts);
}

TEST(Decay, SyntheticCurveOracle) {
  // Three trials: separated at its 1st, 3rd active instant, and never (budget 4).
  std::vector<PairTrial> trials(3);
  trials[0].active_instants = 1;
  trials[0].separated = true;
  trials[1].active_instants = 3;
  trials[1].separated = true;
  trials[2].active_instants = 4;
  const auto curve = verify_decay_bound(trials, 4);
  ASSERT_EQ(curve.points.size(), 5u);
  const double expected[] = {1.0, 2.0 / 3, 2.0 / 3, 1.0 / 3, 1.0 / 3};
  for (std::size_t a = 0; a < 5; ++a) {
    EXPECT_DOUBLE_EQ(curve.points[a].survival, expected[a]) << a;
    EXPECT_DOUBLE_EQ(curve.points[a].bound, std::pow(0.75, double(a)));
  }
}

TEST(Decay, FullSynchronousCurve) {
  const std::size_t n = 100000;
  std::vector<PairTrial> trials;
  for (std::size_t i = 0; i < n; ++i) trials.push_back(run_pair_trial(kFull, splitmix64(i), 15));
  const auto curve = verify_decay_bound(trials, 15);
  EXPECT_TRUE(curve.pass());
  EXPECT_EQ(curve.points[0].survival, 1.0);
  EXPECT_NEAR(curve.points[1].survival, 0.25, 0.01);
  const double s10 = curve.points[10].survival;
  EXPECT_LE(s10, std::pow(0.75, 10) + 3 * std::sqrt(s10 * (1 - s10) / n));
}

TEST(Impossibility, DefaultStubStaysTogether) {
  const auto v = impossibility_demo(make_deterministic_stub(), 100);
  EXPECT_TRUE(v.colocated_throughout);
  EXPECT_EQ(v.colocated_instants, 100u);
  EXPECT_EQ(v.draws, 0u);
}

TEST(Impossibility, FiveDistinctCoinFreeProtocols) {
  const auto protocols = coin_free_protocols();
  ASSERT_EQ(protocols.size(), 5u);
  std::set<std::string> names;
  for (const auto& p : protocols) {
    names.insert(std::string(p->name()));
    for (bool mult : {false, true}) {
      const auto v = impossibility_demo(p, 100, 4, {mult, false});
      EXPECT_TRUE(v.colocated_throughout) << p->name();
    }
  }
  EXPECT_EQ(names.size(), 5u);
}

TEST(Impossibility, RejectsRandomizedProtocols) {
  EXPECT_THROW(impossibility_demo(std::make_shared<ScatterProtocol>(), 10), NotDeterministicError);
}

TEST(Gather, AlreadyGatheredPairTakesZeroInstants) {
  Scenario s = pair_gather_scenario(1, 100);
  s.positions.mode = PositionMode::colocated;
  const std::vector<Scenario> batch{s};
  const auto trials = gather_trials(batch);
  EXPECT_TRUE(trials[0].gathered);
  EXPECT_EQ(trials[0].steps, 0u);
}

TEST(Gather, PairMeanStepsIsGeometric) {
  std::vector<Scenario> batch;
  for (std::uint64_t i = 0; i < 10000; ++i) batch.push_back(pair_gather_scenario(splitmix64(i), 1000));
  const auto g = gather_stats(std::span<const Scenario>(batch));
  EXPECT_EQ(g.gathered, g.trials);
  EXPECT_NEAR(g.mean_steps, 2.0, 0.1);  // mean of a geometric law with p = 1/2
  EXPECT_DOUBLE_EQ(g.fraction(), 1.0);
}

TEST(Gather, SsaGpGathersSmallPopulations) {
  for (std::size_t n = 3; n <= 8; ++n) {
    std::vector<Scenario> batch;
    for (std::uint64_t i = 0; i < 50; ++i) batch.push_back(ssa_gp_scenario(n, i, 10000));
    const auto g = gather_stats(std::span<const Scenario>(batch));
    EXPECT_EQ(g.gathered, g.trials) << "n=" << n;
    EXPECT_GT(g.mean_steps, 0.0);
  }
}

TEST(Gather, SummaryOfSyntheticTrials) {
  const std::vector<GatherTrial> t{{true, 2}, {false, 100}, {true, 4}};
  const auto g = gather_stats(std::span<const GatherTrial>(t));
  EXPECT_EQ(g.gathered, 2u);
  EXPECT_EQ(g.mean_steps, 3.0);
  EXPECT_EQ(g.max_steps, 4u);
}

TEST(Builders, FixedPatternAndScenarios) {
  const auto p = fixed_pattern(6);
  ASSERT_EQ(p.size(), 6u);
  for (Point q : p) EXPECT_NEAR(distance(q, {5, 5}), 3.0, 1e-12);
  EXPECT_NO_THROW(validate(ssa_pf_scenario(4, 1, 100)));
  EXPECT_NO_THROW(validate(ssa_gp_scenario(3, 1, 100)));
  EXPECT_NO_THROW(validate(pair_gather_scenario(1, 100)));
}

TEST(NearestSite, GapOracle) {
  const std::vector<Point> sites{{0, 0}, {4, 0}, {0, 10}};
  double gap = 0;
  EXPECT_EQ(nearest_site(sites, {1, 0}, &gap), 0u);
  EXPECT_DOUBLE_EQ(gap, 1.0);  // bisector x = 2
  EXPECT_EQ(nearest_site(sites, {3.5, 1}, &gap), 1u);
  const std::vector<Point> one{{2, 2}};
  nearest_site(one, {0, 0}, &gap);
  EXPECT_TRUE(std::isinf(gap));
}

TEST(Suites, NamesAndUnknown) {
  std::set<std::string> names;
  for (const char* n : suite_names()) names.insert(n);
  for (const char* required :
       {"closure", "separation", "decay", "impossibility", "gather", "fairness", "voronoi-oracle"}) {
    EXPECT_TRUE(names.count(required)) << required;
  }
  EXPECT_THROW(run_suite("nonsense", 1, 1), std::invalid_argument);
}

TEST(Suites, SmallRunsPass) {
  EXPECT_TRUE(run_suite("impossibility", 20, 1).pass());
  EXPECT_TRUE(run_suite("fairness", 10, 1).pass());
  EXPECT_TRUE(run_suite("voronoi-oracle", 2000, 1).pass());
  EXPECT_TRUE(run_suite("determinism", 5, 1).pass());
}

}  // namespace
}  // namespace rscatter
