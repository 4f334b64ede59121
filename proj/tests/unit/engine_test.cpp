#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "rscatter/engine.hpp"
#include "rscatter/errors.hpp"

namespace rscatter {
namespace {

std::vector<Robot> identity_robots(std::size_t n, double sigma) {
  std::vector<Robot> robots(n);
  for (std::size_t i = 0; i < n; ++i) robots[i] = {i, sigma, {}};
  return robots;
}

Scenario scatter_scenario(std::size_t n, SchedulerSpec sched, std::uint64_t seed) {
  Scenario s;
  s.count = n;
  s.positions.mode = PositionMode::random_with_duplicates;
  s.positions.extent = 3.0;
  s.sigmas = {0.75};
  s.frames = FrameMode::random;
  s.scheduler = sched;
  s.seed = seed;
  s.max_steps = 100;
  return s;
}

TEST(CappedMove, Examples) {
  EXPECT_EQ(capped_move({0, 0}, {5, 0}, 2.0), (Point{2, 0}));
  EXPECT_EQ(capped_move({1, 1}, {1.5, 1.25}, 2.0), (Point{1.5, 1.25}));
  EXPECT_EQ(capped_move({1, 1}, {1, 1}, 0.5), (Point{1, 1}));
}

TEST(CappedMove, NeverExceedsSigmaAndStaysOnSegment) {
  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> u(-100, 100);
  for (int i = 0; i < 100000; ++i) {
    const Point a{u(gen), u(gen)};
    const Point b{u(gen), u(gen)};
    const double sigma = std::abs(u(gen)) / 10 + 1e-9;
    const Point p = capped_move(a, b, sigma);
    ASSERT_LE(distance(a, p), sigma);
    if (distance(a, b) <= sigma) {
      ASSERT_EQ(p, b);
    } else {
      // Collinear with the segment up to rounding.
      ASSERT_NEAR(cross(b - a, p - a) / distance(a, b), 0.0, 1e-9);
      ASSERT_GT(dot(b - a, p - a), 0.0);
    }
  }
}

TEST(Step, InactiveRobotsKeepTheirBits) {
  const Configuration c{{{-0.0, 1.0}, {0.3, 0.3}, {2, 2}}};
  const auto robots = identity_robots(3, 1.0);
  ScatterProtocol scatter;
  Rng rng(1);
  const auto r = step(c, {1}, robots, scatter, {}, rng);
  EXPECT_TRUE(std::signbit(r.next.positions[0].x));
  EXPECT_EQ(r.next.positions[0], c.positions[0]);
  EXPECT_EQ(r.next.positions[2], c.positions[2]);
  EXPECT_EQ(r.outcome.activated_count, 1u);
  EXPECT_LE(r.outcome.moved_count, 1u);
}

TEST(Step, TravelCapAlongTheSegment) {
  const Configuration c{{{0, 0}, {9, 9}}};
  const auto robots = identity_robots(2, 2.0);
  ViewFunctionProtocol east("east", [](const View& v) { return v.self + Point{5, 0}; });
  Rng rng(1);
  const auto r = step(c, {0}, robots, east, {}, rng);
  EXPECT_EQ(r.next.positions[0], (Point{2, 0}));
  EXPECT_EQ(r.decisions[0].target, (Point{5, 0}));
}

TEST(Step, SigmaIsMeasuredInTheRobotsOwnUnit) {
  const Configuration c{{{0, 0}}};
  std::vector<Robot> robots{{0, 1.0, LocalFrame{{0, 0}, 0.0, false, 2.0}}};
  ViewFunctionProtocol far("far", [](const View& v) { return v.self + Point{10, 0}; });
  Rng rng(1);
  const auto r = step(c, {0}, robots, far, {}, rng);
  EXPECT_LE(distance(r.next.positions[0], {0, 0}), 1.0);
  EXPECT_NEAR(r.next.positions[0].x, 1.0, 1e-12);
}

TEST(Step, RejectsBadActivation) {
  const Configuration c{{{0, 0}}};
  const auto robots = identity_robots(1, 1.0);
  ScatterProtocol scatter;
  Rng rng(1);
  EXPECT_THROW(step(c, {}, robots, scatter, {}, rng), ContractError);
  EXPECT_THROW(step(c, {3}, robots, scatter, {}, rng), ContractError);
}

TEST(Step, SynchronousEvaluationIgnoresOrdinalOrder) {
  // A coin-free protocol reading the pre-step configuration: relabelling the
  // robots relabels the result and nothing else.
  ViewFunctionProtocol toward_centroid("centroid", [](const View& v) {
    Point c{};
    for (Point p : v.points) c = c + p;
    return c * (1.0 / double(v.points.size()));
  });
  std::mt19937_64 gen(4);
  std::uniform_real_distribution<double> u(0, 5);
  for (int t = 0; t < 200; ++t) {
    Configuration c;
    for (int i = 0; i < 5; ++i) c.positions.push_back({u(gen), u(gen)});
    std::vector<std::size_t> perm(5);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), gen);
    Configuration pc;  // pc[k] = c[perm[k]]
    for (auto k : perm) pc.positions.push_back(c.positions[k]);
    const auto robots = identity_robots(5, 1.0);
    Rng r1(1), r2(1);
    const auto a = step(c, {0, 1, 2, 3, 4}, robots, toward_centroid, {}, r1);
    const auto b = step(pc, {0, 1, 2, 3, 4}, robots, toward_centroid, {}, r2);
    for (std::size_t k = 0; k < 5; ++k) ASSERT_EQ(b.next.positions[k], a.next.positions[perm[k]]);
  }
}

TEST(Step, TargetsNamingAnObservedPointLandExactly) {
  // Under a random frame the round trip through local coordinates is inexact;
  // a target equal to a view point must still land on that robot bit for bit.
  const Configuration c{{{0.1, 0.7}, {0.35, 0.9}}};
  std::vector<Robot> robots{{0, 1.0, LocalFrame{{3, -2}, 1.234, true, 0.77}}, {1, 1.0, LocalFrame{}}};
  PairGatherProtocol gather;
  for (std::uint64_t seed = 0; seed < 64; ++seed) {
    Rng rng(seed);
    const auto r = step(c, {0}, robots, gather, {}, rng);
    if (r.decisions[0].coin == Coin::zero) {
      EXPECT_EQ(r.next.positions[0], c.positions[1]);
      return;
    }
  }
  FAIL() << "no coin 0 in 64 seeds";
}

TEST(Run, StopsAtInstantZeroWhenAlreadyDistinct) {
  Scenario s;
  s.count = 3;
  s.positions.points = {{0, 0}, {1, 0}, {0, 1}};
  s.caps.multiplicity_detection = true;
  s.stop_rule = StopRule::no_multiplicity;
  const Trace t = run(s);
  EXPECT_TRUE(t.records.empty());
  EXPECT_EQ(t.status, RunStatus::stopped);
}

TEST(Run, ValidatesBeforeRunning) {
  Scenario s;
  s.count = 2;
  s.positions.points = {{0, 0}};
  EXPECT_THROW(run(s), ValidationError);
}

TEST(Run, SameSeedSameBytes) {
  const Scenario s = scatter_scenario(5, {SchedulerKind::bounded_delay, 0.5, 1, 2}, 9);
  EXPECT_EQ(write_trace(run(s)), write_trace(run(s)));
  Scenario other = s;
  other.seed = 10;
  EXPECT_NE(write_trace(run(s)), write_trace(run(other)));
}

TEST(Run, MovementCapHoldsEverywhere) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    Scenario s = scatter_scenario(4, {SchedulerKind::bernoulli, 0.5, 1, 1}, seed);
    s.sigmas = {0.1, 0.5, 1.0, 2.0};
    const Trace t = run(s);
    for (std::size_t k = 0; k < t.records.size(); ++k) {
      const auto& before = t.configuration_at(k);
      const auto& after = t.records[k].positions;
      for (std::size_t i = 0; i < 4; ++i) ASSERT_LE(distance(before.positions[i], after.positions[i]), s.sigmas[i]);
    }
  }
}

TEST(Run, RecordCountWithinBudget) {
  const Trace t = run(scatter_scenario(3, {}, 1));
  EXPECT_EQ(t.records.size(), 100u);
  EXPECT_EQ(t.status, RunStatus::budget_exhausted);
}

TEST(Run, IndependentRngDisciplineOracle) {
  // pair_gather, full_synchronous, identity frames: the scheduler draws
  // nothing and each instant consumes exactly one coin per robot, robot 0
  // first. Re-derive the whole run from a raw mt19937_64.
  Scenario s;
  s.count = 2;
  s.positions.points = {{0, 0}, {0.5, 0.5}};
  s.sigmas = {1.0};
  s.protocol.kind = ProtocolKind::pair_gather;
  s.stop_rule = StopRule::gathered;
  s.max_steps = 50;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    s.seed = seed;
    const Trace t = run(s);
    std::mt19937_64 raw(seed);
    Point a{0, 0}, b{0.5, 0.5};
    std::size_t k = 0;
    while (!(a == b) && k < 50) {
      const int c0 = static_cast<int>(raw() >> 63);
      const int c1 = static_cast<int>(raw() >> 63);
      const Point na = c0 == 0 ? b : a;
      const Point nb = c1 == 0 ? a : b;
      ASSERT_LT(k, t.records.size());
      ASSERT_EQ(t.records[k].coins[0], c0 == 0 ? Coin::zero : Coin::one);
      ASSERT_EQ(t.records[k].coins[1], c1 == 0 ? Coin::zero : Coin::one);
      a = na;
      b = nb;
      ASSERT_EQ(t.records[k].positions.positions[0], a);
      ASSERT_EQ(t.records[k].positions.positions[1], b);
      ++k;
    }
    EXPECT_EQ(t.records.size(), k);
  }
}

TEST(Replay, FreshTraceIsIdentical) {
  const Trace t = run(scatter_scenario(4, {SchedulerKind::round_robin, 0.5, 1, 1}, 2));
  const auto v = replay(t);
  EXPECT_TRUE(v.identical) << v.detail;
}

TEST(Replay, PerturbedCoordinateIsLocated) {
  Trace t = run(scatter_scenario(4, {SchedulerKind::full_synchronous}, 3));
  auto& p = t.records[7].positions.positions[2];
  p.x = std::nextafter(p.x, 1e9);
  const auto v = replay(t);
  EXPECT_FALSE(v.identical);
  ASSERT_TRUE(v.divergence_instant.has_value());
  EXPECT_EQ(*v.divergence_instant, 7u);
}

TEST(Replay, SignOfZeroMatters) {
  Scenario s;
  s.count = 2;
  s.positions.points = {{0.0, 1.0}, {1.0, 1.0}};
  s.protocol.kind = ProtocolKind::deterministic_stub;
  s.max_steps = 2;
  Trace t = run(s);
  t.initial.positions[0].x = -0.0;
  EXPECT_FALSE(replay(t).identical);
}

TEST(Replay, RefusesDigestMismatch) {
  Trace t = run(scatter_scenario(3, {}, 4));
  t.digest ^= 1;
  EXPECT_THROW(replay(t), DigestMismatchError);
  Trace u = run(scatter_scenario(3, {}, 4));
  u.seed += 1;
  EXPECT_THROW(replay(u), DigestMismatchError);
}

TEST(Replay, TruncatedTraceIsReported) {
  Trace t = run(scatter_scenario(3, {}, 5));
  t.records.pop_back();
  EXPECT_FALSE(replay(t).identical);
}

TEST(Simulation, CustomProtocolOverridesScenario) {
  Scenario s;
  s.count = 3;
  s.positions.mode = PositionMode::colocated;
  s.protocol.kind = ProtocolKind::deterministic_stub;
  Simulation sim(s, make_deterministic_stub());
  sim.advance();
  EXPECT_EQ(sim.configuration().positions, std::vector<Point>(3, Point{1, 0}));
  EXPECT_EQ(sim.instant(), 1u);
}

}  // namespace
}  // namespace rscatter
