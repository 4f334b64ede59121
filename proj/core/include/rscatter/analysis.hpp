#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rscatter/engine.hpp"
#include "rscatter/scheduler.hpp"
#include "rscatter/stats.hpp"
#include "rscatter/trace.hpp"

namespace rscatter {

// ---------------------------------------------------------------------------
// Closure

struct ClosureVerdict {
  bool pass = true;
  std::optional<std::size_t> first_distinct_instant;
  std::optional<std::size_t> violation_instant;
};

/// Finds the first all-distinct instant and fails at the first later instant
/// that carries a strict multiplicity. Instant 0 is the initial configuration.
ClosureVerdict check_closure(std::span<const Configuration> configurations);
ClosureVerdict check_closure(const Trace& trace);

// ---------------------------------------------------------------------------
// Co-located pair bookkeeping

/// What happened to a co-located pair during one instant. The categories
/// partition every instant:
///   both_inactive           Event1
///   lone_active_stays       Event2
///   lone_active_moves       separates
///   both_active_stay        persists (both coins 1)
///   both_active_one_moves   separates
///   both_active_both_move   Event3 candidate; separates unless they land on
///                           the same point (counted in `coincident`)
enum class PairOutcome {
  both_inactive,
  lone_active_stays,
  lone_active_moves,
  both_active_stay,
  both_active_one_moves,
  both_active_both_move,
};
inline constexpr std::size_t kPairOutcomeCount = 6;

PairOutcome classify_pair_instant(bool first_active, bool second_active, bool first_moved, bool second_moved);
const char* to_string(PairOutcome outcome);

struct PairEventTally {
  std::array<std::size_t, kPairOutcomeCount> counts{};
  std::size_t coincident = 0;  // both moved and landed on the same point

  void add(PairOutcome outcome, bool landed_together);
  std::size_t count(PairOutcome outcome) const { return counts[static_cast<std::size_t>(outcome)]; }
  std::size_t total() const;
  /// Instants with at least one of the pair active.
  std::size_t active_instants() const { return total() - count(PairOutcome::both_inactive); }
  /// Active instants after which the pair was still co-located.
  std::size_t persisted_active() const;
  void merge(const PairEventTally& other);
};

/// One trial of a co-located pair running scatter. `instants` is k,
/// `active_instants` is a, `inactive_instants` is na; a + na = k.
struct PairTrial {
  std::size_t instants = 0;
  std::size_t active_instants = 0;
  std::size_t inactive_instants = 0;
  bool separated = false;
  PairEventTally tally;
};

/// Two robots start co-located at the origin (identity frames, sigma 1) and
/// run scatter under `scheduler` until they separate or until
/// `max_active_instants` instants with at least one of them active.
/// `bystanders` extra robots sit on the circle of radius 3 so that instants
/// activating none of the pair can occur.
PairTrial run_pair_trial(const SchedulerSpec& scheduler, std::uint64_t seed, std::size_t max_active_instants,
                         std::size_t bystanders = 0);

struct ConvergenceStats {
  std::size_t trials = 0;
  std::vector<std::size_t> steps_to_all_distinct;
  std::vector<std::size_t> active_pair_instants;
  std::vector<std::size_t> inactive_pair_instants;
};

ConvergenceStats convergence_stats(std::span<const PairTrial> trials);

struct SeparationEstimate {
  std::size_t trials = 0;
  std::size_t separations = 0;
  double rate = 0.0;
  Interval wilson;
  /// Pair still co-located after an active instant.
  double persistence = 0.0;
  /// Pr[lone active robot stays | exactly one active].
  std::optional<double> lone_stay_rate;
  /// Pr[both active and both move] over active instants.
  double both_move_rate = 0.0;
  PairEventTally tally;
};

/// Per-instant separation probability of a co-located pair, conditioned on
/// at least one of the two being active. Each trial observes exactly one such
/// instant; trial i is seeded with splitmix64(seed + i).
SeparationEstimate estimate_pair_separation(const SchedulerSpec& scheduler, std::size_t trials, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Decay of the co-location probability

struct DecayPoint {
  std::size_t active_instants = 0;  // a
  double survival = 0.0;            // fraction still co-located after a active instants
  double bound = 0.0;               // (3/4)^a
  double standard_error = 0.0;
  bool within_bound = true;         // survival <= bound + 3 SE
};

struct DecayCurve {
  std::size_t trials = 0;
  std::vector<DecayPoint> points;
  bool pass() const;
};

/// Survival curve for a in [0, max_a] from trials run with at least max_a
/// active instants of budget.
DecayCurve verify_decay_bound(std::span<const PairTrial> trials, std::size_t max_a);

// ---------------------------------------------------------------------------
// Impossibility of deterministic scattering

struct ImpossibilityVerdict {
  bool colocated_throughout = true;
  std::size_t instants = 0;
  std::size_t colocated_instants = 0;
  std::uint64_t draws = 0;
};

/// Runs n co-located robots with identical identity frames under the fully
/// synchronous scheduler for `steps` instants and reports whether they stayed
/// co-located at every instant. Throws NotDeterministicError if the protocol
/// consumed any random draw.
ImpossibilityVerdict impossibility_demo(ProtocolPtr protocol, std::size_t steps, std::size_t n = 4,
                                        Capabilities caps = {true, true});

/// Five distinct coin-free view functions, the first being the default stub.
std::vector<ProtocolPtr> coin_free_protocols();

// ---------------------------------------------------------------------------
// Gathering

struct GatherTrial {
  bool gathered = false;
  std::size_t steps = 0;
};

struct GatherSummary {
  std::size_t trials = 0;
  std::size_t gathered = 0;
  double mean_steps = 0.0;  // over gathered trials
  std::size_t max_steps = 0;
  double fraction() const { return trials ? static_cast<double>(gathered) / static_cast<double>(trials) : 0.0; }
};

/// Runs each scenario with the `gathered` stop rule.
std::vector<GatherTrial> gather_trials(std::span<const Scenario> batch);
GatherSummary gather_stats(std::span<const GatherTrial> trials);
GatherSummary gather_stats(std::span<const Scenario> batch);

// ---------------------------------------------------------------------------
// Scenario builders shared by the verification campaigns

/// n = 2 at distinct points no farther apart than sigma, full_synchronous.
Scenario pair_gather_scenario(std::uint64_t seed, std::size_t max_steps);
/// SSA_GP with the reference plug-in from a configuration with duplicates.
Scenario ssa_gp_scenario(std::size_t n, std::uint64_t seed, std::size_t max_steps);
/// SSA_PF with the reference plug-in toward `fixed_pattern(n)`.
Scenario ssa_pf_scenario(std::size_t n, std::uint64_t seed, std::size_t max_steps);
/// n points evenly spaced on the circle of radius 3 around (5, 5).
std::vector<Point> fixed_pattern(std::size_t n);

/// Brute-force nearest site; `second_gap` receives the distance from q to the
/// bisector between the nearest and second-nearest sites (infinity for one site).
std::size_t nearest_site(std::span<const Point> sites, Point q, double* second_gap = nullptr);

// ---------------------------------------------------------------------------
// Named verification suites (driven by `rscatter verify`)

struct CriterionResult {
  std::string name;
  bool pass = false;
  std::string measured;
  std::string expected;
};

struct SuiteReport {
  std::string suite;
  std::vector<CriterionResult> criteria;
  bool pass() const;
};

/// Suite names accepted by run_suite.
std::span<const char* const> suite_names();

/// `trials` of 0 selects the suite's default size. Throws std::invalid_argument
/// for an unknown suite.
SuiteReport run_suite(const std::string& name, std::size_t trials, std::uint64_t seed);

}  // namespace rscatter
