#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace rscatter {

class Rng;

/// Robot ordinals active at one instant, ascending, never empty.
using ActivationSet = std::vector<std::size_t>;

enum class SchedulerKind { full_synchronous, bernoulli, round_robin, bounded_delay };

/// Parameters of a scheduler. Textual form: `full_synchronous`,
/// `bernoulli[:<p>]` (p defaults to 0.5), `round_robin[:<window>]`, `bounded_delay:<D>`.
/// A round_robin window of w activates w consecutive ordinals, wrapping modulo n,
/// and the next block starts where the previous one ended.
struct SchedulerSpec {
  SchedulerKind kind = SchedulerKind::full_synchronous;
  double p = 0.5;          // bernoulli inclusion probability
  std::size_t window = 1;  // round_robin block size
  std::size_t delay = 1;   // bounded_delay D

  friend bool operator==(const SchedulerSpec&, const SchedulerSpec&) = default;
};

/// Throws std::invalid_argument with a readable message on bad input.
SchedulerSpec parse_scheduler_spec(const std::string& text);
std::string to_string(const SchedulerSpec& spec);

/// Stateful activation generator. Decisions depend only on its own counters
/// and the random source, never on robot positions or coin outcomes.
///
/// bounded_delay(D) includes each robot independently with probability 1/2
/// and forces in any robot that has been idle for D - 1 instants, so every
/// robot is active at least once in every D consecutive instants.
/// bernoulli and bounded_delay redraw the whole random part when it comes out
/// empty (and nothing was forced).
class Scheduler {
 public:
  Scheduler(SchedulerSpec spec, std::size_t n);

  ActivationSet next_activation(Rng& rng);

  const SchedulerSpec& spec() const { return spec_; }
  std::size_t population() const { return n_; }

 private:
  SchedulerSpec spec_;
  std::size_t n_;
  std::size_t instant_ = 0;
  std::vector<std::size_t> idle_;
};

/// Functional form of Scheduler::next_activation for callers that own the state.
inline ActivationSet next_activation(Scheduler& sched, Rng& rng) { return sched.next_activation(rng); }

enum class FairnessOutcome { pass, fail, inconclusive };

struct FairnessVerdict {
  FairnessOutcome outcome = FairnessOutcome::inconclusive;
  /// Longest run of consecutive instants some robot spent inactive.
  std::size_t max_gap = 0;
  /// Robot with the longest gap (lowest ordinal on ties).
  std::optional<std::size_t> culprit;
};

/// Bounded-gap surrogate for fairness: passes iff every robot is active at
/// least once in every `window` consecutive instants of the finite trace.
/// A window longer than the trace yields `inconclusive`.
FairnessVerdict audit_fairness(std::span<const ActivationSet> activations, std::size_t n,
                               std::size_t window);

const char* to_string(FairnessOutcome outcome);

}  // namespace rscatter
