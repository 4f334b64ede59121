#include "rscatter/scheduler.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <stdexcept>

#include "rscatter/rng.hpp"

namespace rscatter {

namespace {

std::size_t parse_count(const std::string& text, const std::string& what) {
  std::size_t value = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end || value == 0) {
    throw std::invalid_argument(what + " must be a positive integer, got '" + text + "'");
  }
  return value;
}

std::string render_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

SchedulerSpec parse_scheduler_spec(const std::string& text) {
  const auto colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  const bool has_param = colon != std::string::npos;
  const std::string param = has_param ? text.substr(colon + 1) : std::string{};

  SchedulerSpec spec;
  if (kind == "full_synchronous") {
    if (has_param) throw std::invalid_argument("full_synchronous takes no parameter");
    spec.kind = SchedulerKind::full_synchronous;
  } else if (kind == "bernoulli") {
    spec.kind = SchedulerKind::bernoulli;
    if (has_param) {
      std::size_t used = 0;
      try {
        spec.p = std::stod(param, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != param.size() || param.empty()) {
        throw std::invalid_argument("bernoulli probability must be a number, got '" + param + "'");
      }
    }
    if (!(spec.p > 0.0 && spec.p <= 1.0)) {
      throw std::invalid_argument("bernoulli probability must lie in (0, 1]");
    }
  } else if (kind == "round_robin") {
    spec.kind = SchedulerKind::round_robin;
    if (has_param) spec.window = parse_count(param, "round_robin window");
  } else if (kind == "bounded_delay") {
    spec.kind = SchedulerKind::bounded_delay;
    if (!has_param) throw std::invalid_argument("bounded_delay needs a delay, e.g. bounded_delay:4");
    spec.delay = parse_count(param, "bounded_delay delay");
  } else {
    throw std::invalid_argument("unknown scheduler kind '" + kind +
                                "' (expected full_synchronous, bernoulli, round_robin, bounded_delay)");
  }
  return spec;
}

std::string to_string(const SchedulerSpec& spec) {
  switch (spec.kind) {
    case SchedulerKind::full_synchronous:
      return "full_synchronous";
    case SchedulerKind::bernoulli:
      return "bernoulli:" + render_real(spec.p);
    case SchedulerKind::round_robin:
      return "round_robin:" + std::to_string(spec.window);
    case SchedulerKind::bounded_delay:
      return "bounded_delay:" + std::to_string(spec.delay);
  }
  return {};
}

Scheduler::Scheduler(SchedulerSpec spec, std::size_t n) : spec_(spec), n_(n), idle_(n, 0) {
  if (n == 0) throw std::invalid_argument("scheduler needs at least one robot");
}

ActivationSet Scheduler::next_activation(Rng& rng) {
  ActivationSet set;
  switch (spec_.kind) {
    case SchedulerKind::full_synchronous:
      set.resize(n_);
      for (std::size_t i = 0; i < n_; ++i) set[i] = i;
      break;

    case SchedulerKind::bernoulli:
      while (set.empty()) {
        for (std::size_t i = 0; i < n_; ++i) {
          if (rng.bernoulli(spec_.p)) set.push_back(i);
        }
      }
      break;

    case SchedulerKind::round_robin: {
      const std::size_t w = std::min(spec_.window, n_);
      for (std::size_t k = 0; k < w; ++k) set.push_back((instant_ * w + k) % n_);
      std::sort(set.begin(), set.end());
      break;
    }

    case SchedulerKind::bounded_delay: {
      std::vector<bool> forced(n_);
      bool any_forced = false;
      for (std::size_t i = 0; i < n_; ++i) {
        forced[i] = idle_[i] + 1 >= spec_.delay;
        any_forced = any_forced || forced[i];
      }
      do {
        set.clear();
        for (std::size_t i = 0; i < n_; ++i) {
          const bool coin = rng.bernoulli(0.5);
          if (coin || forced[i]) set.push_back(i);
        }
      } while (set.empty() && !any_forced);
      break;
    }
  }

  std::vector<bool> active(n_, false);
  for (auto i : set) active[i] = true;
  for (std::size_t i = 0; i < n_; ++i) idle_[i] = active[i] ? 0 : idle_[i] + 1;
  ++instant_;
  return set;
}

FairnessVerdict audit_fairness(std::span<const ActivationSet> activations, std::size_t n,
                               std::size_t window) {
  if (window == 0) throw std::invalid_argument("fairness window must be positive");
  if (activations.empty()) throw std::invalid_argument("fairness audit needs a non-empty trace");

  std::vector<std::size_t> run(n, 0);
  std::vector<std::size_t> worst(n, 0);
  for (const auto& set : activations) {
    std::vector<bool> active(n, false);
    for (auto i : set) {
      if (i < n) active[i] = true;
    }
    for (std::size_t i = 0; i < n; ++i) {
      run[i] = active[i] ? 0 : run[i] + 1;
      worst[i] = std::max(worst[i], run[i]);
    }
  }

  FairnessVerdict verdict;
  for (std::size_t i = 0; i < n; ++i) {
    if (!verdict.culprit || worst[i] > verdict.max_gap) {
      verdict.max_gap = worst[i];
      verdict.culprit = i;
    }
  }
  if (window > activations.size()) {
    verdict.outcome = FairnessOutcome::inconclusive;
  } else {
    verdict.outcome = verdict.max_gap < window ? FairnessOutcome::pass : FairnessOutcome::fail;
  }
  if (verdict.outcome == FairnessOutcome::pass) verdict.culprit.reset();
  return verdict;
}

const char* to_string(FairnessOutcome outcome) {
  switch (outcome) {
    case FairnessOutcome::pass:
      return "pass";
    case FairnessOutcome::fail:
      return "fail";
    case FairnessOutcome::inconclusive:
      return "inconclusive";
  }
  return "?";
}

}  // namespace rscatter
