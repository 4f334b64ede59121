#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "rscatter/geometry.hpp"
#include "rscatter/protocols.hpp"
#include "rscatter/scheduler.hpp"
#include "rscatter/world.hpp"

namespace rscatter {

enum class FrameMode { identity, random };

enum class PositionMode { explicit_list, random, random_with_duplicates, colocated };

/// How the initial configuration is obtained. Generated modes draw from the
/// scenario's random source before the first instant.
struct InitialPositions {
  PositionMode mode = PositionMode::explicit_list;
  std::vector<Point> points;  // explicit_list
  double extent = 10.0;       // random modes: square [0, extent]^2
  Point at;                   // colocated

  friend bool operator==(const InitialPositions&, const InitialPositions&) = default;
};

enum class ProtocolKind {
  scatter,
  ssa_pf,
  ssa_gp,
  pair_gather,
  deterministic_stub,
  reference_agp,
  reference_apf,
};

struct ProtocolSpec {
  ProtocolKind kind = ProtocolKind::scatter;
  std::string plugin = "reference";  // A_PF / A_GP slot for ssa_pf / ssa_gp
  std::vector<Point> pattern;        // global coordinates

  friend bool operator==(const ProtocolSpec&, const ProtocolSpec&) = default;
};

enum class StopRule { none, no_multiplicity, gathered, pattern_reached };

struct Scenario {
  std::size_t count = 1;
  InitialPositions positions;
  std::vector<double> sigmas{1.0};  // one value (uniform) or one per robot
  FrameMode frames = FrameMode::identity;
  Capabilities caps;
  SchedulerSpec scheduler;
  ProtocolSpec protocol;
  std::uint64_t seed = 0;
  std::size_t max_steps = 1000;
  StopRule stop_rule = StopRule::none;

  double sigma_of(std::size_t robot) const { return sigmas.size() == 1 ? sigmas[0] : sigmas.at(robot); }

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// Throws ValidationError naming the first offending field.
void validate(const Scenario& scenario);

/// Builds the protocol object the scenario asks for.
ProtocolPtr make_protocol(const ProtocolSpec& spec);

/// Resolves the initial configuration, drawing from `rng` for generated modes:
///   random                 each robot uniform in [0, extent]^2 (x then y)
///   random_with_duplicates robot 0 fresh; robot i copies robot floor(u * i)
///                          when its coin is 0, else fresh; if nothing
///                          coincided and n >= 2, the last robot copies robot 0
Configuration initial_configuration(const Scenario& scenario, Rng& rng);

/// Per-robot frames. Random frames draw, per robot in ordinal order: origin
/// uniform in [-10, 10]^2, rotation uniform in [0, 2 pi), reflect coin, unit
/// uniform in [0.5, 2].
std::vector<Robot> make_robots(const Scenario& scenario, Rng& rng);

/// Parses the INI-style scenario format. Errors carry the line number.
Scenario parse_scenario(const std::string& text);

/// Canonical rendering: every key present, reals at 17 significant digits.
/// parse_scenario(write_scenario(s)) == s.
std::string write_scenario(const Scenario& scenario);

/// FNV-1a 64 over the canonical text.
std::uint64_t scenario_digest(const std::string& canonical_text);

std::string to_string(ProtocolKind kind);
std::string to_string(StopRule rule);
std::string to_string(PositionMode mode);
std::string to_string(FrameMode mode);

/// `%.17g`, the rendering used by every text format in the project.
std::string format_real(double value);

}  // namespace rscatter
