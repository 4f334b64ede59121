#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rscatter/geometry.hpp"
#include "rscatter/rng.hpp"
#include "rscatter/world.hpp"

namespace rscatter {

enum class Coin : int { zero = 0, one = 1 };

inline Coin draw_coin(Rng& rng) { return rng.coin() == 0 ? Coin::zero : Coin::one; }

/// A robot program. Decisions are a function of the view, the capabilities,
/// the robot's travel bound (in its own length unit) and coin draws; nothing
/// else is reachable from here, which is how obliviousness and anonymity are
/// enforced.
///
/// Evaluation is split in two so the engine can draw every active robot's
/// coin before any sampling draw: `wants_coin` must be a pure function of the
/// view, and `decide` receives a coin exactly when it returned true.
class Protocol {
 public:
  virtual ~Protocol() = default;

  virtual std::string_view name() const = 0;
  virtual bool wants_coin(const View& view, const Capabilities& caps) const = 0;
  /// Returns the intended target in the observer's local frame. The engine
  /// applies the travel cap.
  virtual Point decide(const View& view, const Capabilities& caps, double sigma,
                       std::optional<Coin> coin, Rng& rng) const = 0;
};

using ProtocolPtr = std::shared_ptr<const Protocol>;

/// Draws the coin when the protocol asks for one, then decides.
Point evaluate(const Protocol& protocol, const View& view, const Capabilities& caps, double sigma,
               Rng& rng);

// Scatter: coin 1 stays put, coin 0 moves to a fresh point of the robot's own
// open Voronoi cell (co-located robots share one site and hence one cell).
Point scatter_step(const View& view, double sigma, Coin coin, Rng& rng);
Point scatter_step(const View& view, double sigma, Rng& rng);

/// Pattern-formation composition: scatter while any strict multiplicity is
/// visible, otherwise defer to `apf`.
Point ssa_pf_step(const View& view, const Capabilities& caps, double sigma, Rng& rng,
                  const Protocol& apf);

/// Gathering composition (n >= 3): scatter while at least two strict
/// multiplicities are visible, otherwise defer to `agp`.
Point ssa_gp_step(const View& view, const Capabilities& caps, double sigma, Rng& rng,
                  const Protocol& agp);

/// Two-robot randomized gathering: coin 0 targets the other robot, coin 1 stays.
Point pair_gather_step(const View& view, double sigma, Coin coin);
Point pair_gather_step(const View& view, double sigma, Rng& rng);

/// Reference gathering plug-in (shared frame, multiplicity detection, n >= 3).
///
/// With no strict multiplicity, the robot at the lexicographically second
/// smallest position walks toward the smallest. With exactly one strict
/// multiplicity m, the robot farthest from m (lexicographic tie-break) walks
/// toward m. Only one robot is ever designated, so no second multiplicity is
/// created by coincidence; a step that would land exactly on a third robot is
/// shortened.
Point reference_agp_step(const View& view, const Capabilities& caps, double sigma);

/// Reference pattern-formation plug-in (shared frame, distinct positions).
///
/// Robots standing on a pattern point are settled. The lexicographically
/// smallest unsettled robot walks toward the lexicographically smallest
/// unoccupied pattern point; everyone else stays. The walk is capped at
/// sigma and shortened if it would land exactly on another robot.
Point reference_apf_step(const View& view, const Capabilities& caps, double sigma,
                         std::span<const Point> pattern);

/// Coin-free placeholder used by the impossibility harness: one unit along
/// the local +x axis.
Point deterministic_scatter_stub(const View& view);

// Protocol objects for the engine.

class ScatterProtocol final : public Protocol {
 public:
  std::string_view name() const override { return "scatter"; }
  bool wants_coin(const View&, const Capabilities&) const override { return true; }
  Point decide(const View& view, const Capabilities& caps, double sigma, std::optional<Coin> coin,
               Rng& rng) const override;
};

class SsaPfProtocol final : public Protocol {
 public:
  explicit SsaPfProtocol(ProtocolPtr apf);
  std::string_view name() const override { return "ssa_pf"; }
  bool wants_coin(const View& view, const Capabilities& caps) const override;
  Point decide(const View& view, const Capabilities& caps, double sigma, std::optional<Coin> coin,
               Rng& rng) const override;

  /// True when the scatter branch is taken.
  static bool scatter_branch(const View& view, const Capabilities& caps);

 private:
  ProtocolPtr apf_;
};

class SsaGpProtocol final : public Protocol {
 public:
  explicit SsaGpProtocol(ProtocolPtr agp);
  std::string_view name() const override { return "ssa_gp"; }
  bool wants_coin(const View& view, const Capabilities& caps) const override;
  Point decide(const View& view, const Capabilities& caps, double sigma, std::optional<Coin> coin,
               Rng& rng) const override;

  static bool scatter_branch(const View& view, const Capabilities& caps);

 private:
  ProtocolPtr agp_;
};

class PairGatherProtocol final : public Protocol {
 public:
  std::string_view name() const override { return "pair_gather"; }
  bool wants_coin(const View&, const Capabilities&) const override { return true; }
  Point decide(const View& view, const Capabilities& caps, double sigma, std::optional<Coin> coin,
               Rng& rng) const override;
};

class ReferenceAgpProtocol final : public Protocol {
 public:
  std::string_view name() const override { return "reference_agp"; }
  bool wants_coin(const View&, const Capabilities&) const override { return false; }
  Point decide(const View& view, const Capabilities& caps, double sigma, std::optional<Coin> coin,
               Rng& rng) const override;
};

class ReferenceApfProtocol final : public Protocol {
 public:
  explicit ReferenceApfProtocol(std::vector<Point> pattern);
  std::string_view name() const override { return "reference_apf"; }
  bool wants_coin(const View&, const Capabilities&) const override { return false; }
  Point decide(const View& view, const Capabilities& caps, double sigma, std::optional<Coin> coin,
               Rng& rng) const override;
  const std::vector<Point>& pattern() const { return pattern_; }

 private:
  std::vector<Point> pattern_;
};

/// Any coin-free function of the view, packaged as a protocol.
class ViewFunctionProtocol final : public Protocol {
 public:
  using Fn = std::function<Point(const View&)>;
  ViewFunctionProtocol(std::string name, Fn fn);
  std::string_view name() const override { return name_; }
  bool wants_coin(const View&, const Capabilities&) const override { return false; }
  Point decide(const View& view, const Capabilities& caps, double sigma, std::optional<Coin> coin,
               Rng& rng) const override;

 private:
  std::string name_;
  Fn fn_;
};

/// The default stub as a protocol object.
ProtocolPtr make_deterministic_stub();

}  // namespace rscatter

