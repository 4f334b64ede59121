#include "rscatter/protocols.hpp"

#include <algorithm>
#include <cmath>

#include "rscatter/errors.hpp"

namespace rscatter {

namespace {

std::size_t self_index(const View& view) {
  auto it = std::find(view.points.begin(), view.points.end(), view.self);
  if (it == view.points.end()) throw ContractError("observer position missing from its own view");
  return static_cast<std::size_t>(it - view.points.begin());
}

bool contains(std::span<const Point> points, Point p) {
  return std::find(points.begin(), points.end(), p) != points.end();
}

// Straight walk from `self` toward `target`, at most `sigma` long. A landing
// point that coincides with one of `avoid` is pulled back toward `self`.
Point approach(Point self, Point target, double sigma, std::span<const Point> avoid) {
  const double d = distance(self, target);
  if (d <= sigma) return target;
  double scale = sigma / d;
  auto at = [&] { return self + (target - self) * scale; };
  Point p = at();
  while (distance(self, p) > sigma) {
    scale = std::nextafter(scale, 0.0);
    p = at();
  }
  for (int i = 0; i < 64 && contains(avoid, p); ++i) {
    scale /= 2.0;
    p = at();
  }
  return p;
}

void require_shared_frame_and_counts(const View& view, const Capabilities& caps, const char* who) {
  if (!caps.localization_knowledge) {
    throw CapabilityError(std::string(who) + " needs localization knowledge");
  }
  if (!caps.multiplicity_detection || !view.counts) {
    throw CapabilityError(std::string(who) + " needs multiplicity detection");
  }
}

std::size_t count_multiplicities(const View& view, const Capabilities& caps, const char* who) {
  if (!caps.multiplicity_detection || !view.counts) {
    throw CapabilityError(std::string(who) + " guard needs multiplicity detection");
  }
  return static_cast<std::size_t>(
      std::count_if(view.counts->begin(), view.counts->end(), [](int c) { return c >= 2; }));
}

Coin require_coin(std::optional<Coin> coin, const char* who) {
  if (!coin) throw ContractError(std::string(who) + " decided without a coin");
  return *coin;
}

}  // namespace

Point evaluate(const Protocol& protocol, const View& view, const Capabilities& caps, double sigma,
               Rng& rng) {
  std::optional<Coin> coin;
  if (protocol.wants_coin(view, caps)) coin = draw_coin(rng);
  return protocol.decide(view, caps, sigma, coin, rng);
}

Point scatter_step(const View& view, double sigma, Coin coin, Rng& rng) {
  if (view.points.empty()) throw ContractError("scatter_step: empty view");
  const std::size_t me = self_index(view);
  if (coin == Coin::one) return view.self;
  const VoronoiCell cell = compute_cell(view.points, me);
  return sample_in_cell(cell, view.self, sigma, rng);
}

Point scatter_step(const View& view, double sigma, Rng& rng) {
  return scatter_step(view, sigma, draw_coin(rng), rng);
}

Point ssa_pf_step(const View& view, const Capabilities& caps, double sigma, Rng& rng,
                  const Protocol& apf) {
  if (SsaPfProtocol::scatter_branch(view, caps)) return scatter_step(view, sigma, rng);
  return evaluate(apf, view, caps, sigma, rng);
}

Point ssa_gp_step(const View& view, const Capabilities& caps, double sigma, Rng& rng,
                  const Protocol& agp) {
  if (SsaGpProtocol::scatter_branch(view, caps)) return scatter_step(view, sigma, rng);
  return evaluate(agp, view, caps, sigma, rng);
}

Point pair_gather_step(const View& view, double /*sigma*/, Coin coin) {
  if (view.points.size() > 2 || view.population() > 2) {
    throw ContractError("pair_gather_step is defined for exactly two robots");
  }
  self_index(view);
  if (coin == Coin::one || view.points.size() == 1) return view.self;
  return view.points[0] == view.self ? view.points[1] : view.points[0];
}

Point pair_gather_step(const View& view, double sigma, Rng& rng) {
  return pair_gather_step(view, sigma, draw_coin(rng));
}

Point reference_agp_step(const View& view, const Capabilities& caps, double sigma) {
  require_shared_frame_and_counts(view, caps, "reference_agp");
  if (view.population() < 3) throw ContractError("reference_agp needs n >= 3");
  self_index(view);

  const auto multis = view.strict_multiplicities();
  if (multis.size() > 1) {
    throw ContractError("reference_agp called with more than one strict multiplicity");
  }
  const auto& pts = view.points;  // lexicographically sorted

  if (multis.empty()) {
    const Point smallest = pts[0];
    if (view.self != pts[1]) return view.self;
    std::vector<Point> others(pts.begin() + 2, pts.end());
    return approach(view.self, smallest, sigma, others);
  }

  const Point m = multis.front();
  std::optional<Point> farthest;
  double best = -1.0;
  for (Point p : pts) {
    if (p == m) continue;
    const double d = distance(p, m);
    if (d > best) {
      best = d;
      farthest = p;
    }
  }
  if (!farthest || view.self != *farthest) return view.self;

  std::vector<Point> others;
  for (Point p : pts) {
    if (p != m && p != view.self) others.push_back(p);
  }
  return approach(view.self, m, sigma, others);
}

Point reference_apf_step(const View& view, const Capabilities& caps, double sigma,
                         std::span<const Point> pattern) {
  require_shared_frame_and_counts(view, caps, "reference_apf");
  if (std::any_of(view.counts->begin(), view.counts->end(), [](int c) { return c != 1; })) {
    throw ContractError("reference_apf needs pairwise distinct positions");
  }
  if (pattern.size() != view.points.size()) {
    throw ContractError("reference_apf pattern size differs from the population");
  }
  self_index(view);

  std::vector<Point> free_targets;
  for (Point t : pattern) {
    if (!contains(view.points, t)) free_targets.push_back(t);
  }
  std::vector<Point> unsettled;
  for (Point p : view.points) {
    if (!contains(pattern, p)) unsettled.push_back(p);
  }
  if (unsettled.empty() || free_targets.empty()) return view.self;

  std::sort(free_targets.begin(), free_targets.end(), lex_less);
  const Point mover = unsettled.front();  // view points are already sorted
  if (view.self != mover) return view.self;

  std::vector<Point> others;
  for (Point p : view.points) {
    if (p != view.self) others.push_back(p);
  }
  return approach(view.self, free_targets.front(), sigma, others);
}

Point deterministic_scatter_stub(const View& view) { return view.self + Point{1.0, 0.0}; }

Point ScatterProtocol::decide(const View& view, const Capabilities&, double sigma,
                              std::optional<Coin> coin, Rng& rng) const {
  return scatter_step(view, sigma, require_coin(coin, "scatter"), rng);
}

SsaPfProtocol::SsaPfProtocol(ProtocolPtr apf) : apf_(std::move(apf)) {
  if (!apf_) throw std::invalid_argument("ssa_pf needs a pattern-formation plug-in");
}

bool SsaPfProtocol::scatter_branch(const View& view, const Capabilities& caps) {
  return count_multiplicities(view, caps, "ssa_pf") >= 1;
}

bool SsaPfProtocol::wants_coin(const View& view, const Capabilities& caps) const {
  return scatter_branch(view, caps) || apf_->wants_coin(view, caps);
}

Point SsaPfProtocol::decide(const View& view, const Capabilities& caps, double sigma,
                            std::optional<Coin> coin, Rng& rng) const {
  if (scatter_branch(view, caps)) return scatter_step(view, sigma, require_coin(coin, "ssa_pf"), rng);
  return apf_->decide(view, caps, sigma, coin, rng);
}

SsaGpProtocol::SsaGpProtocol(ProtocolPtr agp) : agp_(std::move(agp)) {
  if (!agp_) throw std::invalid_argument("ssa_gp needs a gathering plug-in");
}

bool SsaGpProtocol::scatter_branch(const View& view, const Capabilities& caps) {
  const std::size_t multis = count_multiplicities(view, caps, "ssa_gp");
  if (view.population() < 3) throw ContractError("ssa_gp needs n >= 3");
  return multis >= 2;
}

bool SsaGpProtocol::wants_coin(const View& view, const Capabilities& caps) const {
  return scatter_branch(view, caps) || agp_->wants_coin(view, caps);
}

Point SsaGpProtocol::decide(const View& view, const Capabilities& caps, double sigma,
                            std::optional<Coin> coin, Rng& rng) const {
  if (scatter_branch(view, caps)) return scatter_step(view, sigma, require_coin(coin, "ssa_gp"), rng);
  return agp_->decide(view, caps, sigma, coin, rng);
}

Point PairGatherProtocol::decide(const View& view, const Capabilities&, double sigma,
                                 std::optional<Coin> coin, Rng&) const {
  return pair_gather_step(view, sigma, require_coin(coin, "pair_gather"));
}

Point ReferenceAgpProtocol::decide(const View& view, const Capabilities& caps, double sigma,
                                   std::optional<Coin>, Rng&) const {
  return reference_agp_step(view, caps, sigma);
}

ReferenceApfProtocol::ReferenceApfProtocol(std::vector<Point> pattern) : pattern_(std::move(pattern)) {
  std::vector<Point> sorted = pattern_;
  std::sort(sorted.begin(), sorted.end(), lex_less);
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw std::invalid_argument("pattern points must be pairwise distinct");
  }
}

Point ReferenceApfProtocol::decide(const View& view, const Capabilities& caps, double sigma,
                                   std::optional<Coin>, Rng&) const {
  return reference_apf_step(view, caps, sigma, pattern_);
}

ViewFunctionProtocol::ViewFunctionProtocol(std::string name, Fn fn)
    : name_(std::move(name)), fn_(std::move(fn)) {}

Point ViewFunctionProtocol::decide(const View& view, const Capabilities&, double,
                                   std::optional<Coin>, Rng&) const {
  return fn_(view);
}

ProtocolPtr make_deterministic_stub() {
  return std::make_shared<ViewFunctionProtocol>("deterministic_stub", deterministic_scatter_stub);
}

}  // namespace rscatter
