#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "rscatter/geometry.hpp"

namespace rscatter {

/// A robot's private coordinate system: local = reflect(R(rotation) * (q - origin) / unit),
/// where reflect negates the local y axis when set.
struct LocalFrame {
  Point origin;
  double rotation = 0.0;
  bool reflect = false;
  double unit = 1.0;

  static LocalFrame identity() { return {}; }
  bool is_identity() const {
    return origin == Point{} && rotation == 0.0 && !reflect && unit == 1.0;
  }

  friend bool operator==(const LocalFrame&, const LocalFrame&) = default;
};

Point to_local(const LocalFrame& frame, Point global);
Point to_global(const LocalFrame& frame, Point local);

struct Capabilities {
  bool multiplicity_detection = false;
  bool localization_knowledge = false;

  friend bool operator==(const Capabilities&, const Capabilities&) = default;
};

/// `index` is bookkeeping for traces and fairness accounting; it never reaches a protocol.
struct Robot {
  std::size_t index = 0;
  double sigma = 1.0;
  LocalFrame frame;
};

struct Configuration {
  std::vector<Point> positions;

  std::size_t size() const { return positions.size(); }
  friend bool operator==(const Configuration&, const Configuration&) = default;
};

/// What one robot perceives. Points are in the observer's frame and sorted
/// lexicographically, so nothing about robot ordinals leaks through order.
/// Without multiplicity detection `counts` is empty and duplicates collapse.
struct View {
  std::vector<Point> points;
  std::optional<std::vector<int>> counts;
  Point self;

  /// Robot population when counts are known, else the number of occupied points.
  std::size_t population() const;
  /// Points with count >= 2; empty when counts are unavailable.
  std::vector<Point> strict_multiplicities() const;
};

/// Builds `observer`'s view of `config`. With localization knowledge the
/// observer's frame is replaced by the shared identity frame.
View build_view(const Configuration& config, const Robot& observer, const Capabilities& caps);

/// The frame a robot actually perceives through.
inline LocalFrame effective_frame(const Robot& robot, const Capabilities& caps) {
  return caps.localization_knowledge ? LocalFrame::identity() : robot.frame;
}

/// Positions shared by at least two robots (exact equality), sorted lexicographically.
std::vector<std::pair<Point, int>> multiplicity_points(const Configuration& config);

bool all_distinct(const Configuration& config);

namespace detail {

/// View plus, for each view point, the ordinal of one robot standing there.
/// Engine-internal: lets a target that names an observed point be mapped back
/// to that point's exact global coordinates.
struct SourcedView {
  View view;
  std::vector<std::size_t> sources;
};

SourcedView build_sourced_view(const Configuration& config, const Robot& observer,
                               const Capabilities& caps);

}  // namespace detail

}  // namespace rscatter
