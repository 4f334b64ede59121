#include "rscatter/world.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace rscatter {

Point to_local(const LocalFrame& frame, Point global) {
  if (frame.is_identity()) return global;
  const Point d = (global - frame.origin) * (1.0 / frame.unit);
  const double c = std::cos(frame.rotation);
  const double s = std::sin(frame.rotation);
  Point local{c * d.x - s * d.y, s * d.x + c * d.y};
  if (frame.reflect) local.y = -local.y;
  return local;
}

Point to_global(const LocalFrame& frame, Point local) {
  if (frame.is_identity()) return local;
  if (frame.reflect) local.y = -local.y;
  const double c = std::cos(frame.rotation);
  const double s = std::sin(frame.rotation);
  const Point d{c * local.x + s * local.y, -s * local.x + c * local.y};
  return frame.origin + d * frame.unit;
}

std::size_t View::population() const {
  if (!counts) return points.size();
  return static_cast<std::size_t>(std::accumulate(counts->begin(), counts->end(), 0));
}

std::vector<Point> View::strict_multiplicities() const {
  std::vector<Point> out;
  if (!counts) return out;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if ((*counts)[i] >= 2) out.push_back(points[i]);
  }
  return out;
}

namespace detail {

SourcedView build_sourced_view(const Configuration& config, const Robot& observer,
                               const Capabilities& caps) {
  const LocalFrame frame = effective_frame(observer, caps);
  const std::size_t n = config.size();

  std::vector<Point> local(n);
  for (std::size_t i = 0; i < n; ++i) local[i] = to_local(frame, config.positions[i]);

  // Grouping happens on local coordinates so the view is self-consistent
  // even if two distinct global points round to one local point.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return lex_less(local[a], local[b]); });

  SourcedView out;
  std::vector<int> counts;
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t i = order[k];
    if (!out.view.points.empty() && out.view.points.back() == local[i]) {
      ++counts.back();
      continue;
    }
    out.view.points.push_back(local[i]);
    out.sources.push_back(i);
    counts.push_back(1);
  }
  if (caps.multiplicity_detection) out.view.counts = std::move(counts);
  out.view.self = local[observer.index];
  return out;
}

}  // namespace detail

View build_view(const Configuration& config, const Robot& observer, const Capabilities& caps) {
  return detail::build_sourced_view(config, observer, caps).view;
}

std::vector<std::pair<Point, int>> multiplicity_points(const Configuration& config) {
  std::vector<Point> sorted = config.positions;
  std::sort(sorted.begin(), sorted.end(), lex_less);
  std::vector<std::pair<Point, int>> out;
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i + 1;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    if (j - i >= 2) out.emplace_back(sorted[i], static_cast<int>(j - i));
    i = j;
  }
  return out;
}

bool all_distinct(const Configuration& config) { return multiplicity_points(config).empty(); }

}  // namespace rscatter
