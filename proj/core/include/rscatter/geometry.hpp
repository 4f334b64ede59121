#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace rscatter {

class Rng;

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend constexpr bool operator==(const Point&, const Point&) = default;
};

constexpr Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
constexpr Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
constexpr Point operator*(Point a, double s) { return {a.x * s, a.y * s}; }
constexpr Point operator*(double s, Point a) { return a * s; }
constexpr double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }

inline bool is_finite(Point p) { return std::isfinite(p.x) && std::isfinite(p.y); }

/// Lexicographic order, x first then y. Used wherever the model needs a
/// coordinate-based tie-break (only meaningful under a shared frame).
constexpr bool lex_less(Point a, Point b) { return a.x < b.x || (a.x == b.x && a.y < b.y); }

/// Euclidean distance. Zero iff the coordinates are exactly equal.
double distance(Point p, Point q);

/// Open half-plane {q : dot(normal, q - anchor) < 0}. For a Voronoi cell the
/// anchor is the midpoint of the two sites and the normal points from the
/// cell's site toward the other site.
struct HalfPlane {
  Point normal;
  Point anchor;

  double offset() const { return dot(normal, anchor); }
  /// Signed, unnormalised side value; negative strictly inside.
  double side(Point q) const { return dot(normal, q - anchor); }
};

struct VoronoiCell {
  Point site;
  std::vector<HalfPlane> halfplanes;
  bool bounded = false;
};

struct VoronoiDiagram {
  std::vector<Point> sites;
  std::vector<VoronoiCell> cells;
};

/// Cell of `sites[index]`: the intersection of the open bisector half-planes
/// against every other site, with redundant constraints removed.
/// Throws DistinctSitesError on duplicate or empty input.
VoronoiCell compute_cell(std::span<const Point> sites, std::size_t index);

/// Throws DistinctSitesError on duplicate or empty input.
VoronoiDiagram compute_voronoi(std::span<const Point> sites);

/// Strict membership: boundary points belong to no cell.
bool cell_contains(const VoronoiCell& cell, Point q);

/// Draws a point of `cell` different from `current` and at most `sigma` away.
///
/// A direction is drawn uniformly, the distance `d` to the nearest constraint
/// along that ray is found (infinite if none), and the step length is drawn
/// uniformly from [sigma * 1e-3, min(sigma, d / 2)]. When that interval is
/// empty the step is min(sigma, d / 2) / 2. If floating-point rounding breaks
/// a postcondition the step is halved and retried.
/// Requires cell_contains(cell, current) and sigma > 0.
Point sample_in_cell(const VoronoiCell& cell, Point current, double sigma, Rng& rng);

}  // namespace rscatter
