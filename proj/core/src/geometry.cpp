#include "rscatter/geometry.hpp"

#include <algorithm>
#include <limits>
#include <numbers>
#include <string>

#include "rscatter/errors.hpp"
#include "rscatter/rng.hpp"

namespace rscatter {

namespace {

constexpr double kRelTol = 1e-9;

struct Box {
  double min_x, min_y, max_x, max_y;

  void extend(Point p) {
    min_x = std::min(min_x, p.x);
    min_y = std::min(min_y, p.y);
    max_x = std::max(max_x, p.x);
    max_y = std::max(max_y, p.y);
  }
  double extent() const { return std::max(max_x - min_x, max_y - min_y); }
};

double norm(Point p) { return std::hypot(p.x, p.y); }

void require_distinct(std::span<const Point> sites) {
  if (sites.empty()) throw DistinctSitesError("Voronoi diagram needs at least one site");
  std::vector<Point> sorted(sites.begin(), sites.end());
  std::sort(sorted.begin(), sorted.end(), lex_less);
  auto dup = std::adjacent_find(sorted.begin(), sorted.end());
  if (dup != sorted.end()) {
    throw DistinctSitesError("duplicate Voronoi site (" + std::to_string(dup->x) + ", " +
                             std::to_string(dup->y) + ")");
  }
}

// Closed-half-plane Sutherland-Hodgman step.
std::vector<Point> clip(const std::vector<Point>& poly, const HalfPlane& h) {
  std::vector<Point> out;
  out.reserve(poly.size() + 1);
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Point a = poly[i];
    const Point b = poly[(i + 1) % poly.size()];
    const double sa = h.side(a);
    const double sb = h.side(b);
    if (sa <= 0.0) out.push_back(a);
    if ((sa < 0.0 && sb > 0.0) || (sa > 0.0 && sb < 0.0)) {
      const double t = sa / (sa - sb);
      out.push_back(a + (b - a) * t);
    }
  }
  return out;
}

bool intersect(const HalfPlane& a, const HalfPlane& b, Point& out) {
  const double det = cross(a.normal, b.normal);
  if (std::abs(det) <= 1e-14 * norm(a.normal) * norm(b.normal)) return false;
  const double ca = a.offset();
  const double cb = b.offset();
  out = {(ca * b.normal.y - cb * a.normal.y) / det, (a.normal.x * cb - b.normal.x * ca) / det};
  return is_finite(out);
}

// A point satisfies the closed constraint up to a tolerance scaled by its
// magnitude; used only to size the clipping box, so false positives are harmless.
bool nearly_inside(const HalfPlane& h, Point v, double scale) {
  return h.side(v) <= kRelTol * norm(h.normal) * (1.0 + norm(v) + scale);
}

}  // namespace

double distance(Point p, Point q) { return std::hypot(p.x - q.x, p.y - q.y); }

VoronoiCell compute_cell(std::span<const Point> sites, std::size_t index) {
  require_distinct(sites);
  if (index >= sites.size()) throw std::out_of_range("Voronoi site index out of range");

  VoronoiCell cell;
  cell.site = sites[index];
  if (sites.size() == 1) return cell;

  std::vector<HalfPlane> all;
  all.reserve(sites.size() - 1);
  Box box{sites[0].x, sites[0].y, sites[0].x, sites[0].y};
  for (std::size_t j = 0; j < sites.size(); ++j) {
    box.extend(sites[j]);
    if (j == index) continue;
    all.push_back({sites[j] - cell.site, (cell.site + sites[j]) * 0.5});
  }
  const double site_scale = box.extent();

  // Every vertex of the true cell must end up strictly inside the clipping
  // box; then edges away from the box boundary are exactly the cell's edges.
  for (std::size_t i = 0; i < all.size(); ++i) {
    for (std::size_t k = i + 1; k < all.size(); ++k) {
      Point v;
      if (!intersect(all[i], all[k], v)) continue;
      const bool vertex = std::all_of(all.begin(), all.end(), [&](const HalfPlane& h) {
        return nearly_inside(h, v, site_scale);
      });
      if (vertex) box.extend(v);
    }
  }
  const double margin = 1.0 + box.extent();
  box = {box.min_x - margin, box.min_y - margin, box.max_x + margin, box.max_y + margin};
  const double scale = box.extent();

  std::vector<Point> poly{{box.min_x, box.min_y}, {box.max_x, box.min_y},
                          {box.max_x, box.max_y}, {box.min_x, box.max_y}};
  for (const auto& h : all) poly = clip(poly, h);

  // Keep a constraint unless the clipped cell stays clear of its line; the
  // test is deliberately loose so near-degenerate bisectors are retained.
  for (const auto& h : all) {
    const double tol = kRelTol * norm(h.normal) * scale;
    const bool touches =
        std::any_of(poly.begin(), poly.end(), [&](Point v) { return h.side(v) >= -tol; });
    if (touches) cell.halfplanes.push_back(h);
  }

  const double edge_tol = kRelTol * scale;
  cell.bounded = std::none_of(poly.begin(), poly.end(), [&](Point v) {
    return v.x - box.min_x <= edge_tol || box.max_x - v.x <= edge_tol ||
           v.y - box.min_y <= edge_tol || box.max_y - v.y <= edge_tol;
  });
  return cell;
}

VoronoiDiagram compute_voronoi(std::span<const Point> sites) {
  require_distinct(sites);
  VoronoiDiagram diagram;
  diagram.sites.assign(sites.begin(), sites.end());
  diagram.cells.reserve(sites.size());
  for (std::size_t i = 0; i < sites.size(); ++i) diagram.cells.push_back(compute_cell(sites, i));
  return diagram;
}

bool cell_contains(const VoronoiCell& cell, Point q) {
  return std::all_of(cell.halfplanes.begin(), cell.halfplanes.end(),
                     [q](const HalfPlane& h) { return h.side(q) < 0.0; });
}

Point sample_in_cell(const VoronoiCell& cell, Point current, double sigma, Rng& rng) {
  if (!(sigma > 0.0)) throw ContractError("sample_in_cell: sigma must be positive");
  if (!cell_contains(cell, current)) throw ContractError("sample_in_cell: current position outside the cell");

  for (;;) {
    const double angle = 2.0 * std::numbers::pi * rng.uniform01();
    const Point dir{std::cos(angle), std::sin(angle)};

    double room = std::numeric_limits<double>::infinity();
    for (const auto& h : cell.halfplanes) {
      const double rate = dot(h.normal, dir);
      if (rate > 0.0) room = std::min(room, -h.side(current) / rate);
    }

    const double hi = std::min(sigma, room / 2.0);
    const double lo = sigma * 1e-3;
    double step = hi >= lo ? rng.uniform(lo, hi) : hi / 2.0;

    for (int attempt = 0; attempt < 64 && step > 0.0; ++attempt, step /= 2.0) {
      const Point p = current + dir * step;
      if (p != current && distance(current, p) <= sigma && cell_contains(cell, p)) return p;
    }
    // Rounding defeated every halving along this ray; redraw the direction.
  }
}

}  // namespace rscatter
