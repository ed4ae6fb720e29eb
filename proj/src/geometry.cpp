#include "battleflow/geometry.hpp"

#include <algorithm>

namespace battleflow {

Vec2 Rect::clamp(Vec2 p) const {
  return {std::clamp(p.x, xmin, xmax), std::clamp(p.y, ymin, ymax)};
}

void Rect::expand(Vec2 p) {
  xmin = std::min(xmin, p.x);
  ymin = std::min(ymin, p.y);
  xmax = std::max(xmax, p.x);
  ymax = std::max(ymax, p.y);
}

double signed_area(std::span<const Vec2> poly) {
  const std::size_t n = poly.size();
  double a = 0.0;
  for (std::size_t i = 0; i < n; ++i) a += cross(poly[i], poly[(i + 1) % n]);
  return 0.5 * a;
}

Vec2 polygon_centroid(std::span<const Vec2> poly) {
  if (poly.empty()) return {};
  // Shift to the first vertex for numerical stability on large coordinates.
  const Vec2 origin = poly[0];
  const std::size_t n = poly.size();
  double a = 0.0;
  Vec2 c{};
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 p = poly[i] - origin;
    const Vec2 q = poly[(i + 1) % n] - origin;
    const double w = cross(p, q);
    a += w;
    c += (p + q) * w;
  }
  if (std::abs(a) < 1e-12) {
    Vec2 mean{};
    for (Vec2 p : poly) mean += p;
    return mean / static_cast<double>(n);
  }
  return origin + c / (3.0 * a);
}

bool point_in_polygon(std::span<const Vec2> poly, Vec2 p) {
  bool inside = false;
  const std::size_t n = poly.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Vec2 a = poly[i];
    const Vec2 b = poly[j];
    if ((a.y > p.y) != (b.y > p.y)) {
      const double x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (p.x < x) inside = !inside;
    }
  }
  return inside;
}

bool point_in_convex(std::span<const Vec2> ccw_poly, Vec2 p, double tol) {
  const std::size_t n = ccw_poly.size();
  if (n < 3) return false;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 a = ccw_poly[i];
    const Vec2 b = ccw_poly[(i + 1) % n];
    const Vec2 e = b - a;
    const double len = norm(e);
    if (len == 0.0) continue;
    // Signed distance to the right of the edge, i.e. outside.
    if (-cross(e, p - a) / len > tol) return false;
  }
  return true;
}

double point_segment_distance(Vec2 p, Vec2 a, Vec2 b) {
  const Vec2 ab = b - a;
  const double l2 = norm2(ab);
  if (l2 == 0.0) return dist(p, a);
  const double s = std::clamp(dot(p - a, ab) / l2, 0.0, 1.0);
  return dist(p, a + ab * s);
}

Polygon clip_half_plane(std::span<const Vec2> poly, Vec2 normal, double offset) {
  Polygon out;
  const std::size_t n = poly.size();
  if (n == 0) return out;
  out.reserve(n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 a = poly[i];
    const Vec2 b = poly[(i + 1) % n];
    const double da = dot(normal, a) - offset;
    const double db = dot(normal, b) - offset;
    if (da <= 0.0) out.push_back(a);
    if ((da < 0.0 && db > 0.0) || (da > 0.0 && db < 0.0)) {
      const double s = da / (da - db);
      out.push_back(a + (b - a) * s);
    }
  }
  return out;
}

Polygon convex_hull(std::vector<Vec2> points) {
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  if (points.size() < 3) return points;

  Polygon hull(2 * points.size());
  std::size_t k = 0;
  for (const Vec2& p : points) {
    while (k >= 2 && cross(hull[k - 1] - hull[k - 2], p - hull[k - 2]) <= 0.0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = points.size() - 1, lower = k + 1; i-- > 0;) {
    const Vec2& p = points[i];
    while (k >= lower && cross(hull[k - 1] - hull[k - 2], p - hull[k - 2]) <= 0.0) --k;
    hull[k++] = p;
  }
  hull.resize(k - 1);
  return hull;
}

Polygon rect_polygon(const Rect& r) {
  return {{r.xmin, r.ymin}, {r.xmax, r.ymin}, {r.xmax, r.ymax}, {r.xmin, r.ymax}};
}

}  // namespace battleflow
