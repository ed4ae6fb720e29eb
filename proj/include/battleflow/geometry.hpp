#pragma once

#include <cmath>
#include <compare>
#include <span>
#include <vector>

namespace battleflow {

/// 2D point / vector in world units. The world frame is y-up.
struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Vec2 operator-(Vec2 a) { return {-a.x, -a.y}; }
  friend constexpr Vec2 operator*(Vec2 a, double s) { return {a.x * s, a.y * s}; }
  friend constexpr Vec2 operator*(double s, Vec2 a) { return {a.x * s, a.y * s}; }
  friend constexpr Vec2 operator/(Vec2 a, double s) { return {a.x / s, a.y / s}; }
  constexpr Vec2& operator+=(Vec2 b) {
    x += b.x;
    y += b.y;
    return *this;
  }
  constexpr Vec2& operator-=(Vec2 b) {
    x -= b.x;
    y -= b.y;
    return *this;
  }

  friend constexpr bool operator==(Vec2, Vec2) = default;
  /// Lexicographic (x, then y).
  friend constexpr auto operator<=>(Vec2 a, Vec2 b) {
    if (auto c = a.x <=> b.x; c != 0) return c;
    return a.y <=> b.y;
  }
};

constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
constexpr double norm2(Vec2 a) { return dot(a, a); }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
constexpr double dist2(Vec2 a, Vec2 b) { return norm2(a - b); }
inline double dist(Vec2 a, Vec2 b) { return norm(a - b); }

/// Counterclockwise rotation by 90 degrees.
constexpr Vec2 perp(Vec2 a) { return {-a.y, a.x}; }

/// Unit vector along `a`; returns the zero vector when `a` is zero.
inline Vec2 normalized(Vec2 a) {
  const double n = norm(a);
  return n > 0.0 ? a / n : Vec2{};
}

/// Axis-aligned rectangle, inclusive of its boundary.
struct Rect {
  double xmin = 0.0;
  double ymin = 0.0;
  double xmax = 0.0;
  double ymax = 0.0;

  double width() const { return xmax - xmin; }
  double height() const { return ymax - ymin; }
  double diagonal() const { return std::hypot(width(), height()); }
  bool contains(Vec2 p) const {
    return p.x >= xmin && p.x <= xmax && p.y >= ymin && p.y <= ymax;
  }
  Vec2 clamp(Vec2 p) const;
  void expand(Vec2 p);

  friend bool operator==(const Rect&, const Rect&) = default;
};

using Polygon = std::vector<Vec2>;

/// Signed area; positive for counterclockwise vertex order.
double signed_area(std::span<const Vec2> poly);

/// Area centroid of a simple polygon. Falls back to the vertex mean for
/// polygons with (near) zero area.
Vec2 polygon_centroid(std::span<const Vec2> poly);

/// Even-odd point-in-polygon test. Points exactly on an edge may go either way.
bool point_in_polygon(std::span<const Vec2> poly, Vec2 p);

/// Inclusive containment test for a counterclockwise convex polygon: `p` is
/// accepted when it lies at most `tol` outside every edge.
bool point_in_convex(std::span<const Vec2> ccw_poly, Vec2 p, double tol = 0.0);

/// Distance from `p` to the closed segment [a, b].
double point_segment_distance(Vec2 p, Vec2 a, Vec2 b);

/// Keeps the part of `poly` where dot(normal, x) <= offset
/// (Sutherland-Hodgman against one half-plane).
Polygon clip_half_plane(std::span<const Vec2> poly, Vec2 normal, double offset);

/// Convex hull (Andrew's monotone chain), counterclockwise, no collinear
/// vertices, starting at the lexicographically smallest point. Returns one
/// point for coincident input and two for collinear input.
Polygon convex_hull(std::vector<Vec2> points);

Polygon rect_polygon(const Rect& r);

}  // namespace battleflow
