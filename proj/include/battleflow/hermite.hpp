#pragma once

#include "battleflow/geometry.hpp"

namespace battleflow {

/// Cubic Hermite segment from p0 (tangent m0) to p1 (tangent m1), s in [0, 1].
struct HermiteSegment {
  Vec2 p0, m0, p1, m1;

  Vec2 at(double s) const {
    const double s2 = s * s;
    const double s3 = s2 * s;
    return (2 * s3 - 3 * s2 + 1) * p0 + (s3 - 2 * s2 + s) * m0 + (-2 * s3 + 3 * s2) * p1 + (s3 - s2) * m1;
  }

  Vec2 derivative(double s) const {
    const double s2 = s * s;
    return (6 * s2 - 6 * s) * p0 + (3 * s2 - 4 * s + 1) * m0 + (-6 * s2 + 6 * s) * p1 + (3 * s2 - 2 * s) * m1;
  }

  /// Equivalent cubic Bezier control points (c1, c2) between p0 and p1.
  Vec2 bezier_c1() const { return p0 + m0 / 3.0; }
  Vec2 bezier_c2() const { return p1 - m1 / 3.0; }
};

inline Vec2 hermite(Vec2 p0, Vec2 m0, Vec2 p1, Vec2 m1, double s) { return HermiteSegment{p0, m0, p1, m1}.at(s); }

}  // namespace battleflow
