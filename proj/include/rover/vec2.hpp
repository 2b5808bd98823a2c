#pragma once

#include <cmath>

namespace rover {

// Planar vector in the sagittal plane: x forward, z up.
struct Vec2 {
  double x = 0.0;
  double z = 0.0;

  Vec2 operator+(const Vec2& o) const { return {x + o.x, z + o.z}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, z - o.z}; }
  Vec2 operator*(double s) const { return {x * s, z * s}; }
  Vec2 operator/(double s) const { return {x / s, z / s}; }
  Vec2& operator+=(const Vec2& o) {
    x += o.x;
    z += o.z;
    return *this;
  }
  double dot(const Vec2& o) const { return x * o.x + z * o.z; }
  double norm() const { return std::sqrt(x * x + z * z); }
  // 90-degree counter-clockwise rotation.
  Vec2 perp() const { return {-z, x}; }
};

inline Vec2 operator*(double s, const Vec2& v) { return v * s; }

// Rigid planar transform: rotation by `angle` (counter-clockwise, radians)
// followed by translation to `pos`.
struct Pose2 {
  Vec2 pos{};
  double angle = 0.0;

  Vec2 rotate(const Vec2& v) const {
    const double c = std::cos(angle), s = std::sin(angle);
    return {c * v.x - s * v.z, s * v.x + c * v.z};
  }
  Vec2 apply(const Vec2& v) const { return pos + rotate(v); }
};

}  // namespace rover
