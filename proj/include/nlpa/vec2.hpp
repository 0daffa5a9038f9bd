#pragma once

#include <cmath>

namespace nlpa {

// Plane vector in flat coordinates: u expanding, s contracting.
struct Vec2 {
  double u = 0.0;
  double s = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.u + b.u, a.s + b.s}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.u - b.u, a.s - b.s}; }
inline Vec2 operator-(Vec2 a) { return {-a.u, -a.s}; }
inline Vec2 operator*(double k, Vec2 a) { return {k * a.u, k * a.s}; }
inline Vec2& operator+=(Vec2& a, Vec2 b) { return a = a + b; }
inline double dot(Vec2 a, Vec2 b) { return a.u * b.u + a.s * b.s; }
inline double cross(Vec2 a, Vec2 b) { return a.u * b.s - a.s * b.u; }
inline double norm(Vec2 a) { return std::hypot(a.u, a.s); }

// Angle of a in [0, 2pi).
inline double angle_of(Vec2 a) {
  double t = std::atan2(a.s, a.u);
  return t < 0 ? t + 2 * M_PI : t;
}

}  // namespace nlpa
