#pragma once

#include <algorithm>
#include <cmath>

namespace ada {

inline constexpr double kPi = 3.141592653589793;
inline constexpr double kTwoPi = 6.283185307179586;

// East/north plane, metres. Courses are measured clockwise from north, so a
// course of pi/2 points east.
struct Vec2 {
  double east = 0.0;
  double north = 0.0;

  Vec2 operator+(const Vec2& o) const { return {east + o.east, north + o.north}; }
  Vec2 operator-(const Vec2& o) const { return {east - o.east, north - o.north}; }
  Vec2 operator*(double s) const { return {east * s, north * s}; }
  double dot(const Vec2& o) const { return east * o.east + north * o.north; }
  double norm() const { return std::hypot(east, north); }
};

inline double wrap_angle(double a) {
  a = std::fmod(a, kTwoPi);
  return a < 0.0 ? a + kTwoPi : a;
}

// Shortest angular distance between two wrapped angles, in [0, pi].
inline double angular_distance(double a, double b) {
  const double d = std::fabs(wrap_angle(a) - wrap_angle(b));
  return std::min(d, kTwoPi - d);
}

inline Vec2 course_unit(double course_rad) {
  return {std::sin(course_rad), std::cos(course_rad)};
}

// Time and distance of the closest point of approach of two constant-velocity
// tracks over [0, horizon]. The quadratic separation has its minimum at
// t* = -(p.v)/(v.v); the result clamps t* into the window.
struct CpaResult {
  double t_cpa = 0.0;
  double d_cpa = 0.0;
};

inline CpaResult predict_cpa_tracks(const Vec2& pos_a, const Vec2& vel_a, const Vec2& pos_b,
                                    const Vec2& vel_b, double horizon_s) {
  const Vec2 p = pos_b - pos_a;
  const Vec2 v = vel_b - vel_a;
  const double vv = v.dot(v);
  double t = 0.0;
  if (vv > 0.0) t = std::clamp(-p.dot(v) / vv, 0.0, horizon_s);
  return {t, (p + v * t).norm()};
}

}  // namespace ada
