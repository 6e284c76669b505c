#pragma once

#include <cmath>

namespace ssph {

/// Position / displacement in one or two dimensions. One-dimensional
/// problems keep y == 0.
struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2 &operator+=(const Vec2 &o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  constexpr Vec2 &operator-=(const Vec2 &o) {
    x -= o.x;
    y -= o.y;
    return *this;
  }
  constexpr Vec2 &operator*=(double s) {
    x *= s;
    y *= s;
    return *this;
  }
  constexpr double operator[](int axis) const { return axis == 0 ? x : y; }
  constexpr bool operator==(const Vec2 &) const = default;
};

constexpr Vec2 operator+(Vec2 a, const Vec2 &b) { return a += b; }
constexpr Vec2 operator-(Vec2 a, const Vec2 &b) { return a -= b; }
constexpr Vec2 operator-(const Vec2 &a) { return {-a.x, -a.y}; }
constexpr Vec2 operator*(Vec2 a, double s) { return a *= s; }
constexpr Vec2 operator*(double s, Vec2 a) { return a *= s; }
constexpr double dot(const Vec2 &a, const Vec2 &b) { return a.x * b.x + a.y * b.y; }
inline double norm(const Vec2 &a) { return std::sqrt(dot(a, a)); }

enum class Axis : int { X = 0, Y = 1 };

}  // namespace ssph
