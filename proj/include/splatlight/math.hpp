// Copyright Contributors to the Splatlight Project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <ostream>

namespace splatlight {

template <typename T>
inline constexpr T pi = T(3.14159265358979323846L);

// ---------------------------------------------------------------------------
// Small fixed-size vectors
// ---------------------------------------------------------------------------

template <typename T>
struct Vec2 {
  T x = 0, y = 0;

  constexpr Vec2() = default;
  constexpr Vec2(T x_, T y_) : x(x_), y(y_) {}

  T& operator[](int i) { return (&x)[i]; }
  const T& operator[](int i) const { return (&x)[i]; }
};

template <typename T>
struct Vec3 {
  T x = 0, y = 0, z = 0;

  constexpr Vec3() = default;
  constexpr Vec3(T x_, T y_, T z_) : x(x_), y(y_), z(z_) {}
  constexpr explicit Vec3(T s) : x(s), y(s), z(s) {}

  template <typename U>
  constexpr explicit Vec3(const Vec3<U>& v) : x(T(v.x)), y(T(v.y)), z(T(v.z)) {}

  T& operator[](int i) { return (&x)[i]; }
  const T& operator[](int i) const { return (&x)[i]; }
};

template <typename T>
struct Vec4 {
  T x = 0, y = 0, z = 0, w = 0;

  constexpr Vec4() = default;
  constexpr Vec4(T x_, T y_, T z_, T w_) : x(x_), y(y_), z(z_), w(w_) {}

  T& operator[](int i) { return (&x)[i]; }
  const T& operator[](int i) const { return (&x)[i]; }
};

using Vec2f = Vec2<float>;
using Vec2d = Vec2<double>;
using Vec3f = Vec3<float>;
using Vec3d = Vec3<double>;
using Vec4f = Vec4<float>;
using Vec4d = Vec4<double>;
using Vec2i = Vec2<int>;

template <typename T> constexpr Vec2<T> operator+(Vec2<T> a, Vec2<T> b) { return {a.x + b.x, a.y + b.y}; }
template <typename T> constexpr Vec2<T> operator-(Vec2<T> a, Vec2<T> b) { return {a.x - b.x, a.y - b.y}; }
template <typename T> constexpr Vec2<T> operator*(T s, Vec2<T> v) { return {s * v.x, s * v.y}; }
template <typename T> constexpr Vec2<T> operator*(Vec2<T> v, T s) { return {v.x * s, v.y * s}; }
template <typename T> constexpr T dot(Vec2<T> a, Vec2<T> b) { return a.x * b.x + a.y * b.y; }

template <typename T> constexpr Vec3<T> operator+(Vec3<T> a, Vec3<T> b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
template <typename T> constexpr Vec3<T> operator-(Vec3<T> a, Vec3<T> b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
template <typename T> constexpr Vec3<T> operator-(Vec3<T> v) { return {-v.x, -v.y, -v.z}; }
template <typename T> constexpr Vec3<T> operator*(T s, Vec3<T> v) { return {s * v.x, s * v.y, s * v.z}; }
template <typename T> constexpr Vec3<T> operator*(Vec3<T> v, T s) { return {v.x * s, v.y * s, v.z * s}; }
template <typename T> constexpr Vec3<T> operator*(Vec3<T> a, Vec3<T> b) { return {a.x * b.x, a.y * b.y, a.z * b.z}; }
template <typename T> constexpr Vec3<T> operator/(Vec3<T> v, T s) { return {v.x / s, v.y / s, v.z / s}; }
template <typename T> constexpr Vec3<T>& operator+=(Vec3<T>& a, Vec3<T> b) { a = a + b; return a; }
template <typename T> constexpr Vec3<T>& operator-=(Vec3<T>& a, Vec3<T> b) { a = a - b; return a; }
template <typename T> constexpr Vec3<T>& operator*=(Vec3<T>& a, T s) { a = a * s; return a; }
template <typename T> constexpr bool operator==(Vec3<T> a, Vec3<T> b) { return a.x == b.x && a.y == b.y && a.z == b.z; }

template <typename T> constexpr T dot(Vec3<T> a, Vec3<T> b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
template <typename T> constexpr Vec3<T> cross(Vec3<T> a, Vec3<T> b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
template <typename T> inline T length(Vec3<T> v) { return std::sqrt(dot(v, v)); }
template <typename T> inline T length_squared(Vec3<T> v) { return dot(v, v); }
template <typename T> inline T length(Vec2<T> v) { return std::sqrt(dot(v, v)); }
template <typename T> inline Vec3<T> normalize(Vec3<T> v) {
  T len = length(v);
  return len > 0 ? v / len : Vec3<T>{0, 0, 0};
}
template <typename T> constexpr Vec3<T> min(Vec3<T> a, Vec3<T> b) {
  return {a.x < b.x ? a.x : b.x, a.y < b.y ? a.y : b.y, a.z < b.z ? a.z : b.z};
}
template <typename T> constexpr Vec3<T> max(Vec3<T> a, Vec3<T> b) {
  return {a.x > b.x ? a.x : b.x, a.y > b.y ? a.y : b.y, a.z > b.z ? a.z : b.z};
}
template <typename T> constexpr T max_component(Vec3<T> v) { return v.x > v.y ? (v.x > v.z ? v.x : v.z) : (v.y > v.z ? v.y : v.z); }

// Mirror of an incoming direction about the surface normal.
template <typename T> inline Vec3<T> reflect(Vec3<T> incoming, Vec3<T> n) {
  return incoming - T(2) * dot(incoming, n) * n;
}

template <typename T>
inline std::ostream& operator<<(std::ostream& os, Vec3<T> v) {
  return os << "(" << v.x << ", " << v.y << ", " << v.z << ")";
}

// ---------------------------------------------------------------------------
// 3x3 matrix (row major)
// ---------------------------------------------------------------------------

template <typename T>
struct Mat3 {
  std::array<T, 9> m = {1, 0, 0, 0, 1, 0, 0, 0, 1};

  static constexpr Mat3 identity() { return {}; }
  static constexpr Mat3 zero() { return Mat3{{0, 0, 0, 0, 0, 0, 0, 0, 0}}; }

  static constexpr Mat3 from_rows(Vec3<T> r0, Vec3<T> r1, Vec3<T> r2) {
    return Mat3{{r0.x, r0.y, r0.z, r1.x, r1.y, r1.z, r2.x, r2.y, r2.z}};
  }
  static constexpr Mat3 from_cols(Vec3<T> c0, Vec3<T> c1, Vec3<T> c2) {
    return Mat3{{c0.x, c1.x, c2.x, c0.y, c1.y, c2.y, c0.z, c1.z, c2.z}};
  }
  static Mat3 diagonal(Vec3<T> d) {
    return Mat3{{d.x, 0, 0, 0, d.y, 0, 0, 0, d.z}};
  }
  // Rodrigues rotation about a unit axis.
  static Mat3 axis_angle(Vec3<T> axis, T angle) {
    T c = std::cos(angle), s = std::sin(angle), t = 1 - c;
    Vec3<T> a = normalize(axis);
    return Mat3{{t * a.x * a.x + c,       t * a.x * a.y - s * a.z, t * a.x * a.z + s * a.y,
                 t * a.x * a.y + s * a.z, t * a.y * a.y + c,       t * a.y * a.z - s * a.x,
                 t * a.x * a.z - s * a.y, t * a.y * a.z + s * a.x, t * a.z * a.z + c}};
  }

  T& operator()(int r, int c) { return m[r * 3 + c]; }
  const T& operator()(int r, int c) const { return m[r * 3 + c]; }

  Vec3<T> row(int r) const { return {m[r * 3], m[r * 3 + 1], m[r * 3 + 2]}; }
  Vec3<T> col(int c) const { return {m[c], m[3 + c], m[6 + c]}; }

  Mat3 transposed() const {
    return Mat3{{m[0], m[3], m[6], m[1], m[4], m[7], m[2], m[5], m[8]}};
  }
};

using Mat3f = Mat3<float>;
using Mat3d = Mat3<double>;

template <typename T>
inline Vec3<T> operator*(const Mat3<T>& a, Vec3<T> v) {
  return {dot(a.row(0), v), dot(a.row(1), v), dot(a.row(2), v)};
}

template <typename T>
inline Mat3<T> operator*(const Mat3<T>& a, const Mat3<T>& b) {
  Mat3<T> r = Mat3<T>::zero();
  for (int i = 0; i < 3; i++)
    for (int j = 0; j < 3; j++)
      for (int k = 0; k < 3; k++) r(i, j) += a(i, k) * b(k, j);
  return r;
}

template <typename T>
inline Mat3<T> operator+(const Mat3<T>& a, const Mat3<T>& b) {
  Mat3<T> r;
  for (int i = 0; i < 9; i++) r.m[i] = a.m[i] + b.m[i];
  return r;
}

template <typename T>
inline Mat3<T> operator*(T s, const Mat3<T>& a) {
  Mat3<T> r;
  for (int i = 0; i < 9; i++) r.m[i] = s * a.m[i];
  return r;
}

// Frobenius distance of M^T M from the identity.
template <typename T>
inline T orthonormality_error(const Mat3<T>& a) {
  Mat3<T> g = a.transposed() * a;
  T err = 0;
  for (int i = 0; i < 3; i++)
    for (int j = 0; j < 3; j++) {
      T d = g(i, j) - (i == j ? T(1) : T(0));
      err += d * d;
    }
  return std::sqrt(err);
}

// ---------------------------------------------------------------------------
// Quaternion (w, x, y, z)
// ---------------------------------------------------------------------------

template <typename T>
struct Quat {
  T w = 1, x = 0, y = 0, z = 0;

  constexpr Quat() = default;
  constexpr Quat(T w_, T x_, T y_, T z_) : w(w_), x(x_), y(y_), z(z_) {}

  static constexpr Quat identity() { return {}; }

  T norm() const { return std::sqrt(w * w + x * x + y * y + z * z); }

  Quat normalized() const {
    T n = norm();
    return {w / n, x / n, y / n, z / n};
  }

  Mat3<T> to_matrix() const {
    T xx = x * x, yy = y * y, zz = z * z;
    T xy = x * y, xz = x * z, yz = y * z;
    T wx = w * x, wy = w * y, wz = w * z;
    return Mat3<T>{{1 - 2 * (yy + zz), 2 * (xy - wz),     2 * (xz + wy),
                    2 * (xy + wz),     1 - 2 * (xx + zz), 2 * (yz - wx),
                    2 * (xz - wy),     2 * (yz + wx),     1 - 2 * (xx + yy)}};
  }
};

using Quatf = Quat<float>;
using Quatd = Quat<double>;

// ---------------------------------------------------------------------------
// Rigid transform: x -> R x + t
// ---------------------------------------------------------------------------

template <typename T>
struct Rigid {
  Mat3<T> rotation;
  Vec3<T> translation;

  static constexpr Rigid identity() { return {}; }

  Vec3<T> apply(Vec3<T> p) const { return rotation * p + translation; }
  Vec3<T> apply_vector(Vec3<T> v) const { return rotation * v; }

  Rigid inverse() const {
    Mat3<T> rt = rotation.transposed();
    return {rt, -(rt * translation)};
  }

  // Composition: (a * b)(x) = a(b(x)).
  friend Rigid operator*(const Rigid& a, const Rigid& b) {
    return {a.rotation * b.rotation, a.rotation * b.translation + a.translation};
  }
};

using Rigidf = Rigid<float>;
using Rigidd = Rigid<double>;

// ---------------------------------------------------------------------------
// Axis aligned bounding box
// ---------------------------------------------------------------------------

template <typename T>
struct Aabb {
  Vec3<T> lo{std::numeric_limits<T>::max(), std::numeric_limits<T>::max(), std::numeric_limits<T>::max()};
  Vec3<T> hi{std::numeric_limits<T>::lowest(), std::numeric_limits<T>::lowest(), std::numeric_limits<T>::lowest()};

  void expand(Vec3<T> p) {
    lo = min(lo, p);
    hi = max(hi, p);
  }
  void expand(const Aabb& b) {
    lo = min(lo, b.lo);
    hi = max(hi, b.hi);
  }
  Vec3<T> extent() const { return hi - lo; }
  Vec3<T> center() const { return T(0.5) * (lo + hi); }
  T diagonal() const { return length(hi - lo); }
  bool valid() const { return lo.x <= hi.x && lo.y <= hi.y && lo.z <= hi.z; }
};

using Aabbd = Aabb<double>;

// ---------------------------------------------------------------------------
// Deterministic RNG (splitmix64 seeded xoshiro-style stream). Kept local so
// stream contents do not depend on the standard library implementation.
// ---------------------------------------------------------------------------

class Rng {
 public:
  explicit Rng(uint64_t seed = 0) {
    state_ = seed + 0x9E3779B97F4A7C15ULL;
    // Warm up so nearby seeds decorrelate.
    next_u64();
    next_u64();
  }

  uint64_t next_u64() {
    uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  uint32_t next_u32() { return uint32_t(next_u64() >> 32); }

  // Uniform in [0, 1).
  double uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  int uniform_int(int lo, int hi) {  // inclusive bounds
    return lo + int(next_u64() % uint64_t(hi - lo + 1));
  }

  // Standard normal via Box-Muller.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = 0;
    while (u1 <= 0) u1 = uniform();
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * pi<double> * u2);
    have_spare_ = true;
    return r * std::cos(2.0 * pi<double> * u2);
  }

  Vec3d unit_vector() {
    double z = uniform(-1.0, 1.0);
    double phi = uniform(0.0, 2.0 * pi<double>);
    double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    return {r * std::cos(phi), r * std::sin(phi), z};
  }

 private:
  uint64_t state_ = 0;
  double spare_ = 0;
  bool have_spare_ = false;
};

}  // namespace splatlight
