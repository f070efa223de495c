#pragma once

// Small fixed-size linear algebra for 3-space: vectors, symmetric 2-tensors,
// and the handful of index gymnastics the surface integrals need.

#include <array>
#include <cmath>
#include <stdexcept>

namespace comlab {

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;

  double& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }
  double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
  Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
  Vec3 operator-() const { return {-x, -y, -z}; }
};

using Point3 = Vec3;

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }
inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }

// Symmetric 3x3 tensor, upper-triangle storage (xx, xy, xz, yy, yz, zz).
struct SymTensor2 {
  std::array<double, 6> a{};

  static constexpr int idx(int i, int j) {
    if (i > j) std::swap(i, j);
    return i == 0 ? j : (i == 1 ? 2 + j : 5);
  }
  double& operator()(int i, int j) { return a[idx(i, j)]; }
  double operator()(int i, int j) const { return a[idx(i, j)]; }

  static SymTensor2 identity() {
    SymTensor2 t;
    t(0, 0) = t(1, 1) = t(2, 2) = 1.0;
    return t;
  }
  static SymTensor2 scaled_identity(double s) {
    SymTensor2 t;
    t(0, 0) = t(1, 1) = t(2, 2) = s;
    return t;
  }
  // outer product v (x) w, symmetrized (v and w enter symmetrically here
  // only when v == w; callers symmetrize explicitly otherwise)
  static SymTensor2 outer(const Vec3& v) {
    SymTensor2 t;
    for (int i = 0; i < 3; ++i)
      for (int j = i; j < 3; ++j) t(i, j) = v[i] * v[j];
    return t;
  }
  static SymTensor2 sym_outer(const Vec3& v, const Vec3& w) {
    SymTensor2 t;
    for (int i = 0; i < 3; ++i)
      for (int j = i; j < 3; ++j) t(i, j) = 0.5 * (v[i] * w[j] + v[j] * w[i]);
    return t;
  }

  SymTensor2 operator+(const SymTensor2& o) const {
    SymTensor2 t;
    for (int k = 0; k < 6; ++k) t.a[k] = a[k] + o.a[k];
    return t;
  }
  SymTensor2 operator-(const SymTensor2& o) const {
    SymTensor2 t;
    for (int k = 0; k < 6; ++k) t.a[k] = a[k] - o.a[k];
    return t;
  }
  SymTensor2 operator*(double s) const {
    SymTensor2 t;
    for (int k = 0; k < 6; ++k) t.a[k] = a[k] * s;
    return t;
  }
  SymTensor2& operator+=(const SymTensor2& o) {
    for (int k = 0; k < 6; ++k) a[k] += o.a[k];
    return *this;
  }

  double trace() const { return a[0] + a[3] + a[5]; }

  Vec3 contract(const Vec3& v) const {
    Vec3 r;
    for (int i = 0; i < 3; ++i) {
      double s = 0.0;
      for (int j = 0; j < 3; ++j) s += (*this)(i, j) * v[j];
      r[i] = s;
    }
    return r;
  }

  double det() const {
    const SymTensor2& g = *this;
    return g(0, 0) * (g(1, 1) * g(2, 2) - g(1, 2) * g(1, 2))
         - g(0, 1) * (g(0, 1) * g(2, 2) - g(1, 2) * g(0, 2))
         + g(0, 2) * (g(0, 1) * g(1, 2) - g(1, 1) * g(0, 2));
  }

  SymTensor2 inverse() const {
    const SymTensor2& g = *this;
    const double d = det();
    if (d == 0.0) throw std::runtime_error("SymTensor2::inverse: singular tensor");
    SymTensor2 inv;
    inv(0, 0) = (g(1, 1) * g(2, 2) - g(1, 2) * g(1, 2)) / d;
    inv(0, 1) = (g(0, 2) * g(1, 2) - g(0, 1) * g(2, 2)) / d;
    inv(0, 2) = (g(0, 1) * g(1, 2) - g(0, 2) * g(1, 1)) / d;
    inv(1, 1) = (g(0, 0) * g(2, 2) - g(0, 2) * g(0, 2)) / d;
    inv(1, 2) = (g(0, 1) * g(0, 2) - g(0, 0) * g(1, 2)) / d;
    inv(2, 2) = (g(0, 0) * g(1, 1) - g(0, 1) * g(0, 1)) / d;
    return inv;
  }

  // Positive definite iff all leading principal minors are positive.
  bool positive_definite() const {
    const SymTensor2& g = *this;
    const double m1 = g(0, 0);
    const double m2 = g(0, 0) * g(1, 1) - g(0, 1) * g(0, 1);
    return m1 > 0.0 && m2 > 0.0 && det() > 0.0;
  }

  // A : B with both indices raised by ginv:  g^ik g^jl A_ij B_kl
  static double contract2(const SymTensor2& A, const SymTensor2& B, const SymTensor2& ginv) {
    double s = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k)
          for (int l = 0; l < 3; ++l)
            s += ginv(i, k) * ginv(j, l) * A(i, j) * B(k, l);
    return s;
  }
};

inline double max_abs_component(const SymTensor2& t) {
  double m = 0.0;
  for (double v : t.a) m = std::max(m, std::fabs(v));
  return m;
}

}  // namespace comlab
