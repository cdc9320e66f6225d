#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <vector>

namespace coulomb {

// Spatial dimensions are small (d = 2..4 in practice); points are
// fixed-capacity stack vectors with a runtime dimension.
inline constexpr std::size_t kMaxDim = 8;

struct Vec {
  std::size_t dim = 0;
  std::array<double, kMaxDim> c{};

  Vec() = default;
  explicit Vec(std::size_t d) : dim(d) {}
  Vec(std::initializer_list<double> xs) : dim(xs.size()) {
    std::size_t k = 0;
    for (double v : xs) c[k++] = v;
  }

  double& operator[](std::size_t k) { return c[k]; }
  double operator[](std::size_t k) const { return c[k]; }

  Vec& operator+=(const Vec& o) {
    for (std::size_t k = 0; k < dim; ++k) c[k] += o.c[k];
    return *this;
  }
  Vec& operator-=(const Vec& o) {
    for (std::size_t k = 0; k < dim; ++k) c[k] -= o.c[k];
    return *this;
  }
  Vec& operator*=(double s) {
    for (std::size_t k = 0; k < dim; ++k) c[k] *= s;
    return *this;
  }

  friend Vec operator+(Vec a, const Vec& b) { return a += b; }
  friend Vec operator-(Vec a, const Vec& b) { return a -= b; }
  friend Vec operator*(Vec a, double s) { return a *= s; }
  friend Vec operator*(double s, Vec a) { return a *= s; }
  friend Vec operator-(Vec a) {
    for (std::size_t k = 0; k < a.dim; ++k) a.c[k] = -a.c[k];
    return a;
  }
  friend bool operator==(const Vec& a, const Vec& b) {
    if (a.dim != b.dim) return false;
    for (std::size_t k = 0; k < a.dim; ++k)
      if (a.c[k] != b.c[k]) return false;
    return true;
  }

  double dot(const Vec& o) const {
    double s = 0;
    for (std::size_t k = 0; k < dim; ++k) s += c[k] * o.c[k];
    return s;
  }
  double norm2() const { return dot(*this); }
  double norm() const { return std::sqrt(norm2()); }
  bool all_finite() const {
    for (std::size_t k = 0; k < dim; ++k)
      if (!std::isfinite(c[k])) return false;
    return true;
  }

  static Vec zero(std::size_t d) { return Vec(d); }
};

using PointList = std::vector<Vec>;

inline double dist(const Vec& a, const Vec& b) { return (a - b).norm(); }

}  // namespace coulomb
