// Dense tensor containers for desk-scale dimensions, templated on scalar type.
#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "spraylab/dual.hpp"

namespace spraylab {

template <class T>
using VecT = std::vector<T>;
using Vec = VecT<double>;

template <class T>
class MatT {
 public:
  MatT() = default;
  MatT(int rows, int cols) : r_(rows), c_(cols), v_(size_t(rows) * size_t(cols), T(0.0)) {}

  T& operator()(int i, int j) { return v_[size_t(i) * c_ + j]; }
  const T& operator()(int i, int j) const { return v_[size_t(i) * c_ + j]; }

  int rows() const { return r_; }
  int cols() const { return c_; }

 private:
  int r_ = 0, c_ = 0;
  std::vector<T> v_;
};
using Mat = MatT<double>;

template <class T>
class Ten3T {
 public:
  Ten3T() = default;
  explicit Ten3T(int n) : n_(n), v_(size_t(n) * n * n, T(0.0)) {}

  T& operator()(int i, int j, int k) { return v_[(size_t(i) * n_ + j) * n_ + k]; }
  const T& operator()(int i, int j, int k) const { return v_[(size_t(i) * n_ + j) * n_ + k]; }

  int dim() const { return n_; }

 private:
  int n_ = 0;
  std::vector<T> v_;
};
using Ten3 = Ten3T<double>;

template <class T>
class Ten4T {
 public:
  Ten4T() = default;
  explicit Ten4T(int n) : n_(n), v_(size_t(n) * n * n * n, T(0.0)) {}

  T& operator()(int i, int j, int k, int l) {
    return v_[((size_t(i) * n_ + j) * n_ + k) * n_ + l];
  }
  const T& operator()(int i, int j, int k, int l) const {
    return v_[((size_t(i) * n_ + j) * n_ + k) * n_ + l];
  }

  int dim() const { return n_; }

 private:
  int n_ = 0;
  std::vector<T> v_;
};
using Ten4 = Ten4T<double>;

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

inline Vec scaled(std::span<const double> a, double c) {
  Vec r(a.begin(), a.end());
  for (double& x : r) x *= c;
  return r;
}

template <class U>
std::span<const U> sp(const std::vector<U>& v) {
  return std::span<const U>(v.data(), v.size());
}

}  // namespace spraylab
