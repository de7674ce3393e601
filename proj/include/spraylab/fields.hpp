// Type-erased smooth fields on the chart and on chart x fiber.
//
// Every field exposes one virtual evaluation per AD nesting depth, so fully
// generic (templated) numerics can run on models assembled at runtime. A
// wrapper that spends extra nesting levels internally must guard against the
// depth cap with ad_depth_v (see dual.hpp).
#pragma once

#include <memory>
#include <span>
#include <vector>

#include "spraylab/dual.hpp"
#include "spraylab/tensor.hpp"

namespace spraylab {

#define SPRAYLAB_AD_TYPES(X) X(D0) X(D1) X(D2) X(D3) X(D4) X(D5) X(D6)

// Scalar function of the chart point only: densities, gauge functions,
// metric and 1-form components.
class ChartScalar {
 public:
  virtual ~ChartScalar() = default;
#define SPRAYLAB_X(T) virtual T operator()(std::span<const T> x) const = 0;
  SPRAYLAB_AD_TYPES(SPRAYLAB_X)
#undef SPRAYLAB_X
};

// Scalar function of (x, y): norms, S-curvature, projective factors, gauges
// contracted with the fiber.
class PhaseScalar {
 public:
  virtual ~PhaseScalar() = default;
#define SPRAYLAB_X(T) virtual T operator()(std::span<const T> x, std::span<const T> y) const = 0;
  SPRAYLAB_AD_TYPES(SPRAYLAB_X)
#undef SPRAYLAB_X
};

// Vector field of (x, y): spray coefficient maps.
class SprayCoeffs {
 public:
  virtual ~SprayCoeffs() = default;
  virtual int dim() const = 0;
#define SPRAYLAB_X(T) \
  virtual std::vector<T> operator()(std::span<const T> x, std::span<const T> y) const = 0;
  SPRAYLAB_AD_TYPES(SPRAYLAB_X)
#undef SPRAYLAB_X
};

template <class F>
class ChartScalarFn final : public ChartScalar {
 public:
  explicit ChartScalarFn(F f) : f_(std::move(f)) {}
#define SPRAYLAB_X(T) \
  T operator()(std::span<const T> x) const override { return f_(x); }
  SPRAYLAB_AD_TYPES(SPRAYLAB_X)
#undef SPRAYLAB_X
 private:
  F f_;
};

template <class F>
class PhaseScalarFn final : public PhaseScalar {
 public:
  explicit PhaseScalarFn(F f) : f_(std::move(f)) {}
#define SPRAYLAB_X(T) \
  T operator()(std::span<const T> x, std::span<const T> y) const override { return f_(x, y); }
  SPRAYLAB_AD_TYPES(SPRAYLAB_X)
#undef SPRAYLAB_X
 private:
  F f_;
};

template <class F>
class SprayCoeffsFn final : public SprayCoeffs {
 public:
  SprayCoeffsFn(int n, F f) : n_(n), f_(std::move(f)) {}
  int dim() const override { return n_; }
#define SPRAYLAB_X(T)                                                                    \
  std::vector<T> operator()(std::span<const T> x, std::span<const T> y) const override { \
    return f_(x, y);                                                                     \
  }
  SPRAYLAB_AD_TYPES(SPRAYLAB_X)
#undef SPRAYLAB_X
 private:
  int n_;
  F f_;
};

template <class F>
std::shared_ptr<const ChartScalar> make_chart_scalar(F f) {
  return std::make_shared<ChartScalarFn<F>>(std::move(f));
}

template <class F>
std::shared_ptr<const PhaseScalar> make_phase_scalar(F f) {
  return std::make_shared<PhaseScalarFn<F>>(std::move(f));
}

template <class F>
std::shared_ptr<const SprayCoeffs> make_spray_coeffs(int n, F f) {
  return std::make_shared<SprayCoeffsFn<F>>(n, std::move(f));
}

inline std::shared_ptr<const ChartScalar> const_chart_scalar(double c) {
  return make_chart_scalar([c]<class T>(std::span<const T>) -> T { return T(c); });
}

inline std::shared_ptr<const ChartScalar> negated(std::shared_ptr<const ChartScalar> f) {
  return make_chart_scalar([f]<class T>(std::span<const T> x) -> T { return -(*f)(x); });
}

// ---- seeding helpers (one nesting level at a time) --------------------------

// Constant lift: no derivative carried at the new level.
template <class T>
std::vector<Dual<T>> lift_const(std::span<const T> v) {
  std::vector<Dual<T>> r(v.size());
  for (size_t i = 0; i < v.size(); ++i) r[i] = Dual<T>(v[i], T(0.0));
  return r;
}

// Unit-direction seed e_k at the new level.
template <class T>
std::vector<Dual<T>> lift_unit(std::span<const T> v, int k) {
  std::vector<Dual<T>> r(v.size());
  for (size_t i = 0; i < v.size(); ++i) r[i] = Dual<T>(v[i], T(int(i) == k ? 1.0 : 0.0));
  return r;
}

// Directional seed along dir at the new level.
template <class T>
std::vector<Dual<T>> lift_dir(std::span<const T> v, std::span<const T> dir) {
  std::vector<Dual<T>> r(v.size());
  for (size_t i = 0; i < v.size(); ++i) r[i] = Dual<T>(v[i], dir[i]);
  return r;
}

// Directional derivative of a chart scalar along y at the base point x:
// f_0 = y^m df/dx^m.
template <class T>
T chart_directional_t(const ChartScalar& f, std::span<const T> x, std::span<const T> y) {
  if constexpr (ad_depth_v<T> + 1 > kMaxAdDepth) {
    throw_depth_exceeded("chart_directional");
  } else {
    auto xs = lift_dir(x, y);
    return f(std::span<const Dual<T>>(xs)).dot;
  }
}

}  // namespace spraylab
