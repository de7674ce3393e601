// Forward-mode dual numbers, nested for higher derivative orders.
//
// Dual<T> carries a value and one directional derivative. Nesting
// (Dual<Dual<double>> and deeper) yields exact mixed partials of any field
// whose evaluation is templated on the scalar type. All chart/fiber fields in
// this library are evaluated this way, so second x-derivatives, third
// y-derivatives and the cross terms come out exact to roundoff.
#pragma once

#include <cmath>
#include <utility>

#include "spraylab/errors.hpp"

namespace spraylab {

template <class T>
struct Dual {
  T val{};
  T dot{};

  Dual() = default;
  Dual(double v) : val(v), dot(0.0) {}  // lift a constant
  Dual(T v, T d) : val(std::move(v)), dot(std::move(d)) {}
};

using D0 = double;
using D1 = Dual<D0>;
using D2 = Dual<D1>;
using D3 = Dual<D2>;
using D4 = Dual<D3>;
using D5 = Dual<D4>;
using D6 = Dual<D5>;

// Nesting depth of a scalar type; plain double is depth 0.
template <class T>
struct AdDepth;
template <>
struct AdDepth<double> {
  static constexpr int value = 0;
};
template <class T>
struct AdDepth<Dual<T>> {
  static constexpr int value = AdDepth<T>::value + 1;
};
template <class T>
inline constexpr int ad_depth_v = AdDepth<T>::value;

// Deepest nesting level any field interface is instantiated at. Operations
// that consume additional levels guard against running past this.
inline constexpr int kMaxAdDepth = 6;

[[noreturn]] inline void throw_depth_exceeded(const char* where) {
  throw Error(std::string("AD nesting depth exceeded in ") + where);
}

inline double value_of(double x) { return x; }
template <class T>
double value_of(const Dual<T>& d) {
  return value_of(d.val);
}

template <class T>
Dual<T> lift(const T& v) {
  return Dual<T>(v, T(0.0));
}

// ---- arithmetic ------------------------------------------------------------

template <class T>
Dual<T> operator+(const Dual<T>& a, const Dual<T>& b) {
  return {a.val + b.val, a.dot + b.dot};
}
template <class T>
Dual<T> operator+(const Dual<T>& a, double b) {
  return {a.val + b, a.dot};
}
template <class T>
Dual<T> operator+(double a, const Dual<T>& b) {
  return {a + b.val, b.dot};
}

template <class T>
Dual<T> operator-(const Dual<T>& a, const Dual<T>& b) {
  return {a.val - b.val, a.dot - b.dot};
}
template <class T>
Dual<T> operator-(const Dual<T>& a, double b) {
  return {a.val - b, a.dot};
}
template <class T>
Dual<T> operator-(double a, const Dual<T>& b) {
  return {a - b.val, -b.dot};
}
template <class T>
Dual<T> operator-(const Dual<T>& a) {
  return {-a.val, -a.dot};
}

template <class T>
Dual<T> operator*(const Dual<T>& a, const Dual<T>& b) {
  return {a.val * b.val, a.val * b.dot + a.dot * b.val};
}
template <class T>
Dual<T> operator*(const Dual<T>& a, double b) {
  return {a.val * b, a.dot * b};
}
template <class T>
Dual<T> operator*(double a, const Dual<T>& b) {
  return {a * b.val, a * b.dot};
}

template <class T>
Dual<T> operator/(const Dual<T>& a, const Dual<T>& b) {
  T q = a.val / b.val;
  return {q, (a.dot - q * b.dot) / b.val};
}
template <class T>
Dual<T> operator/(const Dual<T>& a, double b) {
  return {a.val / b, a.dot / b};
}
template <class T>
Dual<T> operator/(double a, const Dual<T>& b) {
  T q = a / b.val;
  return {q, -(q / b.val) * b.dot};
}

template <class T>
Dual<T>& operator+=(Dual<T>& a, const Dual<T>& b) {
  a = a + b;
  return a;
}
template <class T>
Dual<T>& operator-=(Dual<T>& a, const Dual<T>& b) {
  a = a - b;
  return a;
}
template <class T>
Dual<T>& operator*=(Dual<T>& a, const Dual<T>& b) {
  a = a * b;
  return a;
}

// ---- elementary functions --------------------------------------------------

// Plain-double overloads so unqualified calls in generic field code resolve
// for every scalar depth.
inline double sqrt(double v) { return std::sqrt(v); }
inline double exp(double v) { return std::exp(v); }
inline double log(double v) { return std::log(v); }
inline double sin(double v) { return std::sin(v); }
inline double cos(double v) { return std::cos(v); }
inline double pow(double v, double p) { return std::pow(v, p); }

template <class T>
Dual<T> sqrt(const Dual<T>& a) {
  using std::sqrt;
  T s = sqrt(a.val);
  return {s, a.dot / (2.0 * s)};
}

template <class T>
Dual<T> exp(const Dual<T>& a) {
  using std::exp;
  T e = exp(a.val);
  return {e, a.dot * e};
}

template <class T>
Dual<T> log(const Dual<T>& a) {
  using std::log;
  return {log(a.val), a.dot / a.val};
}

template <class T>
Dual<T> sin(const Dual<T>& a) {
  using std::cos;
  using std::sin;
  return {sin(a.val), a.dot * cos(a.val)};
}

template <class T>
Dual<T> cos(const Dual<T>& a) {
  using std::cos;
  using std::sin;
  return {cos(a.val), -a.dot * sin(a.val)};
}

template <class T>
Dual<T> pow(const Dual<T>& a, double p) {
  using std::pow;
  T w = pow(a.val, p);
  return {w, (p * pow(a.val, p - 1.0)) * a.dot};
}

}  // namespace spraylab
