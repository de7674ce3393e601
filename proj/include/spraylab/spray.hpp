// Spray models and their connection / curvature quantities.
//
// Index conventions for the rank-4 outputs: riemann_tensor(j, i, k, l) holds
// the component with upper index i and lower indices j, k, l obtained by two
// vertical derivatives of the curvature matrix; berwald_tensor(j, i, k, l)
// holds the third vertical derivative of coefficient i.
#pragma once

#include <cmath>
#include <memory>
#include <string>
#include <utility>

#include "spraylab/chart.hpp"
#include "spraylab/errors.hpp"
#include "spraylab/fields.hpp"
#include "spraylab/jets.hpp"
#include "spraylab/linalg.hpp"

namespace spraylab {

// A spray: dimension, chart box, and a positively 2-homogeneous coefficient
// map (x, y) -> G^i. Immutable once built; safe to share across threads.
struct SprayModel {
  int n = 0;
  ChartBox chart;
  std::shared_ptr<const SprayCoeffs> coeffs;
};

struct ConnectionData {
  Mat N;       // N^i_j = dG^i/dy^j
  Ten3 gamma;  // Gamma^i_jk = d^2 G^i / dy^j dy^k
};

struct CurvatureData {
  Mat R;  // R^i_k
  double ric = 0.0;
  std::optional<Ten4> rfull;    // (j, i, k, l)
  std::optional<Ten4> berwald;  // (j, i, k, l)
};

namespace detail {

template <class T>
VecT<T> coeffs_at(const SprayCoeffs& g, std::span<const T> x, std::span<const T> y) {
  return g(x, y);
}

template <class T>
MatT<T> nonlinear_connection_t(const SprayCoeffs& g, std::span<const T> x,
                               std::span<const T> y) {
  if constexpr (ad_depth_v<T> + 1 > kMaxAdDepth) {
    throw_depth_exceeded("nonlinear_connection");
  } else {
    const int n = g.dim();
    MatT<T> nc(n, n);
    auto xc = lift_const(x);
    for (int j = 0; j < n; ++j) {
      auto yj = lift_unit(y, j);
      auto gj = g(sp(xc), sp(yj));
      for (int i = 0; i < n; ++i) nc(i, j) = gj[size_t(i)].dot;
    }
    return nc;
  }
}

// R^i_k = 2 dG^i/dx^k - y^j d2G^i/dx^j dy^k + 2 G^j d2G^i/dy^j dy^k
//         - dG^i/dy^s dG^s/dy^k
template <class T>
MatT<T> riemann_curvature_t(const SprayCoeffs& g, std::span<const T> x,
                            std::span<const T> y) {
  if constexpr (ad_depth_v<T> + 2 > kMaxAdDepth) {
    throw_depth_exceeded("riemann_curvature");
  } else {
    const int n = g.dim();
    const VecT<T> g0 = g(x, y);
    const MatT<T> nc = nonlinear_connection_t(g, x, y);

    MatT<T> r(n, n);
    const auto xc = lift_const(x);
    const auto yc = lift_const(y);

    for (int k = 0; k < n; ++k) {
      auto xk = lift_unit(x, k);
      auto gk = g(sp(xk), sp(yc));
      for (int i = 0; i < n; ++i) r(i, k) = 2.0 * gk[size_t(i)].dot;
    }

    // y^j d2/dx^j dy^k: outer level x-directional along y, inner level e_k in y.
    {
      auto xs = lift_dir(sp(xc), sp(yc));
      for (int k = 0; k < n; ++k) {
        auto yk = lift_unit(y, k);
        auto ys = lift_const(sp(yk));
        auto gk = g(sp(xs), sp(ys));
        for (int i = 0; i < n; ++i) r(i, k) = r(i, k) - gk[size_t(i)].dot.dot;
      }
    }

    // 2 G^j d2/dy^j dy^k: outer level y-directional along G, inner e_k in y.
    {
      auto g0c = lift_const(sp(g0));
      auto xs = lift_const(sp(xc));
      for (int k = 0; k < n; ++k) {
        auto yk = lift_unit(y, k);
        auto ys = lift_dir(sp(yk), sp(g0c));
        auto gk = g(sp(xs), sp(ys));
        for (int i = 0; i < n; ++i) r(i, k) = r(i, k) + 2.0 * gk[size_t(i)].dot.dot;
      }
    }

    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) {
        T acc = T(0.0);
        for (int s2 = 0; s2 < n; ++s2) acc = acc + nc(i, s2) * nc(s2, k);
        r(i, k) = r(i, k) - acc;
      }
    return r;
  }
}

template <class T>
T ricci_t(const SprayCoeffs& g, std::span<const T> x, std::span<const T> y) {
  MatT<T> r = riemann_curvature_t(g, x, y);
  T tr = T(0.0);
  for (int m = 0; m < g.dim(); ++m) tr = tr + r(m, m);
  return tr;
}

// H_{|0} = y^m dH/dx^m - 2 G^m dH/dy^m: derivative of H along the spray
// vector field, evaluated with one directional dual.
template <class T>
T horizontal_derivative_0_t(const PhaseScalar& h, const SprayCoeffs& g,
                            std::span<const T> x, std::span<const T> y) {
  if constexpr (ad_depth_v<T> + 1 > kMaxAdDepth) {
    throw_depth_exceeded("horizontal_derivative_0");
  } else {
    VecT<T> g0 = g(x, y);
    for (auto& c : g0) c = -2.0 * c;
    auto xs = lift_dir(x, y);
    auto ys = lift_dir(y, sp(g0));
    return h(sp(xs), sp(ys)).dot;
  }
}

inline void ensure_finite(double v, const char* what, const std::string& path) {
  if (!std::isfinite(v))
    throw NumericalBreakdown(std::string("non-finite ") + what + " at " + path);
}

}  // namespace detail

inline Vec spray_coefficients(const SprayModel& g, const TangentSample& s) {
  validate_sample(g.chart, s);
  Vec out = (*g.coeffs)(sp(s.x), sp(s.y));
  for (int i = 0; i < g.n; ++i)
    detail::ensure_finite(out[size_t(i)], "spray coefficient", "G[" + std::to_string(i) + "]");
  return out;
}

inline ConnectionData connection(const SprayModel& g, const TangentSample& s) {
  validate_sample(g.chart, s);
  ConnectionData c;
  c.N = detail::nonlinear_connection_t<double>(*g.coeffs, sp(s.x), sp(s.y));
  c.gamma = Ten3(g.n);
  auto xc = lift_const(std::span<const double>(s.x));
  auto xc2 = lift_const(sp(xc));
  for (int j = 0; j < g.n; ++j)
    for (int k = 0; k < g.n; ++k) {
      VecT<D2> ys(size_t(g.n), D2(0.0));
      for (int m = 0; m < g.n; ++m)
        ys[size_t(m)] =
            detail::seed2(s.y[size_t(m)], m == j ? 1.0 : 0.0, m == k ? 1.0 : 0.0);
      auto gv = (*g.coeffs)(sp(xc2), sp(ys));
      for (int i = 0; i < g.n; ++i) {
        c.gamma(i, j, k) = gv[size_t(i)].dot.dot;
        detail::ensure_finite(c.gamma(i, j, k), "connection",
                              "Gamma[" + std::to_string(i) + "]");
      }
    }
  return c;
}

inline Mat riemann_curvature(const SprayModel& g, const TangentSample& s) {
  validate_sample(g.chart, s);
  Mat r = detail::riemann_curvature_t<double>(*g.coeffs, sp(s.x), sp(s.y));
  for (int i = 0; i < g.n; ++i)
    for (int k = 0; k < g.n; ++k)
      detail::ensure_finite(r(i, k), "curvature",
                            "R[" + std::to_string(i) + "][" + std::to_string(k) + "]");
  return r;
}

inline double ricci(const SprayModel& g, const TangentSample& s) {
  Mat r = riemann_curvature(g, s);
  double tr = 0.0;
  for (int m = 0; m < g.n; ++m) tr += r(m, m);
  return tr;
}

// R_j{}^i{}_{kl} = (1/3) (R^i_{k.l} - R^i_{l.k})_{.j}, built by running the
// curvature evaluation itself through two more vertical dual levels. The
// contraction identities back to R^i_k and to the Ricci trace then act as a
// cross-check of an independent assembly path.
inline Ten4 riemann_tensor(const SprayModel& g, const TangentSample& s) {
  validate_sample(g.chart, s);
  const int n = g.n;
  auto xc = lift_const(std::span<const double>(s.x));
  auto xc2 = lift_const(sp(xc));
  // hess[l*n+j](i,k) = d^2 R^i_k / dy^l dy^j
  std::vector<Mat> hess(size_t(n) * size_t(n));
  for (int l = 0; l < n; ++l)
    for (int j = 0; j < n; ++j) {
      VecT<D2> ys(size_t(n), D2(0.0));
      for (int m = 0; m < n; ++m)
        ys[size_t(m)] =
            detail::seed2(s.y[size_t(m)], m == l ? 1.0 : 0.0, m == j ? 1.0 : 0.0);
      MatT<D2> r = detail::riemann_curvature_t<D2>(*g.coeffs, sp(xc2), sp(ys));
      Mat h(n, n);
      for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) h(i, k) = r(i, k).dot.dot;
      hess[size_t(l) * n + j] = std::move(h);
    }
  Ten4 out(n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          out(j, i, k, l) =
              (hess[size_t(l) * n + j](i, k) - hess[size_t(k) * n + j](i, l)) / 3.0;
          detail::ensure_finite(out(j, i, k, l), "riemann tensor", "Rfull");
        }
  return out;
}

// Berwald tensor taken directly as the third vertical derivative of the spray
// coefficients; the curvature-two-form decomposition is not used for it.
inline Ten4 berwald_tensor(const SprayModel& g, const TangentSample& s) {
  validate_sample(g.chart, s);
  const int n = g.n;
  auto xc = lift_const(std::span<const double>(s.x));
  auto xc2 = lift_const(sp(xc));
  auto xc3 = lift_const(sp(xc2));
  Ten4 out(n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l) {
        VecT<D3> ys(size_t(n), D3(0.0));
        for (int m = 0; m < n; ++m)
          ys[size_t(m)] = detail::seed3(s.y[size_t(m)], m == j ? 1.0 : 0.0,
                                        m == k ? 1.0 : 0.0, m == l ? 1.0 : 0.0);
        auto gv = (*g.coeffs)(sp(xc3), sp(ys));
        for (int i = 0; i < n; ++i) {
          out(j, i, k, l) = gv[size_t(i)].dot.dot.dot;
          detail::ensure_finite(out(j, i, k, l), "berwald tensor", "B");
        }
      }
  return out;
}

inline CurvatureData curvature(const SprayModel& g, const TangentSample& s,
                               bool with_rfull = false, bool with_berwald = false) {
  CurvatureData c;
  c.R = riemann_curvature(g, s);
  c.ric = 0.0;
  for (int m = 0; m < g.n; ++m) c.ric += c.R(m, m);
  if (with_rfull) c.rfull = riemann_tensor(g, s);
  if (with_berwald) c.berwald = berwald_tensor(g, s);
  return c;
}

inline double horizontal_derivative_0(const PhaseScalar& h, const SprayModel& g,
                                      const TangentSample& s) {
  validate_sample(g.chart, s);
  double v = detail::horizontal_derivative_0_t<double>(h, *g.coeffs, sp(s.x), sp(s.y));
  detail::ensure_finite(v, "horizontal derivative", "H|0");
  return v;
}

// G -> G + P y for a positively 1-homogeneous factor P. The factor is probed
// at a few deterministic samples before the deformed model is returned.
inline SprayModel projective_deform(const SprayModel& g,
                                    std::shared_ptr<const PhaseScalar> p) {
  {
    Sampler sampler(g.chart, SampleSpec{.count = 8, .seed = 977});
    for (int t = 0; t < 8; ++t) {
      TangentSample s = sampler.next();
      double p1 = (*p)(sp(s.x), sp(s.y));
      Vec y2 = scaled(s.y, 2.0);
      double p2 = (*p)(sp(s.x), sp(y2));
      if (std::abs(p2 - 2.0 * p1) > 1e-8 * (1.0 + std::abs(p2)))
        throw HomogeneityViolation("projective factor is not 1-homogeneous in y");
    }
  }
  SprayModel out = g;
  out.coeffs = make_spray_coeffs(
      g.n, [base = g.coeffs, p]<class T>(std::span<const T> x, std::span<const T> y) {
        std::vector<T> v = (*base)(x, y);
        T pv = (*p)(x, y);
        for (size_t i = 0; i < v.size(); ++i) v[i] = v[i] + pv * y[i];
        return v;
      });
  return out;
}

}  // namespace spraylab
