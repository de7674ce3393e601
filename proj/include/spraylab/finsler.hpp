// Finsler metric models: fundamental tensor, the generic geodesic-coefficient
// formula, induced sprays, and the three built-in families.
#pragma once

#include <memory>
#include <utility>
#include <variant>

#include "spraylab/riemann.hpp"
#include "spraylab/spray.hpp"

namespace spraylab {

struct RiemannianFamily {
  RiemannianData a;
};

struct RandersFamily {
  RiemannianData a;
  BetaData b;
};

// Product-chart 4th-root norm F^4 = q1^2 + 2c q1 q2 + q2^2 with q_k the factor
// quadratic forms; a1 acts on the first block of coordinates, a2 on the rest.
struct FourthRootFamily {
  RiemannianData a1, a2;
  double c = 1.0;
};

struct CustomFamily {};

using FamilyData = std::variant<RiemannianFamily, RandersFamily, FourthRootFamily, CustomFamily>;

struct FinslerModel {
  int n = 0;
  ChartBox chart;
  std::shared_ptr<const PhaseScalar> F;
  FamilyData family{CustomFamily{}};
};

namespace detail {

template <class T>
T quadratic_form(const RiemannianData& a, std::span<const T> x, std::span<const T> y) {
  MatT<T> m = metric_at(a, x);
  T q = T(0.0);
  for (int i = 0; i < a.n; ++i)
    for (int j = 0; j < a.n; ++j) q = q + m(i, j) * y[i] * y[j];
  return q;
}

}  // namespace detail

inline FinslerModel make_riemannian_model(RiemannianData a) {
  FinslerModel m;
  m.n = a.n;
  m.chart = a.chart;
  m.F = make_phase_scalar([a]<class T>(std::span<const T> x, std::span<const T> y) -> T {
    return sqrt(detail::quadratic_form(a, x, y));
  });
  m.family = RiemannianFamily{std::move(a)};
  return m;
}

inline FinslerModel make_randers_model(RiemannianData a, BetaData b) {
  FinslerModel m;
  m.n = a.n;
  m.chart = a.chart;
  m.F = make_phase_scalar([a, b]<class T>(std::span<const T> x, std::span<const T> y) -> T {
    T alpha = sqrt(detail::quadratic_form(a, x, y));
    VecT<T> bv = detail::oneform_at(b, x);
    T beta = T(0.0);
    for (int i = 0; i < a.n; ++i) beta = beta + bv[size_t(i)] * y[i];
    return alpha + beta;
  });
  m.family = RandersFamily{std::move(a), std::move(b)};
  return m;
}

inline FinslerModel make_fourth_root_model(RiemannianData a1, RiemannianData a2, double c,
                                           ChartBox chart) {
  FinslerModel m;
  m.n = a1.n + a2.n;
  m.chart = std::move(chart);
  const int n1 = a1.n;
  const int n2 = a2.n;
  m.F = make_phase_scalar(
      [a1, a2, c, n1, n2]<class T>(std::span<const T> x, std::span<const T> y) -> T {
        T q1 = detail::quadratic_form(a1, x.subspan(0, size_t(n1)), y.subspan(0, size_t(n1)));
        T q2 = detail::quadratic_form(a2, x.subspan(size_t(n1), size_t(n2)),
                                      y.subspan(size_t(n1), size_t(n2)));
        return pow(q1 * q1 + (2.0 * c) * q1 * q2 + q2 * q2, 0.25);
      });
  m.family = FourthRootFamily{std::move(a1), std::move(a2), c};
  return m;
}

inline FinslerModel make_custom_finsler(int n, ChartBox chart,
                                        std::shared_ptr<const PhaseScalar> f) {
  FinslerModel m;
  m.n = n;
  m.chart = std::move(chart);
  m.F = std::move(f);
  m.family = CustomFamily{};
  return m;
}

struct FundamentalTensor {
  Mat g;      // g_ij = 1/2 [F^2]_{y^i y^j}
  Mat g_inv;  // g^{ij}
};

namespace detail {

// g_ij at scalar type T from second vertical derivatives of F^2.
template <class T>
MatT<T> fundamental_tensor_t(const PhaseScalar& f, std::span<const T> x,
                             std::span<const T> y) {
  if constexpr (ad_depth_v<T> + 2 > kMaxAdDepth) {
    throw_depth_exceeded("fundamental_tensor");
  } else {
    const int n = int(x.size());
    auto xc = lift_const(x);
    auto xc2 = lift_const(sp(xc));
    MatT<T> g(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        VecT<Dual<Dual<T>>> ys(size_t(n), Dual<Dual<T>>(0.0));
        for (int m = 0; m < n; ++m) {
          Dual<T> inner(y[m], T(m == j ? 1.0 : 0.0));
          Dual<T> outer_dir(T(m == i ? 1.0 : 0.0), T(0.0));
          ys[size_t(m)] = Dual<Dual<T>>(inner, outer_dir);
        }
        Dual<Dual<T>> fv = f(sp(xc2), sp(ys));
        Dual<Dual<T>> f2 = fv * fv;
        g(i, j) = 0.5 * f2.dot.dot;
        g(j, i) = g(i, j);
      }
    return g;
  }
}

// Geodesic coefficients G^i = 1/4 g^{il} { [F^2]_{x^k y^l} y^k - [F^2]_{x^l} }.
template <class T>
VecT<T> geodesic_coefficients_t(const PhaseScalar& f, std::span<const T> x,
                                std::span<const T> y) {
  if constexpr (ad_depth_v<T> + 2 > kMaxAdDepth) {
    throw_depth_exceeded("geodesic_coefficients");
  } else {
    const int n = int(x.size());
    const size_t un = size_t(n);
    MatT<T> g = fundamental_tensor_t(f, x, y);
    CholeskyT<T> chol(std::move(g));
    if (!chol.ok())
      throw NotStronglyConvex("fundamental tensor not positive definite at sample");

    VecT<T> rhs(un);
    // [F^2]_{x^l}: one first-order evaluation per l
    {
      auto yc = lift_const(y);
      for (int l = 0; l < n; ++l) {
        auto xl = lift_unit(x, l);
        Dual<T> fv = f(sp(xl), sp(yc));
        rhs[size_t(l)] = -(fv * fv).dot;
      }
    }
    // [F^2]_{x^k y^l} y^k: outer level x-directional along y, inner e_l in y
    {
      auto xc = lift_const(x);
      auto yc = lift_const(y);
      auto xs = lift_dir(sp(xc), sp(yc));
      for (int l = 0; l < n; ++l) {
        auto yl = lift_unit(y, l);
        auto ys = lift_const(sp(yl));
        Dual<Dual<T>> fv = f(sp(xs), sp(ys));
        rhs[size_t(l)] = rhs[size_t(l)] + (fv * fv).dot.dot;
      }
    }
    VecT<T> out = chol.solve(sp(rhs));
    for (auto& v : out) v = 0.25 * v;
    return out;
  }
}

}  // namespace detail

inline FundamentalTensor fundamental_tensor(const FinslerModel& fm, const TangentSample& s) {
  validate_sample(fm.chart, s);
  FundamentalTensor out;
  out.g = detail::fundamental_tensor_t<double>(*fm.F, sp(s.x), sp(s.y));
  CholeskyT<double> chol(out.g);
  if (!chol.ok())
    throw NotStronglyConvex("fundamental tensor not positive definite at sample");
  out.g_inv = chol.inverse();
  return out;
}

inline Vec geodesic_coefficients(const FinslerModel& fm, const TangentSample& s) {
  validate_sample(fm.chart, s);
  Vec out = detail::geodesic_coefficients_t<double>(*fm.F, sp(s.x), sp(s.y));
  for (int i = 0; i < fm.n; ++i)
    detail::ensure_finite(out[size_t(i)], "geodesic coefficient", "G[" + std::to_string(i) + "]");
  return out;
}

// The spray induced by the norm, always through the generic formula above so
// that family-specific assemblies remain independent cross-checks.
inline SprayModel induced_spray(const FinslerModel& fm) {
  SprayModel g;
  g.n = fm.n;
  g.chart = fm.chart;
  g.coeffs = make_spray_coeffs(
      fm.n, [f = fm.F]<class T>(std::span<const T> x, std::span<const T> y) {
        return detail::geodesic_coefficients_t<T>(*f, x, y);
      });
  return g;
}

// G~^i = Gbar^i + alpha s^i_0: the spray projectively related to the Randers
// spray, assembled from the metric spray and the antisymmetric b-derivative.
inline SprayModel randers_tilde_spray(const RiemannianData& a, const BetaData& b) {
  SprayModel g;
  g.n = a.n;
  g.chart = a.chart;
  g.coeffs = make_spray_coeffs(
      a.n, [a, b]<class T>(std::span<const T> x, std::span<const T> y) {
        const int n = a.n;
        Ten3T<T> gamma = detail::christoffels_t<T>(a, x);
        auto bd = detail::beta_derived_t<T>(a, b, x);
        T alpha = sqrt(detail::quadratic_form(a, x, y));
        std::vector<T> out(size_t(n), T(0.0));
        for (int i = 0; i < n; ++i) {
          T acc = T(0.0);
          for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) acc = acc + gamma(i, j, k) * y[j] * y[k];
          T s0 = T(0.0);
          for (int j = 0; j < n; ++j) s0 = s0 + bd.s_mixed(i, j) * y[j];
          out[size_t(i)] = 0.5 * acc + alpha * s0;
        }
        return out;
      });
  return g;
}

}  // namespace spraylab
