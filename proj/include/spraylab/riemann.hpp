// Riemannian backend: Christoffel symbols, the Levi-Civita spray, covariant
// derivatives of scalars and 1-forms, and the tensors derived from a 1-form b
// (symmetrized / antisymmetrized covariant derivative and its contractions).
#pragma once

#include <memory>
#include <utility>

#include "spraylab/errors.hpp"
#include "spraylab/fields.hpp"
#include "spraylab/linalg.hpp"
#include "spraylab/spray.hpp"

namespace spraylab {

// Smooth metric tensor field a_ij(x); entries stored row-major with the
// symmetric pair sharing one field object.
struct RiemannianData {
  int n = 0;
  ChartBox chart;
  std::vector<std::shared_ptr<const ChartScalar>> a;  // n*n

  const ChartScalar& entry(int i, int j) const { return *a[size_t(i) * n + j]; }
};

// Smooth 1-form field b_i(x).
struct BetaData {
  int n = 0;
  std::vector<std::shared_ptr<const ChartScalar>> b;  // n
};

// Upper-triangular builder; mirrors (i, j) into (j, i).
inline RiemannianData make_riemannian(
    int n, ChartBox chart, std::vector<std::shared_ptr<const ChartScalar>> upper) {
  RiemannianData d;
  d.n = n;
  d.chart = std::move(chart);
  d.a.assign(size_t(n) * n, nullptr);
  size_t idx = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      d.a[size_t(i) * n + j] = upper[idx];
      d.a[size_t(j) * n + i] = upper[idx];
      ++idx;
    }
  return d;
}

inline RiemannianData constant_metric(int n, ChartBox chart, const Mat& values) {
  std::vector<std::shared_ptr<const ChartScalar>> upper;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) upper.push_back(const_chart_scalar(values(i, j)));
  return make_riemannian(n, std::move(chart), std::move(upper));
}

namespace detail {

template <class T>
MatT<T> metric_at(const RiemannianData& a, std::span<const T> x) {
  MatT<T> m(a.n, a.n);
  for (int i = 0; i < a.n; ++i)
    for (int j = i; j < a.n; ++j) {
      m(i, j) = a.entry(i, j)(x);
      m(j, i) = m(i, j);
    }
  return m;
}

template <class T>
VecT<T> oneform_at(const BetaData& b, std::span<const T> x) {
  VecT<T> v(size_t(b.n));
  for (int i = 0; i < b.n; ++i) v[size_t(i)] = (*b.b[size_t(i)])(x);
  return v;
}

template <class T>
CholeskyT<T> metric_factor(const RiemannianData& a, std::span<const T> x) {
  CholeskyT<T> chol(metric_at(a, x));
  if (!chol.ok()) throw MetricDegenerate("metric not positive definite at queried point");
  return chol;
}

// gamma^i_jk = 1/2 a^{il} (d_j a_{lk} + d_k a_{lj} - d_l a_{jk})
template <class T>
Ten3T<T> christoffels_t(const RiemannianData& a, std::span<const T> x) {
  if constexpr (ad_depth_v<T> + 1 > kMaxAdDepth) {
    throw_depth_exceeded("christoffels");
  } else {
    const int n = a.n;
    const size_t un = size_t(n);
    std::vector<MatT<T>> da(un);  // da[k](i,j) = d a_ij / dx^k
    for (int k = 0; k < n; ++k) {
      auto xk = lift_unit(x, k);
      MatT<Dual<T>> m = metric_at(a, sp(xk));
      MatT<T> d(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) d(i, j) = m(i, j).dot;
      da[size_t(k)] = std::move(d);
    }
    CholeskyT<T> chol = metric_factor(a, x);
    Ten3T<T> gamma(n);
    VecT<T> rhs(un);
    for (int j = 0; j < n; ++j)
      for (int k = j; k < n; ++k) {
        for (int l = 0; l < n; ++l)
          rhs[size_t(l)] =
              0.5 * (da[size_t(j)](l, k) + da[size_t(k)](l, j) - da[size_t(l)](j, k));
        VecT<T> col = chol.solve(sp(rhs));
        for (int i = 0; i < n; ++i) {
          gamma(i, j, k) = col[size_t(i)];
          gamma(i, k, j) = col[size_t(i)];
        }
      }
    return gamma;
  }
}

// b_{i;j} = d b_i / dx^j - b_k gamma^k_ij
template <class T>
MatT<T> covariant_derivative_1form_t(const RiemannianData& a, const BetaData& b,
                                     std::span<const T> x) {
  if constexpr (ad_depth_v<T> + 1 > kMaxAdDepth) {
    throw_depth_exceeded("covariant_derivative_1form");
  } else {
    const int n = a.n;
    VecT<T> bval = oneform_at(b, x);
    MatT<T> db(n, n);  // db(i,j) = d b_i / dx^j
    for (int j = 0; j < n; ++j) {
      auto xj = lift_unit(x, j);
      VecT<Dual<T>> bv = oneform_at(b, sp(xj));
      for (int i = 0; i < n; ++i) db(i, j) = bv[size_t(i)].dot;
    }
    Ten3T<T> gamma = christoffels_t(a, x);
    MatT<T> out(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        T corr = T(0.0);
        for (int k = 0; k < n; ++k) corr = corr + bval[size_t(k)] * gamma(k, i, j);
        out(i, j) = db(i, j) - corr;
      }
    return out;
  }
}

}  // namespace detail

inline Ten3 christoffels(const RiemannianData& a, const Vec& x) {
  return detail::christoffels_t<double>(a, sp(x));
}

// Levi-Civita spray of the metric: quadratic coefficients 1/2 gamma^i_jk y^j y^k.
inline SprayModel levi_civita_spray(const RiemannianData& a) {
  SprayModel g;
  g.n = a.n;
  g.chart = a.chart;
  g.coeffs = make_spray_coeffs(
      a.n, [a]<class T>(std::span<const T> x, std::span<const T> y) {
        Ten3T<T> gamma = detail::christoffels_t<T>(a, x);
        std::vector<T> out(size_t(a.n), T(0.0));
        for (int i = 0; i < a.n; ++i) {
          T acc = T(0.0);
          for (int j = 0; j < a.n; ++j)
            for (int k = 0; k < a.n; ++k) acc = acc + gamma(i, j, k) * y[j] * y[k];
          out[size_t(i)] = 0.5 * acc;
        }
        return out;
      });
  return g;
}

inline Mat covariant_derivative_1form(const RiemannianData& a, const BetaData& b,
                                      const Vec& x) {
  return detail::covariant_derivative_1form_t<double>(a, b, sp(x));
}

// The b-derived tensors at a point: r (symmetric part), s (antisymmetric
// part), s with the first index raised, s_i = b^j s_{ji}, t_ij = s_il s^l_j,
// and t_i = s_m s^m_i.
struct BetaDerived {
  Mat r;        // r_ij
  Mat s;        // s_ij
  Mat s_mixed;  // s^i_j
  Mat t;        // t_ij
  Vec s_vec;    // s_i
  Vec t_vec;    // t_i
};

namespace detail {

template <class T>
struct BetaDerivedT {
  MatT<T> r, s, s_mixed, t;
  VecT<T> s_vec, t_vec;
};

template <class T>
BetaDerivedT<T> beta_derived_t(const RiemannianData& a, const BetaData& b,
                               std::span<const T> x) {
  const int n = a.n;
  MatT<T> cov = covariant_derivative_1form_t(a, b, x);
  BetaDerivedT<T> out;
  out.r = MatT<T>(n, n);
  out.s = MatT<T>(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      out.r(i, j) = 0.5 * (cov(i, j) + cov(j, i));
      out.s(i, j) = 0.5 * (cov(i, j) - cov(j, i));
    }
  CholeskyT<T> chol = metric_factor(a, x);
  const size_t un = size_t(n);
  out.s_mixed = MatT<T>(n, n);
  VecT<T> col(un);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) col[size_t(k)] = out.s(k, j);
    VecT<T> raised = chol.solve(sp(col));
    for (int i = 0; i < n; ++i) out.s_mixed(i, j) = raised[size_t(i)];
  }
  VecT<T> bval = oneform_at(b, x);
  VecT<T> braised = chol.solve(sp(bval));
  out.s_vec = VecT<T>(size_t(n), T(0.0));
  for (int i = 0; i < n; ++i) {
    T acc = T(0.0);
    for (int j = 0; j < n; ++j) acc = acc + braised[size_t(j)] * out.s(j, i);
    out.s_vec[size_t(i)] = acc;
  }
  out.t = MatT<T>(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      T acc = T(0.0);
      for (int l = 0; l < n; ++l) acc = acc + out.s(i, l) * out.s_mixed(l, j);
      out.t(i, j) = acc;
    }
  out.t_vec = VecT<T>(size_t(n), T(0.0));
  for (int i = 0; i < n; ++i) {
    T acc = T(0.0);
    for (int m = 0; m < n; ++m) acc = acc + out.s_vec[size_t(m)] * out.s_mixed(m, i);
    out.t_vec[size_t(i)] = acc;
  }
  return out;
}

}  // namespace detail

inline BetaDerived beta_derived(const RiemannianData& a, const BetaData& b, const Vec& x) {
  auto d = detail::beta_derived_t<double>(a, b, sp(x));
  return BetaDerived{std::move(d.r), std::move(d.s), std::move(d.s_mixed),
                     std::move(d.t), std::move(d.s_vec), std::move(d.t_vec)};
}

namespace detail {

// d_j = s^m_{j;m}, the covariant divergence of the mixed tensor. The raised
// tensor is differentiated (raise first, then apply ";"), matching how the
// covariant derivative acts on mixed indices.
template <class T>
VecT<T> s_mixed_divergence_t(const RiemannianData& a, const BetaData& b,
                             std::span<const T> x) {
  if constexpr (ad_depth_v<T> + 2 > kMaxAdDepth) {
    throw_depth_exceeded("s_mixed_divergence");
  } else {
    const int n = a.n;
    BetaDerivedT<T> bd = beta_derived_t(a, b, x);
    Ten3T<T> gamma = christoffels_t(a, x);
    // ds[m](i,j) = d s^i_j / dx^m
    const size_t un = size_t(n);
    std::vector<MatT<T>> ds(un);
    for (int m = 0; m < n; ++m) {
      auto xm = lift_unit(x, m);
      BetaDerivedT<Dual<T>> bdm = beta_derived_t(a, b, sp(xm));
      MatT<T> d(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) d(i, j) = bdm.s_mixed(i, j).dot;
      ds[size_t(m)] = std::move(d);
    }
    VecT<T> out(size_t(n), T(0.0));
    for (int j = 0; j < n; ++j) {
      T acc = T(0.0);
      for (int m = 0; m < n; ++m) {
        acc = acc + ds[size_t(m)](m, j);
        for (int l = 0; l < n; ++l)
          acc = acc + gamma(m, m, l) * bd.s_mixed(l, j) - gamma(l, m, j) * bd.s_mixed(m, l);
      }
      out[size_t(j)] = acc;
    }
    return out;
  }
}

// h_{0;0} = y^i y^j (d^2 h / dx^i dx^j - gamma^k_ij dh/dx^k)
template <class T>
T scalar_second_covariant_t(const RiemannianData& a, const ChartScalar& h,
                            std::span<const T> x, std::span<const T> y) {
  if constexpr (ad_depth_v<T> + 2 > kMaxAdDepth) {
    throw_depth_exceeded("scalar_second_covariant");
  } else {
    const int n = a.n;
    auto x1 = lift_dir(x, y);   // inner level: x-direction y
    auto y1 = lift_const(y);
    auto x2 = lift_dir(sp(x1), sp(y1));  // outer level: x-direction y again
    T hyy = h(sp(x2)).dot.dot;
    const size_t un = size_t(n);
    VecT<T> grad(un);
    for (int k = 0; k < n; ++k) {
      auto xk = lift_unit(x, k);
      grad[size_t(k)] = h(sp(xk)).dot;
    }
    Ten3T<T> gamma = christoffels_t(a, x);
    T corr = T(0.0);
    for (int k = 0; k < n; ++k) {
      T gyy = T(0.0);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) gyy = gyy + gamma(k, i, j) * y[i] * y[j];
      corr = corr + gyy * grad[size_t(k)];
    }
    return hyy - corr;
  }
}

}  // namespace detail

inline Vec s_mixed_divergence(const RiemannianData& a, const BetaData& b, const Vec& x) {
  return detail::s_mixed_divergence_t<double>(a, b, sp(x));
}

inline double scalar_second_covariant(const RiemannianData& a, const ChartScalar& h,
                                      const TangentSample& s) {
  validate_sample(a.chart, s);
  return detail::scalar_second_covariant_t<double>(a, h, sp(s.x), sp(s.y));
}

namespace detail {

template <class T>
T riemannian_volume_t(const RiemannianData& a, std::span<const T> x) {
  return metric_factor(a, x).sqrt_det();
}

}  // namespace detail

// sigma_alpha = sqrt(det a_ij(x))
inline double riemannian_volume(const RiemannianData& a, const Vec& x) {
  return detail::riemannian_volume_t<double>(a, sp(x));
}

// Ricci curvature of the metric, through its Levi-Civita spray.
inline double ricci_alpha(const RiemannianData& a, const TangentSample& s) {
  return ricci(levi_civita_spray(a), s);
}

}  // namespace spraylab
