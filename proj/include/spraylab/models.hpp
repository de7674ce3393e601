// Built-in model zoo: flat space, the stereographic round sphere, curved
// Randers models with nonclosed 1-form, the 4th-root product family with flat
// factors, and deterministic randomized Randers data for stress checks.
#pragma once

#include <cmath>
#include <memory>
#include <utility>
#include <vector>

#include "spraylab/finsler.hpp"
#include "spraylab/scurv.hpp"

namespace spraylab {

inline RiemannianData flat_metric(int n, ChartBox chart) {
  Mat id(n, n);
  for (int i = 0; i < n; ++i) id(i, i) = 1.0;
  return constant_metric(n, std::move(chart), id);
}

// Round sphere of curvature one in a stereographic chart:
// a_ij = 4 delta_ij / (1 + |x|^2)^2. Default box keeps well clear of the
// chart's far field.
inline RiemannianData sphere_metric(int n, ChartBox chart = {}) {
  if (chart.dim() == 0) chart = ChartBox::cube(n, 0.7);
  std::vector<std::shared_ptr<const ChartScalar>> upper;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      if (i == j) {
        upper.push_back(make_chart_scalar([]<class T>(std::span<const T> x) -> T {
          T r2 = T(0.0);
          for (const T& c : x) r2 = r2 + c * c;
          T d = 1.0 + r2;
          return 4.0 / (d * d);
        }));
      } else {
        upper.push_back(const_chart_scalar(0.0));
      }
    }
  return make_riemannian(n, std::move(chart), std::move(upper));
}

// Height function of the sphere chart: (1 - |x|^2) / (1 + |x|^2). Satisfies
// the covariant Hessian identity phi_{0;0} = -phi alpha^2 on the round metric.
inline std::shared_ptr<const ChartScalar> sphere_phi() {
  return make_chart_scalar([]<class T>(std::span<const T> x) -> T {
    T r2 = T(0.0);
    for (const T& c : x) r2 = r2 + c * c;
    return (1.0 - r2) / (1.0 + r2);
  });
}

// ln(phi), defined where phi > 0; used by the weighted-Ricci benchmark.
inline std::shared_ptr<const ChartScalar> sphere_log_phi() {
  auto phi = sphere_phi();
  return make_chart_scalar(
      [phi]<class T>(std::span<const T> x) -> T { return log((*phi)(x)); });
}

// Mildly curved metric safely positive definite on boxes of half-width <= 1:
// diagonal 1 + 0.2 x_{i+1}^2 (cyclic), vanishing off-diagonal.
inline RiemannianData default_randers_metric(int n, ChartBox chart) {
  std::vector<std::shared_ptr<const ChartScalar>> upper;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      if (i == j) {
        int k = (i + 1) % n;
        upper.push_back(make_chart_scalar([k]<class T>(std::span<const T> x) -> T {
          return 1.0 + 0.2 * x[size_t(k)] * x[size_t(k)];
        }));
      } else {
        upper.push_back(const_chart_scalar(0.0));
      }
    }
  return make_riemannian(n, std::move(chart), std::move(upper));
}

// 1-form with a genuinely nonclosed antisymmetric derivative and norm well
// below one on half-width-0.5 boxes.
inline BetaData default_randers_beta(int n) {
  BetaData b;
  b.n = n;
  b.b.push_back(make_chart_scalar(
      []<class T>(std::span<const T> x) -> T { return 0.3 - 0.2 * x[1]; }));
  b.b.push_back(make_chart_scalar(
      []<class T>(std::span<const T> x) -> T { return 0.2 * x[0] + 0.1 * x[0] * x[0]; }));
  for (int i = 2; i < n; ++i)
    b.b.push_back(make_chart_scalar(
        [i]<class T>(std::span<const T> x) -> T { return 0.1 * x[size_t(i - 1)]; }));
  return b;
}

inline FinslerModel default_randers_model(int n) {
  ChartBox chart = ChartBox::cube(n, 0.5);
  return make_randers_model(default_randers_metric(n, chart), default_randers_beta(n));
}

// Deterministic randomized Randers data: metric = identity + small bounded
// trigonometric perturbation, 1-form = affine with a forced curl. Bounds keep
// the metric positive definite and the 1-form norm below one on the box.
inline std::pair<RiemannianData, BetaData> random_randers(int n, ChartBox chart,
                                                          std::uint64_t seed) {
  Sampler rnd(chart, SampleSpec{.count = 1, .seed = seed});
  std::vector<std::shared_ptr<const ChartScalar>> upper;
  const double amp = 0.12 / double(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      double c = rnd.uniform(-amp, amp);
      double phase = rnd.uniform(0.0, 6.28318530717958648);
      double w1 = rnd.uniform(0.5, 1.5), w2 = rnd.uniform(0.5, 1.5);
      int k1 = int(rnd.uniform(0.0, double(n))) % n;
      int k2 = int(rnd.uniform(0.0, double(n))) % n;
      bool diag = (i == j);
      upper.push_back(make_chart_scalar(
          [=]<class T>(std::span<const T> x) -> T {
            T v = T(diag ? 1.0 : 0.0);
            return v + c * sin(w1 * x[size_t(k1)] + w2 * x[size_t(k2)] + phase);
          }));
    }
  RiemannianData a = make_riemannian(n, chart, std::move(upper));

  BetaData b;
  b.n = n;
  std::vector<std::vector<double>> coef(size_t(n), std::vector<double>(size_t(n), 0.0));
  std::vector<double> base(size_t(n), 0.0);
  for (int i = 0; i < n; ++i) {
    base[size_t(i)] = rnd.uniform(-0.15, 0.15);
    for (int j = 0; j < n; ++j) coef[size_t(i)][size_t(j)] = rnd.uniform(-0.08, 0.08);
  }
  coef[0][1] = coef[1][0] + 0.15;  // force a nonzero curl
  for (int i = 0; i < n; ++i) {
    b.b.push_back(make_chart_scalar(
        [row = coef[size_t(i)], c0 = base[size_t(i)]]<class T>(std::span<const T> x) -> T {
          T v = T(c0);
          for (size_t j = 0; j < x.size(); ++j) v = v + row[j] * x[j];
          return v;
        }));
  }
  return {std::move(a), std::move(b)};
}

// 4th-root product model with flat factors: locally Minkowski, so every
// curvature and S-curvature built from it must vanish identically.
inline FinslerModel fourth_root_flat(int n1, int n2, double c) {
  ChartBox chart = ChartBox::cube(n1 + n2, 0.8);
  Mat id1(n1, n1), id2(n2, n2);
  for (int i = 0; i < n1; ++i) id1(i, i) = 1.0;
  for (int i = 0; i < n2; ++i) id2(i, i) = 1.0 + 0.5 * i;  // anisotropic but constant
  RiemannianData a1 = constant_metric(n1, ChartBox::cube(n1, 0.8), id1);
  RiemannianData a2 = constant_metric(n2, ChartBox::cube(n2, 0.8), id2);
  return make_fourth_root_model(std::move(a1), std::move(a2), c, std::move(chart));
}

// Samples restricted to the cone where both factor norms stay comparable to
// |y|; the 4th-root norm is strongly convex there.
inline std::vector<TangentSample> draw_fourth_root_samples(const FinslerModel& fm,
                                                           const SampleSpec& spec) {
  const auto* fam = std::get_if<FourthRootFamily>(&fm.family);
  if (!fam) throw ValidationError("model is not a 4th-root family");
  const int n1 = fam->a1.n;
  Sampler sampler(fm.chart, spec);
  return sampler.draw_filtered(spec.count, [&](const TangentSample& s) {
    double q1 = 0.0, q2 = 0.0, yy = dot(sp(s.y), sp(s.y));
    for (int i = 0; i < n1; ++i) q1 += s.y[size_t(i)] * s.y[size_t(i)];
    for (int i = n1; i < fm.n; ++i) q2 += s.y[size_t(i)] * s.y[size_t(i)];
    return q1 > 0.01 * yy && q2 > 0.01 * yy;
  });
}

// Samples on the sphere chart restricted to { phi > floor }.
inline std::vector<TangentSample> draw_phi_positive_samples(const ChartBox& chart,
                                                            const SampleSpec& spec,
                                                            double floor = 0.2) {
  Sampler sampler(chart, spec);
  auto phi = sphere_phi();
  return sampler.draw_filtered(spec.count, [&](const TangentSample& s) {
    return (*phi)(std::span<const double>(s.x)) > floor;
  });
}

}  // namespace spraylab
