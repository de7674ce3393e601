// Volume forms, S-curvature, the projective spray, and the projective Ricci
// curvature computed by two independent routes.
#pragma once

#include <memory>
#include <utility>

#include "spraylab/riemann.hpp"
#include "spraylab/spray.hpp"

namespace spraylab {

enum class VolumeProvenance { riemannian, scaled, custom };

// Positive density sigma(x); dV = sigma dx^1...dx^n.
struct VolumeForm {
  std::shared_ptr<const ChartScalar> sigma;
  VolumeProvenance provenance = VolumeProvenance::custom;

  static VolumeForm riemannian(const RiemannianData& a) {
    VolumeForm v;
    v.sigma = make_chart_scalar([a]<class T>(std::span<const T> x) -> T {
      return detail::riemannian_volume_t<T>(a, x);
    });
    v.provenance = VolumeProvenance::riemannian;
    return v;
  }

  static VolumeForm constant(double c = 1.0) {
    VolumeForm v;
    v.sigma = const_chart_scalar(c);
    v.provenance = VolumeProvenance::custom;
    return v;
  }

  static VolumeForm custom(std::shared_ptr<const ChartScalar> sigma) {
    VolumeForm v;
    v.sigma = std::move(sigma);
    v.provenance = VolumeProvenance::custom;
    return v;
  }

  // Scaling convention: scaled(f) has density exp(-(n+1) f) * base, i.e. the
  // new form equals e^{-(n+1)f} times the base form.
  static VolumeForm scaled(const VolumeForm& base, std::shared_ptr<const ChartScalar> f,
                           int n) {
    VolumeForm v;
    v.sigma = make_chart_scalar(
        [b = base.sigma, f, n]<class T>(std::span<const T> x) -> T {
          return exp(T(-double(n + 1)) * (*f)(x)) * (*b)(x);
        });
    v.provenance = VolumeProvenance::scaled;
    return v;
  }
};

struct WeightedSpray {
  SprayModel G;
  VolumeForm dV;
};

namespace detail {

// S = dG^m/dy^m - y^m d(ln sigma)/dx^m
template <class T>
T s_curvature_t(const SprayCoeffs& g, const ChartScalar& sigma, std::span<const T> x,
                std::span<const T> y) {
  if constexpr (ad_depth_v<T> + 1 > kMaxAdDepth) {
    throw_depth_exceeded("s_curvature");
  } else {
    const int n = g.dim();
    T s = T(0.0);
    auto xc = lift_const(x);
    for (int m = 0; m < n; ++m) {
      auto ym = lift_unit(y, m);
      auto gm = g(sp(xc), sp(ym));
      s = s + gm[size_t(m)].dot;
    }
    auto xs = lift_dir(x, y);
    Dual<T> sv = sigma(sp(xs));
    return s - sv.dot / sv.val;
  }
}

}  // namespace detail

inline double s_curvature(const WeightedSpray& w, const TangentSample& s) {
  validate_sample(w.G.chart, s);
  double v = detail::s_curvature_t<double>(*w.G.coeffs, *w.dV.sigma, sp(s.x), sp(s.y));
  detail::ensure_finite(v, "S-curvature", "S");
  return v;
}

// The S-curvature as a field, for spray derivatives and deeper nesting.
inline std::shared_ptr<const PhaseScalar> s_curvature_field(const WeightedSpray& w) {
  return make_phase_scalar(
      [g = w.G.coeffs, sigma = w.dV.sigma]<class T>(std::span<const T> x,
                                                    std::span<const T> y) -> T {
        return detail::s_curvature_t<T>(*g, *sigma, x, y);
      });
}

// Residual of the volume-change law: with dV~ = e^{(n+1) f} dV (so that
// dV = e^{-(n+1) f} dV~), S_(G,dV) - S_(G,dV~) - (n+1) f_0 must vanish.
inline double volume_change_law(const SprayModel& g, const VolumeForm& dv,
                                std::shared_ptr<const ChartScalar> f,
                                const TangentSample& s) {
  VolumeForm scaled_up = VolumeForm::scaled(dv, negated(f), g.n);
  double s_dv = s_curvature({g, dv}, s);
  double s_tilde = s_curvature({g, scaled_up}, s);
  double f0 = chart_directional_t<double>(*f, sp(s.x), sp(s.y));
  return s_dv - s_tilde - double(g.n + 1) * f0;
}

// Coefficients of the projective spray: Ghat^i = G^i - (S/(n+1)) y^i.
inline SprayModel projective_spray(const WeightedSpray& w) {
  SprayModel out = w.G;
  out.coeffs = make_spray_coeffs(
      w.G.n, [g = w.G.coeffs, sigma = w.dV.sigma,
              n = w.G.n]<class T>(std::span<const T> x, std::span<const T> y) {
        std::vector<T> v = (*g)(x, y);
        T s = detail::s_curvature_t<T>(*g, *sigma, x, y);
        T factor = s / double(n + 1);
        for (size_t i = 0; i < v.size(); ++i) v[i] = v[i] - factor * y[i];
        return v;
      });
  return out;
}

// Projective Ricci curvature as the Ricci curvature of the projective spray.
inline double pric_via_hat(const WeightedSpray& w, const TangentSample& s) {
  return ricci(projective_spray(w), s);
}

// Projective Ricci curvature assembled directly:
// Ric + (n-1) { S_{|0}/(n+1) + [S/(n+1)]^2 }.
inline double pric_direct(const WeightedSpray& w, const TangentSample& s) {
  const int n = w.G.n;
  double ric = ricci(w.G, s);
  double sv = s_curvature(w, s);
  double s0 = horizontal_derivative_0(*s_curvature_field(w), w.G, s);
  double u = sv / double(n + 1);
  return ric + double(n - 1) * (s0 / double(n + 1) + u * u);
}

}  // namespace spraylab
