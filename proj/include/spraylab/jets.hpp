// Jet evaluation of phase scalars (mixed order <= 2 in x, <= 3 in y) and the
// central finite-difference oracle used to cross-check it.
#pragma once

#include <cmath>
#include <optional>
#include <string>

#include "spraylab/chart.hpp"
#include "spraylab/errors.hpp"
#include "spraylab/fields.hpp"

namespace spraylab {

// Requested derivative orders. Slots are filled when the request covers them:
// dx for x >= 1, dxdx for x >= 2, dy for y >= 1, dydy for y >= 2,
// dydydy for y >= 3, dxdy when both x >= 1 and y >= 1.
struct JetRequest {
  int x_order = 1;
  int y_order = 2;
};

struct Jet {
  double value = 0.0;
  std::optional<Vec> dx, dy;
  std::optional<Mat> dxdx, dxdy, dydy;
  std::optional<Ten3> dydydy;
};

namespace detail {

inline void check_finite(double v, const std::string& path) {
  if (!std::isfinite(v))
    throw NumericalBreakdown("non-finite jet value at " + path);
}

// Two-level seed: value v, outer direction d1, inner direction d2.
inline D2 seed2(double v, double d1, double d2) { return D2(D1(v, d2), D1(d1, 0.0)); }

// Three-level seed, one direction per level.
inline D3 seed3(double v, double d1, double d2, double d3) {
  return D3(seed2(v, d2, d3), seed2(d1, 0.0, 0.0));
}

}  // namespace detail

// Evaluate a field and its requested partial derivatives at a sample. Every
// slot is computed by an independent seeded evaluation, so lower-order slots
// do not depend on what else was requested and the symmetry of the second and
// third derivative blocks is a genuine numerical statement, not bookkeeping.
inline Jet jet_eval(const PhaseScalar& f, const TangentSample& s, JetRequest req) {
  using detail::check_finite;
  if (req.x_order < 0 || req.x_order > 2 || req.y_order < 0 || req.y_order > 3)
    throw ValidationError("jet request outside supported orders (x<=2, y<=3)");
  const int n = int(s.x.size());
  const std::span<const double> x(s.x), y(s.y);

  Jet jet;
  jet.value = f(x, y);
  check_finite(jet.value, "value");

  if (req.x_order >= 1) {
    jet.dx.emplace(size_t(n), 0.0);
    auto yc = lift_const(y);
    for (int i = 0; i < n; ++i) {
      auto xi = lift_unit(x, i);
      (*jet.dx)[size_t(i)] = f(sp(xi), sp(yc)).dot;
      check_finite((*jet.dx)[size_t(i)], "dx[" + std::to_string(i) + "]");
    }
  }
  if (req.y_order >= 1) {
    jet.dy.emplace(size_t(n), 0.0);
    auto xc = lift_const(x);
    for (int j = 0; j < n; ++j) {
      auto yj = lift_unit(y, j);
      (*jet.dy)[size_t(j)] = f(sp(xc), sp(yj)).dot;
      check_finite((*jet.dy)[size_t(j)], "dy[" + std::to_string(j) + "]");
    }
  }

  const size_t un = size_t(n);
  auto seeded_pair = [&](bool ix, int i, bool jx, int j) {
    // One D2 evaluation with outer direction i (x or y), inner direction j.
    VecT<D2> xs(un), ys(un);
    for (int k = 0; k < n; ++k) {
      xs[size_t(k)] = detail::seed2(s.x[size_t(k)], ix && k == i ? 1.0 : 0.0,
                                    jx && k == j ? 1.0 : 0.0);
      ys[size_t(k)] = detail::seed2(s.y[size_t(k)], !ix && k == i ? 1.0 : 0.0,
                                    !jx && k == j ? 1.0 : 0.0);
    }
    return f(sp(xs), sp(ys)).dot.dot;
  };

  if (req.x_order >= 2) {
    jet.dxdx.emplace(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        (*jet.dxdx)(i, j) = seeded_pair(true, i, true, j);
        check_finite((*jet.dxdx)(i, j),
                     "dxdx[" + std::to_string(i) + "][" + std::to_string(j) + "]");
      }
  }
  if (req.x_order >= 1 && req.y_order >= 1) {
    jet.dxdy.emplace(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        (*jet.dxdy)(i, j) = seeded_pair(true, i, false, j);
        check_finite((*jet.dxdy)(i, j),
                     "dxdy[" + std::to_string(i) + "][" + std::to_string(j) + "]");
      }
  }
  if (req.y_order >= 2) {
    jet.dydy.emplace(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        (*jet.dydy)(i, j) = seeded_pair(false, i, false, j);
        check_finite((*jet.dydy)(i, j),
                     "dydy[" + std::to_string(i) + "][" + std::to_string(j) + "]");
      }
  }
  if (req.y_order >= 3) {
    jet.dydydy.emplace(n);
    auto xc3 = lift_const(x);
    auto xc2 = lift_const(sp(xc3));
    auto xc1 = lift_const(sp(xc2));  // D3 constants
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          VecT<D3> ys(un);
          for (int m = 0; m < n; ++m)
            ys[size_t(m)] = detail::seed3(s.y[size_t(m)], m == j ? 1.0 : 0.0,
                                          m == k ? 1.0 : 0.0, m == l ? 1.0 : 0.0);
          (*jet.dydydy)(j, k, l) = f(sp(xc1), sp(ys)).dot.dot.dot;
          check_finite((*jet.dydydy)(j, k, l), "dydydy[" + std::to_string(j) + "][" +
                                                   std::to_string(k) + "][" +
                                                   std::to_string(l) + "]");
        }
  }
  return jet;
}

// ---- finite-difference oracle ------------------------------------------------

enum class Coord { x, y };

struct PartialIndex {
  Coord coord;
  int index;
};

// Recommended step for the central stencils: orders 1-2 balance truncation
// against roundoff at 1e-5, order 3 needs the larger 1e-3.
inline double fd_step(int total_order, double coordinate) {
  return (total_order <= 2 ? 1e-5 : 1e-3) * (1.0 + std::abs(coordinate));
}

namespace detail {

inline double fd_recurse(const PhaseScalar& f, Vec x, Vec y,
                         std::span<const PartialIndex> mi, double step,
                         const ChartBox* chart) {
  if (mi.empty()) return f(sp(x), sp(y));
  const PartialIndex p = mi.front();
  auto rest = mi.subspan(1);
  double& c = (p.coord == Coord::x) ? x[size_t(p.index)] : y[size_t(p.index)];
  const double c0 = c;
  c = c0 + step;
  if (p.coord == Coord::x && chart && !chart->contains(x))
    throw DomainExit("finite-difference stencil left the chart box");
  double plus = fd_recurse(f, x, y, rest, step, chart);
  c = c0 - step;
  if (p.coord == Coord::x && chart && !chart->contains(x))
    throw DomainExit("finite-difference stencil left the chart box");
  double minus = fd_recurse(f, x, y, rest, step, chart);
  return (plus - minus) / (2.0 * step);
}

}  // namespace detail

// Central-difference estimate of one mixed partial (total order <= 3),
// truncation error O(step^2). Entirely independent of the dual-number path.
inline double fd_oracle(const PhaseScalar& f, const TangentSample& s,
                        std::span<const PartialIndex> multi_index, double step,
                        const ChartBox* chart = nullptr) {
  if (!(step > 0.0)) throw ValidationError("fd_oracle step must be positive");
  if (multi_index.size() > 3) throw ValidationError("fd_oracle order must be <= 3");
  return detail::fd_recurse(f, s.x, s.y, multi_index, step, chart);
}

}  // namespace spraylab
