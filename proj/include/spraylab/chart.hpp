// Chart domain box, tangent samples, and the deterministic sampler.
#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "spraylab/errors.hpp"
#include "spraylab/tensor.hpp"

namespace spraylab {

// All homogeneous quantities are undefined at y = 0; samples below this fiber
// norm are rejected.
inline constexpr double kFiberFloor = 1e-12;

// Axis-aligned validity box of the single coordinate chart.
struct ChartBox {
  Vec lo, hi;

  int dim() const { return int(lo.size()); }

  bool contains(std::span<const double> x) const {
    for (int i = 0; i < dim(); ++i)
      if (x[i] < lo[i] || x[i] > hi[i]) return false;
    return true;
  }

  // Box shrunk by a per-side margin fraction, used when drawing samples.
  ChartBox shrunk(double margin_frac) const {
    ChartBox b = *this;
    for (int i = 0; i < dim(); ++i) {
      double m = margin_frac * (hi[i] - lo[i]);
      b.lo[i] += m;
      b.hi[i] -= m;
    }
    return b;
  }

  static ChartBox cube(int n, double half_width) {
    ChartBox b;
    b.lo.assign(size_t(n), -half_width);
    b.hi.assign(size_t(n), half_width);
    return b;
  }
};

// Evaluation locus of every field: chart point x with a nonzero fiber vector y.
struct TangentSample {
  Vec x, y;
};

inline void validate_sample(const ChartBox& chart, const TangentSample& s,
                            double fiber_floor = kFiberFloor) {
  if (int(s.x.size()) != chart.dim() || s.y.size() != s.x.size())
    throw ValidationError("tangent sample dimension mismatch");
  if (!chart.contains(s.x)) throw ValidationError("sample point outside chart box");
  if (!(norm(s.y) > fiber_floor)) throw ValidationError("fiber vector below norm floor");
}

struct SampleSpec {
  int count = 50;
  std::uint64_t seed = 42;
  double fiber_lo = 0.5, fiber_hi = 2.0;
  double margin = 0.1;  // chart-interior margin, fraction of box width per side
};

// Deterministic sample generator. Uniform doubles are derived from raw engine
// bits so reports are reproducible across standard libraries.
class Sampler {
 public:
  Sampler(ChartBox chart, SampleSpec spec)
      : inner_(chart.shrunk(spec.margin)), spec_(spec), rng_(spec.seed) {}

  double unit01() { return double(rng_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * unit01(); }

  TangentSample next() {
    TangentSample s;
    const int n = inner_.dim();
    s.x.resize(size_t(n));
    s.y.resize(size_t(n));
    for (int i = 0; i < n; ++i) s.x[i] = uniform(inner_.lo[i], inner_.hi[i]);
    double r = 0.0;
    do {
      for (int i = 0; i < n; ++i) s.y[i] = uniform(-1.0, 1.0);
      r = norm(s.y);
    } while (r < 0.2);
    double target = uniform(spec_.fiber_lo, spec_.fiber_hi);
    for (int i = 0; i < n; ++i) s.y[i] *= target / r;
    return s;
  }

  std::vector<TangentSample> draw(int count) {
    std::vector<TangentSample> out;
    out.reserve(size_t(count));
    for (int i = 0; i < count; ++i) out.push_back(next());
    return out;
  }

  // Draw samples satisfying a predicate (fiber cones, sub-level sets).
  template <class Pred>
  std::vector<TangentSample> draw_filtered(int count, Pred&& pred, int max_tries = 100000) {
    std::vector<TangentSample> out;
    out.reserve(size_t(count));
    int tries = 0;
    while (int(out.size()) < count) {
      if (++tries > max_tries) throw Error("sampler predicate rejected too many draws");
      TangentSample s = next();
      if (pred(s)) out.push_back(std::move(s));
    }
    return out;
  }

 private:
  ChartBox inner_;
  SampleSpec spec_;
  std::mt19937_64 rng_;
};

}  // namespace spraylab
