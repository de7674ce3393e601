// Small dense factorizations that work on nested dual scalars.
//
// Mainstream linear-algebra packages assume an arithmetic scalar; the solves
// here must run inside AD evaluations, so the factorization is written
// directly against the Dual type (pivot tests compare value parts).
#pragma once

#include <span>

#include "spraylab/dual.hpp"
#include "spraylab/tensor.hpp"

namespace spraylab {

template <class T>
class CholeskyT {
 public:
  explicit CholeskyT(MatT<T> a) : n_(a.rows()), l_(std::move(a)) {
    for (int j = 0; j < n_; ++j) {
      T d = l_(j, j);
      for (int k = 0; k < j; ++k) d = d - l_(j, k) * l_(j, k);
      double dv = value_of(d);
      if (!(dv > 0.0) || !std::isfinite(dv)) {
        ok_ = false;
        return;
      }
      T root = sqrt(d);
      l_(j, j) = root;
      for (int i = j + 1; i < n_; ++i) {
        T s = l_(i, j);
        for (int k = 0; k < j; ++k) s = s - l_(i, k) * l_(j, k);
        l_(i, j) = s / root;
      }
    }
  }

  bool ok() const { return ok_; }
  int dim() const { return n_; }

  VecT<T> solve(std::span<const T> rhs) const {
    VecT<T> z(rhs.begin(), rhs.end());
    for (int i = 0; i < n_; ++i) {
      T s = z[i];
      for (int k = 0; k < i; ++k) s = s - l_(i, k) * z[k];
      z[i] = s / l_(i, i);
    }
    for (int i = n_ - 1; i >= 0; --i) {
      T s = z[i];
      for (int k = i + 1; k < n_; ++k) s = s - l_(k, i) * z[k];
      z[i] = s / l_(i, i);
    }
    return z;
  }

  MatT<T> inverse() const {
    MatT<T> inv(n_, n_);
    VecT<T> e(n_, T(0.0));
    for (int j = 0; j < n_; ++j) {
      e[j] = T(1.0);
      VecT<T> col = solve(sp(e));
      for (int i = 0; i < n_; ++i) inv(i, j) = col[i];
      e[j] = T(0.0);
    }
    return inv;
  }

  // product of the factor diagonal = sqrt(det)
  T sqrt_det() const {
    T p = T(1.0);
    for (int i = 0; i < n_; ++i) p = p * l_(i, i);
    return p;
  }

 private:
  int n_ = 0;
  MatT<T> l_;
  bool ok_ = true;
};

}  // namespace spraylab
