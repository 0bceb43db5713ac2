#pragma once

// Evaluation of two-argument closed forms across removable singularities:
// on the diagonal p1 == p2 and at zero momentum. Both are handled by
// polynomial extrapolation from sample points at a safe distance, in quad
// precision so the cancellation between individually divergent terms at the
// sample points costs nothing visible in double.

#include "realmath.hpp"

namespace colour3::detail {

inline const quad kZeroGap = 1e-6Q;  // |p| below this: 1/p-type terms
inline const quad kDiagGap = 1e-5Q;  // |p1-p2| below this times (1+p1+p2)

inline quad neville(const quad *xs, const quad *ys, int n, quad x) {
  quad p[8];
  for (int i = 0; i < n; ++i)
    p[i] = ys[i];
  for (int m = 1; m < n; ++m)
    for (int i = 0; i < n - m; ++i)
      p[i] = ((x - xs[i + m]) * p[i] + (xs[i] - x) * p[i + 1]) / (xs[i] - xs[i + m]);
  return p[0];
}

struct SafeOptions {
  bool zero_poles = true;  // the raw form has 1/p1 or 1/p2 terms
  bool symmetric = true;   // f(a,b) == f(b,a), so even in the offset
};

template <class F>
quad safe_eval(const F &f, quad a, quad b, SafeOptions opt, int depth = 0) {
  if (depth < 4) {
    quad xs[4], ys[4];
    if (opt.zero_poles && (abs_(a) < kZeroGap || abs_(b) < kZeroGap)) {
      bool first = abs_(a) < kZeroGap;
      for (int j = 0; j < 4; ++j) {
        xs[j] = kZeroGap * (j + 1);
        ys[j] = first ? safe_eval(f, xs[j], b, opt, depth + 1) : safe_eval(f, a, xs[j], opt, depth + 1);
      }
      return neville(xs, ys, 4, first ? a : b);
    }
    if (abs_(a - b) < kDiagGap * (1 + a + b)) {
      quad m = (a + b) / 2, e = (a - b) / 2, h = kDiagGap * (1 + a + b);
      if (opt.symmetric) {
        for (int j = 0; j < 4; ++j) {
          quad hj = h * (j + 1);
          xs[j] = hj * hj;
          ys[j] = safe_eval(f, m + hj, m - hj, opt, depth + 1);
        }
        return neville(xs, ys, 4, e * e);
      }
      static const int off[4] = {-2, -1, 1, 2};
      for (int j = 0; j < 4; ++j) {
        quad hj = h * off[j];
        xs[j] = hj;
        ys[j] = safe_eval(f, m + hj, m - hj, opt, depth + 1);
      }
      return neville(xs, ys, 4, e);
    }
  }
  return f(a, b);
}

} // namespace colour3::detail
