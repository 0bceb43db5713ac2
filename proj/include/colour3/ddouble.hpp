#pragma once

#include <cmath>

// Double-double numbers: an unevaluated sum hi + lo with |lo| <= ulp(hi)/2,
// about 106 bits of mantissa. Used where the recursion divides by small node
// differences and would otherwise amplify double rounding order by order.
// Algorithms are the standard error-free transformations (two-sum, fused
// two-product) with the accurate addition.

namespace colour3 {

struct DD {
  double hi = 0, lo = 0;

  DD() = default;
  DD(double x) : hi(x), lo(0) {}
  DD(double h, double l) : hi(h), lo(l) {}

  double value() const { return hi + lo; }
};

namespace dd {

inline DD two_sum(double a, double b) {
  double s = a + b, bb = s - a;
  return {s, (a - (s - bb)) + (b - bb)};
}

inline DD quick_two_sum(double a, double b) {
  double s = a + b;
  return {s, b - (s - a)};
}

inline DD two_prod(double a, double b) {
  double p = a * b;
  return {p, std::fma(a, b, -p)};
}

inline DD two_diff(double a, double b) { return two_sum(a, -b); }

} // namespace dd

inline DD operator-(const DD &a) { return {-a.hi, -a.lo}; }

inline DD operator+(const DD &a, const DD &b) {
  DD s = dd::two_sum(a.hi, b.hi), t = dd::two_sum(a.lo, b.lo);
  s.lo += t.hi;
  s = dd::quick_two_sum(s.hi, s.lo);
  s.lo += t.lo;
  return dd::quick_two_sum(s.hi, s.lo);
}

inline DD operator-(const DD &a, const DD &b) { return a + (-b); }

inline DD operator*(const DD &a, const DD &b) {
  DD p = dd::two_prod(a.hi, b.hi);
  p.lo += a.hi * b.lo + a.lo * b.hi;
  return dd::quick_two_sum(p.hi, p.lo);
}

inline DD operator/(const DD &a, const DD &b) {
  double q1 = a.hi / b.hi;
  DD r = a - DD(q1) * b;
  double q2 = r.hi / b.hi;
  r = r - DD(q2) * b;
  double q3 = r.hi / b.hi;
  return dd::quick_two_sum(q1, q2) + DD(q3);
}

inline DD &operator+=(DD &a, const DD &b) { return a = a + b; }
inline DD &operator-=(DD &a, const DD &b) { return a = a - b; }
inline DD &operator*=(DD &a, const DD &b) { return a = a * b; }

inline bool isfinite(const DD &a) { return std::isfinite(a.hi) && std::isfinite(a.lo); }

} // namespace colour3
