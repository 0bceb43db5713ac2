#pragma once

// Thin overload set so the polylog and closed-form code can be written once
// for double and for __float128.

#include <cmath>
#include <quadmath.h>

namespace colour3::detail {

using quad = __float128;

inline double log_(double x) { return std::log(x); }
inline double log1p_(double x) { return std::log1p(x); }
inline double abs_(double x) { return std::fabs(x); }
inline bool finite_(double x) { return std::isfinite(x); }

inline quad log_(quad x) { return logq(x); }
inline quad log1p_(quad x) { return log1pq(x); }
inline quad abs_(quad x) { return fabsq(x); }
inline bool finite_(quad x) { return finiteq(x) != 0; }

template <class T> struct consts;

template <> struct consts<double> {
  static constexpr double pi = 3.14159265358979323846;
  static constexpr double ln2 = 0.693147180559945309417;
  static constexpr double zeta3 = 1.20205690315959428540;
  static constexpr double eps = 2.220446049250313e-16;
};

template <> struct consts<quad> {
  static inline const quad pi = M_PIq;
  static inline const quad ln2 = M_LN2q;
  static inline const quad zeta3 = 1.2020569031595942853997381615114499907649862923405Q;
  static inline const quad eps = FLT128_EPSILON;
};

} // namespace colour3::detail
