#pragma once

#include "realmath.hpp"
#include <stdexcept>
#include <string>

namespace colour3::detail {

// Power series sum_k x^k / k^s for |x| <= 1/2.
template <class T> T polylog_series(T x, int s) {
  T sum = 0, xk = x;
  for (int k = 1; k < 400; ++k) {
    T kk = T(k), den = kk;
    for (int j = 1; j < s; ++j)
      den *= kk;
    T term = xk / den;
    sum += term;
    if (abs_(term) <= consts<T>::eps * abs_(sum) * T(0.25))
      break;
    xk *= x;
  }
  return sum;
}

template <class T> void check_arg(T x, const char *name) {
  if (!finite_(x))
    throw std::domain_error(std::string(name) + ": non-finite argument");
  if (x > T(1))
    throw std::domain_error(std::string(name) + ": argument above 1 is off the real branch");
}

template <class T> T li2_t(T x) {
  check_arg(x, "li2");
  const T pi2_6 = consts<T>::pi * consts<T>::pi / 6;
  if (x == T(0))
    return 0;
  if (x == T(1))
    return pi2_6;
  if (x < T(-1)) {
    T l = log_(-x);
    return -pi2_6 - l * l / 2 - li2_t(T(1) / x);
  }
  if (x < T(-0.5)) {
    // Landen: Li2(x) + Li2(x/(x-1)) = -log(1-x)^2/2
    T l = log1p_(-x);
    return -li2_t(x / (x - 1)) - l * l / 2;
  }
  if (x <= T(0.5))
    return polylog_series(x, 2);
  // reflection
  return pi2_6 - log_(x) * log1p_(-x) - li2_t(T(1) - x);
}

// zeta(s), integer s >= 2, from the eta function with Borwein's acceleration
// of the alternating series; 60 terms are well below quad epsilon.
template <class T> T zeta_int(int s) {
  const int n = 60;
  T d[n + 1], term = 1, acc = 1;
  d[0] = 1;
  for (int i = 0; i < n; ++i) {
    term *= T(4) * T(n + i) * T(n - i) / (T(2 * i + 1) * T(2 * i + 2));
    acc += term;
    d[i + 1] = acc;
  }
  T eta = 0;
  for (int k = 0; k < n; ++k) {
    T p = 1;
    for (int j = 0; j < s; ++j)
      p *= T(k + 1);
    T t = (d[k] - d[n]) / p;
    eta += (k % 2) ? -t : t;
  }
  eta = -eta / d[n];
  T two = 1;
  for (int j = 1; j < s; ++j)
    two *= 2;
  return eta / (1 - 1 / two);
}

// Li3(e^mu) for mu <= 0 small (|mu| <= log 2):
//   zeta3 + zeta2 mu + (3/2 - log(-mu)) mu^2/2 - mu^3/12 + sum_k zeta(3-k) mu^k/k!
// where only even k >= 4 contribute, zeta(1-2m)/(2m+2)! =
//   (-1)^m 2 (2m-1)! zeta(2m) / ((2pi)^{2m} (2m+2)!).
template <class T> T li3_logseries(T x) {
  const T pi = consts<T>::pi;
  T mu = log_(x);
  T sum = consts<T>::zeta3 + pi * pi / 6 * mu + (T(1.5) - log_(-mu)) * mu * mu / 2 -
          mu * mu * mu / 12;
  T mu2 = mu * mu, mupow = mu2 * mu2; // mu^(2m+2), starting at m = 1
  T twopi2 = 4 * pi * pi, scale = twopi2; // (2pi)^{2m}
  T fact_a = 1;                           // (2m-1)!
  T fact_b = 24;                          // (2m+2)!
  for (int m = 1; m < 60; ++m) {
    T zeta = zeta_int<T>(2 * m);
    T c = 2 * fact_a * zeta / (scale * fact_b);
    T term = ((m % 2) ? -c : c) * mupow;
    sum += term;
    if (abs_(term) <= consts<T>::eps * abs_(sum) * T(0.25))
      break;
    // advance m -> m+1
    fact_a *= T(2 * m) * T(2 * m + 1);
    fact_b *= T(2 * m + 3) * T(2 * m + 4);
    scale *= twopi2;
    mupow *= mu2;
  }
  return sum;
}

// Li3 on [1/2, 1)
template <class T> T li3_upper(T x) {
  return x == T(1) ? consts<T>::zeta3 : li3_logseries(x);
}

template <class T> T li3_t(T x) {
  check_arg(x, "li3");
  const T pi2_6 = consts<T>::pi * consts<T>::pi / 6;
  if (x == T(0))
    return 0;
  if (x == T(1))
    return consts<T>::zeta3;
  if (x < T(-1)) {
    // inversion: Li3(-y) = Li3(-1/y) - log(y)^3/6 - pi^2/6 log(y)
    T l = log_(-x);
    return li3_t(T(1) / x) - l * l * l / 6 - pi2_6 * l;
  }
  if (x < T(-0.5)) {
    // duplication: Li3(y) + Li3(-y) = Li3(y^2)/4
    T y = -x;
    return li3_t(y * y) / 4 - li3_upper(y);
  }
  if (x <= T(0.5))
    return polylog_series(x, 3);
  return li3_upper(x);
}

} // namespace colour3::detail
