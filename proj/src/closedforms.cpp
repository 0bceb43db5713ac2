#include "colour3/closedforms.hpp"
#include "extrapolate.hpp"
#include "polylog_impl.hpp"

#include <stdexcept>
#include <string>

namespace colour3::closed {

using detail::abs_;
using detail::log1p_;
using Q = detail::quad;
using C = detail::consts<Q>;

namespace {

using detail::kZeroGap;
using detail::neville;
using detail::safe_eval;
using detail::SafeOptions;

Q sq(Q x) { return x * x; }
Q cube(Q x) { return x * x * x; }

// log((1+a)/(1+b)) without cancellation for a close to b
Q log_ratio(Q a, Q b) { return log1p_((a - b) / (1 + b)); }

Q li2q(Q x) { return detail::li2_t(x); }
Q li3q(Q x) { return detail::li3_t(x); }

Q g4_raw(Q a, Q b) {
  Q s = 1 + a + b, d = a - b, pi2_6 = sq(C::pi) / 6;
  Q L = log_ratio(a, b);
  return 2 / (sq(s) * d) *
         (3 * sq(L) / (s * d) + 2 * log1p_(a) / (a * (1 + 2 * a) * (1 + a)) -
          2 * log1p_(b) / (b * (1 + 2 * b) * (1 + b)) -
          (1 + 2 * b) * (pi2_6 + 2 * li2q(a / (1 + a))) / (sq(1 + 2 * a) * s) +
          (1 + 2 * a) * (pi2_6 + 2 * li2q(b / (1 + b))) / (sq(1 + 2 * b) * s));
}

// f_k(a,b) of the order-3 result, raw (no pole guard).
Q f_raw(int k, Q a, Q b) {
  Q s = 1 + a + b, d = a - b;
  switch (k) {
  case 1:
    return -8 / (a * sq(1 + a) * sq(1 + 2 * a) * d * sq(s));
  case 2:
    return 4 * (cube(d) + s * (7 * sq(s) - 3 * (2 * b + 1) * d)) /
           (cube(1 + 2 * a) * d * sq(sq(s)) * sq(1 + 2 * b));
  case 3:
    // the printed numerator lacks the factor a in 3a(1+a)(1+2a); without it
    // g6 diverges on the diagonal
    return 6 / (sq(a) * sq(1 + a) * cube(1 + 2 * a) * sq(d) * cube(s)) *
           (s * (2 * d * (1 + 10 * a * (1 + a)) + 3 * a * (1 + a) * (1 + 2 * a)) +
            2 * a * (1 + a) * sq(1 + 2 * a));
  case 4:
    return -4 / (a * sq(1 + a) * cube(1 + 2 * a) * sq(d) * cube(s)) *
           (s * (2 * (1 + b) + a * (11 + 43 * a + 38 * sq(a) - 6 * (3 + 4 * a) * b)) -
            2 * (1 + a) * cube(1 + 2 * a));
  case 5:
    return 12 * (2 * sq(d) + (2 * b + 1) * s) / (sq(1 + 2 * a) * cube(d) * sq(sq(s)));
  case 6:
    return -24 * (s * (10 * sq(d) + sq(1 + 3 * a - b)) - cube(d)) /
           (sq(sq(1 + 2 * a)) * cube(d) * cube(s));
  case 7:
    return -12 * (5 + 6 * a + 4 * b) / (sq(sq(1 + 2 * a)) * d * cube(s));
  case 8:
    return 20 / (sq(sq(s)) * cube(d));
  case 9:
    return -24 * (2 * sq(a) - 2 * a * b + a + 2 * sq(b) + b) /
           (a * (1 + a) * (1 + 2 * a) * sq(d) * b * (1 + b) * (1 + 2 * b) * sq(s));
  case 10: {
    Q inner = a * b *
                  (s * (48 * cube(a) + (-48 * sq(a) - 24 * a + 72) * sq(b) +
                        (-40 * sq(a) - 12 * a + 56) * b + 88 * sq(a) + 56 * a + 32 * cube(b) + 24) -
                   sq(2 * a + 1) * (4 * a * (a + 1) - 1)) +
              2 * sq(2 * a + 1) * sq(2 * b + 1) * cube(s) + a * (a + 1) * sq(2 * a + 1) +
              b * (b + 1) * sq(2 * b + 1);
    return 4 / (3 * a * (1 + a) * cube(1 + 2 * a) * b * (1 + b) * cube(1 + 2 * b) * cube(s)) * inner;
  }
  case 11:
    return -32 * (9 * sq(d) + 7 * sq(s)) / (sq(sq(1 + 2 * a)) * sq(sq(1 + 2 * b)) * s);
  case 12:
    return 24 * (sq(d) + 5 * sq(s)) / (cube(1 + 2 * a) * cube(1 + 2 * b) * cube(s));
  default:
    throw std::invalid_argument("f_coeff: k must be in 1..12");
  }
}

// The seven p1-terms of g6; the caller adds the exchanged copy.
void g6_half(Q a, Q b, Q *out) {
  Q pi2 = sq(C::pi);
  Q L = log1p_(a), X = li2q(a / (1 + a)), T = li3q(a / (1 + a));
  out[0] = L * f_raw(1, a, b);
  out[1] = pi2 * L * f_raw(2, a, b);
  out[2] = sq(L) * f_raw(3, a, b);
  out[3] = (X + pi2 / 6) * f_raw(4, a, b);
  out[4] = X * log_ratio(a, b) * f_raw(5, a, b);
  out[5] = (li3q(-a) + T + X * L + cube(L) / 6 - pi2 * L / 6) * f_raw(6, a, b);
  out[6] = (T + pi2 * L / 3) * f_raw(7, a, b);
}

void g6_shared(Q a, Q b, Q *out) {
  Q pi2 = sq(C::pi);
  out[0] = cube(log_ratio(a, b)) * f_raw(8, a, b);
  out[1] = log1p_(a) * log1p_(b) * f_raw(9, a, b);
  out[2] = pi2 * f_raw(10, a, b);
  out[3] = pi2 * C::ln2 * f_raw(11, a, b);
  out[4] = C::zeta3 * f_raw(12, a, b);
}

Q g6_raw(Q a, Q b) {
  Q t[19];
  g6_half(a, b, t);
  g6_half(b, a, t + 7);
  g6_shared(a, b, t + 14);
  Q sum = 0;
  for (Q x : t)
    sum += x;
  return sum;
}

Q gp6_raw(Q p) {
  Q pi2 = sq(C::pi);
  Q L = log1p_(p), X = li2q(p / (1 + p));
  Q u = 1 + p, v = 1 + 2 * p;
  Q v4 = sq(sq(v)), v5 = v4 * v, v6 = v5 * v, v7 = v6 * v;
  return 1776 / v7 *
             (li3q(-p) + Q(93) / 74 * li3q(p / u) + X * L + cube(L) / 6 - Q(14) / 111 * pi2 * L -
              Q(14) / 111 * pi2 * C::ln2 + Q(5) / 74 * C::zeta3) +
         2 * pi2 * (10 * p * (p * (4 * p + 39) + 60) + 257) / (3 * cube(u) * v6) +
         // printed as 2(9+10p)/(p(1+2p)^7); the diagonal of g6 requires this form
         2 * (9 + 10 * p) / (p * cube(u) * v4) + 4 * L * (5 + 7 * p) / (sq(p) * sq(u) * v5) -
         2 * sq(L) * (p * u * (546 * p * u + 125) + 11) / (cube(p) * cube(u) * v6) +
         4 * X * (7 + u * (176 * cube(p) + 75 * sq(p) - 44 * p - 11)) / (sq(p) * cube(u) * v6);
}

void check_pair(double p1, double p2, const char *who) {
  if (!std::isfinite(p1) || !std::isfinite(p2) || p1 < 0 || p2 < 0)
    throw std::domain_error(std::string(who) + ": momenta must be finite and nonnegative");
}

} // namespace

double g0(double p1, double p2) {
  check_pair(p1, p2, "g0");
  return 1.0 / (1.0 + (p1 + p2));
}

double g2(double p1, double p2) {
  check_pair(p1, p2, "g2");
  Q a = p1, b = p2, s = 1 + a + b;
  Q x = (a - b) / (1 + b);
  Q ratio; // log(1+x)/x
  if (abs_(x) < 1e-5Q)
    ratio = 1 - x / 2 + sq(x) / 3 - cube(x) / 4 + sq(sq(x)) / 5;
  else
    ratio = log1p_(x) / x;
  return double(2 * ratio / ((1 + b) * sq(s)));
}

double g4(double p1, double p2) {
  check_pair(p1, p2, "g4");
  return double(safe_eval(g4_raw, p1, p2, SafeOptions{}));
}

double g6(double p1, double p2) {
  check_pair(p1, p2, "g6");
  return double(safe_eval(g6_raw, p1, p2, SafeOptions{}));
}

double gp6_diag(double p) {
  if (!std::isfinite(p) || p < 0)
    throw std::domain_error("gp6_diag: momentum must be finite and nonnegative");
  Q x = p;
  if (x < kZeroGap) {
    Q xs[4], ys[4];
    for (int j = 0; j < 4; ++j) {
      xs[j] = kZeroGap * (j + 1);
      ys[j] = gp6_raw(xs[j]);
    }
    return double(neville(xs, ys, 4, x));
  }
  return double(gp6_raw(x));
}

double coefficient(int n, double p1, double p2) {
  switch (n) {
  case 0:
    return g0(p1, p2);
  case 1:
    return g2(p1, p2);
  case 2:
    return g4(p1, p2);
  case 3:
    return g6(p1, p2);
  default:
    throw std::invalid_argument("closed forms exist for orders 0..3 only");
  }
}

double f_coeff(int k, double p1, double p2) {
  if (k < 1 || k > 12)
    throw std::invalid_argument("f_coeff: k must be in 1..12");
  check_pair(p1, p2, "f_coeff");
  bool diag_pole = k <= 9;
  bool a_pole = k == 1 || k == 3 || k == 4 || k == 9 || k == 10;
  bool b_pole = k == 9 || k == 10;
  if ((diag_pole && p1 == p2) || (a_pole && p1 == 0) || (b_pole && p2 == 0))
    throw std::domain_error("f_coeff: f" + std::to_string(k) + " evaluated on its pole");
  return double(f_raw(k, p1, p2));
}

const std::array<std::string, 19> &G6Terms::names() {
  static const std::array<std::string, 19> n = {
      "L1*f1(p1,p2)",      "pi2*L1*f2(p1,p2)",  "L1^2*f3(p1,p2)",      "(X1+pi2/6)*f4(p1,p2)",
      "X1*L12*f5(p1,p2)",  "T1-combo*f6(p1,p2)", "(Li3+pi2*L1/3)*f7(p1,p2)",
      "L2*f1(p2,p1)",      "pi2*L2*f2(p2,p1)",  "L2^2*f3(p2,p1)",      "(X2+pi2/6)*f4(p2,p1)",
      "X2*L21*f5(p2,p1)",  "T2-combo*f6(p2,p1)", "(Li3+pi2*L2/3)*f7(p2,p1)",
      "L12^3*f8",          "L1*L2*f9",          "pi2*f10",             "pi2*ln2*f11",
      "zeta3*f12"};
  return n;
}

G6Terms g6_terms(double p1, double p2) {
  check_pair(p1, p2, "g6_terms");
  if (p1 == p2 || p1 == 0 || p2 == 0)
    throw std::domain_error("g6_terms: individual terms diverge on the diagonal and at zero momentum");
  Q t[19];
  g6_half(p1, p2, t);
  g6_half(p2, p1, t + 7);
  g6_shared(p1, p2, t + 14);
  G6Terms out;
  Q sum = 0;
  for (int i = 0; i < 19; ++i) {
    out.term[i] = double(t[i]);
    sum += t[i];
  }
  out.total = double(sum);
  return out;
}

double series_exact(int n) {
  Q pi2 = sq(C::pi);
  switch (n) {
  case 0:
    return 1.0;
  case 1:
    return 2.0;
  case 2:
    return double(2 * (pi2 - 6));
  case 3:
    return double(pi2 * (Q(514) / 3 - 224 * C::ln2) + 120 * C::zeta3 - 266);
  default:
    throw std::invalid_argument("exact zero-momentum values exist for orders 0..3 only");
  }
}

} // namespace colour3::closed
