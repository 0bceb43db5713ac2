#pragma once

#include <array>
#include <string>

// Closed-form coefficient functions G_{2n}(p1,p2) of the planar two-point
// function, n = 0..3, and the order-3 diagonal. Everything is evaluated in
// quad precision internally; removable singularities on the diagonal and at
// zero momentum are handled by polynomial extrapolation from safe offsets.

namespace colour3::closed {

double g0(double p1, double p2);
double g2(double p1, double p2);
double g4(double p1, double p2);
double g6(double p1, double p2);

// Order-3 diagonal value G6(p,p).
double gp6_diag(double p);

// Dispatch by order n in 0..3.
double coefficient(int n, double p1, double p2);

// Coefficient function f_k, k = 1..12, of the order-3 result. Throws
// std::domain_error when evaluated on one of its poles (p1 == p2, or p = 0
// for the terms carrying 1/p1 or 1/p2).
double f_coeff(int k, double p1, double p2);

// Individual terms of g6 before summation. The first seven entries are the
// p1-terms multiplying f1..f7, the next seven are the same terms with p1 and
// p2 exchanged, then the five shared terms (f8..f12). Off-diagonal and
// nonzero momenta only; the terms are individually divergent elsewhere.
struct G6Terms {
  std::array<double, 19> term{};
  double total = 0;
  static const std::array<std::string, 19> &names();
};
G6Terms g6_terms(double p1, double p2);

// Zero-momentum values c_n = G_{2n}(0,0), n = 0..3, from their exact forms.
double series_exact(int n);

} // namespace colour3::closed
