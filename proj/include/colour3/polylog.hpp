#pragma once

// Real-argument dilogarithm and trilogarithm on the real branch x <= 1.

namespace colour3 {

double li2(double x);
double li3(double x);

// Riemann zeta(3), stored constant.
double zeta3();

} // namespace colour3
