#include "colour3/polylog.hpp"
#include "polylog_impl.hpp"

namespace colour3 {

double li2(double x) { return detail::li2_t(x); }
double li3(double x) { return detail::li3_t(x); }
double zeta3() { return detail::consts<double>::zeta3; }

} // namespace colour3
