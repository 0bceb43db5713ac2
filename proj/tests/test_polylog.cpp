#include <doctest.h>

#include "colour3/polylog.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

using namespace colour3;

namespace {

const double pi = 3.14159265358979323846;

// Alternating series summed with the averaging of consecutive partial sums
// repeated (Euler transform on the tail), independent of the library.
double alternating(double s, int terms = 60) {
  std::vector<double> partial(terms);
  double acc = 0;
  for (int k = 1; k <= terms; ++k) {
    acc += (k % 2 ? -1.0 : 1.0) / std::pow(double(k), s);
    partial[k - 1] = acc;
  }
  for (int round = 0; round < 40; ++round)
    for (int i = 0; i + 1 < int(partial.size()) - round; ++i)
      partial[i] = 0.5 * (partial[i] + partial[i + 1]);
  return partial[0];
}

} // namespace

TEST_CASE("dilogarithm special values") {
  CHECK(li2(0.0) == 0.0);
  CHECK(li2(-1.0) == doctest::Approx(alternating(2)).epsilon(1e-13));
  CHECK(li2(-1.0) == doctest::Approx(-pi * pi / 12).epsilon(1e-14));
  CHECK(li2(0.5) == doctest::Approx(pi * pi / 12 - std::log(2.0) * std::log(2.0) / 2).epsilon(1e-14));
  CHECK(li2(1.0) == doctest::Approx(pi * pi / 6).epsilon(1e-14));
}

TEST_CASE("dilogarithm against high-precision references") {
  struct {
    double x, v;
  } ref[] = {{0.9, 1.299714723004958782},
             {0.6, 0.7275863077163333556},
             {-0.7, -0.60515840233770525031},
             {-3, -1.9393754207667089531},
             {-50, -9.2769951853326218401}};
  for (auto r : ref)
    CHECK(li2(r.x) == doctest::Approx(r.v).epsilon(1e-14));
}

TEST_CASE("trilogarithm special values") {
  CHECK(li3(0.0) == 0.0);
  CHECK(li3(-1.0) == doctest::Approx(alternating(3)).epsilon(1e-13));
  CHECK(li3(-1.0) + 0.75 * zeta3() == doctest::Approx(0).epsilon(1e-12).scale(1));
  double l2 = std::log(2.0);
  CHECK(li3(0.5) == doctest::Approx(7.0 / 8 * zeta3() - pi * pi * l2 / 12 + l2 * l2 * l2 / 6).epsilon(1e-14));
  CHECK(li3(0.5) == doctest::Approx(0.5372131936080402).epsilon(1e-14));
  CHECK(li3(1.0) == doctest::Approx(zeta3()).epsilon(1e-15));
}

TEST_CASE("trilogarithm against high-precision references") {
  struct {
    double x, v;
  } ref[] = {{0.99, 1.1858329336450369201}, {0.9, 1.0496589501864399017},  {0.6, 0.65600251363298065631},
             {0.3, 0.31240017789289260869}, {-0.55, -0.5172267809045660131}, {-0.7, -0.64866632128523545511},
             {-3, -2.3487905545840765578},  {-50, -16.43318732937103871}};
  for (auto r : ref)
    CHECK(li3(r.x) == doctest::Approx(r.v).epsilon(1e-14));
}

TEST_CASE("zeta(3) against the direct sum") {
  const int N = 1000000;
  double s = 0;
  for (int k = N; k >= 1; --k)
    s += 1.0 / (double(k) * k * k);
  CHECK(std::abs(zeta3() - s) < 1e-12);
  // with the Euler-Maclaurin tail the agreement is to roundoff
  CHECK(std::abs(zeta3() - (s + 0.5 / (double(N) * N))) < 1e-15);
}

TEST_CASE("dilogarithm reflection to the positive fraction") {
  double worst = 0;
  for (int i = 0; i <= 1000; ++i) {
    double x = 50.0 * i / 1000, L = std::log1p(x);
    worst = std::max(worst, std::abs(li2(-x) + 0.5 * L * L + li2(x / (1 + x))));
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("trilogarithm inversion") {
  double worst = 0;
  for (int i = 1; i <= 1000; ++i) {
    double x = 50.0 * i / 1000, l = std::log(x);
    worst = std::max(worst, std::abs(li3(-x) - li3(-1 / x) + l * l * l / 6 + pi * pi / 6 * l));
  }
  CHECK(worst < 1e-11);
}

TEST_CASE("trilogarithm three-term relation") {
  double worst = 0;
  for (int i = 1; i <= 1000; ++i) {
    double x = 50.0 * i / 1000, L = std::log1p(x), l = std::log(x);
    double r = li3(-x) + li3(x / (1 + x)) + li3(1 / (1 + x)) - L * L * L / 3 + l * L * L / 2 + pi * pi / 6 * L -
               zeta3();
    worst = std::max(worst, std::abs(r));
  }
  CHECK(worst < 1e-11);
}

TEST_CASE("two-term form misses exactly Li3(1/(1+x))") {
  // Li3(-x) + Li3(x/(1+x)) - L^3/3 + log x L^2/2 + pi^2 L/6 - zeta3 is not zero
  // but -Li3(1/(1+x)); at x = 1 it is -Li3(1/2)
  for (double x : {0.3, 1.0, 2.0, 10.0}) {
    double L = std::log1p(x), l = std::log(x);
    double r = li3(-x) + li3(x / (1 + x)) - L * L * L / 3 + l * L * L / 2 + pi * pi / 6 * L - zeta3();
    CHECK(r == doctest::Approx(-li3(1 / (1 + x))).epsilon(1e-12));
  }
}

TEST_CASE("derivative of li2(-x)") {
  for (int i = 1; i <= 20; ++i) {
    double x = 0.25 * i, h = 1e-5 * (1 + x);
    double fd = (li2(-(x + h)) - li2(-(x - h))) / (2 * h);
    CHECK(fd == doctest::Approx(-std::log1p(x) / x).epsilon(1e-6));
  }
}

TEST_CASE("li2(-x) decreases") {
  double prev = li2(0.0);
  for (int i = 1; i <= 200; ++i) {
    double v = li2(-0.25 * i);
    CHECK(v < prev);
    prev = v;
  }
}

TEST_CASE("small arguments keep full relative accuracy") {
  for (double x : {1e-3, 1e-8, 1e-15}) {
    double x2 = x * x, x4 = x2 * x2;
    CHECK(li2(-x) == doctest::Approx(-x + x2 / 4 - x2 * x / 9 + x4 / 16 - x4 * x / 25).epsilon(1e-15));
    CHECK(li3(-x) == doctest::Approx(-x + x2 / 8 - x2 * x / 27 + x4 / 64 - x4 * x / 125).epsilon(1e-15));
  }
}

TEST_CASE("domain errors") {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const double inf = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(li2(nan), std::domain_error);
  CHECK_THROWS_AS(li2(inf), std::domain_error);
  CHECK_THROWS_AS(li3(-inf), std::domain_error);
  CHECK_THROWS_AS(li3(1.5), std::domain_error);
  CHECK_THROWS_AS(li2(2.0), std::domain_error);
}
