// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Oracles that do not come from the closed-form module are
// computed here from first principles.

#include "colour3/closedforms.hpp"
#include "colour3/polylog.hpp"
#include "colour3/recursion.hpp"
#include "colour3/ribbon.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

using namespace colour3;

namespace {

const double pi = 3.14159265358979323846;
const double ln2 = 0.69314718055994530942;

struct Uniform {
  std::mt19937_64 rng;
  explicit Uniform(std::uint64_t s) : rng(s) {}
  double operator()(double lo, double hi) { return lo + (hi - lo) * double(rng() >> 11) * 0x1.0p-53; }
};

// alternating zeta-type sum sum_k (-1)^k / k^s with repeated averaging
double alternating(double s) {
  std::vector<double> part;
  double acc = 0;
  for (int k = 1; k <= 60; ++k) {
    acc += (k % 2 ? -1.0 : 1.0) / std::pow(double(k), s);
    part.push_back(acc);
  }
  for (int r = 0; r < 40; ++r)
    for (int i = 0; i + 1 < int(part.size()) - r; ++i)
      part[i] = 0.5 * (part[i] + part[i + 1]);
  return part[0];
}

double zeta3_direct() {
  const int N = 2000000;
  double s = 0;
  for (int k = N; k >= 1; --k)
    s += 1.0 / (double(k) * k * k);
  return s + 0.5 / (double(N) * N) - 0.5 / (double(N) * N * N);
}

int failures = 0;

void report(int k, bool pass, const std::string &what, const std::string &detail) {
  std::printf("CRITERION %d %s: %s | %s\n", k, pass ? "PASS" : "FAIL", what.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass)
    ++failures;
}

std::string f(const char *fmt, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, x);
  return buf;
}

void guarded(int k, const std::string &what, const std::function<void()> &body) {
  try {
    body();
  } catch (const std::exception &e) {
    report(k, false, what, std::string("exception: ") + e.what());
  }
}

} // namespace

int main() {
  using clock = std::chrono::steady_clock;
  const recursion::EngineConfig def;
  recursion::Engine engine(def);
  recursion::SeriesTable series;

  guarded(1, "zero-momentum series at default resolution", [&] {
    auto t0 = clock::now();
    series = recursion::g00_series(4, def);
    double secs = std::chrono::duration<double>(clock::now() - t0).count();
    const double z3 = zeta3_direct();
    const double exact[4] = {1, 2, 2 * (pi * pi - 6), pi * pi * (514.0 / 3 - 224 * ln2) + 120 * z3 - 266};
    const double tol[5] = {0, 1e-6, 1e-4, 5e-3, 1.0};
    bool pass = true;
    std::string d;
    for (int n = 0; n <= 4; ++n) {
      double v = series.coefficients[n].value, ref = n < 4 ? exact[n] : 194.612;
      double dev = std::abs(v - ref);
      pass &= n == 0 ? v == 1.0 : dev <= tol[n];
      d += "c" + std::to_string(n) + "=" + f("%.10g", v) + " (dev " + f("%.2g", dev) + ") ";
    }
    pass &= secs < 600;
    d += "time " + f("%.1f", secs) + " s; c3 reference is the exact formula, " + f("%.9f", exact[3]);
    report(1, pass, "c0..c4", d);
  });

  guarded(2, "recursion orders 1/2/3 vs closed forms at 50 random pairs", [&] {
    Uniform u(2024);
    const double tol[4] = {0, 1e-8, 1e-6, 5e-5};
    double worst[4] = {0, 0, 0, 0};
    for (int i = 0; i < 50; ++i) {
      double a = u(0, 5), b = u(0, 5);
      for (int n = 1; n <= 3; ++n)
        worst[n] = std::max(worst[n], std::abs(engine.order(n).value(a, b) - closed::coefficient(n, a, b)));
    }
    bool pass = worst[1] <= tol[1] && worst[2] <= tol[2] && worst[3] <= tol[3];
    report(2, pass, "max |recursion - closed|",
           "order1 " + f("%.2e", worst[1]) + ", order2 " + f("%.2e", worst[2]) + ", order3 " + f("%.2e", worst[3]));
  });

  guarded(3, "graph classes and resummation vs G4", [&] {
    auto c1 = ribbon::enumerate_2pt(1), c2 = ribbon::enumerate_2pt(2);
    bool pass = c1.size() == 1 && c1[0].multiplicity == 2 && c2.size() == 4;
    std::string ms;
    const int want[4] = {2, 4, 4, 4};
    for (std::size_t i = 0; i < c2.size(); ++i) {
      pass &= i < 4 && c2[i].multiplicity == want[i];
      ms += (i ? "," : "") + std::to_string(c2[i].multiplicity);
    }
    Uniform u(77);
    double worst = 0;
    for (int i = 0; i < 20; ++i) {
      double a = u(0, 5), b = u(0, 5);
      worst = std::max(worst, std::abs(ribbon::resum(c2, a, b) - closed::g4(a, b)));
    }
    pass &= worst <= 1e-7;
    report(3, pass, "s = (2,4,4,4), order-1 single class s=2, resum within 1e-7",
           "order-1 classes " + std::to_string(c1.size()) + " s=" + std::to_string(c1.empty() ? 0 : c1[0].multiplicity) +
               "; order-2 s=(" + ms + "); max |resum - g4| " + f("%.2e", worst));
  });

  guarded(4, "worked-example amplitudes at 10 random labels each", [&] {
    Uniform u(99);
    auto e1 = ribbon::example_two_boundaries(), e2 = ribbon::example_bubble(), e3 = ribbon::example_triangle();
    double w1 = 0, w2 = 0, w3 = 0;
    for (int i = 0; i < 10; ++i) {
      double a = u(0, 5), b = u(0, 5), c = u(0, 5);
      double s = 1 + a + b;
      w1 = std::max(w1, std::abs(ribbon::amplitude(e1, {a, b}) - 1 / (s * s * (1 + 2 * a) * (1 + 2 * b))));
      w2 = std::max(w2, std::abs(ribbon::amplitude(e2, {a, b}) - (std::log1p(a) - std::log1p(b)) / (s * s * (a - b))));
      double tri = (std::log1p(a) / ((a - b) * (c - a)) + std::log1p(b) / ((b - a) * (c - b)) +
                    std::log1p(c) / ((c - a) * (b - c))) /
                   ((1 + a + b) * (1 + b + c) * (1 + a + c));
      w3 = std::max(w3, std::abs(ribbon::amplitude(e3, {a, b, c}) - tri));
    }
    report(4, w1 <= 1e-9 && w2 <= 1e-9 && w3 <= 1e-9, "max deviation per example",
           f("%.2e", w1) + ", " + f("%.2e", w2) + ", " + f("%.2e", w3));
  });

  guarded(5, "order-3 diagonal vs the closed diagonal form", [&] {
    double worst = 0;
    std::string d;
    for (double p : {0.0, 0.5, 1.0, 2.0, 5.0}) {
      double dev = std::abs(engine.diagonal(3, p).value - closed::gp6_diag(p));
      worst = std::max(worst, dev);
      d += "p=" + f("%g", p) + " " + f("%.2e", dev) + "; ";
    }
    report(5, worst <= 1e-5, "within 1e-5", d + "gp6(0)=" + f("%.10f", closed::gp6_diag(0)));
  });

  guarded(6, "polylog identities and constants", [&] {
    const double z3 = zeta3_direct();
    double c_z = std::abs(zeta3() - z3), c_2 = std::abs(li2(-1) - alternating(2)),
           c_3 = std::abs(li3(-1) - alternating(3));
    double w_dilog = 0, w_inv = 0, w_three = 0, w_printed = 0;
    for (int i = 1; i <= 2000; ++i) {
      double x = 50.0 * i / 2000, L = std::log1p(x), l = std::log(x);
      w_dilog = std::max(w_dilog, std::abs(li2(-x) + 0.5 * L * L + li2(x / (1 + x))));
      w_inv = std::max(w_inv, std::abs(li3(-x) - li3(-1 / x) + l * l * l / 6 + pi * pi / 6 * l));
      double two_term = li3(-x) + li3(x / (1 + x)) - L * L * L / 3 + l * L * L / 2 + pi * pi / 6 * L - z3;
      w_three = std::max(w_three, std::abs(two_term + li3(1 / (1 + x))));
      w_printed = std::max(w_printed, std::abs(two_term));
    }
    bool pass = c_z <= 1e-12 && c_2 <= 1e-12 && c_3 <= 1e-12 && w_dilog <= 1e-11 && w_inv <= 1e-11 && w_three <= 1e-11;
    report(6, pass, "dilog reflection, trilog inversion, trilog three-term relation; constants",
           "zeta3 " + f("%.1e", c_z) + ", Li2(-1) " + f("%.1e", c_2) + ", Li3(-1) " + f("%.1e", c_3) + "; dilog " +
               f("%.1e", w_dilog) + ", inversion " + f("%.1e", w_inv) + ", three-term " + f("%.1e", w_three) +
               ". The two-term form without Li3(1/(1+x)) is not an identity: its defect reaches " +
               f("%.3f", w_printed) + " and equals -Li3(1/(1+x)) to the three-term accuracy");
  });

  guarded(7, "residual scaling of the truncated series", [&] {
    bool pass = true;
    std::string d;
    for (int n = 1; n <= 2; ++n) {
      double r1 = recursion::closed_equation_residual(engine, n, 0.05, 1.0, 0.5);
      double r2 = recursion::closed_equation_residual(engine, n, 0.1, 1.0, 0.5);
      double slope = std::log(r2 / r1) / std::log(2.0);
      pass &= std::abs(slope - (2 * n + 2)) <= 0.2;
      d += "n=" + std::to_string(n) + " exponent " + f("%.3f", slope) + " (want " + std::to_string(2 * n + 2) + "); ";
    }
    report(7, pass, "exponent within 0.2 at lambda 0.05, 0.1", d);
  });

  guarded(8, "doubling the grid stays inside the reported error", [&] {
    if (series.coefficients.size() != 5)
      throw std::runtime_error("series from criterion 1 unavailable");
    recursion::Engine half(recursion::coarsen(def));
    auto estimate = [](double v, double v_half) {
      return std::max(std::abs(v - v_half), 4 * 2.220446049250313e-16 * std::max(1.0, std::abs(v)));
    };
    // two ways to double the node count: twice the panels, or twice the
    // Gauss points per panel
    recursion::EngineConfig more_points = def;
    more_points.points = 2 * def.points;
    bool pass = true;
    std::string d;
    for (const auto &fine_cfg : {recursion::refine(def), more_points}) {
      auto fine_series = recursion::g00_series(4, fine_cfg);
      recursion::Engine fine(fine_cfg);
      double worst = 0;
      auto check = [&](double v, double err, double v_fine) {
        double change = std::abs(v_fine - v);
        pass &= change < err;
        worst = std::max(worst, change / err);
      };
      for (int n = 0; n <= 4; ++n)
        check(series.coefficients[n].value, series.coefficients[n].error, fine_series.coefficients[n].value);
      for (double p : {0.0, 0.5, 1.0, 2.0, 5.0}) {
        double v = engine.diagonal(3, p).value;
        check(v, estimate(v, half.diagonal(3, p).value), fine.diagonal(3, p).value);
      }
      Uniform u(2024);
      for (int i = 0; i < 10; ++i) {
        double a = u(0, 5), b = u(0, 5);
        for (int n = 1; n <= 3; ++n) {
          double v = engine.order(n).value(a, b);
          check(v, estimate(v, half.order(n).value(a, b)), fine.order(n).value(a, b));
        }
      }
      d += std::to_string(fine_cfg.panels) + "x" + std::to_string(fine_cfg.points) + ": max change/estimate " +
           f("%.3f", worst) + ", c4 " + f("%.6f", fine_series.coefficients[4].value) + "; ";
    }
    report(8, pass, "series, order-3 diagonal and order 1-3 values on doubled grids",
           d + "default c4 " + f("%.6f", series.coefficients[4].value) + " +- " +
               f("%.1e", series.coefficients[4].error));
  });

  std::printf("%s: %d criteria failed\n", failures ? "FAILED" : "ALL PASSED", failures);
  return failures ? 1 : 0;
}
