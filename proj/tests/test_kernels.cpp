#include <doctest.h>

#include "colour3/kernels.hpp"

#include <cmath>
#include <quadmath.h>
#include <random>
#include <vector>

using namespace colour3::kernels;
using colour3::DD;

namespace {

std::vector<double> random_vector(std::size_t n, std::mt19937_64 &rng) {
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<double> v(n);
  for (auto &x : v)
    x = u(rng);
  return v;
}

using q128 = __float128;

q128 as_quad(const DD &x) { return q128(x.hi) + q128(x.lo); }

// a double-double with a random low part, as produced by the engine
DD random_dd(std::mt19937_64 &rng) {
  std::uniform_real_distribution<double> u(-1, 1);
  double hi = u(rng);
  return colour3::dd::quick_two_sum(hi, u(rng) * 0x1.0p-54 * std::abs(hi));
}

} // namespace

TEST_CASE("double-double arithmetic against quad precision") {
  std::mt19937_64 rng(5);
  double worst = 0;
  for (int i = 0; i < 2000; ++i) {
    DD a = random_dd(rng), b = random_dd(rng);
    q128 qa = as_quad(a), qb = as_quad(b);
    auto rel = [](const DD &x, q128 ref) { return double(fabsq(as_quad(x) - ref) / fabsq(ref)); };
    worst = std::max(worst, rel(a + b, qa + qb) * double(fabsq(qa + qb) / (fabsq(qa) + fabsq(qb))));
    worst = std::max(worst, rel(a * b, qa * qb));
    worst = std::max(worst, rel(a / b, qa / qb));
  }
  CHECK(worst < 1e-30);
  DD d = colour3::dd::two_diff(1.0, 0x1.0p-60);
  CHECK(d.hi == 1.0);
  CHECK(d.lo == -0x1.0p-60);
}

TEST_CASE("double-double dot against quad precision") {
  std::mt19937_64 rng(6);
  for (std::size_t n : {1u, 5u, 64u, 1001u}) {
    std::vector<double> ah(n), al(n), bh(n), bl(n);
    q128 ref = 0, mag = 0;
    for (std::size_t i = 0; i < n; ++i) {
      DD a = random_dd(rng), b = random_dd(rng);
      ah[i] = a.hi, al[i] = a.lo, bh[i] = b.hi, bl[i] = b.lo;
      ref += as_quad(a) * as_quad(b);
      mag += fabsq(as_quad(a) * as_quad(b));
    }
    for (Isa isa : {Isa::scalar, Isa::avx2}) {
      if (isa == Isa::avx2 && !avx2::supported())
        continue;
      DD s = isa == Isa::avx2 ? avx2::dd_dot(ah.data(), al.data(), bh.data(), bl.data(), n)
                              : scalar::dd_dot(ah.data(), al.data(), bh.data(), bl.data(), n);
      CHECK(double(fabsq(as_quad(s) - ref) / mag) < 1e-30 * double(n));
    }
  }
}

TEST_CASE("dot: scalar reference") {
  std::vector<double> a{1, 2, 3, 4, 5}, b{5, 4, 3, 2, 1};
  CHECK(scalar::dot(a.data(), b.data(), 5) == 35.0);
  CHECK(scalar::dot(a.data(), b.data(), 0) == 0.0);
}

TEST_CASE("gemm_nt: scalar reference") {
  std::vector<double> A{1, 2, 3, 4, 5, 6}, B{1, 0, 0, 0, 1, 0, 0, 0, 1, 1, 1, 1}, C(8);
  scalar::gemm_nt(A.data(), B.data(), C.data(), 2, 4, 3);
  std::vector<double> want{1, 2, 3, 6, 4, 5, 6, 15};
  CHECK(C == want);
}

TEST_CASE("AVX2 kernels agree with the scalar reference") {
  if (!avx2::supported()) {
    MESSAGE("AVX2/FMA not available on this CPU; equivalence not exercised");
    return;
  }
  std::mt19937_64 rng(3);
  for (std::size_t n : {1u, 3u, 4u, 7u, 16u, 17u, 640u, 1283u}) {
    auto a = random_vector(n, rng), b = random_vector(n, rng);
    double s = scalar::dot(a.data(), b.data(), n);
    double v = avx2::dot(a.data(), b.data(), n);
    double mag = 0;
    for (std::size_t i = 0; i < n; ++i)
      mag += std::abs(a[i] * b[i]);
    CHECK(std::abs(s - v) <= 1e-15 * mag + 1e-300);
  }
  const int shapes[][3] = {{1, 1, 1}, {3, 5, 7}, {4, 4, 4}, {9, 6, 17}, {33, 31, 64}};
  for (auto [m, n, k] : shapes) {
    auto A = random_vector(std::size_t(m * k), rng), B = random_vector(std::size_t(n * k), rng);
    std::vector<double> C1(std::size_t(m * n)), C2(std::size_t(m * n));
    scalar::gemm_nt(A.data(), B.data(), C1.data(), m, n, k);
    avx2::gemm_nt(A.data(), B.data(), C2.data(), m, n, k);
    for (std::size_t i = 0; i < C1.size(); ++i)
      CHECK(std::abs(C1[i] - C2[i]) <= 1e-14 * k);
  }
}

TEST_CASE("AVX2 double-double kernels round exactly like the scalar reference") {
  if (!avx2::supported()) {
    MESSAGE("AVX2/FMA not available on this CPU; equivalence not exercised");
    return;
  }
  std::mt19937_64 rng(4);
  auto split = [&](std::size_t n, std::vector<double> &hi, std::vector<double> &lo) {
    hi.resize(n);
    lo.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      DD x = random_dd(rng);
      hi[i] = x.hi;
      lo[i] = x.lo;
    }
  };
  for (std::size_t n : {1u, 3u, 4u, 7u, 16u, 17u, 640u, 1283u}) {
    std::vector<double> ah, al, bh, bl;
    split(n, ah, al);
    split(n, bh, bl);
    DD s = scalar::dd_dot(ah.data(), al.data(), bh.data(), bl.data(), n);
    DD v = avx2::dd_dot(ah.data(), al.data(), bh.data(), bl.data(), n);
    CHECK(s.hi == v.hi);
    CHECK(s.lo == v.lo);
  }
  const int shapes[][3] = {{1, 1, 1}, {3, 5, 7}, {4, 4, 4}, {9, 6, 17}, {33, 31, 64}};
  for (auto [m, n, k] : shapes) {
    std::vector<double> Ah, Al, Bh, Bl;
    split(std::size_t(m * k), Ah, Al);
    split(std::size_t(n * k), Bh, Bl);
    std::vector<double> C1h(std::size_t(m * n)), C1l(C1h.size()), C2h(C1h.size()), C2l(C1h.size());
    scalar::dd_gemm_nt(Ah.data(), Al.data(), Bh.data(), Bl.data(), C1h.data(), C1l.data(), m, n, k);
    avx2::dd_gemm_nt(Ah.data(), Al.data(), Bh.data(), Bl.data(), C2h.data(), C2l.data(), m, n, k);
    CHECK(C1h == C2h);
    CHECK(C1l == C2l);
  }
}

TEST_CASE("runtime selection") {
  Isa start = active();
  CHECK(select(Isa::scalar));
  CHECK(active() == Isa::scalar);
  CHECK(name(Isa::scalar) == "scalar");
  std::vector<double> a{1, 2}, b{3, 4};
  CHECK(dot(a.data(), b.data(), 2) == 11.0);
  bool have = avx2::supported();
  CHECK(select(Isa::avx2) == have);
  CHECK(active() == (have ? Isa::avx2 : Isa::scalar));
  select(start);
}

TEST_CASE("results are reproducible") {
  std::mt19937_64 rng(9);
  auto a = random_vector(1001, rng), b = random_vector(1001, rng);
  CHECK(dot(a.data(), b.data(), a.size()) == dot(a.data(), b.data(), a.size()));
}
