#include "colour3/kernels.hpp"

#include <cmath>

namespace colour3::kernels {

namespace scalar {

// Four partial sums, matching the lane layout of the vector variant.
double dot(const double *a, const double *b, std::size_t n) {
  double s0 = 0, s1 = 0, s2 = 0, s3 = 0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    s0 += a[i] * b[i];
    s1 += a[i + 1] * b[i + 1];
    s2 += a[i + 2] * b[i + 2];
    s3 += a[i + 3] * b[i + 3];
  }
  double s = (s0 + s2) + (s1 + s3);
  for (; i < n; ++i)
    s += a[i] * b[i];
  return s;
}

void gemm_nt(const double *A, const double *B, double *C, std::size_t m, std::size_t n,
             std::size_t k) {
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j)
      C[i * n + j] = dot(A + i * k, B + j * k, k);
}

// Lane l accumulates the terms i = l mod 4 as an unnormalized hi/lo pair;
// the lanes are combined as (0 + 2) + (1 + 3), then the tail is added.
struct Lane {
  double hi = 0, lo = 0;
  void add(double ahi, double alo, double bhi, double blo) {
    double p = ahi * bhi;
    double pe = std::fma(ahi, bhi, -p);
    double t1 = ahi * blo, t2 = alo * bhi;
    pe = pe + (t1 + t2);
    double s = hi + p, bb = s - hi;
    double e = (hi - (s - bb)) + (p - bb);
    hi = s;
    lo = lo + (e + pe);
  }
};

DD dd_dot(const double *ahi, const double *alo, const double *bhi, const double *blo, std::size_t n) {
  Lane l[4];
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    for (int r = 0; r < 4; ++r)
      l[r].add(ahi[i + r], alo[i + r], bhi[i + r], blo[i + r]);
  DD s = (DD(l[0].hi, l[0].lo) + DD(l[2].hi, l[2].lo)) + (DD(l[1].hi, l[1].lo) + DD(l[3].hi, l[3].lo));
  for (; i < n; ++i)
    s += DD(ahi[i], alo[i]) * DD(bhi[i], blo[i]);
  return s;
}

void dd_gemm_nt(const double *Ahi, const double *Alo, const double *Bhi, const double *Blo, double *Chi,
                double *Clo, std::size_t m, std::size_t n, std::size_t k) {
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      DD c = dd_dot(Ahi + i * k, Alo + i * k, Bhi + j * k, Blo + j * k, k);
      Chi[i * n + j] = c.hi;
      Clo[i * n + j] = c.lo;
    }
}

} // namespace scalar

namespace {

Isa detect() { return avx2::supported() ? Isa::avx2 : Isa::scalar; }

Isa &current() {
  static Isa isa = detect();
  return isa;
}

} // namespace

Isa active() { return current(); }

bool select(Isa isa) {
  if (isa == Isa::avx2 && !avx2::supported()) {
    current() = Isa::scalar;
    return false;
  }
  current() = isa;
  return true;
}

std::string name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

double dot(const double *a, const double *b, std::size_t n) {
  return current() == Isa::avx2 ? avx2::dot(a, b, n) : scalar::dot(a, b, n);
}

void gemm_nt(const double *A, const double *B, double *C, std::size_t m, std::size_t n,
             std::size_t k) {
  if (current() == Isa::avx2)
    avx2::gemm_nt(A, B, C, m, n, k);
  else
    scalar::gemm_nt(A, B, C, m, n, k);
}

DD dd_dot(const double *ahi, const double *alo, const double *bhi, const double *blo, std::size_t n) {
  return current() == Isa::avx2 ? avx2::dd_dot(ahi, alo, bhi, blo, n) : scalar::dd_dot(ahi, alo, bhi, blo, n);
}

void dd_gemm_nt(const double *Ahi, const double *Alo, const double *Bhi, const double *Blo, double *Chi,
                double *Clo, std::size_t m, std::size_t n, std::size_t k) {
  if (current() == Isa::avx2)
    avx2::dd_gemm_nt(Ahi, Alo, Bhi, Blo, Chi, Clo, m, n, k);
  else
    scalar::dd_gemm_nt(Ahi, Alo, Bhi, Blo, Chi, Clo, m, n, k);
}

} // namespace colour3::kernels
