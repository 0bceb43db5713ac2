// Compiled with -mavx2 -mfma; only entered after a runtime CPU check.

#include "colour3/kernels.hpp"

#include <immintrin.h>

namespace colour3::kernels::avx2 {

bool supported() {
#if defined(__GNUC__)
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

static inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v), hi = _mm256_extractf128_pd(v, 1);
  // (l0 + h0) + (l1 + h1), the same pairing as the scalar reference
  __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(s) + _mm_cvtsd_f64(_mm_unpackhi_pd(s, s));
}

double dot(const double *a, const double *b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc);
  double s = hsum(acc);
  for (; i < n; ++i)
    s += a[i] * b[i];
  return s;
}

// One row of A against four rows of B per pass, so each A load feeds four FMAs.
void gemm_nt(const double *A, const double *B, double *C, std::size_t m, std::size_t n,
             std::size_t k) {
  for (std::size_t i = 0; i < m; ++i) {
    const double *a = A + i * k;
    std::size_t j = 0;
    for (; j + 4 <= n; j += 4) {
      const double *b0 = B + j * k, *b1 = b0 + k, *b2 = b1 + k, *b3 = b2 + k;
      __m256d c0 = _mm256_setzero_pd(), c1 = c0, c2 = c0, c3 = c0;
      std::size_t l = 0;
      for (; l + 4 <= k; l += 4) {
        __m256d av = _mm256_loadu_pd(a + l);
        c0 = _mm256_fmadd_pd(av, _mm256_loadu_pd(b0 + l), c0);
        c1 = _mm256_fmadd_pd(av, _mm256_loadu_pd(b1 + l), c1);
        c2 = _mm256_fmadd_pd(av, _mm256_loadu_pd(b2 + l), c2);
        c3 = _mm256_fmadd_pd(av, _mm256_loadu_pd(b3 + l), c3);
      }
      double s0 = hsum(c0), s1 = hsum(c1), s2 = hsum(c2), s3 = hsum(c3);
      for (; l < k; ++l) {
        s0 += a[l] * b0[l];
        s1 += a[l] * b1[l];
        s2 += a[l] * b2[l];
        s3 += a[l] * b3[l];
      }
      double *c = C + i * n + j;
      c[0] = s0;
      c[1] = s1;
      c[2] = s2;
      c[3] = s3;
    }
    for (; j < n; ++j)
      C[i * n + j] = dot(a, B + j * k, k);
  }
}

// Same operation sequence as the scalar lanes, four lanes per register.
struct LaneV {
  __m256d hi = _mm256_setzero_pd(), lo = _mm256_setzero_pd();
  void add(__m256d ahi, __m256d alo, __m256d bhi, __m256d blo) {
    __m256d p = _mm256_mul_pd(ahi, bhi);
    __m256d pe = _mm256_fmsub_pd(ahi, bhi, p);
    __m256d t1 = _mm256_mul_pd(ahi, blo), t2 = _mm256_mul_pd(alo, bhi);
    pe = _mm256_add_pd(pe, _mm256_add_pd(t1, t2));
    __m256d s = _mm256_add_pd(hi, p), bb = _mm256_sub_pd(s, hi);
    __m256d e = _mm256_add_pd(_mm256_sub_pd(hi, _mm256_sub_pd(s, bb)), _mm256_sub_pd(p, bb));
    hi = s;
    lo = _mm256_add_pd(lo, _mm256_add_pd(e, pe));
  }
  DD reduce() const {
    alignas(32) double h[4], l[4];
    _mm256_store_pd(h, hi);
    _mm256_store_pd(l, lo);
    return (DD(h[0], l[0]) + DD(h[2], l[2])) + (DD(h[1], l[1]) + DD(h[3], l[3]));
  }
};

DD dd_dot(const double *ahi, const double *alo, const double *bhi, const double *blo, std::size_t n) {
  LaneV acc;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    acc.add(_mm256_loadu_pd(ahi + i), _mm256_loadu_pd(alo + i), _mm256_loadu_pd(bhi + i),
            _mm256_loadu_pd(blo + i));
  DD s = acc.reduce();
  for (; i < n; ++i)
    s += DD(ahi[i], alo[i]) * DD(bhi[i], blo[i]);
  return s;
}

// One row of A against four rows of B per pass.
void dd_gemm_nt(const double *Ahi, const double *Alo, const double *Bhi, const double *Blo, double *Chi,
                double *Clo, std::size_t m, std::size_t n, std::size_t k) {
  for (std::size_t i = 0; i < m; ++i) {
    const double *ah = Ahi + i * k, *al = Alo + i * k;
    std::size_t j = 0;
    for (; j + 4 <= n; j += 4) {
      LaneV c[4];
      std::size_t l = 0;
      for (; l + 4 <= k; l += 4) {
        __m256d avh = _mm256_loadu_pd(ah + l), avl = _mm256_loadu_pd(al + l);
        for (int r = 0; r < 4; ++r)
          c[r].add(avh, avl, _mm256_loadu_pd(Bhi + (j + r) * k + l), _mm256_loadu_pd(Blo + (j + r) * k + l));
      }
      for (int r = 0; r < 4; ++r) {
        DD s = c[r].reduce();
        for (std::size_t t = l; t < k; ++t)
          s += DD(ah[t], al[t]) * DD(Bhi[(j + r) * k + t], Blo[(j + r) * k + t]);
        Chi[i * n + j + r] = s.hi;
        Clo[i * n + j + r] = s.lo;
      }
    }
    for (; j < n; ++j) {
      DD s = dd_dot(ah, al, Bhi + j * k, Blo + j * k, k);
      Chi[i * n + j] = s.hi;
      Clo[i * n + j] = s.lo;
    }
  }
}

} // namespace colour3::kernels::avx2
