#pragma once

#include "colour3/ddouble.hpp"

#include <cstddef>
#include <string>

// Dense inner loops of the recursion engine. Each kernel has a portable
// scalar reference and an AVX2/FMA variant; the variant is picked once at
// startup from the running CPU and can be overridden for testing.

namespace colour3::kernels {

enum class Isa { scalar, avx2 };

Isa active();
// Force a variant. Requesting avx2 on a CPU without it falls back to scalar
// and returns false.
bool select(Isa isa);
std::string name(Isa isa);

double dot(const double *a, const double *b, std::size_t n);

// C[i*n+j] = sum_k A[i*k+..] * B[j*k+..]   (C = A * B^T, all row-major)
void gemm_nt(const double *A, const double *B, double *C, std::size_t m, std::size_t n,
             std::size_t k);

// Double-double variants; each operand is split into hi and lo arrays.
// Products are formed exactly with FMA and summed per lane in hi/lo pairs,
// so the result carries about 32 significant digits.
DD dd_dot(const double *ahi, const double *alo, const double *bhi, const double *blo, std::size_t n);
void dd_gemm_nt(const double *Ahi, const double *Alo, const double *Bhi, const double *Blo, double *Chi,
                double *Clo, std::size_t m, std::size_t n, std::size_t k);

namespace scalar {
double dot(const double *a, const double *b, std::size_t n);
void gemm_nt(const double *A, const double *B, double *C, std::size_t m, std::size_t n,
             std::size_t k);
DD dd_dot(const double *ahi, const double *alo, const double *bhi, const double *blo, std::size_t n);
void dd_gemm_nt(const double *Ahi, const double *Alo, const double *Bhi, const double *Blo, double *Chi,
                double *Clo, std::size_t m, std::size_t n, std::size_t k);
} // namespace scalar

namespace avx2 {
bool supported();
double dot(const double *a, const double *b, std::size_t n);
void gemm_nt(const double *A, const double *B, double *C, std::size_t m, std::size_t n,
             std::size_t k);
DD dd_dot(const double *ahi, const double *alo, const double *bhi, const double *blo, std::size_t n);
void dd_gemm_nt(const double *Ahi, const double *Alo, const double *Bhi, const double *Blo, double *Chi,
                double *Clo, std::size_t m, std::size_t n, std::size_t k);
} // namespace avx2

} // namespace colour3::kernels
