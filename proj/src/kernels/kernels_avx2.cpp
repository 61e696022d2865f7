#include "cakemech/kernels.hpp"

// AVX2 variants of the kernel contract. This translation unit is the only
// one compiled with -mavx2; dispatch (and the cpuid check) lives in
// kernels.cpp so that no AVX2 instruction runs on unsupported hosts.
//
// Bit-exactness with the scalar reference: per-lane mul/div/add are IEEE
// operations identical to scalar, and the horizontal reduction reproduces
// the reference tree (acc[0]+acc[2]) + (acc[1]+acc[3]). No FMA is used.

#if defined(__AVX2__)

#include <immintrin.h>

namespace cake::kernels {

namespace {

void add_avx2(double* acc, const double* x, std::size_t n) {
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    _mm256_storeu_pd(acc + k,
                     _mm256_add_pd(_mm256_loadu_pd(acc + k), _mm256_loadu_pd(x + k)));
  }
  for (; k < n; ++k) acc[k] += x[k];
}

double reduce_tree(__m256d acc, const double* a, const double* b, const double* p,
                   std::size_t k, std::size_t n) {
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  for (std::size_t lane = 0; k < n; ++k, ++lane) {
    lanes[lane] += p ? (a[k] * b[k]) / p[k] : a[k] * b[k];
  }
  return (lanes[0] + lanes[2]) + (lanes[1] + lanes[3]);
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(a + k),
                                           _mm256_loadu_pd(b + k)));
  }
  return reduce_tree(acc, a, b, nullptr, k, n);
}

double dot_over_avx2(const double* a, const double* b, const double* p,
                     std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256d prod = _mm256_mul_pd(_mm256_loadu_pd(a + k), _mm256_loadu_pd(b + k));
    acc = _mm256_add_pd(acc, _mm256_div_pd(prod, _mm256_loadu_pd(p + k)));
  }
  return reduce_tree(acc, a, b, p, k, n);
}

void bid_update_avx2(double* out, const double* a, const double* b,
                     const double* p, double s, std::size_t n) {
  const __m256d scale = _mm256_set1_pd(s);
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256d prod = _mm256_mul_pd(_mm256_loadu_pd(a + k), _mm256_loadu_pd(b + k));
    const __m256d ratio = _mm256_div_pd(prod, _mm256_loadu_pd(p + k));
    _mm256_storeu_pd(out + k, _mm256_mul_pd(ratio, scale));
  }
  for (; k < n; ++k) out[k] = ((a[k] * b[k]) / p[k]) * s;
}

constexpr Ops kAvx2Ops{"avx2", add_avx2, dot_avx2, dot_over_avx2, bid_update_avx2};

}  // namespace

const Ops* avx2_ops_table() { return &kAvx2Ops; }

}  // namespace cake::kernels

#else  // !__AVX2__

namespace cake::kernels {

const Ops* avx2_ops_table() { return nullptr; }

}  // namespace cake::kernels

#endif
