#include "strongbath/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#define STRONGBATH_X86 1
#include <immintrin.h>
#else
#define STRONGBATH_X86 0
#endif

#include <cstring>

namespace strongbath::kernels {

#if STRONGBATH_X86

namespace {

// Multiply-accumulate acc += s * v for packed complex doubles.
// v holds two complex numbers (re0, im0, re1, im1).
__attribute__((target("avx2,fma"), always_inline)) inline __m256d cmul_acc(
    __m256d acc, __m256d sre, __m256d sim, __m256d v) {
  __m256d sw = _mm256_permute_pd(v, 0x5);           // (im0, re0, im1, re1)
  __m256d t = _mm256_mul_pd(sim, sw);               // (sim*im, sim*re, ...)
  __m256d r = _mm256_fmaddsub_pd(sre, v, t);        // (sre*re - sim*im, sre*im + sim*re)
  return _mm256_add_pd(acc, r);
}

__attribute__((target("avx2,fma"))) void matmul_avx2(const cplx* a, const cplx* b,
                                                     cplx* c, int m, int k, int n) {
  std::memset(c, 0, sizeof(cplx) * static_cast<std::size_t>(m) * n);
  const double* bd = reinterpret_cast<const double*>(b);
  const int n2 = n & ~1;  // columns handled two complex at a time
  for (int i = 0; i < m; ++i) {
    const cplx* arow = a + static_cast<std::size_t>(i) * k;
    double* crow = reinterpret_cast<double*>(c + static_cast<std::size_t>(i) * n);
    for (int p = 0; p < k; ++p) {
      const cplx aip = arow[p];
      if (aip == cplx(0.0, 0.0)) continue;
      const __m256d sre = _mm256_set1_pd(aip.real());
      const __m256d sim = _mm256_set1_pd(aip.imag());
      const double* brow = bd + 2 * static_cast<std::size_t>(p) * n;
      int j = 0;
      for (; j < n2; j += 2) {
        __m256d acc = _mm256_loadu_pd(crow + 2 * j);
        acc = cmul_acc(acc, sre, sim, _mm256_loadu_pd(brow + 2 * j));
        _mm256_storeu_pd(crow + 2 * j, acc);
      }
      if (j < n) {
        cplx* ctail = reinterpret_cast<cplx*>(crow) + j;
        const cplx* btail = reinterpret_cast<const cplx*>(brow) + j;
        *ctail += aip * *btail;
      }
    }
  }
}

__attribute__((target("avx2,fma"))) void axpy_avx2(cplx alpha, const cplx* x, cplx* y,
                                                   std::size_t n) {
  const __m256d sre = _mm256_set1_pd(alpha.real());
  const __m256d sim = _mm256_set1_pd(alpha.imag());
  const double* xd = reinterpret_cast<const double*>(x);
  double* yd = reinterpret_cast<double*>(y);
  std::size_t i = 0;
  const std::size_t n2 = n & ~std::size_t(1);
  for (; i < n2; i += 2) {
    __m256d acc = _mm256_loadu_pd(yd + 2 * i);
    acc = cmul_acc(acc, sre, sim, _mm256_loadu_pd(xd + 2 * i));
    _mm256_storeu_pd(yd + 2 * i, acc);
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

}  // namespace

const Backend* avx2_backend() {
  if (!__builtin_cpu_supports("avx2") || !__builtin_cpu_supports("fma")) return nullptr;
  static const Backend backend{"avx2", matmul_avx2, axpy_avx2};
  return &backend;
}

#else

const Backend* avx2_backend() { return nullptr; }

#endif

}  // namespace strongbath::kernels
