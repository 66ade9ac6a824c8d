#include "strongbath/kernels.hpp"

#include <cstring>

namespace strongbath::kernels {

namespace {

void matmul_scalar(const cplx* a, const cplx* b, cplx* c, int m, int k, int n) {
  std::memset(c, 0, sizeof(cplx) * static_cast<std::size_t>(m) * n);
  for (int i = 0; i < m; ++i) {
    const cplx* arow = a + static_cast<std::size_t>(i) * k;
    cplx* crow = c + static_cast<std::size_t>(i) * n;
    for (int p = 0; p < k; ++p) {
      const cplx aip = arow[p];
      if (aip == cplx(0.0, 0.0)) continue;
      const cplx* brow = b + static_cast<std::size_t>(p) * n;
      for (int j = 0; j < n; ++j) crow[j] += aip * brow[j];
    }
  }
}

void axpy_scalar(cplx alpha, const cplx* x, cplx* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

}  // namespace

const Backend& scalar_backend() {
  static const Backend backend{"scalar", matmul_scalar, axpy_scalar};
  return backend;
}

}  // namespace strongbath::kernels
