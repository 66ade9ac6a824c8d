#pragma once

#include <complex>
#include <cstddef>
#include <string>

// Dense complex kernels backing every matrix product in the code base.
// A scalar reference implementation always exists; an AVX2 variant is
// picked at startup when the CPU supports it. The two are required to
// agree to near machine precision (see tests/test_kernels.cpp).

namespace strongbath::kernels {

using cplx = std::complex<double>;

struct Backend {
  const char* name;
  // C (m x n) = A (m x k) * B (k x n), row-major, C overwritten.
  void (*matmul)(const cplx* a, const cplx* b, cplx* c, int m, int k, int n);
  // y += alpha * x
  void (*axpy)(cplx alpha, const cplx* x, cplx* y, std::size_t n);
};

const Backend& scalar_backend();

// Null when the binary or CPU lacks AVX2 support.
const Backend* avx2_backend();

// Currently active backend (auto-detected on first use).
const Backend& active();

// Force a backend: "scalar", "avx2" or "auto". Returns false if the
// request cannot be honored on this machine.
bool select(const std::string& name);

inline void matmul(const cplx* a, const cplx* b, cplx* c, int m, int k, int n) {
  active().matmul(a, b, c, m, k, n);
}

inline void axpy(cplx alpha, const cplx* x, cplx* y, std::size_t n) {
  active().axpy(alpha, x, y, n);
}

}  // namespace strongbath::kernels
