#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "strongbath/errors.hpp"

namespace strongbath {

using cplx = std::complex<double>;

// Dense row-major complex matrix. All operators and density matrices in
// the code base live in this representation.
struct ComplexMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<cplx> data;

  ComplexMatrix() = default;
  ComplexMatrix(int r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c) {}

  cplx& operator()(int i, int j) { return data[static_cast<std::size_t>(i) * cols + j]; }
  const cplx& operator()(int i, int j) const {
    return data[static_cast<std::size_t>(i) * cols + j];
  }

  static ComplexMatrix zero(int r, int c) { return ComplexMatrix(r, c); }
  static ComplexMatrix identity(int n);
  static ComplexMatrix diag(const std::vector<double>& d);

  ComplexMatrix adjoint() const;
  cplx trace() const;
  double max_abs() const;
  double hermiticity_error() const;  // max |A - A^dag|
  bool is_square() const { return rows == cols; }

  ComplexMatrix& operator+=(const ComplexMatrix& other);
  ComplexMatrix& operator-=(const ComplexMatrix& other);
  ComplexMatrix& operator*=(cplx s);
};

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(cplx s, ComplexMatrix a);

// max elementwise |a - b|
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

struct EigenDecomposition {
  std::vector<double> eigenvalues;  // ascending
  ComplexMatrix eigenvectors;       // columns
};

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

// Hermitian eigendecomposition (LAPACK zheevd). Throws NotHermitian.
EigenDecomposition hermitian_eig(const ComplexMatrix& h);

// Eigenvalues only, for positivity monitoring.
std::vector<double> hermitian_eigenvalues(const ComplexMatrix& h);

// Trace out every subsystem not listed in `keep`. `dims` lists the
// subsystem dimensions in tensor order, `keep` the indices to retain.
ComplexMatrix partial_trace(const ComplexMatrix& rho, const std::vector<int>& dims,
                            const std::vector<int>& keep);

// Transpose subsystem A of a bipartite d_a x d_b state.
ComplexMatrix partial_transpose(const ComplexMatrix& rho, int dim_a, int dim_b);

// exp(-beta H)/Z via eigendecomposition, spectrum shifted by its minimum.
ComplexMatrix gibbs_state(const ComplexMatrix& h, double beta);

// -Tr(rho log2 rho) in bits. Eigenvalues are clamped to [0, 1]; values
// below 1e-14 contribute zero.
double von_neumann_entropy(const ComplexMatrix& rho);

// Common 2x2 blocks.
ComplexMatrix pauli_x();
ComplexMatrix pauli_y();
ComplexMatrix pauli_z();

}  // namespace strongbath
