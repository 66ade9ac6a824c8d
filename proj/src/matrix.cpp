#include "strongbath/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <lapacke.h>

#include "strongbath/kernels.hpp"

namespace strongbath {

ComplexMatrix ComplexMatrix::identity(int n) {
  ComplexMatrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diag(const std::vector<double>& d) {
  const int n = static_cast<int>(d.size());
  ComplexMatrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = d[i];
  return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix m(cols, rows);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(j, i) = std::conj((*this)(i, j));
  return m;
}

cplx ComplexMatrix::trace() const {
  cplx t = 0.0;
  for (int i = 0; i < std::min(rows, cols); ++i) t += (*this)(i, i);
  return t;
}

double ComplexMatrix::max_abs() const {
  double m = 0.0;
  for (const cplx& v : data) m = std::max(m, std::abs(v));
  return m;
}

double ComplexMatrix::hermiticity_error() const {
  if (!is_square()) return std::numeric_limits<double>::infinity();
  double m = 0.0;
  for (int i = 0; i < rows; ++i)
    for (int j = i; j < cols; ++j)
      m = std::max(m, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
  return m;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
  if (rows != other.rows || cols != other.cols)
    throw DimensionMismatch("matrix addition shape mismatch");
  kernels::axpy(1.0, other.data.data(), data.data(), data.size());
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
  if (rows != other.rows || cols != other.cols)
    throw DimensionMismatch("matrix subtraction shape mismatch");
  kernels::axpy(-1.0, other.data.data(), data.data(), data.size());
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cplx s) {
  for (cplx& v : data) v *= s;
  return *this;
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols != b.rows) throw DimensionMismatch("matrix product shape mismatch");
  ComplexMatrix c(a.rows, b.cols);
  kernels::matmul(a.data.data(), b.data.data(), c.data.data(), a.rows, a.cols, b.cols);
  return c;
}

ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows != b.rows || a.cols != b.cols)
    return std::numeric_limits<double>::infinity();
  double m = 0.0;
  for (std::size_t i = 0; i < a.data.size(); ++i)
    m = std::max(m, std::abs(a.data[i] - b.data[i]));
  return m;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix c(a.rows * b.rows, a.cols * b.cols);
  for (int ia = 0; ia < a.rows; ++ia)
    for (int ja = 0; ja < a.cols; ++ja) {
      const cplx av = a(ia, ja);
      if (av == cplx(0.0, 0.0)) continue;
      for (int ib = 0; ib < b.rows; ++ib)
        for (int jb = 0; jb < b.cols; ++jb)
          c(ia * b.rows + ib, ja * b.cols + jb) = av * b(ib, jb);
    }
  return c;
}

namespace {

void check_hermitian(const ComplexMatrix& h, double tol) {
  if (!h.is_square()) throw NotHermitian("matrix is not square");
  const double scale = std::max(1.0, h.max_abs());
  if (h.hermiticity_error() > tol * scale)
    throw NotHermitian("hermiticity check failed");
}

}  // namespace

EigenDecomposition hermitian_eig(const ComplexMatrix& h) {
  check_hermitian(h, 1e-10);
  const int n = h.rows;
  EigenDecomposition out;
  out.eigenvalues.resize(n);
  ComplexMatrix work = h;
  const int info = LAPACKE_zheevd(LAPACK_ROW_MAJOR, 'V', 'U', n,
                                  reinterpret_cast<lapack_complex_double*>(work.data.data()),
                                  n, out.eigenvalues.data());
  if (info != 0) throw NoConvergence("zheevd failed, info=" + std::to_string(info));
  // row-major zheevd returns eigenvectors as columns of the array
  out.eigenvectors = work;
  return out;
}

std::vector<double> hermitian_eigenvalues(const ComplexMatrix& h) {
  check_hermitian(h, 1e-8);
  const int n = h.rows;
  std::vector<double> w(n);
  ComplexMatrix work = h;
  const int info = LAPACKE_zheevd(LAPACK_ROW_MAJOR, 'N', 'U', n,
                                  reinterpret_cast<lapack_complex_double*>(work.data.data()),
                                  n, w.data());
  if (info != 0) throw NoConvergence("zheevd failed, info=" + std::to_string(info));
  return w;
}

ComplexMatrix partial_trace(const ComplexMatrix& rho, const std::vector<int>& dims,
                            const std::vector<int>& keep) {
  long total = 1;
  for (int d : dims) total *= d;
  if (!rho.is_square() || total != rho.rows)
    throw DimensionMismatch("partial_trace: dims do not factor the state");
  const int ns = static_cast<int>(dims.size());
  std::vector<bool> kept(ns, false);
  int keep_dim = 1;
  for (int k : keep) {
    if (k < 0 || k >= ns) throw DimensionMismatch("partial_trace: keep index out of range");
    kept[k] = true;
  }
  for (int s = 0; s < ns; ++s)
    if (kept[s]) keep_dim *= dims[s];

  // strides of each subsystem index in the flat basis label
  std::vector<long> stride(ns, 1);
  for (int s = ns - 2; s >= 0; --s) stride[s] = stride[s + 1] * dims[s + 1];

  // map a flat label to its kept-part flat label; -1 stride for traced parts
  std::vector<long> kstride(ns, 0);
  long acc = 1;
  for (int s = ns - 1; s >= 0; --s) {
    if (kept[s]) {
      kstride[s] = acc;
      acc *= dims[s];
    }
  }

  ComplexMatrix out(keep_dim, keep_dim);
  std::vector<int> idx_r(ns), idx_c(ns);
  for (long r = 0; r < total; ++r) {
    long rr = r;
    long kr = 0;
    for (int s = 0; s < ns; ++s) {
      idx_r[s] = static_cast<int>(rr / stride[s]);
      rr %= stride[s];
      if (kept[s]) kr += kstride[s] * idx_r[s];
    }
    for (long c = 0; c < total; ++c) {
      long cc = c;
      long kc = 0;
      bool same_traced = true;
      for (int s = 0; s < ns; ++s) {
        idx_c[s] = static_cast<int>(cc / stride[s]);
        cc %= stride[s];
        if (kept[s]) {
          kc += kstride[s] * idx_c[s];
        } else if (idx_c[s] != idx_r[s]) {
          same_traced = false;
        }
      }
      if (same_traced) out(static_cast<int>(kr), static_cast<int>(kc)) += rho(static_cast<int>(r), static_cast<int>(c));
    }
  }
  return out;
}

ComplexMatrix partial_transpose(const ComplexMatrix& rho, int dim_a, int dim_b) {
  if (!rho.is_square() || rho.rows != dim_a * dim_b)
    throw DimensionMismatch("partial_transpose: dims do not factor the state");
  ComplexMatrix out(rho.rows, rho.cols);
  for (int ia = 0; ia < dim_a; ++ia)
    for (int ib = 0; ib < dim_b; ++ib)
      for (int ja = 0; ja < dim_a; ++ja)
        for (int jb = 0; jb < dim_b; ++jb)
          out(ja * dim_b + ib, ia * dim_b + jb) = rho(ia * dim_b + ib, ja * dim_b + jb);
  return out;
}

ComplexMatrix gibbs_state(const ComplexMatrix& h, double beta) {
  const EigenDecomposition eig = hermitian_eig(h);
  const int n = h.rows;
  const double w0 = eig.eigenvalues.front();
  std::vector<double> p(n);
  double z = 0.0;
  for (int i = 0; i < n; ++i) {
    p[i] = std::exp(-beta * (eig.eigenvalues[i] - w0));
    z += p[i];
  }
  ComplexMatrix out(n, n);
  const ComplexMatrix& v = eig.eigenvectors;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      cplx s = 0.0;
      for (int m = 0; m < n; ++m) s += v(i, m) * (p[m] / z) * std::conj(v(j, m));
      out(i, j) = s;
    }
  return out;
}

double von_neumann_entropy(const ComplexMatrix& rho) {
  std::vector<double> w = hermitian_eigenvalues(rho);
  // non-secular Redfield states can dip slightly negative in transit;
  // clamp those, reject anything beyond a physical slip
  for (double v : w)
    if (v < -0.05) throw std::runtime_error("von_neumann_entropy: state not positive");
  double s = 0.0;
  for (double v : w) {
    const double p = std::clamp(v, 0.0, 1.0);
    if (p > 1e-14) s -= p * std::log2(p);
  }
  return s;
}

ComplexMatrix pauli_x() {
  ComplexMatrix m(2, 2);
  m(0, 1) = 1.0;
  m(1, 0) = 1.0;
  return m;
}

ComplexMatrix pauli_y() {
  ComplexMatrix m(2, 2);
  m(0, 1) = cplx(0.0, -1.0);
  m(1, 0) = cplx(0.0, 1.0);
  return m;
}

ComplexMatrix pauli_z() {
  ComplexMatrix m(2, 2);
  m(0, 0) = 1.0;
  m(1, 1) = -1.0;
  return m;
}

}  // namespace strongbath
