#include "strongbath/redfield.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstring>
#include <numeric>

#include <lapacke.h>

#include "strongbath/kernels.hpp"

namespace strongbath {

namespace {

using Vec = std::vector<cplx>;

constexpr double kPositivityFloor = -1e-6;

}  // namespace

RedfieldGenerator build_generator(const HamiltonianModel& model, const SpectralDensity& j,
                                  double beta) {
  RedfieldGenerator gen;
  gen.eig = hermitian_eig(model.H);
  gen.beta = beta;
  gen.dim = model.H.rows;
  gen.spin_dim = model.spin_dim > 0 ? model.spin_dim : model.H.rows;
  gen.tier = model.tier;

  const ComplexMatrix& v = gen.eig.eigenvectors;
  gen.s_eig = v.adjoint() * model.S * v;
  // enforce exact Hermitian symmetry of the rotated coupling operator
  for (int a = 0; a < gen.dim; ++a)
    for (int b = a; b < gen.dim; ++b) {
      const cplx mean = 0.5 * (gen.s_eig(a, b) + std::conj(gen.s_eig(b, a)));
      gen.s_eig(a, b) = mean;
      gen.s_eig(b, a) = std::conj(mean);
    }

  gen.lambda_filtered = ComplexMatrix(gen.dim, gen.dim);
  for (int a = 0; a < gen.dim; ++a)
    for (int b = 0; b < gen.dim; ++b) {
      const double w = gen.eig.eigenvalues[a] - gen.eig.eigenvalues[b];
      gen.lambda_filtered(a, b) = gen.s_eig(a, b) * rate_gamma(j, w, beta);
    }
  return gen;
}

namespace {

// D(rho) = Ltil rho S - S Ltil rho + S rho Ltil^dag - rho Ltil^dag S
// For Hermitian rho the last two terms are the adjoint of the first two.
void dissipator_hermitian(const RedfieldGenerator& gen, const cplx* rho, cplx* out,
                          cplx* work_a, cplx* work_c) {
  const int d = gen.dim;
  const cplx* lt = gen.lambda_filtered.data.data();
  const cplx* s = gen.s_eig.data.data();
  kernels::matmul(lt, rho, work_a, d, d, d);   // A = Ltil rho
  kernels::matmul(work_a, s, work_c, d, d, d); // C = A S
  kernels::matmul(s, work_a, out, d, d, d);    // out = S A (temporary)
  for (std::size_t i = 0; i < static_cast<std::size_t>(d) * d; ++i)
    work_c[i] -= out[i];                       // C = [A, S]
  for (int m = 0; m < d; ++m)
    for (int n = 0; n < d; ++n)
      out[static_cast<std::size_t>(m) * d + n] =
          work_c[static_cast<std::size_t>(m) * d + n] +
          std::conj(work_c[static_cast<std::size_t>(n) * d + m]);
}

ComplexMatrix dissipator_general(const RedfieldGenerator& gen, const ComplexMatrix& rho) {
  const ComplexMatrix& lt = gen.lambda_filtered;
  const ComplexMatrix& s = gen.s_eig;
  const ComplexMatrix a = lt * rho;
  const ComplexMatrix b = rho * lt.adjoint();
  return a * s - s * a + s * b - b * s;
}

}  // namespace

ComplexMatrix dissipator_eigenbasis(const RedfieldGenerator& gen,
                                    const ComplexMatrix& rho_eig) {
  if (rho_eig.rows != gen.dim || rho_eig.cols != gen.dim)
    throw DimensionMismatch("dissipator: state dimension mismatch");
  if (rho_eig.hermiticity_error() < 1e-12) {
    ComplexMatrix out(gen.dim, gen.dim);
    Vec wa(static_cast<std::size_t>(gen.dim) * gen.dim);
    Vec wc(wa.size());
    dissipator_hermitian(gen, rho_eig.data.data(), out.data.data(), wa.data(), wc.data());
    return out;
  }
  return dissipator_general(gen, rho_eig);
}

ComplexMatrix apply_generator(const RedfieldGenerator& gen, const ComplexMatrix& rho_lab) {
  const ComplexMatrix& v = gen.eig.eigenvectors;
  const ComplexMatrix rho_eig = v.adjoint() * rho_lab * v;
  ComplexMatrix lrho = dissipator_eigenbasis(gen, rho_eig);
  for (int m = 0; m < gen.dim; ++m)
    for (int n = 0; n < gen.dim; ++n)
      lrho(m, n) += cplx(0.0, -(gen.eig.eigenvalues[m] - gen.eig.eigenvalues[n])) *
                    rho_eig(m, n);
  return v * lrho * v.adjoint();
}

const std::vector<double>& Trajectory::column(const std::string& name) const {
  for (std::size_t i = 0; i < column_names.size(); ++i)
    if (column_names[i] == name) return columns[i];
  throw ColumnMissing("trajectory column not found: " + name);
}

namespace {

// Interaction-picture right-hand side: sigma_mn = exp(i w_mn t) rho_mn,
// so the coherent rotation is absorbed into the phase vector u_m = exp(-i w_m t)
// and only the dissipator remains.
struct RhsWorkspace {
  Vec u;       // phases
  Vec rho;     // Schroedinger-picture state in the eigenbasis
  Vec diss;    // dissipator output
  Vec work_a;
  Vec work_c;

  explicit RhsWorkspace(int d)
      : u(d), rho(static_cast<std::size_t>(d) * d), diss(rho.size()),
        work_a(rho.size()), work_c(rho.size()) {}
};

void eval_rhs(const RedfieldGenerator& gen, double t, const cplx* sigma, cplx* out,
              RhsWorkspace& ws) {
  const int d = gen.dim;
  for (int m = 0; m < d; ++m) {
    const double phase = -gen.eig.eigenvalues[m] * t;
    ws.u[m] = cplx(std::cos(phase), std::sin(phase));
  }
  for (int m = 0; m < d; ++m) {
    const cplx um = ws.u[m];
    const std::size_t row = static_cast<std::size_t>(m) * d;
    for (int n = 0; n < d; ++n)
      ws.rho[row + n] = um * sigma[row + n] * std::conj(ws.u[n]);
  }
  dissipator_hermitian(gen, ws.rho.data(), ws.diss.data(), ws.work_a.data(),
                       ws.work_c.data());
  for (int m = 0; m < d; ++m) {
    const cplx umc = std::conj(ws.u[m]);
    const std::size_t row = static_cast<std::size_t>(m) * d;
    for (int n = 0; n < d; ++n) out[row + n] = umc * ws.diss[row + n] * ws.u[n];
  }
}

void sigma_to_rho(const RedfieldGenerator& gen, double t, const Vec& sigma,
                  ComplexMatrix& rho_eig) {
  const int d = gen.dim;
  for (int m = 0; m < d; ++m) {
    const double phase = -gen.eig.eigenvalues[m] * t;
    const cplx um(std::cos(phase), std::sin(phase));
    for (int n = 0; n < d; ++n) {
      const double phn = -gen.eig.eigenvalues[n] * t;
      rho_eig(m, n) = um * sigma[static_cast<std::size_t>(m) * d + n] *
                      cplx(std::cos(phn), -std::sin(phn));
    }
  }
}

// Dormand-Prince 5(4) coefficients.
constexpr double kC[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
constexpr double kA[7][6] = {
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
    {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84}};
constexpr double kB5[7] = {35.0 / 384,      0.0,  500.0 / 1113, 125.0 / 192,
                           -2187.0 / 6784, 11.0 / 84, 0.0};
constexpr double kB4[7] = {5179.0 / 57600,    0.0,          7571.0 / 16695, 393.0 / 640,
                           -92097.0 / 339200, 187.0 / 2100, 1.0 / 40};

struct OutputSink {
  const RedfieldGenerator& gen;
  const PropagateOptions& opts;
  Trajectory& traj;
  ComplexMatrix rho_eig;
  ComplexMatrix rho_herm;
  bool warned = false;
  int next = 0;
  std::vector<double> grid;

  OutputSink(const RedfieldGenerator& g, const PropagateOptions& o, Trajectory& t,
             double t_max)
      : gen(g), opts(o), traj(t), rho_eig(g.dim, g.dim), rho_herm(g.dim, g.dim) {
    const int n = t_max > 0.0 ? std::max(2, opts.output_points) : 1;
    grid.resize(n);
    for (int i = 0; i < n; ++i)
      grid[i] = (n == 1) ? 0.0 : t_max * i / static_cast<double>(n - 1);
    traj.column_names = {"trace_dev", "herm_dev", "min_eig"};
    traj.columns.assign(3, {});
  }

  void emit(double t, const Vec& sigma) {
    sigma_to_rho(gen, t, sigma, rho_eig);
    const double trace_dev = std::abs(rho_eig.trace() - cplx(1.0, 0.0));
    const double herm_dev = rho_eig.hermiticity_error();
    for (int m = 0; m < gen.dim; ++m)
      for (int n = 0; n < gen.dim; ++n)
        rho_herm(m, n) = 0.5 * (rho_eig(m, n) + std::conj(rho_eig(n, m)));
    const std::vector<double> spec = hermitian_eigenvalues(rho_herm);
    const double min_eig = spec.front();
    if (min_eig < kPositivityFloor) warned = true;

    traj.times.push_back(t);
    traj.columns[0].push_back(trace_dev);
    traj.columns[1].push_back(herm_dev);
    traj.columns[2].push_back(min_eig);

    if (opts.store_states || opts.observer) {
      const ComplexMatrix& v = gen.eig.eigenvectors;
      ComplexMatrix rho_lab = v * rho_herm * v.adjoint();
      if (opts.observer)
        opts.observer(static_cast<int>(traj.times.size()) - 1, t, rho_lab);
      if (opts.store_states) traj.states.push_back(std::move(rho_lab));
    }
  }
};

}  // namespace

bool positivity_warning(const Trajectory& traj) {
  const std::vector<double>& col = traj.column("min_eig");
  return std::any_of(col.begin(), col.end(),
                     [](double v) { return v < kPositivityFloor; });
}

Trajectory propagate(const RedfieldGenerator& gen, const ComplexMatrix& rho0,
                     double t_max, double dt_hint, const PropagateOptions& opts) {
  if (rho0.rows != gen.dim || rho0.cols != gen.dim)
    throw DimensionMismatch("propagate: initial state dimension mismatch");
  if (t_max < 0.0) throw ConfigInvalid("propagate: t_max must be nonnegative");

  const int d = gen.dim;
  const std::size_t sz = static_cast<std::size_t>(d) * d;
  const ComplexMatrix& v = gen.eig.eigenvectors;

  Trajectory traj;
  OutputSink sink(gen, opts, traj, t_max);

  // rotate the initial state into the eigenbasis; at t = 0 sigma = rho
  const ComplexMatrix rho0_eig = v.adjoint() * rho0 * v;
  Vec y(rho0_eig.data.begin(), rho0_eig.data.end());

  sink.emit(0.0, y);
  if (t_max == 0.0) return traj;

  RhsWorkspace ws(d);
  std::array<Vec, 7> k;
  for (Vec& ki : k) ki.resize(sz);
  Vec ytmp(sz), ynew(sz), yerr(sz);

  const double wspan = gen.eig.eigenvalues.back() - gen.eig.eigenvalues.front();
  double h = dt_hint > 0.0 ? dt_hint : (wspan > 0.0 ? 0.01 / wspan : 0.01 * t_max);
  h = std::min(h, t_max);
  double t = 0.0;

  eval_rhs(gen, t, y.data(), k[0].data(), ws);
  const double hmin = 1e-12 * std::max(t_max, 1.0);

  while (t < t_max) {
    if (h < hmin) throw StepRejected("adaptive step collapsed below minimum size");
    if (t + h > t_max) h = t_max - t;

    for (int stage = 1; stage < 7; ++stage) {
      std::memcpy(ytmp.data(), y.data(), sz * sizeof(cplx));
      for (int p = 0; p < stage; ++p)
        if (kA[stage][p] != 0.0)
          kernels::axpy(h * kA[stage][p], k[p].data(), ytmp.data(), sz);
      eval_rhs(gen, t + kC[stage] * h, ytmp.data(), k[stage].data(), ws);
    }
    // 5th-order solution is stage 6's ytmp (FSAL layout)
    std::memcpy(ynew.data(), y.data(), sz * sizeof(cplx));
    for (int p = 0; p < 7; ++p)
      if (kB5[p] != 0.0) kernels::axpy(h * kB5[p], k[p].data(), ynew.data(), sz);

    double err = 0.0;
    for (std::size_t i = 0; i < sz; ++i) {
      cplx e = 0.0;
      for (int p = 0; p < 7; ++p) e += (kB5[p] - kB4[p]) * k[p][i];
      e *= h;
      const double scale =
          opts.abs_tol + opts.rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
      const double r = std::abs(e) / scale;
      err += r * r;
    }
    err = std::sqrt(err / static_cast<double>(sz));

    if (err <= 1.0) {
      const double t_new = t + h;
      // k[6] = f(t+h, ynew) already computed as the last stage (FSAL)
      while (sink.next < static_cast<int>(sink.grid.size()) &&
             sink.grid[sink.next] <= t_new + 1e-12 * t_max) {
        const double tg = sink.grid[sink.next];
        if (tg > t) {
          const double th = (tg - t) / h;
          // cubic Hermite between (y, k0) and (ynew, k6)
          const double h00 = (1 + 2 * th) * (1 - th) * (1 - th);
          const double h10 = th * (1 - th) * (1 - th);
          const double h01 = th * th * (3 - 2 * th);
          const double h11 = th * th * (th - 1);
          for (std::size_t i = 0; i < sz; ++i)
            ytmp[i] = h00 * y[i] + (h10 * h) * k[0][i] + h01 * ynew[i] +
                      (h11 * h) * k[6][i];
          sink.emit(tg, ytmp);
        }
        ++sink.next;
      }
      t = t_new;
      std::swap(y, ynew);
      std::swap(k[0], k[6]);
      const double grow = err > 0.0 ? 0.9 * std::pow(err, -0.2) : 5.0;
      h *= std::clamp(grow, 0.2, 5.0);
    } else {
      h *= std::clamp(0.9 * std::pow(err, -0.2), 0.2, 1.0);
    }
  }
  // flush any grid points that landed exactly on t_max
  while (sink.next < static_cast<int>(sink.grid.size())) {
    sink.emit(sink.grid[sink.next], y);
    ++sink.next;
  }
  return traj;
}

namespace {

ComplexMatrix eigen_to_lab(const RedfieldGenerator& gen, const ComplexMatrix& rho_eig) {
  const ComplexMatrix& v = gen.eig.eigenvectors;
  return v * rho_eig * v.adjoint();
}

ComplexMatrix generator_matrix_action(const RedfieldGenerator& gen,
                                      const ComplexMatrix& sigma) {
  ComplexMatrix out = dissipator_general(gen, sigma);
  for (int m = 0; m < gen.dim; ++m)
    for (int n = 0; n < gen.dim; ++n)
      out(m, n) += cplx(0.0, -(gen.eig.eigenvalues[m] - gen.eig.eigenvalues[n])) *
                   sigma(m, n);
  return out;
}

ComplexMatrix steady_state_nullspace(const RedfieldGenerator& gen) {
  const int d = gen.dim;
  const int dd = d * d;
  // columns of the superoperator: action on each matrix unit
  std::vector<cplx> superop(static_cast<std::size_t>(dd) * dd);
  ComplexMatrix unit(d, d);
  for (int j = 0; j < d; ++j)
    for (int kcol = 0; kcol < d; ++kcol) {
      unit(j, kcol) = 1.0;
      const ComplexMatrix lu = generator_matrix_action(gen, unit);
      unit(j, kcol) = 0.0;
      const int col = j * d + kcol;
      for (int m = 0; m < d; ++m)
        for (int n = 0; n < d; ++n)
          superop[static_cast<std::size_t>(m * d + n) * dd + col] = lu(m, n);
    }

  std::vector<cplx> evals(dd);
  std::vector<cplx> vr(static_cast<std::size_t>(dd) * dd);
  std::vector<cplx> vl(static_cast<std::size_t>(dd) * dd);  // unused, row-major
                                                            // LAPACKE needs a buffer
  const int info = LAPACKE_zgeev(
      LAPACK_ROW_MAJOR, 'N', 'V', dd,
      reinterpret_cast<lapack_complex_double*>(superop.data()), dd,
      reinterpret_cast<lapack_complex_double*>(evals.data()),
      reinterpret_cast<lapack_complex_double*>(vl.data()), dd,
      reinterpret_cast<lapack_complex_double*>(vr.data()), dd);
  if (info != 0) throw NoConvergence("zgeev failed on the vectorized generator");

  std::vector<int> order(dd);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return std::abs(evals[a]) < std::abs(evals[b]); });

  for (int cand : order) {
    if (std::abs(evals[cand]) > 1e-6) break;
    ComplexMatrix rho(d, d);
    for (int m = 0; m < d; ++m)
      for (int n = 0; n < d; ++n) {
        const cplx val = vr[static_cast<std::size_t>(m * d + n) * dd + cand];
        rho(m, n) += 0.5 * val;
        rho(n, m) += 0.5 * std::conj(val);
      }
    const cplx tr = rho.trace();
    if (std::abs(tr) < 1e-8) continue;
    rho *= 1.0 / tr;
    if (generator_matrix_action(gen, rho).max_abs() < 1e-9)
      return eigen_to_lab(gen, rho);
  }
  throw NoConvergence("no zero mode with nonzero trace found");
}

ComplexMatrix steady_state_relaxation(const RedfieldGenerator& gen) {
  // relax from the Gibbs state of the model Hamiltonian, already within
  // O(gamma) of the fixed point
  ComplexMatrix rho(gen.dim, gen.dim);
  {
    double z = 0.0;
    const double w0 = gen.eig.eigenvalues.front();
    for (int m = 0; m < gen.dim; ++m)
      z += std::exp(-gen.beta * (gen.eig.eigenvalues[m] - w0));
    ComplexMatrix diag(gen.dim, gen.dim);
    for (int m = 0; m < gen.dim; ++m)
      diag(m, m) = std::exp(-gen.beta * (gen.eig.eigenvalues[m] - w0)) / z;
    rho = eigen_to_lab(gen, diag);
  }
  PropagateOptions opts;
  opts.output_points = 2;
  opts.store_states = true;
  const double window = 10.0;
  for (int round = 0; round < 500; ++round) {
    Trajectory traj = propagate(gen, rho, window, 0.0, opts);
    const ComplexMatrix& next = traj.states.back();
    if (max_abs_diff(next, rho) < 1e-10) return next;
    rho = next;
  }
  throw NoConvergence("long-time relaxation did not reach a fixed point");
}

}  // namespace

ComplexMatrix steady_state(const RedfieldGenerator& gen) {
  if (gen.dim <= 16) return steady_state_nullspace(gen);
  return steady_state_relaxation(gen);
}

Trajectory weak_coupling_dynamics(const SpinSystem& sys, const BrownianSpectralDensity& j,
                                  double beta, const ComplexMatrix& rho0, double t_max,
                                  const PropagateOptions& opts) {
  const HamiltonianModel model = build_bare(sys);
  const RedfieldGenerator gen = build_generator(model, j, beta);
  return propagate(gen, rho0, t_max, 0.0, opts);
}

}  // namespace strongbath
