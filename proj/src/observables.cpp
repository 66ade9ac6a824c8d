#include "strongbath/observables.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fftw3.h>

namespace strongbath {

double polarization(const ComplexMatrix& rho, const SpinSystem& sys, int i) {
  if (i < 0 || i >= sys.n_spins) throw IndexOutOfRange("polarization: bad spin index");
  if (rho.rows != sys.dim())
    throw DimensionMismatch("polarization expects a reduced 2^N state");
  const ComplexMatrix sz = spin_op(pauli_z(), i, sys.n_spins);
  cplx val = 0.0;
  for (int a = 0; a < rho.rows; ++a)
    for (int b = 0; b < rho.cols; ++b) val += rho(a, b) * sz(b, a);
  return val.real();
}

double average_magnetization(const ComplexMatrix& rho, const SpinSystem& sys) {
  double sum = 0.0;
  for (int i = 0; i < sys.n_spins; ++i) sum += polarization(rho, sys, i);
  return sum / sys.n_spins;
}

double qmi(const ComplexMatrix& rho_ab) {
  if (rho_ab.rows != 4 || rho_ab.cols != 4)
    throw DimensionMismatch("qmi expects a two-qubit state");
  const ComplexMatrix rho_a = partial_trace(rho_ab, {2, 2}, {0});
  const ComplexMatrix rho_b = partial_trace(rho_ab, {2, 2}, {1});
  return von_neumann_entropy(rho_a) + von_neumann_entropy(rho_b) -
         von_neumann_entropy(rho_ab);
}

double negativity(const ComplexMatrix& rho_ab) {
  if (rho_ab.rows != 4 || rho_ab.cols != 4)
    throw DimensionMismatch("negativity expects a two-qubit state");
  const ComplexMatrix pt = partial_transpose(rho_ab, 2, 2);
  const std::vector<double> spec = hermitian_eigenvalues(pt);
  double neg = 0.0;
  for (double mu : spec)
    if (mu < 0.0) neg -= mu;
  return neg;
}

ComplexMatrix equilibrium_state(const HamiltonianModel& model, double beta) {
  const ComplexMatrix full = gibbs_state(model.H, beta);
  if (model.tier == Tier::rc)
    return partial_trace(full, {model.spin_dim, model.levels}, {0});
  return full;
}

namespace {

// least-squares polynomial fit on abscissae scaled to [-1, 1]
std::vector<double> polyfit_scaled(const std::vector<double>& x,
                                   const std::vector<double>& y, int degree,
                                   double& x0, double& xs) {
  const int m = degree + 1;
  x0 = 0.5 * (x.front() + x.back());
  xs = std::max(0.5 * (x.back() - x.front()), 1e-300);
  std::vector<double> ata(m * m, 0.0), aty(m, 0.0);
  std::vector<double> pows(m);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double u = (x[i] - x0) / xs;
    pows[0] = 1.0;
    for (int p = 1; p < m; ++p) pows[p] = pows[p - 1] * u;
    for (int a = 0; a < m; ++a) {
      aty[a] += pows[a] * y[i];
      for (int b = 0; b < m; ++b) ata[a * m + b] += pows[a] * pows[b];
    }
  }
  // Gaussian elimination with partial pivoting
  std::vector<double> c = aty;
  for (int col = 0; col < m; ++col) {
    int piv = col;
    for (int r = col + 1; r < m; ++r)
      if (std::abs(ata[r * m + col]) > std::abs(ata[piv * m + col])) piv = r;
    for (int cc = 0; cc < m; ++cc) std::swap(ata[col * m + cc], ata[piv * m + cc]);
    std::swap(c[col], c[piv]);
    const double d = ata[col * m + col];
    for (int r = 0; r < m; ++r) {
      if (r == col || ata[r * m + col] == 0.0) continue;
      const double f = ata[r * m + col] / d;
      for (int cc = col; cc < m; ++cc) ata[r * m + cc] -= f * ata[col * m + cc];
      c[r] -= f * c[col];
    }
  }
  for (int p = 0; p < m; ++p) c[p] /= ata[p * m + p];
  return c;
}

double polyval_scaled(const std::vector<double>& c, double x, double x0, double xs) {
  const double u = (x - x0) / xs;
  double v = 0.0, up = 1.0;
  for (double cp : c) {
    v += cp * up;
    up *= u;
  }
  return v;
}

double rms(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s / v.size());
}

}  // namespace

double dominant_frequency(const ObservableSeries& series, double settle_fraction) {
  const std::vector<double>& ts = series.times;
  const std::vector<double>& vals = series.values;
  if (ts.size() != vals.size() || ts.size() < 2)
    throw NoPeak("series too short for spectral analysis");

  const double t_start = ts.front() + settle_fraction * (ts.back() - ts.front());
  std::vector<double> tt, vv;
  for (std::size_t i = 0; i < ts.size(); ++i)
    if (ts[i] >= t_start) {
      tt.push_back(ts[i]);
      vv.push_back(vals[i]);
    }
  const int n = static_cast<int>(vv.size());
  if (n < 256) throw NoPeak("fewer than 256 samples after the settle window");

  const auto [vmin_it, vmax_it] = std::minmax_element(vv.begin(), vv.end());
  const double range = *vmax_it - *vmin_it;
  if (range <= 0.0) throw NoPeak("constant series");

  // remove a fitted exponential approach to the late-time baseline
  double baseline = 0.0;
  const int tail = std::max(1, n / 10);
  for (int i = n - tail; i < n; ++i) baseline += vv[i];
  baseline /= tail;
  std::vector<double> resid(n);
  for (int i = 0; i < n; ++i) resid[i] = vv[i] - baseline;
  double amax = 0.0;
  for (double r : resid) amax = std::max(amax, std::abs(r));
  std::vector<double> detrended = resid;
  if (amax > 0.0) {
    std::vector<double> xs_fit, ys_fit;
    for (int i = 0; i < n; ++i)
      if (std::abs(resid[i]) > 1e-2 * amax) {
        xs_fit.push_back(tt[i]);
        ys_fit.push_back(std::log(std::abs(resid[i])));
      }
    if (xs_fit.size() > 16) {
      double x0, xsc;
      const std::vector<double> lin = polyfit_scaled(xs_fit, ys_fit, 1, x0, xsc);
      const double slope = lin[1] / xsc;
      if (slope < 0.0) {
        double re = 0.0, ee = 0.0;
        std::vector<double> expo(n);
        for (int i = 0; i < n; ++i) {
          expo[i] = std::exp(slope * (tt[i] - tt.front()));
          re += resid[i] * expo[i];
          ee += expo[i] * expo[i];
        }
        const double amp = re / ee;
        std::vector<double> cand(n);
        for (int i = 0; i < n; ++i) cand[i] = resid[i] - amp * expo[i];
        if (rms(cand) < rms(resid)) detrended = cand;
      }
    }
  }
  {
    double x0, xsc;
    const std::vector<double> cubic = polyfit_scaled(tt, detrended, 3, x0, xsc);
    for (int i = 0; i < n; ++i) detrended[i] -= polyval_scaled(cubic, tt[i], x0, xsc);
  }

  // Hann window, 4x zero-padded real FFT
  const int nfft = 4 * n;
  std::vector<double> buf(nfft, 0.0);
  double winsum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double w = 0.5 * (1.0 - std::cos(2.0 * M_PI * i / (n - 1)));
    buf[i] = detrended[i] * w;
    winsum += w;
  }
  const int nbins = nfft / 2 + 1;
  std::vector<fftw_complex> out(nbins);
  fftw_plan plan =
      fftw_plan_dft_r2c_1d(nfft, buf.data(), out.data(), FFTW_ESTIMATE);
  fftw_execute(plan);
  fftw_destroy_plan(plan);
  std::vector<double> power(nbins);
  for (int k = 0; k < nbins; ++k)
    power[k] = out[k][0] * out[k][0] + out[k][1] * out[k][1];

  const double dt = tt[1] - tt[0];
  const double df = 2.0 * M_PI / (nfft * dt);
  const double window_span = tt.back() - tt.front();
  const int kmin = std::max(2, static_cast<int>(std::ceil(
                                   3.0 * (2.0 * M_PI / window_span) / df)));

  int best = -1;
  std::vector<double> med_buf;
  for (int k = kmin; k < nbins - 1; ++k) {
    if (!(power[k] > power[k - 1] && power[k] > power[k + 1])) continue;
    const int lo = std::max(1, k - 64);
    const int hi = std::min(nbins, k + 64);
    med_buf.assign(power.begin() + lo, power.begin() + hi);
    std::nth_element(med_buf.begin(), med_buf.begin() + med_buf.size() / 2,
                     med_buf.end());
    const double median = med_buf[med_buf.size() / 2];
    const double amplitude = 2.0 * std::sqrt(power[k]) / winsum;
    if (median > 0.0 && power[k] >= 5.0 * median && amplitude >= 1e-3 * range)
      if (best < 0 || power[k] > power[best]) best = k;
  }
  if (best < 0) throw NoPeak("no periodogram line above the detection thresholds");

  double dk = 0.0;
  if (best > 0 && best < nbins - 1 && power[best - 1] > 0.0 && power[best + 1] > 0.0) {
    const double y0 = std::log(power[best - 1]);
    const double y1 = std::log(power[best]);
    const double y2 = std::log(power[best + 1]);
    const double den = y0 - 2.0 * y1 + y2;
    if (den < 0.0) dk = 0.5 * (y0 - y2) / den;
  }
  return (best + dk) * df;
}

}  // namespace strongbath
