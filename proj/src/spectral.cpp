#include "strongbath/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace strongbath {

namespace {

constexpr double kPi = 3.14159265358979323846;

void require_nonnegative(double omega) {
  if (omega < 0.0) throw NegativeFrequency("spectral density evaluated at omega < 0");
}

}  // namespace

BrownianSpectralDensity::BrownianSpectralDensity(double gamma, double omega_peak,
                                                 double lambda)
    : gamma_(gamma), omega_peak_(omega_peak), lambda_(lambda) {
  if (gamma <= 0.0 || omega_peak <= 0.0 || lambda < 0.0)
    throw ConfigInvalid("Brownian spectral density needs gamma > 0, Omega > 0, lambda >= 0");
}

double BrownianSpectralDensity::evaluate(double omega) const {
  require_nonnegative(omega);
  const double num = 4.0 * gamma_ * omega_peak_ * omega_peak_ * lambda_ * lambda_ * omega;
  const double d1 = omega * omega - omega_peak_ * omega_peak_;
  const double d2 = 2.0 * kPi * gamma_ * omega_peak_ * omega;
  return num / (d1 * d1 + d2 * d2);
}

double BrownianSpectralDensity::slope_at_zero() const {
  return 4.0 * gamma_ * lambda_ * lambda_ / (omega_peak_ * omega_peak_);
}

// The w and w^3 moments of the Brownian form do not both converge on a
// wide window (the w^3 integrand tends to a constant), so the moments
// are taken over the peak-symmetric window [0, 2 Omega] where both are
// dominated by the resonance. Error is O(gamma).
double BrownianSpectralDensity::moment_cutoff() const { return 2.0 * omega_peak_; }

std::pair<double, double> BrownianSpectralDensity::mode_window() const {
  return {1e-3 * omega_peak_, 20.0 * omega_peak_};
}

std::string BrownianSpectralDensity::describe() const {
  std::ostringstream os;
  os << "brownian(gamma=" << gamma_ << ",Omega=" << omega_peak_ << ",lambda=" << lambda_
     << ")";
  return os.str();
}

OhmicExpSpectralDensity::OhmicExpSpectralDensity(double gamma, double cutoff)
    : gamma_(gamma), cutoff_(cutoff) {
  if (gamma <= 0.0 || cutoff <= 0.0)
    throw ConfigInvalid("Ohmic spectral density needs gamma > 0, Lambda > 0");
}

double OhmicExpSpectralDensity::evaluate(double omega) const {
  require_nonnegative(omega);
  return gamma_ * omega * std::exp(-omega / cutoff_);
}

double OhmicExpSpectralDensity::slope_at_zero() const { return gamma_; }

double OhmicExpSpectralDensity::moment_cutoff() const { return 50.0 * cutoff_; }

std::pair<double, double> OhmicExpSpectralDensity::mode_window() const {
  return {1e-3 * cutoff_, 20.0 * cutoff_};
}

std::string OhmicExpSpectralDensity::describe() const {
  std::ostringstream os;
  os << "ohmic_exp(gamma=" << gamma_ << ",Lambda=" << cutoff_ << ")";
  return os.str();
}

TabulatedSpectralDensity::TabulatedSpectralDensity(std::vector<double> omega,
                                                   std::vector<double> j)
    : omega_(std::move(omega)), j_(std::move(j)) {
  if (omega_.size() != j_.size() || omega_.size() < 2)
    throw ConfigInvalid("tabulated spectral density needs >= 2 matching samples");
  for (std::size_t i = 1; i < omega_.size(); ++i)
    if (omega_[i] <= omega_[i - 1])
      throw ConfigInvalid("tabulated spectral density omega must be strictly increasing");
  if (omega_.front() < 0.0)
    throw ConfigInvalid("tabulated spectral density omega must be nonnegative");
}

TabulatedSpectralDensity TabulatedSpectralDensity::from_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigInvalid("cannot open spectral density table: " + path);
  std::vector<double> w, j;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream is(line);
    double a, b;
    if (is >> a >> b) {
      w.push_back(a);
      j.push_back(b);
    }
  }
  return TabulatedSpectralDensity(std::move(w), std::move(j));
}

double TabulatedSpectralDensity::evaluate(double omega) const {
  require_nonnegative(omega);
  if (omega <= omega_.front() || omega >= omega_.back()) {
    if (omega == omega_.front()) return j_.front();
    if (omega == omega_.back()) return j_.back();
    return 0.0;
  }
  const auto it = std::upper_bound(omega_.begin(), omega_.end(), omega);
  const std::size_t hi = static_cast<std::size_t>(it - omega_.begin());
  const std::size_t lo = hi - 1;
  const double t = (omega - omega_[lo]) / (omega_[hi] - omega_[lo]);
  return j_[lo] + t * (j_[hi] - j_[lo]);
}

double TabulatedSpectralDensity::slope_at_zero() const {
  for (std::size_t i = 0; i < omega_.size(); ++i)
    if (omega_[i] > 0.0) return j_[i] / omega_[i];
  return 0.0;
}

double TabulatedSpectralDensity::moment_cutoff() const { return omega_.back(); }

std::pair<double, double> TabulatedSpectralDensity::mode_window() const {
  return {std::max(omega_.front(), 1e-3 * omega_.back()), omega_.back()};
}

std::string TabulatedSpectralDensity::describe() const {
  std::ostringstream os;
  os << "tabulated(" << omega_.size() << " samples, omega_max=" << omega_.back() << ")";
  return os.str();
}

double bose_einstein(double omega, double beta) {
  return 1.0 / std::expm1(beta * omega);
}

double rate_gamma(const SpectralDensity& j, double omega, double beta) {
  if (beta <= 0.0) throw ConfigInvalid("rate_gamma needs beta > 0");
  if (omega > 0.0) return kPi * j.evaluate(omega) * bose_einstein(omega, beta);
  if (omega < 0.0) return kPi * j.evaluate(-omega) * (bose_einstein(-omega, beta) + 1.0);
  return kPi * j.slope_at_zero() / beta;
}

namespace {

// Gauss-Kronrod 7-15 pair on [-1, 1].
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct GkResult {
  double value;
  double error;
};

GkResult gk15(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double resk = 0.0, resg = 0.0;
  for (int i = 0; i < 8; ++i) {
    if (i == 7) {
      const double fv = f(c);
      resk += kWgk[7] * fv;
      resg += kWg[3] * fv;
      break;
    }
    const double f1 = f(c - h * kXgk[i]);
    const double f2 = f(c + h * kXgk[i]);
    resk += kWgk[i] * (f1 + f2);
    if (i % 2 == 1) resg += kWg[i / 2] * (f1 + f2);
  }
  return {resk * h, std::abs((resk - resg) * h)};
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol) {
  struct Interval {
    double a, b, value, error;
  };
  std::vector<Interval> heap;
  GkResult whole = gk15(f, a, b);
  heap.push_back({a, b, whole.value, whole.error});
  double total = whole.value;
  double err = whole.error;
  const int max_intervals = 4000;
  while (err > rel_tol * std::max(std::abs(total), 1e-300) &&
         static_cast<int>(heap.size()) < max_intervals) {
    // split the interval with the largest error estimate
    std::size_t worst = 0;
    for (std::size_t i = 1; i < heap.size(); ++i)
      if (heap[i].error > heap[worst].error) worst = i;
    const Interval iv = heap[worst];
    const double mid = 0.5 * (iv.a + iv.b);
    if (mid == iv.a || mid == iv.b) break;
    const GkResult left = gk15(f, iv.a, mid);
    const GkResult right = gk15(f, mid, iv.b);
    total += left.value + right.value - iv.value;
    err += left.error + right.error - iv.error;
    heap[worst] = {iv.a, mid, left.value, left.error};
    heap.push_back({mid, iv.b, right.value, right.error});
  }
  if (err > rel_tol * std::max(std::abs(total), 1e-300) * 10.0)
    throw QuadratureNotConverged("adaptive quadrature failed to reach tolerance");
  return total;
}

RCParameters rc_parameters(const SpectralDensity& j) {
  const double wmax = j.moment_cutoff();
  const double m1 = integrate([&](double w) { return w * j.evaluate(w); }, 0.0, wmax, 1e-8);
  const double m3 =
      integrate([&](double w) { return w * w * w * j.evaluate(w); }, 0.0, wmax, 1e-8);
  if (m1 <= 0.0) throw QuadratureNotConverged("rc_parameters: vanishing first moment");
  const double omega = std::sqrt(m3 / m1);
  const double lambda = std::sqrt(m1 / omega);
  return {lambda, omega};
}

}  // namespace strongbath
