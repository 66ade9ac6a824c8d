#pragma once

#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "strongbath/errors.hpp"

namespace strongbath {

// Spectral density J(omega) of a bosonic environment. Frequencies and
// energies are in units of Delta_1, hbar = k_B = 1 throughout.
class SpectralDensity {
 public:
  virtual ~SpectralDensity() = default;

  // J(omega), omega >= 0. Throws NegativeFrequency.
  virtual double evaluate(double omega) const = 0;

  // lim_{omega->0} J(omega)/omega, used for the zero-frequency rate.
  virtual double slope_at_zero() const = 0;

  // Integration window [0, omega_max] for the moment integrals.
  virtual double moment_cutoff() const = 0;

  // Frequency window for the discrete-mode polaron sums.
  virtual std::pair<double, double> mode_window() const = 0;

  virtual std::string describe() const = 0;
};

// J(w) = 4 gamma Omega^2 lambda^2 w / [(w^2 - Omega^2)^2 + (2 pi gamma Omega w)^2]
class BrownianSpectralDensity : public SpectralDensity {
 public:
  BrownianSpectralDensity(double gamma, double omega_peak, double lambda);
  double evaluate(double omega) const override;
  double slope_at_zero() const override;
  double moment_cutoff() const override;
  std::pair<double, double> mode_window() const override;
  std::string describe() const override;

  double gamma() const { return gamma_; }
  double omega_peak() const { return omega_peak_; }
  double lambda() const { return lambda_; }

 private:
  double gamma_;
  double omega_peak_;
  double lambda_;
};

// J_RC(w) = gamma w exp(-w / Lambda)
class OhmicExpSpectralDensity : public SpectralDensity {
 public:
  OhmicExpSpectralDensity(double gamma, double cutoff);
  double evaluate(double omega) const override;
  double slope_at_zero() const override;
  double moment_cutoff() const override;
  std::pair<double, double> mode_window() const override;
  std::string describe() const override;

  double gamma() const { return gamma_; }
  double cutoff() const { return cutoff_; }

 private:
  double gamma_;
  double cutoff_;
};

// Piecewise-linear J from tabulated (omega, J) samples, omega strictly
// increasing. Zero outside the tabulated range.
class TabulatedSpectralDensity : public SpectralDensity {
 public:
  TabulatedSpectralDensity(std::vector<double> omega, std::vector<double> j);
  static TabulatedSpectralDensity from_csv(const std::string& path);
  double evaluate(double omega) const override;
  double slope_at_zero() const override;
  double moment_cutoff() const override;
  std::pair<double, double> mode_window() const override;
  std::string describe() const override;

 private:
  std::vector<double> omega_;
  std::vector<double> j_;
};

// n(omega) = 1 / (exp(beta omega) - 1)
double bose_einstein(double omega, double beta);

// Redfield rate function Gamma(omega):
//   omega > 0: pi J(omega) n(omega)
//   omega < 0: pi J(|omega|) [n(|omega|) + 1]
//   omega = 0: pi T lim J(w)/w
double rate_gamma(const SpectralDensity& j, double omega, double beta);

struct RCParameters {
  double lambda;
  double omega;
};

// RC mapping integrals: lambda^2 = (1/Omega) Int w J dw,
// Omega^2 = Int w^3 J dw / Int w J dw. Throws QuadratureNotConverged.
RCParameters rc_parameters(const SpectralDensity& j);

// Adaptive Gauss-Kronrod integral of f on [a, b], relative tolerance tol.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol);

}  // namespace strongbath
