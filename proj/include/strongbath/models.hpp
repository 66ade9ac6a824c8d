#pragma once

#include <array>
#include <vector>

#include "strongbath/matrix.hpp"
#include "strongbath/spectral.hpp"

namespace strongbath {

// N spins with splittings Delta_i (Delta_1 := 1 by convention):
// H_S = sum_i Delta_i sigma^z_i, coupling operator S = sum_i sigma^x_i.
struct SpinSystem {
  int n_spins;
  std::vector<double> deltas;

  SpinSystem(int n, std::vector<double> d);
  int dim() const { return 1 << n_spins; }
};

// sigma^a acting on spin i of an N-spin register.
ComplexMatrix spin_op(const ComplexMatrix& op, int i, int n_spins);

enum class Tier { bare, rc, effective };

struct HamiltonianModel {
  Tier tier;
  ComplexMatrix H;
  ComplexMatrix S;   // operator coupling to the (residual) bath
  int levels = 0;    // RC truncation M, rc tier only
  double lambda = 0.0;
  double omega = 0.0;
  int spin_dim = 0;  // dimension of the spin factor
};

// H = sum Delta_i sigma^z_i, S = sum sigma^x_i.
HamiltonianModel build_bare(const SpinSystem& sys);

// H = H_S + Omega a^dag a + lambda S (a^dag + a) on 2^N * M levels;
// the enlarged coupling operator is (a^dag + a).
HamiltonianModel build_rc(const SpinSystem& sys, double lambda, double omega, int levels);

// H = exp(-2 lambda^2/Omega^2) H_S - (lambda^2/Omega) S^2, coupling S.
// Constant terms are kept so the closed-form eigenvalues hold verbatim.
HamiltonianModel build_effective(const SpinSystem& sys, double lambda, double omega);

// Closed-form spectrum of the N=2 effective Hamiltonian, ascending:
// {w_-+, w_--, w_+-, w_++} with
//   w_-+/w_++ = -g -/+ sqrt(g^2 + (D1t + D2t)^2)   (aligned sector)
//   w_--/w_+- = -g -/+ sqrt(g^2 + (D1t - D2t)^2)   (anti-aligned sector)
// where g = 2 lambda^2/Omega and Dit = exp(-2 lambda^2/Omega^2) Delta_i.
std::array<double, 4> effective_eigenvalues(double delta1, double delta2, double lambda,
                                            double omega);

// Synchronization frequency d_omega_eff = 2 sqrt(g^2 + (D1t - D2t)^2),
// the splitting of the anti-aligned pair.
double sync_frequency(double delta1, double delta2, double lambda, double omega);

struct PolaronParameters {
  std::vector<double> kappa;  // one renormalization factor per spin
  double interaction_energy;  // E_I
};

// Full-polaron (t_k = f_k) parameters from a discrete-mode sampling of J
// with k modes, doubled until kappa and E_I settle to 1e-4 relative.
PolaronParameters polaron_parameters(const SpectralDensity& j, double beta,
                                     int mode_count, int n_spins = 2);

}  // namespace strongbath
