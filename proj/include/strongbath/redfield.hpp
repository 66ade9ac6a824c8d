#pragma once

#include <functional>
#include <string>
#include <vector>

#include "strongbath/matrix.hpp"
#include "strongbath/models.hpp"
#include "strongbath/spectral.hpp"

namespace strongbath {

// Non-secular Born-Markov (Redfield) generator in the energy eigenbasis
// of the model Hamiltonian. The dissipator is applied as
//   D(rho) = [Ltil rho, S] + [S, rho Ltil^dag]
// with the frequency-filtered coupling matrix Ltil_jk = S_jk Gamma(w_j - w_k).
// The Lamb shift is omitted.
struct RedfieldGenerator {
  EigenDecomposition eig;
  ComplexMatrix s_eig;            // coupling operator in the eigenbasis
  ComplexMatrix lambda_filtered;  // Ltil
  double beta = 0.0;
  int dim = 0;
  int spin_dim = 0;
  Tier tier = Tier::bare;
};

RedfieldGenerator build_generator(const HamiltonianModel& model, const SpectralDensity& j,
                                  double beta);

// Dissipator in the eigenbasis; the fast path behind every RHS evaluation.
ComplexMatrix dissipator_eigenbasis(const RedfieldGenerator& gen,
                                    const ComplexMatrix& rho_eig);

// Full generator -i[H, rho] + D(rho) acting on a lab-frame state.
ComplexMatrix apply_generator(const RedfieldGenerator& gen, const ComplexMatrix& rho_lab);

struct Trajectory {
  std::vector<double> times;
  std::vector<ComplexMatrix> states;  // lab basis; empty if not stored
  std::vector<std::string> column_names;
  std::vector<std::vector<double>> columns;  // per-name series

  const std::vector<double>& column(const std::string& name) const;
};

struct PropagateOptions {
  int output_points = 2048;
  double rel_tol = 1e-8;
  double abs_tol = 1e-10;
  bool store_states = true;
  // Called for each output grid point with (index, t, lab-frame state).
  std::function<void(int, double, const ComplexMatrix&)> observer;
};

// Adaptive RK45 (Dormand-Prince) propagation in the interaction picture
// of the eigenbasis, resampled onto a uniform grid by cubic Hermite
// interpolation. Every trajectory carries trace_dev, herm_dev and
// min_eig monitoring columns; positivity violations below -1e-6 set the
// positivity_warning flag but do not stop the run.
Trajectory propagate(const RedfieldGenerator& gen, const ComplexMatrix& rho0,
                     double t_max, double dt_hint = 0.0,
                     const PropagateOptions& opts = {});

bool positivity_warning(const Trajectory& traj);

// Fixed point of the generator. dim <= 16 uses the null space of the
// vectorized superoperator; larger systems are relaxed from the Gibbs
// state of the model Hamiltonian until the state stalls to 1e-10.
ComplexMatrix steady_state(const RedfieldGenerator& gen);

// Tier (iv): Redfield on the bare spin Hamiltonian with the original
// Brownian spectral density.
Trajectory weak_coupling_dynamics(const SpinSystem& sys, const BrownianSpectralDensity& j,
                                  double beta, const ComplexMatrix& rho0, double t_max,
                                  const PropagateOptions& opts = {});

}  // namespace strongbath
