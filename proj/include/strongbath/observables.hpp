#pragma once

#include <string>
#include <vector>

#include "strongbath/matrix.hpp"
#include "strongbath/models.hpp"

namespace strongbath {

struct ObservableSeries {
  std::string name;
  std::vector<double> times;
  std::vector<double> values;
};

// <sigma^z_i> of a reduced 2^N spin state. RC states must be traced
// down before calling any observable here.
double polarization(const ComplexMatrix& rho, const SpinSystem& sys, int i);

// (1/N) sum_i <sigma^z_i>
double average_magnetization(const ComplexMatrix& rho, const SpinSystem& sys);

// I(A:B) = S[rho_A] + S[rho_B] - S[rho_AB] in bits, two qubits.
double qmi(const ComplexMatrix& rho_ab);

// (||rho^T_A||_1 - 1)/2 for a two-qubit state; equals the magnitude of
// the negative part of the partially transposed spectrum.
double negativity(const ComplexMatrix& rho_ab);

// Gibbs state of the model reduced to the spin factor (RC traced out
// for the rc tier).
ComplexMatrix equilibrium_state(const HamiltonianModel& model, double beta);

// Angular frequency of the strongest non-DC periodogram line of a
// uniformly sampled series, after exponential-to-constant and cubic
// detrending, Hann windowing and 4x zero-padding, refined by local
// quadratic interpolation. Throws NoPeak when no line stands 5x above
// the local median power with amplitude above 1e-3 of the signal range.
double dominant_frequency(const ObservableSeries& series, double settle_fraction = 0.1);

}  // namespace strongbath
