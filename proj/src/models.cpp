#include "strongbath/models.hpp"

#include <algorithm>
#include <cmath>

namespace strongbath {

SpinSystem::SpinSystem(int n, std::vector<double> d) : n_spins(n), deltas(std::move(d)) {
  if (n_spins < 1 || n_spins > 3)
    throw ConfigInvalid("SpinSystem supports 1 to 3 spins");
  if (static_cast<int>(deltas.size()) != n_spins)
    throw ConfigInvalid("SpinSystem needs one splitting per spin");
  for (double v : deltas)
    if (v <= 0.0) throw ConfigInvalid("spin splittings must be positive");
}

ComplexMatrix spin_op(const ComplexMatrix& op, int i, int n_spins) {
  if (i < 0 || i >= n_spins) throw IndexOutOfRange("spin index out of range");
  ComplexMatrix out = (i == 0) ? op : ComplexMatrix::identity(2);
  for (int s = 1; s < n_spins; ++s)
    out = kron(out, (s == i) ? op : ComplexMatrix::identity(2));
  return out;
}

namespace {

ComplexMatrix spin_hamiltonian(const SpinSystem& sys) {
  ComplexMatrix h(sys.dim(), sys.dim());
  for (int i = 0; i < sys.n_spins; ++i)
    h += sys.deltas[i] * spin_op(pauli_z(), i, sys.n_spins);
  return h;
}

ComplexMatrix coupling_operator(const SpinSystem& sys) {
  ComplexMatrix s(sys.dim(), sys.dim());
  for (int i = 0; i < sys.n_spins; ++i) s += spin_op(pauli_x(), i, sys.n_spins);
  return s;
}

}  // namespace

HamiltonianModel build_bare(const SpinSystem& sys) {
  HamiltonianModel m;
  m.tier = Tier::bare;
  m.H = spin_hamiltonian(sys);
  m.S = coupling_operator(sys);
  m.spin_dim = sys.dim();
  return m;
}

HamiltonianModel build_rc(const SpinSystem& sys, double lambda, double omega, int levels) {
  if (levels < 2) throw TruncationTooSmall("RC truncation needs M >= 2");
  if (omega <= 0.0) throw ConfigInvalid("RC frequency must be positive");
  ComplexMatrix ladder(levels, levels);  // annihilation operator a
  for (int n = 1; n < levels; ++n) ladder(n - 1, n) = std::sqrt(static_cast<double>(n));
  ComplexMatrix position = ladder + ladder.adjoint();  // a^dag + a
  ComplexMatrix number = ladder.adjoint() * ladder;

  const ComplexMatrix hs = spin_hamiltonian(sys);
  const ComplexMatrix sx = coupling_operator(sys);
  const ComplexMatrix id_spin = ComplexMatrix::identity(sys.dim());
  const ComplexMatrix id_rc = ComplexMatrix::identity(levels);

  HamiltonianModel m;
  m.tier = Tier::rc;
  m.H = kron(hs, id_rc) + omega * kron(id_spin, number) + lambda * kron(sx, position);
  m.S = kron(id_spin, position);
  m.levels = levels;
  m.lambda = lambda;
  m.omega = omega;
  m.spin_dim = sys.dim();
  return m;
}

HamiltonianModel build_effective(const SpinSystem& sys, double lambda, double omega) {
  if (omega <= 0.0) throw ConfigInvalid("RC frequency must be positive");
  const double renorm = std::exp(-2.0 * lambda * lambda / (omega * omega));
  const ComplexMatrix sx = coupling_operator(sys);
  HamiltonianModel m;
  m.tier = Tier::effective;
  m.H = renorm * spin_hamiltonian(sys) - (lambda * lambda / omega) * (sx * sx);
  m.S = sx;
  m.lambda = lambda;
  m.omega = omega;
  m.spin_dim = sys.dim();
  return m;
}

std::array<double, 4> effective_eigenvalues(double delta1, double delta2, double lambda,
                                            double omega) {
  const double g = 2.0 * lambda * lambda / omega;
  const double renorm = std::exp(-2.0 * lambda * lambda / (omega * omega));
  const double d1 = renorm * delta1;
  const double d2 = renorm * delta2;
  const double aligned = std::sqrt(g * g + (d1 + d2) * (d1 + d2));
  const double anti = std::sqrt(g * g + (d1 - d2) * (d1 - d2));
  std::array<double, 4> w = {-g - aligned, -g - anti, -g + anti, -g + aligned};
  std::sort(w.begin(), w.end());
  return w;
}

double sync_frequency(double delta1, double delta2, double lambda, double omega) {
  const double g = 2.0 * lambda * lambda / omega;
  const double renorm = std::exp(-2.0 * lambda * lambda / (omega * omega));
  const double d = renorm * (delta1 - delta2);
  return 2.0 * std::sqrt(g * g + d * d);
}

namespace {

struct PolaronSums {
  double kappa_exponent;  // 2 sum t_k^2 / nu_k^2 coth(beta nu_k / 2)
  double interaction;     // sum t_k^2 / nu_k
};

PolaronSums polaron_sums(const SpectralDensity& j, double beta, int k) {
  const auto [wmin, wmax] = j.mode_window();
  const double dw = (wmax - wmin) / k;
  PolaronSums s{0.0, 0.0};
  for (int i = 0; i < k; ++i) {
    const double nu = wmin + (i + 0.5) * dw;
    const double t2 = j.evaluate(nu) * dw;
    s.kappa_exponent += 2.0 * t2 / (nu * nu) / std::tanh(0.5 * beta * nu);
    s.interaction += t2 / nu;
  }
  return s;
}

}  // namespace

PolaronParameters polaron_parameters(const SpectralDensity& j, double beta,
                                     int mode_count, int n_spins) {
  if (mode_count < 100) throw ConfigInvalid("polaron discretization needs K >= 100 modes");
  if (beta <= 0.0) throw ConfigInvalid("polaron_parameters needs beta > 0");
  PolaronSums prev = polaron_sums(j, beta, mode_count);
  int k = mode_count;
  bool converged = false;
  for (int round = 0; round < 12; ++round) {
    k *= 2;
    const PolaronSums cur = polaron_sums(j, beta, k);
    const double scale = std::max({std::abs(cur.kappa_exponent), std::abs(cur.interaction), 1e-30});
    const double change = std::max(std::abs(cur.kappa_exponent - prev.kappa_exponent),
                                   std::abs(cur.interaction - prev.interaction));
    prev = cur;
    if (change < 1e-4 * scale || scale <= 1e-30) {
      converged = true;
      break;
    }
  }
  if (!converged)
    throw DiscretizationNotConverged("polaron mode sums did not settle under K doubling");
  PolaronParameters out;
  out.kappa.assign(n_spins, std::exp(-prev.kappa_exponent));
  out.interaction_energy = prev.interaction;
  return out;
}

}  // namespace strongbath
