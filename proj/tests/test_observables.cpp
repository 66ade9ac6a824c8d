#include <doctest.h>

#include <cmath>
#include <functional>
#include <random>

#include "strongbath/observables.hpp"

using namespace strongbath;

namespace {

ComplexMatrix random_density(int d, std::mt19937& rng) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  ComplexMatrix g(d, d);
  for (cplx& v : g.data) v = cplx(dist(rng), dist(rng));
  ComplexMatrix rho = g * g.adjoint();
  rho *= 1.0 / rho.trace();
  return rho;
}

ComplexMatrix bell_state() {
  ComplexMatrix rho(4, 4);
  rho(0, 0) = rho(0, 3) = rho(3, 0) = rho(3, 3) = 0.5;
  return rho;
}

ComplexMatrix werner_state(double p) {
  ComplexMatrix rho = bell_state();
  rho *= p;
  rho += (0.25 * (1.0 - p)) * ComplexMatrix::identity(4);
  return rho;
}

ObservableSeries sampled(double t_max, int n, const std::function<double(double)>& f) {
  ObservableSeries s{"synthetic", {}, {}};
  for (int i = 0; i < n; ++i) {
    const double t = t_max * i / (n - 1);
    s.times.push_back(t);
    s.values.push_back(f(t));
  }
  return s;
}

}  // namespace

TEST_CASE("polarization") {
  const SpinSystem sys1(1, {1.0});
  ComplexMatrix up(2, 2);
  up(0, 0) = 1.0;
  CHECK(polarization(up, sys1, 0) == doctest::Approx(1.0));
  CHECK(polarization(gibbs_state(pauli_z(), 1.0), sys1, 0) ==
        doctest::Approx(-std::tanh(1.0)).epsilon(1e-12));

  const SpinSystem sys2(2, {1.0, 0.9});
  ComplexMatrix updown(4, 4);
  updown(1, 1) = 1.0;
  CHECK(polarization(updown, sys2, 0) == doctest::Approx(1.0));
  CHECK(polarization(updown, sys2, 1) == doctest::Approx(-1.0));

  CHECK_THROWS_AS(polarization(updown, sys2, 2), IndexOutOfRange);
  CHECK_THROWS_AS(polarization(updown, sys2, -1), IndexOutOfRange);
  CHECK_THROWS_AS(polarization(up, sys2, 0), DimensionMismatch);
}

TEST_CASE("average_magnetization") {
  const SpinSystem sys(2, {1.0, 0.9});
  ComplexMatrix updown(4, 4);
  updown(1, 1) = 1.0;
  CHECK(average_magnetization(updown, sys) == doctest::Approx(0.0));

  const ComplexMatrix eq0 = equilibrium_state(build_effective(sys, 1e-9, 8.0), 1.0);
  const double expect = -(std::tanh(1.0) + std::tanh(0.9)) / 2.0;
  CHECK(average_magnetization(eq0, sys) == doctest::Approx(expect).epsilon(1e-6));

  // ultrastrong coupling: S^2-dominated eigenstates polarize along x
  const ComplexMatrix eq5 = equilibrium_state(build_effective(sys, 5.0, 8.0), 1.0);
  CHECK(std::abs(average_magnetization(eq5, sys)) < 0.1);
}

TEST_CASE("qmi") {
  std::mt19937 rng(53);
  const ComplexMatrix prod = kron(random_density(2, rng), random_density(2, rng));
  CHECK(qmi(prod) == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(qmi(bell_state()) == doctest::Approx(2.0).epsilon(1e-10));

  ComplexMatrix classical(4, 4);
  classical(0, 0) = classical(3, 3) = 0.5;
  CHECK(qmi(classical) == doctest::Approx(1.0).epsilon(1e-12));

  for (int rep = 0; rep < 50; ++rep) {
    const double v = qmi(random_density(4, rng));
    CHECK(v >= -1e-10);
    CHECK(v <= 2.0 + 1e-10);
  }
  CHECK_THROWS_AS(qmi(random_density(8, rng)), DimensionMismatch);
}

TEST_CASE("negativity examples") {
  std::mt19937 rng(59);
  CHECK(negativity(kron(random_density(2, rng), random_density(2, rng))) ==
        doctest::Approx(0.0).epsilon(1e-12));
  CHECK(negativity(bell_state()) == doctest::Approx(0.5));

  // Werner state: N = max(0, (3p - 1)/4)
  CHECK(negativity(werner_state(1.0 / 3.0)) == doctest::Approx(0.0));
  CHECK(negativity(werner_state(0.6)) == doctest::Approx(0.2).epsilon(1e-12));

  const ComplexMatrix eq = equilibrium_state(
      build_effective(SpinSystem(2, {1.0, 0.9}), 1.0, 8.0), 1.0);
  CHECK(negativity(eq) < 1e-6);
  CHECK_THROWS_AS(negativity(random_density(2, rng)), DimensionMismatch);
}

TEST_CASE("negativity dual formula") {
  std::mt19937 rng(61);
  for (int rep = 0; rep < 50; ++rep) {
    const ComplexMatrix rho = random_density(4, rng);
    const std::vector<double> spec = hermitian_eigenvalues(partial_transpose(rho, 2, 2));
    double trace_norm = 0.0, neg_sum = 0.0;
    for (double w : spec) {
      trace_norm += std::abs(w);
      if (w < 0.0) neg_sum -= w;
    }
    const double n = negativity(rho);
    CHECK(std::abs(n - 0.5 * (trace_norm - 1.0)) < 1e-12);
    CHECK(std::abs(n - neg_sum) < 1e-12);
  }
}

TEST_CASE("equilibrium_state") {
  const SpinSystem sys(2, {1.0, 0.9});
  const ComplexMatrix bare = gibbs_state(build_bare(sys).H, 1.0);
  CHECK(max_abs_diff(equilibrium_state(build_effective(sys, 0.0, 8.0), 1.0), bare) <
        1e-12);
  CHECK(max_abs_diff(equilibrium_state(build_rc(sys, 0.0, 8.0, 30), 1.0), bare) < 1e-10);
  CHECK(qmi(equilibrium_state(build_rc(sys, 0.0, 8.0, 30), 1.0)) < 1e-10);

  const double m50 =
      average_magnetization(equilibrium_state(build_rc(sys, 5.0, 8.0, 50), 1.0), sys);
  const double m60 =
      average_magnetization(equilibrium_state(build_rc(sys, 5.0, 8.0, 60), 1.0), sys);
  CHECK(std::abs(m50 - m60) < 1e-5);
}

TEST_CASE("dominant_frequency on damped cosines") {
  for (double w0 : {0.55, 2.1, 12.5}) {
    const double tau = 20.0 / w0 * 2.0;  // w0 tau = 40
    const ObservableSeries s = sampled(8.0 * tau, 2048, [&](double t) {
      return 0.4 + 0.3 * std::cos(w0 * t) * std::exp(-t / tau);
    });
    CHECK(dominant_frequency(s) == doctest::Approx(w0).epsilon(0.01));
  }
}

TEST_CASE("dominant_frequency rejects featureless series") {
  CHECK_THROWS_AS(dominant_frequency(sampled(10.0, 512, [](double) { return 0.7; })),
                  NoPeak);
  CHECK_THROWS_AS(dominant_frequency(sampled(
                      60.0, 2048, [](double t) { return std::exp(-t / 5.0); })),
                  NoPeak);
  // too few samples after the settle window
  CHECK_THROWS_AS(
      dominant_frequency(sampled(10.0, 200, [](double t) { return std::cos(t); })),
      NoPeak);
}

TEST_CASE("dominant_frequency amplitude invariance") {
  const auto shape = [](double t) {
    return -0.2 + 0.1 * std::cos(1.7 * t) * std::exp(-t / 30.0);
  };
  const ObservableSeries base = sampled(100.0, 2048, shape);
  const double f0 = dominant_frequency(base);
  for (double scale : {1e-4, 1e3}) {
    ObservableSeries scaled = base;
    for (double& v : scaled.values) v *= scale;
    CHECK(dominant_frequency(scaled) == doctest::Approx(f0).epsilon(1e-12));
  }
}

TEST_CASE("dominant_frequency picks the stronger of two lines") {
  const ObservableSeries s = sampled(120.0, 2048, [](double t) {
    return 0.5 * std::cos(1.3 * t) + 0.05 * std::cos(3.7 * t);
  });
  CHECK(dominant_frequency(s) == doctest::Approx(1.3).epsilon(0.01));
}

TEST_CASE("closed-system effective dynamics conserves the spin-inversion sector") {
  const SpinSystem sys(2, {1.0, 0.9});
  const HamiltonianModel model = build_effective(sys, 1.0, 8.0);
  const EigenDecomposition eig = hermitian_eig(model.H);
  ComplexMatrix rho(4, 4);
  rho(1, 1) = 1.0;  // |up down>
  for (double t : {0.5, 3.0, 17.0, 80.0}) {
    ComplexMatrix phases(4, 4);
    for (int m = 0; m < 4; ++m)
      phases(m, m) = std::exp(cplx(0.0, -eig.eigenvalues[m] * t));
    const ComplexMatrix u = eig.eigenvectors * phases * eig.eigenvectors.adjoint();
    const ComplexMatrix rt = u * rho * u.adjoint();
    CHECK(std::abs(rt(0, 0)) + std::abs(rt(3, 3)) < 1e-12);
  }
}
