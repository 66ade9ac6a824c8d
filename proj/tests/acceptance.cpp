// Acceptance gate: one line per criterion, exit code = number of failures.
// Figure configs are executed once up front and the resulting tables are
// shared by the trajectory-based criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "strongbath/observables.hpp"
#include "strongbath/plot.hpp"
#include "strongbath/redfield.hpp"
#include "strongbath/run.hpp"

using namespace strongbath;

namespace {

constexpr double kPi = 3.14159265358979323846;

double now_seconds() {
  using clock = std::chrono::steady_clock;
  static const clock::time_point start = clock::now();
  return std::chrono::duration<double>(clock::now() - start).count();
}

struct Criterion {
  int id;
  std::string label;
  bool passed;
  std::string detail;
};

std::vector<Criterion> results;

void record(int id, const std::string& label, bool passed, const std::string& detail) {
  results.push_back({id, label, passed, detail});
}

template <typename Fn>
void criterion(int id, const std::string& label, Fn fn) {
  try {
    fn();
  } catch (const std::exception& e) {
    record(id, label, false, std::string("exception: ") + e.what());
  }
}

ObservableSeries series_of(const ResultTable& t, const std::string& col) {
  return {col, t.column_values("t"), t.column_values(col)};
}

ComplexMatrix random_hermitian(int d, std::mt19937& rng) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  ComplexMatrix g(d, d);
  for (cplx& v : g.data) v = cplx(dist(rng), dist(rng));
  ComplexMatrix h = g;
  h += g.adjoint();
  h *= 0.5;
  return h;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

}  // namespace

int main() {
  const std::string config_dir = STRONGBATH_CONFIG_DIR;
  const SpinSystem sys2(2, {1.0, 0.9});
  const OhmicExpSpectralDensity j_res(0.05, 1000.0);

  // execute every shipped dynamics config once
  const std::vector<std::string> dynamics_configs = {
      "fig4_single_spin_dynamics.json", "fig5_sync_lambda1.json",
      "fig6_sync_lambda2p5.json",       "fig7_sync_lambda5.json",
      "fig8_temperature_dependence.json", "fig9_entanglement_dynamics.json"};
  std::map<std::string, ResultTable> tables;
  std::map<std::string, double> run_seconds;
  for (const std::string& name : dynamics_configs) {
    const double t0 = now_seconds();
    tables[name] = run_scenario(load_config(config_dir + "/" + name));
    run_seconds[name] = now_seconds() - t0;
    std::fprintf(stderr, "[setup] %s ran in %.1f s\n", name.c_str(),
                 run_seconds[name]);
  }

  // 1. effective vs RC(M=50) equilibrium magnetization across the lambda grid
  criterion(1, "equilibrium magnetization eff vs rc(M=50)", [&] {
    const double t0 = now_seconds();
    double max_diff = 0.0;
    for (double lam = 0.0; lam <= 5.0 + 1e-12; lam += 0.5) {
      const double m_eff = average_magnetization(
          equilibrium_state(build_effective(sys2, lam, 8.0), 1.0), sys2);
      const double m_rc = average_magnetization(
          equilibrium_state(build_rc(sys2, lam, 8.0, 50), 1.0), sys2);
      max_diff = std::max(max_diff, std::abs(m_eff - m_rc));
    }
    const double target = -(std::tanh(1.0) + std::tanh(0.9)) / 2.0;
    const double m_eff0 = average_magnetization(
        equilibrium_state(build_effective(sys2, 1e-3, 8.0), 1.0), sys2);
    const double m_rc0 = average_magnetization(
        equilibrium_state(build_rc(sys2, 1e-3, 8.0, 50), 1.0), sys2);
    const double elapsed = now_seconds() - t0;
    const bool ok = max_diff < 0.05 && std::abs(m_eff0 - target) < 1e-3 &&
                    std::abs(m_rc0 - target) < 1e-3 && elapsed < 300.0;
    record(1, "equilibrium magnetization eff vs rc(M=50)", ok,
           "max|diff|=" + fmt(max_diff) + ", lambda->0 residuals " +
               fmt(std::abs(m_eff0 - target)) + "/" + fmt(std::abs(m_rc0 - target)) +
               ", " + fmt(elapsed) + " s");
  });

  // 2. synchronization frequency from the rc traces of figs. 5-7
  criterion(2, "synchronization frequency within 10%", [&] {
    const std::vector<std::pair<std::string, double>> cases = {
        {"fig5_sync_lambda1.json", 1.0},
        {"fig6_sync_lambda2p5.json", 2.5},
        {"fig7_sync_lambda5.json", 5.0}};
    bool ok = true;
    std::string detail;
    double total = 0.0;
    for (const auto& [name, lam] : cases) {
      const double expect = sync_frequency(1.0, 0.9, lam, 8.0);
      const double got = dominant_frequency(series_of(tables.at(name), "sz1_rc"));
      const double rel = std::abs(got - expect) / expect;
      ok = ok && rel < 0.10;
      total += run_seconds.at(name);
      if (!detail.empty()) detail += ", ";
      detail += "lambda=" + fmt(lam) + ": " + fmt(got) + " vs " + fmt(expect) +
                " (" + fmt(100.0 * rel) + "%)";
    }
    ok = ok && total < 600.0;
    record(2, "synchronization frequency within 10%", ok,
           detail + "; runs took " + fmt(total) + " s");
  });

  // 3. oscillation frequency is temperature independent (fig. 8)
  criterion(3, "frequency spans < 5% across T = 1, 2, 4", [&] {
    const ResultTable& t = tables.at("fig8_temperature_dependence.json");
    bool ok = true;
    std::string detail;
    for (const std::string& method : {"rc", "eff"}) {
      double lo = 1e300, hi = 0.0;
      for (const std::string& temp : {"T1", "T2", "T4"}) {
        const double f =
            dominant_frequency(series_of(t, "sz1_" + method + "_" + temp));
        lo = std::min(lo, f);
        hi = std::max(hi, f);
      }
      const double span = (hi - lo) / lo;
      ok = ok && span < 0.05;
      if (!detail.empty()) detail += ", ";
      detail += method + " span " + fmt(100.0 * span) + "%";
    }
    record(3, "frequency spans < 5% across T = 1, 2, 4", ok, detail);
  });

  // 4. equilibrium negativity zero, transient negativity nonzero
  criterion(4, "negativity: zero at equilibrium, > 1e-3 in transit", [&] {
    bool ok = true;
    std::string detail;
    for (double lam : {0.5, 1.0, 2.5}) {
      const double n_eff =
          negativity(equilibrium_state(build_effective(sys2, lam, 8.0), 1.0));
      const double n_rc =
          negativity(equilibrium_state(build_rc(sys2, lam, 8.0, 50), 1.0));
      ok = ok && n_eff < 1e-6 && n_rc < 1e-6;
      if (!detail.empty()) detail += ", ";
      detail += "lambda=" + fmt(lam) + ": eff " + fmt(n_eff) + " rc " + fmt(n_rc);
    }
    const ResultTable& t = tables.at("fig9_entanglement_dynamics.json");
    const std::vector<double> neg = t.column_values("neg_rc");
    double peak = 0.0;
    for (std::size_t i = 1; i < neg.size(); ++i) peak = std::max(peak, neg[i]);
    ok = ok && peak > 1e-3;
    record(4, "negativity: zero at equilibrium, > 1e-3 in transit", ok,
           detail + "; transient peak " + fmt(peak));
  });

  // 5. matrix-product dissipator vs explicit four-index contraction
  criterion(5, "dissipator equals the tensor-contraction oracle", [&] {
    std::mt19937 rng(2024);
    double worst = 0.0;
    for (int n : {1, 2, 3}) {
      std::vector<double> deltas = {1.0, 0.9, 0.8};
      deltas.resize(n);
      const RedfieldGenerator gen =
          build_generator(build_bare(SpinSystem(n, deltas)), j_res, 1.0);
      const int d = gen.dim;
      for (int rep = 0; rep < 20; ++rep) {
        const ComplexMatrix rho = random_hermitian(d, rng);
        const ComplexMatrix fast = dissipator_eigenbasis(gen, rho);
        ComplexMatrix slow(d, d);
        for (int m = 0; m < d; ++m)
          for (int nn = 0; nn < d; ++nn) {
            cplx sum = 0.0;
            for (int a = 0; a < d; ++a)
              for (int b = 0; b < d; ++b) {
                sum += gen.lambda_filtered(m, a) * rho(a, b) * gen.s_eig(b, nn);
                sum -= gen.s_eig(m, a) * gen.lambda_filtered(a, b) * rho(b, nn);
                sum += gen.s_eig(m, a) * rho(a, b) *
                       std::conj(gen.lambda_filtered(nn, b));
                sum -= rho(m, a) * std::conj(gen.lambda_filtered(b, a)) *
                       gen.s_eig(b, nn);
              }
            slow(m, nn) = sum;
          }
        worst = std::max(worst, max_abs_diff(fast, slow));
      }
    }
    record(5, "dissipator equals the tensor-contraction oracle", worst < 1e-12,
           "worst elementwise deviation " + fmt(worst));
  });

  // 6. rate function exactness
  criterion(6, "rate function: Gamma(0) and detailed balance", [&] {
    const double beta = 1.0;
    const bool zero_ok = rate_gamma(j_res, 0.0, beta) == kPi * 0.05 / beta;
    double worst = 0.0;
    for (int i = 1; i <= 100; ++i) {
      const double w = 0.1 * i;
      const double lhs = rate_gamma(j_res, w, beta) * std::exp(beta * w);
      const double rhs = rate_gamma(j_res, -w, beta);
      worst = std::max(worst, std::abs(lhs - rhs) / rhs);
    }
    record(6, "rate function: Gamma(0) and detailed balance", zero_ok && worst < 1e-12,
           std::string("Gamma(0) exact: ") + (zero_ok ? "yes" : "no") +
               ", worst balance residual " + fmt(worst));
  });

  // 7. polaron operator identities on a 40-level boson space
  criterion(7, "polaron displacement and BCH identities", [&] {
    const int levels = 40;
    ComplexMatrix a(levels, levels);
    for (int n = 1; n < levels; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    const ComplexMatrix id_b = ComplexMatrix::identity(levels);
    const auto expm = [](const ComplexMatrix& k) {
      const EigenDecomposition eig = hermitian_eig(cplx(0.0, -1.0) * k);
      ComplexMatrix d(k.rows, k.rows);
      for (int i = 0; i < k.rows; ++i) d(i, i) = std::exp(cplx(0.0, eig.eigenvalues[i]));
      return eig.eigenvectors * d * eig.eigenvectors.adjoint();
    };
    double worst = 0.0;
    for (double ratio : {0.1, 0.5, 1.0}) {
      ComplexMatrix gen = a.adjoint();
      gen -= a;
      gen *= ratio;
      const ComplexMatrix u = expm(gen);
      worst = std::max(worst, std::abs(u(0, 0) - std::exp(-0.5 * ratio * ratio)));

      const ComplexMatrix uf = expm(kron(pauli_x(), gen));
      const ComplexMatrix lhs = uf * kron(pauli_z(), id_b) * uf.adjoint();
      ComplexMatrix two = gen;
      two *= 2.0;
      ComplexMatrix minus_two = gen;
      minus_two *= -2.0;
      ComplexMatrix zm = pauli_z();
      zm -= cplx(0.0, 1.0) * pauli_y();
      ComplexMatrix zp = pauli_z();
      zp += cplx(0.0, 1.0) * pauli_y();
      ComplexMatrix rhs = kron(zm, expm(two));
      rhs += kron(zp, expm(minus_two));
      rhs *= 0.5;
      worst = std::max(worst, max_abs_diff(lhs, rhs));
    }
    record(7, "polaron displacement and BCH identities", worst < 1e-8,
           "worst deviation " + fmt(worst));
  });

  // 8. RC parameters recovered from the Brownian spectral density
  criterion(8, "rc_parameters quadrature accuracy", [&] {
    const BrownianSpectralDensity fine(0.005, 8.0, 1.0);
    const RCParameters rc = rc_parameters(fine);
    const bool close =
        std::abs(rc.lambda - 1.0) < 0.02 && std::abs(rc.omega - 8.0) < 0.02 * 8.0;
    bool monotone = true;
    double prev = 1e300;
    for (double gamma : {0.04, 0.02, 0.01, 0.005}) {
      const RCParameters r = rc_parameters(BrownianSpectralDensity(gamma, 8.0, 1.0));
      const double err =
          std::max(std::abs(r.lambda - 1.0), std::abs(r.omega - 8.0) / 8.0);
      monotone = monotone && err < prev;
      prev = err;
    }
    record(8, "rc_parameters quadrature accuracy", close && monotone,
           "lambda=" + fmt(rc.lambda) + ", Omega=" + fmt(rc.omega) +
               ", halving gamma shrinks the error: " + (monotone ? "yes" : "no"));
  });

  // 9. trajectory sanity metrics for every shipped dynamics config
  criterion(9, "trajectory sanity across all shipped configs", [&] {
    bool ok = true;
    std::string detail;
    for (const std::string& name : dynamics_configs) {
      const ResultTable& t = tables.at(name);
      double worst_trace = 0.0, worst_herm = 0.0, worst_eig = 0.0;
      for (std::size_t c = 0; c < t.columns.size(); ++c) {
        const std::string& col = t.columns[c];
        for (const auto& row : t.rows) {
          if (col.rfind("trace_dev", 0) == 0)
            worst_trace = std::max(worst_trace, row[c]);
          else if (col.rfind("herm_dev", 0) == 0)
            worst_herm = std::max(worst_herm, row[c]);
          else if (col.rfind("min_eig", 0) == 0)
            worst_eig = std::min(worst_eig, row[c]);
        }
      }
      const bool this_ok =
          worst_trace < 1e-10 && worst_herm < 1e-10 && worst_eig > -1e-6;
      ok = ok && this_ok;
      if (!this_ok)
        detail += name + " (trace " + fmt(worst_trace) + ", herm " +
                  fmt(worst_herm) + ", min eig " + fmt(worst_eig) + ") ";
    }
    record(9, "trajectory sanity across all shipped configs", ok,
           ok ? "all configs within tolerances" : detail);
  });

  // 10. N=1 contrast: oscillating rc trace, featureless eff trace
  criterion(10, "N=1 rc trace oscillates, eff trace does not", [&] {
    const ResultTable& t = tables.at("fig4_single_spin_dynamics.json");
    const double f_rc = dominant_frequency(series_of(t, "sz1_rc"));
    bool eff_flat = false;
    try {
      dominant_frequency(series_of(t, "sz1_eff"));
    } catch (const NoPeak&) {
      eff_flat = true;
    }
    record(10, "N=1 rc trace oscillates, eff trace does not", f_rc > 0.0 && eff_flat,
           "rc peak at " + fmt(f_rc) + ", eff NoPeak: " + (eff_flat ? "yes" : "no"));
  });

  int failures = 0;
  for (const Criterion& c : results) {
    if (!c.passed) ++failures;
    std::printf("criterion %2d [%s] %s -- %s\n", c.id, c.passed ? "PASS" : "FAIL",
                c.label.c_str(), c.detail.c_str());
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(results.size()) - failures,
              results.size());
  return failures;
}
