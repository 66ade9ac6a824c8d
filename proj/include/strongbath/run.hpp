#pragma once

#include <optional>
#include <string>
#include <vector>

#include "strongbath/models.hpp"
#include "strongbath/redfield.hpp"

namespace strongbath {

struct PlotSpec {
  std::string out;
  std::string x = "t";
  std::vector<std::vector<std::string>> panels;  // one y-column list per panel
  bool period_markers = false;
};

struct RunConfig {
  std::string scenario;  // spectrum | steady-sweep | dynamics | sweep-dynamics
  int n_spins = 2;
  std::vector<double> deltas = {1.0, 0.9};
  double gamma = 0.05;
  double omega = 8.0;
  double lambda = 1.0;
  std::vector<double> lambda_grid;  // spectrum / steady-sweep
  double cutoff = 1000.0;           // residual Ohmic cutoff Lambda
  std::vector<double> temperatures = {1.0};
  std::vector<std::string> methods = {"rc", "eff"};
  int levels = 25;  // RC truncation M
  std::vector<std::string> initial_state;
  double t_max = 100.0;
  int output_points = 2048;
  std::vector<std::string> observables;
  std::string output;
  std::optional<PlotSpec> plot;

  SpinSystem spin_system() const { return SpinSystem(n_spins, deltas); }
};

// Parse and validate a JSON config file. Throws ConfigInvalid.
RunConfig load_config(const std::string& path);
RunConfig parse_config(const std::string& json_text);

struct ResultTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::string meta;  // compact config echo

  int column_index(const std::string& name) const;  // throws ColumnMissing
  std::vector<double> column_values(const std::string& name) const;
};

void write_csv(const ResultTable& table, const std::string& path);
ResultTable read_csv(const std::string& path);

ResultTable run_spectrum(const RunConfig& config);
ResultTable run_steady_sweep(const RunConfig& config);
ResultTable run_dynamics(const RunConfig& config);
ResultTable run_scenario(const RunConfig& config);

// Ordered parallel map; worker count is capped by STRONGBATH_THREADS.
void parallel_for(int n_jobs, const std::function<void(int)>& fn);
int worker_count(int n_jobs);

}  // namespace strongbath
