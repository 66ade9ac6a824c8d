#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "strongbath/plot.hpp"
#include "strongbath/run.hpp"

namespace {

using namespace strongbath;

struct Overrides {
  double lambda = std::nan("");
  double temp = std::nan("");
  int levels = 0;
  std::vector<std::string> methods;
  std::string out;
};

void apply(const Overrides& ov, RunConfig& config) {
  if (!std::isnan(ov.lambda)) config.lambda = ov.lambda;
  if (!std::isnan(ov.temp)) config.temperatures = {ov.temp};
  if (ov.levels > 0) config.levels = ov.levels;
  if (!ov.methods.empty()) config.methods = ov.methods;
  if (!ov.out.empty()) config.output = ov.out;
}

std::vector<double> period_markers(const RunConfig& config) {
  std::vector<double> marks;
  if (config.n_spins != 2) return marks;
  const double freq =
      sync_frequency(config.deltas[0], config.deltas[1], config.lambda, config.omega);
  if (freq <= 0.0) return marks;
  const double period = 2.0 * M_PI / freq;
  for (double t = period; t <= config.t_max; t += period) marks.push_back(t);
  return marks;
}

int run_subcommand(const std::string& scenario, const std::string& config_path,
                   const Overrides& ov) {
  RunConfig config = load_config(config_path);
  if (config.scenario != scenario &&
      !(scenario == "dynamics" && config.scenario == "sweep-dynamics"))
    throw ConfigInvalid("config scenario '" + config.scenario +
                        "' does not match subcommand '" + scenario + "'");
  apply(ov, config);
  const ResultTable table = run_scenario(config);
  if (!config.output.empty()) {
    write_csv(table, config.output);
    std::printf("wrote %s (%zu rows)\n", config.output.c_str(), table.rows.size());
  }
  if (config.plot) {
    std::vector<std::vector<std::string>> panels = config.plot->panels;
    if (panels.empty()) {
      std::vector<std::string> all;
      for (std::size_t i = 1; i < table.columns.size(); ++i)
        all.push_back(table.columns[i]);
      panels.push_back(all);
    }
    const std::vector<double> marks =
        config.plot->period_markers ? period_markers(config) : std::vector<double>{};
    emit_plot(table, config.plot->x, panels, config.plot->out, marks);
    std::printf("wrote %s\n", config.plot->out.c_str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Effective-Hamiltonian simulation engine for strongly coupled "
               "spin-boson systems"};
  app.require_subcommand(1);

  std::string config_path;
  Overrides ov;
  std::string scenario;
  for (const char* name : {"spectrum", "steady-sweep", "dynamics"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "JSON run configuration")->required();
    sub->add_option("--lambda", ov.lambda, "override coupling energy");
    sub->add_option("--temp", ov.temp, "override temperature");
    sub->add_option("--levels", ov.levels, "override RC truncation M");
    sub->add_option("--method", ov.methods, "override method list");
    sub->add_option("--out", ov.out, "override CSV output path");
    sub->callback([name, &scenario]() { scenario = name; });
  }

  std::string plot_in, plot_x = "t", plot_out;
  std::vector<std::string> plot_y;
  CLI::App* plot_cmd = app.add_subcommand("plot", "render an existing CSV");
  plot_cmd->add_option("--in", plot_in, "input CSV")->required();
  plot_cmd->add_option("--x", plot_x, "x column");
  plot_cmd->add_option("--y", plot_y, "y columns")->required();
  plot_cmd->add_option("--out", plot_out, "output SVG")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? 0 : 2;
  }

  try {
    if (plot_cmd->parsed()) {
      const strongbath::ResultTable table = strongbath::read_csv(plot_in);
      strongbath::emit_plot(table, plot_x, {plot_y}, plot_out);
      std::printf("wrote %s\n", plot_out.c_str());
      return 0;
    }
    return run_subcommand(scenario, config_path, ov);
  } catch (const strongbath::ConfigInvalid& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const strongbath::ColumnMissing& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "solver error: %s\n", e.what());
    return 3;
  }
}
