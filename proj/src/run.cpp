#include "strongbath/run.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "strongbath/observables.hpp"

namespace strongbath {

using nlohmann::json;

namespace {

const double kNan = std::numeric_limits<double>::quiet_NaN();

std::vector<double> parse_grid(const json& node) {
  std::vector<double> grid;
  if (node.is_array()) {
    for (const auto& v : node) grid.push_back(v.get<double>());
  } else if (node.is_object()) {
    const double start = node.at("start").get<double>();
    const double stop = node.at("stop").get<double>();
    const double step = node.at("step").get<double>();
    if (step <= 0.0) throw ConfigInvalid("grid step must be positive");
    for (double v = start; v <= stop + 1e-12 * step; v += step) grid.push_back(v);
  } else {
    throw ConfigInvalid("grid must be an array or {start, stop, step}");
  }
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (grid[i] <= grid[i - 1])
      throw ConfigInvalid("grid values must be strictly increasing");
  return grid;
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

}  // namespace

RunConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigInvalid(std::string("config is not valid JSON: ") + e.what());
  }
  RunConfig c;
  try {
    c.scenario = j.at("scenario").get<std::string>();
    if (c.scenario != "spectrum" && c.scenario != "steady-sweep" &&
        c.scenario != "dynamics" && c.scenario != "sweep-dynamics")
      throw ConfigInvalid("unknown scenario: " + c.scenario);

    if (j.contains("system")) {
      const json& s = j["system"];
      if (s.contains("spins")) c.n_spins = s["spins"].get<int>();
      if (s.contains("deltas")) c.deltas = s["deltas"].get<std::vector<double>>();
    }
    if (j.contains("bath")) {
      const json& b = j["bath"];
      if (b.contains("gamma")) c.gamma = b["gamma"].get<double>();
      if (b.contains("Omega")) c.omega = b["Omega"].get<double>();
      if (b.contains("lambda")) c.lambda = b["lambda"].get<double>();
      if (b.contains("Lambda")) c.cutoff = b["Lambda"].get<double>();
      if (b.contains("lambda_grid")) c.lambda_grid = parse_grid(b["lambda_grid"]);
    }
    if (j.contains("temperature")) {
      const json& t = j["temperature"];
      if (t.is_array())
        c.temperatures = t.get<std::vector<double>>();
      else
        c.temperatures = {t.get<double>()};
    }
    if (j.contains("methods")) c.methods = j["methods"].get<std::vector<std::string>>();
    if (j.contains("levels")) c.levels = j["levels"].get<int>();
    if (j.contains("initial_state"))
      c.initial_state = j["initial_state"].get<std::vector<std::string>>();
    if (j.contains("t_max")) c.t_max = j["t_max"].get<double>();
    if (j.contains("output_points")) c.output_points = j["output_points"].get<int>();
    if (j.contains("observables"))
      c.observables = j["observables"].get<std::vector<std::string>>();
    if (j.contains("output")) c.output = j["output"].get<std::string>();
    if (j.contains("plot")) {
      const json& p = j["plot"];
      PlotSpec spec;
      spec.out = p.at("out").get<std::string>();
      if (p.contains("x")) spec.x = p["x"].get<std::string>();
      if (p.contains("panels"))
        spec.panels = p["panels"].get<std::vector<std::vector<std::string>>>();
      if (p.contains("period_markers"))
        spec.period_markers = p["period_markers"].get<bool>();
      c.plot = spec;
    }
  } catch (const json::exception& e) {
    throw ConfigInvalid(std::string("config field error: ") + e.what());
  }

  if (c.n_spins < 1 || c.n_spins > 3) throw ConfigInvalid("spins must be 1 to 3");
  if (static_cast<int>(c.deltas.size()) != c.n_spins)
    throw ConfigInvalid("deltas must list one splitting per spin");
  for (const std::string& m : c.methods)
    if (m != "rc" && m != "eff" && m != "weak")
      throw ConfigInvalid("unknown method: " + m);
  if (c.methods.empty()) throw ConfigInvalid("methods must be nonempty");
  for (double t : c.temperatures)
    if (t <= 0.0) throw ConfigInvalid("temperatures must be positive");
  for (const std::string& tok : c.initial_state)
    if (tok != "up" && tok != "down" && tok != "plus" && tok != "minus")
      throw ConfigInvalid("initial_state tokens must be up/down/plus/minus");
  const bool uses_rc =
      std::find(c.methods.begin(), c.methods.end(), "rc") != c.methods.end();
  if (uses_rc && c.levels < 2)
    throw ConfigInvalid("rc method requires levels >= 2");
  if (c.output_points < 1) throw ConfigInvalid("output_points must be >= 1");
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigInvalid("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

namespace {

std::string config_echo(const RunConfig& c) {
  json j;
  j["scenario"] = c.scenario;
  j["system"] = {{"spins", c.n_spins}, {"deltas", c.deltas}};
  j["bath"] = {{"gamma", c.gamma}, {"Omega", c.omega}, {"lambda", c.lambda},
               {"Lambda", c.cutoff}};
  if (!c.lambda_grid.empty()) j["bath"]["lambda_grid"] = c.lambda_grid;
  j["temperature"] = c.temperatures;
  j["methods"] = c.methods;
  j["levels"] = c.levels;
  if (!c.initial_state.empty()) j["initial_state"] = c.initial_state;
  j["t_max"] = c.t_max;
  j["output_points"] = c.output_points;
  return j.dump();
}

}  // namespace

int ResultTable::column_index(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (columns[i] == name) return static_cast<int>(i);
  throw ColumnMissing("result column not found: " + name);
}

std::vector<double> ResultTable::column_values(const std::string& name) const {
  const int idx = column_index(name);
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r[idx]);
  return out;
}

void write_csv(const ResultTable& table, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigInvalid("cannot open output file: " + path);
  out << "# meta: " << table.meta << "\n";
  for (std::size_t i = 0; i < table.columns.size(); ++i)
    out << table.columns[i] << (i + 1 < table.columns.size() ? "," : "\n");
  char buf[40];
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      std::snprintf(buf, sizeof(buf), "%.17g", row[i]);
      out << buf << (i + 1 < row.size() ? "," : "\n");
    }
  }
}

ResultTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigInvalid("cannot open csv file: " + path);
  ResultTable table;
  std::string line;
  bool header_done = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.rfind("# meta: ", 0) == 0) {
      table.meta = line.substr(8);
      continue;
    }
    if (line[0] == '#') continue;
    std::istringstream is(line);
    std::string cell;
    if (!header_done) {
      while (std::getline(is, cell, ',')) table.columns.push_back(cell);
      header_done = true;
    } else {
      std::vector<double> row;
      while (std::getline(is, cell, ',')) row.push_back(std::strtod(cell.c_str(), nullptr));
      if (row.size() != table.columns.size())
        throw ConfigInvalid("ragged csv row in " + path);
      table.rows.push_back(std::move(row));
    }
  }
  return table;
}

int worker_count(int n_jobs) {
  int cap = static_cast<int>(std::thread::hardware_concurrency());
  if (cap < 1) cap = 1;
  if (const char* env = std::getenv("STRONGBATH_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) cap = std::min(cap, v);
  }
  return std::max(1, std::min(cap, n_jobs));
}

void parallel_for(int n_jobs, const std::function<void(int)>& fn) {
  const int workers = worker_count(n_jobs);
  if (workers <= 1) {
    for (int i = 0; i < n_jobs; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  std::mutex err_mutex;
  std::exception_ptr first_error;
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&]() {
      while (true) {
        const int i = next.fetch_add(1);
        if (i >= n_jobs) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(err_mutex);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });
  for (std::thread& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

ResultTable run_spectrum(const RunConfig& config) {
  if (config.lambda_grid.empty())
    throw ConfigInvalid("spectrum scenario needs a nonempty lambda_grid");
  if (config.n_spins != 2)
    throw ConfigInvalid("spectrum scenario is defined for the two-spin model");
  ResultTable table;
  table.meta = config_echo(config);
  table.columns = {"lambda", "w_mm", "w_mp", "w_pm", "w_pp", "sync_frequency"};
  for (double lam : config.lambda_grid) {
    const std::array<double, 4> w =
        effective_eigenvalues(config.deltas[0], config.deltas[1], lam, config.omega);
    // ascending order is {w_-+, w_--, w_+-, w_++}
    table.rows.push_back({lam, w[1], w[0], w[2], w[3],
                          sync_frequency(config.deltas[0], config.deltas[1], lam,
                                         config.omega)});
  }
  return table;
}

namespace {

struct SweepPoint {
  double lambda;
  double temperature;
  std::string method;
};

}  // namespace

ResultTable run_steady_sweep(const RunConfig& config) {
  if (config.lambda_grid.empty())
    throw ConfigInvalid("steady-sweep scenario needs a nonempty lambda_grid");
  for (const std::string& m : config.methods)
    if (m != "rc" && m != "eff")
      throw ConfigInvalid("steady-sweep methods must be a subset of {rc, eff}");

  const SpinSystem sys = config.spin_system();
  std::vector<SweepPoint> points;
  for (double t : config.temperatures)
    for (double lam : config.lambda_grid)
      for (const std::string& m : config.methods) points.push_back({lam, t, m});

  ResultTable table;
  table.meta = config_echo(config);
  table.columns = {"lambda", "T", "method"};  // method: 0 = eff, 1 = rc
  table.columns.push_back("magnetization");
  for (int i = 0; i < sys.n_spins; ++i)
    table.columns.push_back("sz" + std::to_string(i + 1));
  table.columns.push_back("qmi");
  table.columns.push_back("negativity");
  table.columns.push_back("warning");
  table.rows.assign(points.size(), {});

  parallel_for(static_cast<int>(points.size()), [&](int idx) {
    const SweepPoint& pt = points[idx];
    std::vector<double> row = {pt.lambda, pt.temperature, pt.method == "rc" ? 1.0 : 0.0};
    double warning = 0.0;
    try {
      const HamiltonianModel model =
          pt.method == "rc" ? build_rc(sys, pt.lambda, config.omega, config.levels)
                            : build_effective(sys, pt.lambda, config.omega);
      const ComplexMatrix rho = equilibrium_state(model, 1.0 / pt.temperature);
      row.push_back(average_magnetization(rho, sys));
      for (int i = 0; i < sys.n_spins; ++i) row.push_back(polarization(rho, sys, i));
      if (sys.n_spins == 2) {
        row.push_back(qmi(rho));
        row.push_back(negativity(rho));
      } else {
        row.push_back(kNan);
        row.push_back(kNan);
      }
    } catch (const std::exception&) {
      while (row.size() < table.columns.size() - 1) row.push_back(kNan);
      warning = 1.0;
    }
    row.push_back(warning);
    table.rows[idx] = std::move(row);
  });
  return table;
}

namespace {

ComplexMatrix spin_initial_state(const RunConfig& config) {
  if (static_cast<int>(config.initial_state.size()) != config.n_spins)
    throw ConfigInvalid("initial_state needs one token per spin");
  ComplexMatrix rho;
  for (int i = 0; i < config.n_spins; ++i) {
    const std::string& tok = config.initial_state[i];
    ComplexMatrix site(2, 2);
    if (tok == "up") {
      site(0, 0) = 1.0;
    } else if (tok == "down") {
      site(1, 1) = 1.0;
    } else {
      // |+> or |->
      const double s = tok == "plus" ? 1.0 : -1.0;
      site(0, 0) = 0.5;
      site(1, 1) = 0.5;
      site(0, 1) = 0.5 * s;
      site(1, 0) = 0.5 * s;
    }
    rho = (i == 0) ? site : kron(rho, site);
  }
  return rho;
}

ComplexMatrix rc_gibbs_factor(double omega, double beta, int levels) {
  ComplexMatrix rho(levels, levels);
  double z = 0.0;
  for (int n = 0; n < levels; ++n) z += std::exp(-beta * omega * n);
  for (int n = 0; n < levels; ++n) rho(n, n) = std::exp(-beta * omega * n) / z;
  return rho;
}

struct DynamicsJob {
  std::string method;
  double temperature;
  std::string suffix;  // column suffix, e.g. "_rc" or "_rc_T2"
};

}  // namespace

ResultTable run_dynamics(const RunConfig& config) {
  const SpinSystem sys = config.spin_system();
  std::vector<std::string> obs = config.observables;
  if (obs.empty()) {
    for (int i = 0; i < sys.n_spins; ++i) obs.push_back("sz" + std::to_string(i + 1));
    obs.push_back("mag");
  }
  for (const std::string& o : obs) {
    bool known = o == "mag" || (sys.n_spins == 2 && (o == "qmi" || o == "neg"));
    for (int i = 0; i < sys.n_spins; ++i)
      if (o == "sz" + std::to_string(i + 1)) known = true;
    if (!known) throw ConfigInvalid("unknown observable: " + o);
  }

  const bool multi_temp = config.temperatures.size() > 1;
  std::vector<DynamicsJob> jobs;
  for (const std::string& m : config.methods)
    for (double t : config.temperatures) {
      std::string suffix = "_" + m;
      if (multi_temp) suffix += "_T" + format_number(t);
      jobs.push_back({m, t, suffix});
    }

  const int n_out = config.t_max > 0.0 ? std::max(2, config.output_points) : 1;
  ResultTable table;
  table.meta = config_echo(config);
  table.columns = {"t"};
  const std::vector<std::string> metric_names = {"trace_dev", "herm_dev", "min_eig"};
  for (const DynamicsJob& job : jobs) {
    for (const std::string& o : obs) table.columns.push_back(o + job.suffix);
    for (const std::string& mname : metric_names)
      table.columns.push_back(mname + job.suffix);
  }
  table.rows.assign(n_out, std::vector<double>(table.columns.size(), kNan));
  for (int i = 0; i < n_out; ++i)
    table.rows[i][0] = (n_out == 1) ? 0.0 : config.t_max * i / (n_out - 1);

  const ComplexMatrix rho_spin = spin_initial_state(config);
  const int n_obs = static_cast<int>(obs.size());

  parallel_for(static_cast<int>(jobs.size()), [&](int jidx) {
    const DynamicsJob& job = jobs[jidx];
    const double beta = 1.0 / job.temperature;
    const int col0 = 1 + jidx * (n_obs + 3);

    PropagateOptions opts;
    opts.output_points = n_out;
    opts.store_states = false;
    opts.observer = [&](int idx, double /*t*/, const ComplexMatrix& rho_lab) {
      ComplexMatrix reduced =
          rho_lab.rows == sys.dim()
              ? rho_lab
              : partial_trace(rho_lab, {sys.dim(), rho_lab.rows / sys.dim()}, {0});
      for (int o = 0; o < n_obs; ++o) {
        const std::string& name = obs[o];
        double v;
        if (name == "mag")
          v = average_magnetization(reduced, sys);
        else if (name == "qmi")
          v = qmi(reduced);
        else if (name == "neg")
          v = negativity(reduced);
        else
          v = polarization(reduced, sys, name[2] - '1');
        table.rows[idx][col0 + o] = v;
      }
      // min_eig reports on the reduced state whose observables are written;
      // the enlarged RC state has a transient O(gamma) slip from the
      // factorized initial condition that never reaches the spin marginal
      table.rows[idx][col0 + n_obs + 2] = hermitian_eigenvalues(reduced).front();
    };

    Trajectory traj;
    if (job.method == "weak") {
      const BrownianSpectralDensity j(config.gamma, config.omega, config.lambda);
      traj = weak_coupling_dynamics(sys, j, beta, rho_spin, config.t_max, opts);
    } else {
      const OhmicExpSpectralDensity j(config.gamma, config.cutoff);
      HamiltonianModel model;
      ComplexMatrix rho0;
      if (job.method == "rc") {
        model = build_rc(sys, config.lambda, config.omega, config.levels);
        rho0 = kron(rho_spin, rc_gibbs_factor(config.omega, beta, config.levels));
      } else {
        model = build_effective(sys, config.lambda, config.omega);
        rho0 = rho_spin;
        // the polaron transform rescales the residual coupling: after
        // truncation the bath couples to (2 lambda / Omega) S, not S
        model.S *= 2.0 * config.lambda / config.omega;
      }
      const RedfieldGenerator gen = build_generator(model, j, beta);
      traj = propagate(gen, rho0, config.t_max, 0.0, opts);
    }
    for (int i = 0; i < n_out; ++i)
      for (int m = 0; m < 2; ++m)
        table.rows[i][col0 + n_obs + m] = traj.columns[m][i];
  });
  return table;
}

ResultTable run_scenario(const RunConfig& config) {
  if (config.scenario == "spectrum") return run_spectrum(config);
  if (config.scenario == "steady-sweep") return run_steady_sweep(config);
  return run_dynamics(config);
}

}  // namespace strongbath
