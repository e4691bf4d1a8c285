#include "rydsim/cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "rydsim/adiabatic.hpp"
#include "rydsim/analysis.hpp"
#include "rydsim/hilbert.hpp"
#include "rydsim/io.hpp"
#include "rydsim/protocols.hpp"

namespace rydsim {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

const double kPi = std::acos(-1.0);

// Maps config-file keys onto the same variables the flags write, so a
// --config JSON overrides flags; unknown keys are rejected.
struct ConfigBinder {
  std::map<std::string, std::function<void(const json&)>> setters;

  template <typename T>
  void bind(const std::string& key, T* target) {
    setters[key] = [target](const json& v) { *target = v.get<T>(); };
  }

  void apply(const json& cfg) const {
    for (const auto& [key, value] : cfg.items()) {
      const auto it = setters.find(key);
      if (it == setters.end()) {
        throw std::domain_error("unknown config key: " + key);
      }
      it->second(value);
    }
  }
};

json load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::domain_error("cannot open config file: " + path);
  }
  json j = json::parse(in);
  if (!j.is_object()) {
    throw std::domain_error("config must be a JSON object");
  }
  return j;
}

fs::path resolve_out_dir(std::string out) {
  if (out.empty()) {
    const char* env = std::getenv("RYDSIM_OUT_DIR");
    if (env != nullptr && *env != '\0') out = env;
  }
  if (out.empty()) {
    throw std::domain_error(
        "no output directory: pass --out DIR or set RYDSIM_OUT_DIR");
  }
  fs::path dir(out);
  fs::create_directories(dir);
  return dir;
}

void require_atoms(int n) {
  if (n < 1) {
    throw std::domain_error("--n must be >= 1 (given on the command line or "
                            "as config key \"n\")");
  }
}

PrepMode parse_prep(const std::string& s) {
  if (s == "ideal") return PrepMode::ideal;
  if (s == "pulsed") return PrepMode::pulsed;
  throw std::domain_error("--prep must be ideal or pulsed, got " + s);
}

PipelineOrder parse_order(const std::string& s) {
  if (s == "rotate-then-chirp") return PipelineOrder::rotate_then_chirp;
  if (s == "chirp-then-rotate") return PipelineOrder::chirp_then_rotate;
  throw std::domain_error(
      "--order must be rotate-then-chirp or chirp-then-rotate, got " + s);
}

std::string sfunction_csv(const ProtocolReport& rep) {
  std::vector<std::vector<double>> rows;
  rows.reserve(rep.trajectory.size());
  for (const TrajectoryMetrics& m : rep.trajectory) {
    rows.push_back({m.t, m.s_value, m.leakage, m.energy_mean,
                    m.energy_extremal, m.rydberg_population});
  }
  return io::csv_table({"t[1/Omega_JC]", "s[1]", "leakage[1]",
                        "energy_mean[Omega_JC]", "energy_extremal[Omega_JC]",
                        "rydberg_population[1]"},
                       rows);
}

// One column per named state, rows indexed by n_a; every column is the
// ground-block marginal, renormalized.
std::string histogram_csv(
    const std::vector<std::pair<std::string, const StateVector*>>& columns) {
  std::vector<std::string> header = {"n_a[atoms]"};
  std::vector<Histogram> hists;
  for (const auto& [name, state] : columns) {
    header.push_back(name + "[1]");
    hists.push_back(population_histogram(*state, PopulationBlock::ground_only));
  }
  const size_t bins = hists.front().bins.size();
  std::vector<std::vector<double>> rows;
  rows.reserve(bins);
  for (size_t b = 0; b < bins; ++b) {
    std::vector<double> row = {double(hists.front().bins[b].n_a)};
    for (const Histogram& h : hists) row.push_back(h.bins[b].probability);
    rows.push_back(std::move(row));
  }
  return io::csv_table(header, rows);
}

// Shared exit handling: flagged chirp residuals are numerical failures (2).
int finish_protocol(const ProtocolReport& rep) {
  const auto it = rep.metrics.find("chirp_too_fast");
  if (it != rep.metrics.end() && it->second > 0.5) {
    std::cerr << "numerical failure: chirp residual "
              << rep.metrics.at("chirp_residual")
              << " exceeds the too-fast threshold; slow the ramp\n";
    return 2;
  }
  return 0;
}

struct DynamicCli {
  int n = 0;
  std::string out;
  std::string config;
  double evolve_time = -1.0;
  bool optimize = false;
  std::string prep = "ideal";
  std::string order = "chirp-then-rotate";
  double delta_max = 20.0;
  double ramp_time = 50.0;
  double chirp_dt = 0.1;
};

int cmd_dynamic(const DynamicCli& o) {
  require_atoms(o.n);
  HilbertSpace space(o.n);
  DynamicOptions d;
  d.evolve_time = o.evolve_time;
  d.optimize = o.optimize;
  d.prep = parse_prep(o.prep);
  d.order = parse_order(o.order);
  d.chirp.delta_max = o.delta_max;
  d.chirp.ramp_time = o.ramp_time;
  d.chirp.dt = o.chirp_dt;
  const ProtocolReport rep = dynamic_squeeze(space, d);

  const fs::path dir = resolve_out_dir(o.out);
  const json options = {{"n", o.n},
                        {"evolve-time", o.evolve_time},
                        {"optimize", o.optimize},
                        {"prep", o.prep},
                        {"order", o.order},
                        {"delta-max", o.delta_max},
                        {"ramp-time", o.ramp_time},
                        {"chirp-dt", o.chirp_dt}};
  io::write_text_atomic(
      dir / "report.json",
      io::report_to_json(rep, "dynamic", o.n, options).dump(2) + "\n");
  io::write_text_atomic(dir / "sfunction.csv", sfunction_csv(rep));
  const StateVector coherent = spin_coherent_state(space, 0.5 * kPi, 0.0);
  io::write_text_atomic(dir / "histogram.csv",
                        histogram_csv({{"p_final", &rep.final_state},
                                       {"p_coherent", &coherent}}));
  std::printf(
      "dynamic n=%d evolve_time=%.6g rotation_angle=%.6g delta_jz=%.6g "
      "squeezing_db=%.6g chirp_residual=%.3g\n",
      o.n, rep.metrics.at("evolve_time"), rep.metrics.at("rotation_angle"),
      rep.metrics.at("delta_jz"), rep.metrics.at("squeezing_db"),
      rep.metrics.at("chirp_residual"));
  return finish_protocol(rep);
}

struct AdiabaticCli {
  int n = 0;
  std::string out;
  std::string config;
  std::string schedule_in;
  bool compensate = true;
  double f2_max = 1.0;
  double leakage_tol = 1e-3;
  double dt = 0.05;
  double backoff = 0.5;
  double growth = 1.5;
  double max_move = 0.05;
  double delta_max = 20.0;
  double ramp_time = 50.0;
  double chirp_dt = 0.1;
  int max_metric_samples = 400;
};

int cmd_adiabatic(const AdiabaticCli& o) {
  require_atoms(o.n);
  HilbertSpace space(o.n);
  Schedule schedule;
  if (!o.schedule_in.empty()) {
    schedule = io::load_schedule(o.schedule_in);
  } else {
    GreedyOptions g;
    g.f2_max = o.f2_max;
    g.leakage_tol = o.leakage_tol;
    g.dt = o.dt;
    g.compensate = o.compensate;
    g.backoff = o.backoff;
    g.growth = o.growth;
    g.max_move = o.max_move;
    schedule = greedy_schedule(space, g);
  }
  AdiabaticRunOptions r;
  r.compensate = o.compensate;
  r.chirp.delta_max = o.delta_max;
  r.chirp.ramp_time = o.ramp_time;
  r.chirp.dt = o.chirp_dt;
  r.max_metric_samples = o.max_metric_samples;
  const ProtocolReport rep = adiabatic_squeeze_run(space, schedule, r);

  const fs::path dir = resolve_out_dir(o.out);
  const json options = {{"n", o.n},
                        {"schedule-in", o.schedule_in},
                        {"compensate", o.compensate},
                        {"f2-max", o.f2_max},
                        {"leakage-tol", o.leakage_tol},
                        {"dt", o.dt},
                        {"backoff", o.backoff},
                        {"growth", o.growth},
                        {"max-move", o.max_move},
                        {"delta-max", o.delta_max},
                        {"ramp-time", o.ramp_time},
                        {"chirp-dt", o.chirp_dt},
                        {"max-metric-samples", o.max_metric_samples}};
  io::write_text_atomic(
      dir / "report.json",
      io::report_to_json(rep, "adiabatic", o.n, options).dump(2) + "\n");
  io::write_text_atomic(dir / "sfunction.csv", sfunction_csv(rep));
  io::write_text_atomic(dir / "schedule.csv", io::schedule_csv(schedule));
  io::write_text_atomic(dir / "schedule.json",
                        io::schedule_to_json(schedule).dump(2) + "\n");
  const StateVector coherent = spin_coherent_state(space, 0.5 * kPi, 0.0);
  io::write_text_atomic(dir / "histogram.csv",
                        histogram_csv({{"p_final", &rep.final_state},
                                       {"p_coherent", &coherent}}));
  std::printf(
      "adiabatic n=%d duration=%.6g segments=%d final_s=%.6g "
      "max_leakage=%.3g compensated=%d\n",
      o.n, rep.metrics.at("duration"), int(rep.metrics.at("segments")),
      rep.metrics.at("final_s"), rep.metrics.at("max_leakage"),
      o.compensate ? 1 : 0);
  return finish_protocol(rep);
}

struct CatCli {
  int n = 0;
  std::string out;
  std::string config;
};

int cmd_cat(const CatCli& o) {
  require_atoms(o.n);
  HilbertSpace space(o.n);
  const ProtocolReport rep = cat_generate(space);

  const fs::path dir = resolve_out_dir(o.out);
  const json options = {{"n", o.n}};
  io::write_text_atomic(
      dir / "report.json",
      io::report_to_json(rep, "cat", o.n, options).dump(2) + "\n");
  const StateVector coherent = spin_coherent_state(space, 0.5 * kPi, 0.0);
  io::write_text_atomic(
      dir / "histogram.csv",
      histogram_csv({{"p_final", &rep.final_state},
                     {"p_coherent", &coherent},
                     {"p_rot_x", &rep.views.at("rot_x_half_pi")},
                     {"p_rot_y", &rep.views.at("rot_y_half_pi")},
                     {"p_squeezed", &rep.views.at("squeezed")},
                     {"p_antisqueezed", &rep.views.at("antisqueezed")}}));
  std::printf(
      "cat n=%d tau=%.6g tau0=%.6g parity_even=%.4g parity_odd=%.4g "
      "rydberg_population=%.4g\n",
      o.n, rep.metrics.at("tau"), rep.metrics.at("tau0"),
      rep.metrics.at("parity_even"), rep.metrics.at("parity_odd"),
      rep.metrics.at("rydberg_population"));
  return finish_protocol(rep);
}

struct SpectrumCli {
  int n = 0;
  std::string out;
  std::string config;
  int grid = 101;
};

int cmd_spectrum(const SpectrumCli& o) {
  require_atoms(o.n);
  if (o.grid < 2) {
    throw std::domain_error("--grid must be >= 2");
  }
  HilbertSpace space(o.n);
  std::vector<double> xs(static_cast<size_t>(o.grid));
  for (int i = 0; i < o.grid; ++i) xs[static_cast<size_t>(i)] = double(i) / (o.grid - 1);
  const SpectrumTable table = spectrum_scan(space, xs);

  const int dim = int(table.levels.cols());
  std::vector<std::string> header = {"x[1]"};
  for (int c = 0; c < dim; ++c) {
    header.push_back("ev_" + std::to_string(c) + "[Omega_JC]");
  }
  std::vector<std::vector<double>> rows;
  rows.reserve(table.x.size());
  for (size_t i = 0; i < table.x.size(); ++i) {
    std::vector<double> row = {table.x[i]};
    for (int c = 0; c < dim; ++c) row.push_back(table.levels(int(i), c));
    rows.push_back(std::move(row));
  }

  const fs::path dir = resolve_out_dir(o.out);
  const json options = {{"n", o.n}, {"grid", o.grid}};
  const json report = {{"protocol", "spectrum"},
                       {"atoms", o.n},
                       {"options", options},
                       {"metrics",
                        {{"levels", dim},
                         {"grid", o.grid},
                         {"min_at_x0", table.levels(0, 0)},
                         {"max_at_x0", table.levels(0, dim - 1)},
                         {"min_at_x1", table.levels(o.grid - 1, 0)},
                         {"max_at_x1", table.levels(o.grid - 1, dim - 1)}}}};
  io::write_text_atomic(dir / "report.json", report.dump(2) + "\n");
  io::write_text_atomic(dir / "spectrum.csv", io::csv_table(header, rows));
  std::printf("spectrum n=%d grid=%d max_at_x0=%.6g max_at_x1=%.6g\n", o.n,
              o.grid, table.levels(0, dim - 1),
              table.levels(o.grid - 1, dim - 1));
  return 0;
}

struct QfunctionCli {
  int n = 0;
  std::string out;
  std::string config;
  std::string source = "coherent";
  int polar = 181;
  int azimuth = 361;
  double polar_angle = 0.5 * kPi;
  double azimuth_angle = 0.0;
  double evolve_time = -1.0;
  bool optimize = false;
};

int cmd_qfunction(const QfunctionCli& o) {
  require_atoms(o.n);
  HilbertSpace space(o.n);
  StateVector state = spin_coherent_state(space, o.polar_angle, o.azimuth_angle);
  if (o.source == "dynamic") {
    DynamicOptions d;
    d.evolve_time = o.evolve_time;
    d.optimize = o.optimize;
    state = dynamic_squeeze(space, d).final_state;
  } else if (o.source == "cat") {
    state = cat_generate(space).final_state;
  } else if (o.source != "coherent") {
    throw std::domain_error(
        "--source must be coherent, dynamic, or cat, got " + o.source);
  }
  const QGrid grid = q_function(state, o.polar, o.azimuth);

  double q_max = 0.0;
  int max_it = 0, max_ip = 0;
  std::vector<std::vector<double>> rows;
  rows.reserve(static_cast<size_t>(o.polar) * o.azimuth);
  for (int it = 0; it < grid.polar_samples; ++it) {
    const double theta = kPi * it / (grid.polar_samples - 1);
    for (int ip = 0; ip < grid.azimuth_samples; ++ip) {
      const double phi = 2.0 * kPi * ip / grid.azimuth_samples;
      const double q = grid.values(it, ip);
      rows.push_back({theta, phi, q});
      if (q > q_max) {
        q_max = q;
        max_it = it;
        max_ip = ip;
      }
    }
  }

  const fs::path dir = resolve_out_dir(o.out);
  const json options = {{"n", o.n},
                        {"source", o.source},
                        {"polar", o.polar},
                        {"azimuth", o.azimuth},
                        {"polar-angle", o.polar_angle},
                        {"azimuth-angle", o.azimuth_angle},
                        {"evolve-time", o.evolve_time},
                        {"optimize", o.optimize}};
  const json report = {
      {"protocol", "qfunction"},
      {"atoms", o.n},
      {"options", options},
      {"metrics",
       {{"ground_weight", grid.ground_weight},
        {"q_max", q_max},
        {"theta_at_max", kPi * max_it / (grid.polar_samples - 1)},
        {"phi_at_max", 2.0 * kPi * max_ip / grid.azimuth_samples}}}};
  io::write_text_atomic(dir / "report.json", report.dump(2) + "\n");
  io::write_text_atomic(dir / "qfunction.csv",
                        io::csv_table({"theta[rad]", "phi[rad]", "q[1]"}, rows));
  std::printf(
      "qfunction n=%d source=%s ground_weight=%.6g q_max=%.6g\n", o.n,
      o.source.c_str(), grid.ground_weight, q_max);
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"Deterministic simulator of collective-spin squeezing and cat "
               "states in a doubly blockaded atomic ensemble"};
  app.require_subcommand(1);

  DynamicCli dyn;
  ConfigBinder dyn_bind;
  CLI::App* dyn_cmd = app.add_subcommand(
      "dynamic", "Dressed-state squeezing under the resonant drive");
  dyn_cmd->add_option("--n", dyn.n, "atom count");
  dyn_bind.bind("n", &dyn.n);
  dyn_cmd->add_option("--out", dyn.out, "output directory");
  dyn_bind.bind("out", &dyn.out);
  dyn_cmd->add_option("--config", dyn.config, "JSON config overriding flags");
  dyn_cmd->add_option("--evolve-time", dyn.evolve_time,
                      "drive duration, 1/|Omega_JC| units");
  dyn_bind.bind("evolve-time", &dyn.evolve_time);
  dyn_cmd->add_flag("--optimize", dyn.optimize,
                    "scan the drive duration for maximum squeezing");
  dyn_bind.bind("optimize", &dyn.optimize);
  dyn_cmd->add_option("--prep", dyn.prep, "ideal|pulsed");
  dyn_bind.bind("prep", &dyn.prep);
  dyn_cmd->add_option("--order", dyn.order,
                      "rotate-then-chirp|chirp-then-rotate");
  dyn_bind.bind("order", &dyn.order);
  dyn_cmd->add_option("--delta-max", dyn.delta_max, "chirp final detuning");
  dyn_bind.bind("delta-max", &dyn.delta_max);
  dyn_cmd->add_option("--ramp-time", dyn.ramp_time, "chirp ramp duration");
  dyn_bind.bind("ramp-time", &dyn.ramp_time);
  dyn_cmd->add_option("--chirp-dt", dyn.chirp_dt, "chirp integration step");
  dyn_bind.bind("chirp-dt", &dyn.chirp_dt);

  AdiabaticCli adi;
  ConfigBinder adi_bind;
  CLI::App* adi_cmd = app.add_subcommand(
      "adiabatic", "Greedy quasi-adiabatic squeezing passage");
  adi_cmd->add_option("--n", adi.n, "atom count");
  adi_bind.bind("n", &adi.n);
  adi_cmd->add_option("--out", adi.out, "output directory");
  adi_bind.bind("out", &adi.out);
  adi_cmd->add_option("--config", adi.config, "JSON config overriding flags");
  adi_cmd->add_option("--schedule-in", adi.schedule_in,
                      "replay a schedule file (.json or .csv) instead of "
                      "generating one");
  adi_bind.bind("schedule-in", &adi.schedule_in);
  adi_cmd->add_flag("--compensate,!--no-compensate", adi.compensate,
                    "apply the counterdiabatic alpha terms");
  adi_bind.bind("compensate", &adi.compensate);
  adi_cmd->add_option("--f2-max", adi.f2_max, "terminal drive amplitude");
  adi_bind.bind("f2-max", &adi.f2_max);
  adi_cmd->add_option("--leakage-tol", adi.leakage_tol,
                      "allowed instantaneous leakage");
  adi_bind.bind("leakage-tol", &adi.leakage_tol);
  adi_cmd->add_option("--dt", adi.dt, "schedule segment length");
  adi_bind.bind("dt", &adi.dt);
  adi_cmd->add_option("--backoff", adi.backoff, "step shrink factor");
  adi_bind.bind("backoff", &adi.backoff);
  adi_cmd->add_option("--growth", adi.growth, "step growth factor");
  adi_bind.bind("growth", &adi.growth);
  adi_cmd->add_option("--max-move", adi.max_move,
                      "parameter move cap per segment");
  adi_bind.bind("max-move", &adi.max_move);
  adi_cmd->add_option("--delta-max", adi.delta_max, "chirp final detuning");
  adi_bind.bind("delta-max", &adi.delta_max);
  adi_cmd->add_option("--ramp-time", adi.ramp_time, "chirp ramp duration");
  adi_bind.bind("ramp-time", &adi.ramp_time);
  adi_cmd->add_option("--chirp-dt", adi.chirp_dt, "chirp integration step");
  adi_bind.bind("chirp-dt", &adi.chirp_dt);
  adi_cmd->add_option("--max-metric-samples", adi.max_metric_samples,
                      "trajectory decimation cap");
  adi_bind.bind("max-metric-samples", &adi.max_metric_samples);

  CatCli cat;
  ConfigBinder cat_bind;
  CLI::App* cat_cmd = app.add_subcommand(
      "cat", "Two-component superposition via the resonant pulse pair");
  cat_cmd->add_option("--n", cat.n, "atom count");
  cat_bind.bind("n", &cat.n);
  cat_cmd->add_option("--out", cat.out, "output directory");
  cat_bind.bind("out", &cat.out);
  cat_cmd->add_option("--config", cat.config, "JSON config overriding flags");

  SpectrumCli spec;
  ConfigBinder spec_bind;
  CLI::App* spec_cmd = app.add_subcommand(
      "spectrum", "Eigenvalues of the interpolating control Hamiltonian");
  spec_cmd->add_option("--n", spec.n, "atom count");
  spec_bind.bind("n", &spec.n);
  spec_cmd->add_option("--out", spec.out, "output directory");
  spec_bind.bind("out", &spec.out);
  spec_cmd->add_option("--config", spec.config, "JSON config overriding flags");
  spec_cmd->add_option("--grid", spec.grid, "number of x samples in [0,1]");
  spec_bind.bind("grid", &spec.grid);

  QfunctionCli qf;
  ConfigBinder qf_bind;
  CLI::App* qf_cmd = app.add_subcommand(
      "qfunction", "Spin Q-function of a protocol output or coherent state");
  qf_cmd->add_option("--n", qf.n, "atom count");
  qf_bind.bind("n", &qf.n);
  qf_cmd->add_option("--out", qf.out, "output directory");
  qf_bind.bind("out", &qf.out);
  qf_cmd->add_option("--config", qf.config, "JSON config overriding flags");
  qf_cmd->add_option("--source", qf.source, "coherent|dynamic|cat");
  qf_bind.bind("source", &qf.source);
  qf_cmd->add_option("--polar", qf.polar, "polar grid samples");
  qf_bind.bind("polar", &qf.polar);
  qf_cmd->add_option("--azimuth", qf.azimuth, "azimuth grid samples");
  qf_bind.bind("azimuth", &qf.azimuth);
  qf_cmd->add_option("--polar-angle", qf.polar_angle,
                     "coherent-source polar angle (rad)");
  qf_bind.bind("polar-angle", &qf.polar_angle);
  qf_cmd->add_option("--azimuth-angle", qf.azimuth_angle,
                     "coherent-source azimuth angle (rad)");
  qf_bind.bind("azimuth-angle", &qf.azimuth_angle);
  qf_cmd->add_option("--evolve-time", qf.evolve_time,
                     "dynamic-source drive duration");
  qf_bind.bind("evolve-time", &qf.evolve_time);
  qf_cmd->add_flag("--optimize", qf.optimize,
                   "dynamic-source duration optimization");
  qf_bind.bind("optimize", &qf.optimize);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (dyn_cmd->parsed()) {
      if (!dyn.config.empty()) dyn_bind.apply(load_config(dyn.config));
      return cmd_dynamic(dyn);
    }
    if (adi_cmd->parsed()) {
      if (!adi.config.empty()) adi_bind.apply(load_config(adi.config));
      return cmd_adiabatic(adi);
    }
    if (cat_cmd->parsed()) {
      if (!cat.config.empty()) cat_bind.apply(load_config(cat.config));
      return cmd_cat(cat);
    }
    if (spec_cmd->parsed()) {
      if (!spec.config.empty()) spec_bind.apply(load_config(spec.config));
      return cmd_spectrum(spec);
    }
    if (qf_cmd->parsed()) {
      if (!qf.config.empty()) qf_bind.apply(load_config(qf.config));
      return cmd_qfunction(qf);
    }
    std::cerr << "error: no subcommand\n";
    return 1;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace rydsim
