#include "chiralwg/cli.hpp"

#include <cstdio>
#include <cstdlib>

#include "chiralwg/config.hpp"
#include "chiralwg/errors.hpp"
#include "chiralwg/output.hpp"

namespace chiralwg {

namespace {

RunConfig load_config(const CliOptions& opt) {
  if (opt.config_path.empty()) throw_config("missing --config FILE");
  RunConfig cfg = parse_config_file(opt.config_path);
  for (const auto& kv : opt.sets) apply_override(cfg, kv);
  if (!opt.out_dir.empty()) cfg.out_dir = opt.out_dir;
  if (opt.workers > 0) cfg.workers = opt.workers;
  if (const char* env = std::getenv("CHIRALWG_DT")) {
    const double dt = std::atof(env);
    if (dt > 0.0) cfg.dt = dt;
  }
  return cfg;
}

ProtocolOptions protocol_options(const RunConfig& cfg) {
  ProtocolOptions opt;
  opt.t_start = cfg.t_start;
  opt.t_end = cfg.t_end;
  opt.icfg.dt = cfg.dt;
  opt.icfg.record_stride = cfg.record_stride;
  opt.icfg.method = cfg.method;
  opt.icfg.tol = cfg.tol;
  return opt;
}

// Substitutes tabulated waveforms from [controls] *_csv keys, if any.
void apply_csv_controls(const RunConfig& cfg, const char* protocol, ProtocolOptions& opt) {
  if (cfg.g1_csv.empty() && cfg.g2_csv.empty() && cfg.gamma1_csv.empty() &&
      cfg.gamma2_csv.empty() && cfg.gamma_a_csv.empty())
    return;
  ControlSet controls;
  const std::string p = protocol;
  if (p == "emit")
    controls = emission_controls(cfg.model, opt.t_start, opt.t_end);
  else if (p == "absorb")
    controls = absorption_controls(cfg.model, opt.t_start, opt.t_end);
  else
    controls = transmission_controls(cfg.model, opt.t_start, opt.t_end);
  if (!cfg.g1_csv.empty()) controls.g1 = load_tabulated_csv(cfg.g1_csv);
  if (!cfg.g2_csv.empty()) controls.g2 = load_tabulated_csv(cfg.g2_csv);
  if (!cfg.gamma1_csv.empty()) controls.gamma1 = load_tabulated_csv(cfg.gamma1_csv);
  if (!cfg.gamma2_csv.empty()) controls.gamma2 = load_tabulated_csv(cfg.gamma2_csv);
  if (!cfg.gamma_a_csv.empty()) controls.gamma_a = load_tabulated_csv(cfg.gamma_a_csv);
  opt.controls = controls;
}

int exit_code_for(const Error& e) {
  std::fprintf(stderr, "error: %s\n", e.what());
  switch (e.kind()) {
    case ErrorKind::Config:
      return 1;
    case ErrorKind::Numeric:
      return 2;
    case ErrorKind::Io:
      return 3;
  }
  return 1;
}

}  // namespace

int cmd_run(const CliOptions& opt) {
  try {
    RunConfig cfg = load_config(opt);
    ProtocolOptions popt = protocol_options(cfg);
    apply_csv_controls(cfg, opt.protocol.c_str(), popt);

    ProtocolReport report;
    if (opt.protocol == "emit") {
      report = run_emission(cfg.model, cfg.direction, popt);
    } else if (opt.protocol == "absorb") {
      report = run_absorption(cfg.model, popt);
    } else if (opt.protocol == "transmit") {
      report = run_transmission(cfg.model, popt);
    } else {
      throw_config("unknown protocol '" + opt.protocol + "' (expected emit|absorb|transmit)");
    }

    ensure_directory(cfg.out_dir);
    const std::string ts = timeseries_csv(report);
    const std::string mj = metrics_json(report);
    write_text_file(cfg.out_dir + "/timeseries.csv", ts);
    write_text_file(cfg.out_dir + "/metrics.json", mj);
    write_text_file(cfg.out_dir + "/manifest.json",
                    manifest_json(cfg, {{"timeseries.csv", git_blob_sha1(ts)},
                                        {"metrics.json", git_blob_sha1(mj)}}));
    if (!report.health.passed) {
      std::fprintf(stderr, "tolerance gates violated; bundle written with flags\n");
      return 2;
    }
    return 0;
  } catch (const Error& e) {
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}

int cmd_sweep(const CliOptions& opt) {
  try {
    RunConfig cfg = load_config(opt);
    if (!opt.sweep_name.empty()) {
      if (opt.sweep_name == "eta")
        cfg.sweep_kind = SweepKind::Eta;
      else if (opt.sweep_name == "detuning_distance")
        cfg.sweep_kind = SweepKind::DetuningDistance;
      else if (opt.sweep_name == "bandwidth")
        cfg.sweep_kind = SweepKind::Bandwidth;
      else
        throw_config("unknown sweep name '" + opt.sweep_name + "'");
    }

    SweepSpec spec;
    spec.kind = cfg.sweep_kind;
    spec.base = cfg.model;
    spec.workers = cfg.workers;
    switch (cfg.sweep_kind) {
      case SweepKind::Eta:
        spec.axes = {{"eta", cfg.eta_grid.empty() ? default_eta_grid() : cfg.eta_grid}};
        break;
      case SweepKind::DetuningDistance:
        spec.axes = {{"delta_omega",
                      cfg.detuning_grid.empty() ? default_detuning_grid() : cfg.detuning_grid},
                     {"d_over_lambda",
                      cfg.distance_grid.empty() ? default_distance_grid() : cfg.distance_grid}};
        break;
      case SweepKind::Bandwidth:
        spec.axes = {{"bandwidth_ratio",
                      cfg.bandwidth_grid.empty() ? default_bandwidth_grid() : cfg.bandwidth_grid}};
        break;
    }

    const SweepResult result = run_sweep(spec);

    ensure_directory(cfg.out_dir);
    const std::string sc = sweep_csv(result);
    const std::string mj = sweep_metrics_json(result);
    write_text_file(cfg.out_dir + "/sweep.csv", sc);
    write_text_file(cfg.out_dir + "/metrics.json", mj);
    write_text_file(cfg.out_dir + "/manifest.json",
                    manifest_json(cfg, {{"sweep.csv", git_blob_sha1(sc)},
                                        {"metrics.json", git_blob_sha1(mj)}}));
    for (const auto& p : result.points)
      if (!p.ok) {
        std::fprintf(stderr, "flagged grid points present; bundle written with flags\n");
        return 2;
      }
    return 0;
  } catch (const Error& e) {
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}

int cmd_oracle(const CliOptions& opt) {
  try {
    RunConfig cfg = load_config(opt);
    if (cfg.model.include_ancilla)
      throw_config("oracle requires an emission-type config without the ancilla");
    ProtocolOptions popt = protocol_options(cfg);
    popt.compute_envelope = false;
    const ProtocolReport report = run_emission(cfg.model, cfg.direction, popt);
    std::printf("oracle flux deviation (sup-norm): %.6e\n", report.oracle_deviation);
    if (!(report.oracle_deviation <= 1e-6)) {
      std::fprintf(stderr, "deviation exceeds 1e-6\n");
      return 2;
    }
    return 0;
  } catch (const Error& e) {
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}

int run_cli(const CliOptions& opt) {
  if (opt.command == "run") return cmd_run(opt);
  if (opt.command == "sweep") return cmd_sweep(opt);
  if (opt.command == "oracle") return cmd_oracle(opt);
  std::fprintf(stderr, "error: unknown command '%s' (expected run|sweep|oracle)\n",
               opt.command.c_str());
  return 1;
}

}  // namespace chiralwg
