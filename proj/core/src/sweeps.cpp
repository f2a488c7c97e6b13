#include "chiralwg/sweeps.hpp"

#include <atomic>
#include <cmath>
#include <thread>

#include "chiralwg/errors.hpp"

namespace chiralwg {

namespace {

void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn) {
  workers = std::max(1, workers);
  std::atomic<std::size_t> next{0};
  auto drain = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < n;) fn(i);
  };
  if (workers == 1 || n <= 1) {
    drain();
    return;
  }
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(drain);
  drain();
  for (auto& th : pool) th.join();
}

SweepPoint run_point(const MoleculeConfig& cfg, Protocol protocol, const ProtocolOptions& opt,
                     std::vector<double> coords) {
  SweepPoint point;
  point.coords = std::move(coords);
  try {
    ProtocolReport report;
    switch (protocol) {
      case Protocol::Emission:
        report = run_emission(cfg, Direction::Right, opt);
        break;
      case Protocol::Transmission:
        report = run_transmission(cfg, opt);
        break;
      case Protocol::Absorption:
        report = run_absorption(cfg, opt);
        break;
    }
    point.metrics = report.metrics;
    if (!report.health.passed) {
      point.ok = false;
      point.error = "tolerance gates violated";
    }
  } catch (const std::exception& e) {
    point.ok = false;
    point.error = e.what();
  }
  return point;
}

}  // namespace

std::vector<double> default_eta_grid() {
  std::vector<double> g;
  for (int i = 0; i <= 20; ++i) g.push_back(static_cast<double>(i) / 10.0);
  return g;
}

std::vector<double> default_detuning_grid() {
  std::vector<double> g;
  for (int i = 0; i < 41; ++i) g.push_back(-0.02 + 0.04 * static_cast<double>(i) / 40.0);
  return g;
}

std::vector<double> default_distance_grid() {
  std::vector<double> g;
  for (int i = 0; i < 41; ++i) g.push_back(0.20 + 0.10 * static_cast<double>(i) / 40.0);
  return g;
}

std::vector<double> default_bandwidth_grid() {
  std::vector<double> g;
  const double lo = std::log(0.05), hi = std::log(0.99);
  for (int i = 0; i < 20; ++i) g.push_back(std::exp(lo + (hi - lo) * static_cast<double>(i) / 19.0));
  return g;
}

SweepResult sweep_eta(const MoleculeConfig& base, const std::vector<double>& eta_grid,
                      int workers) {
  if (eta_grid.empty()) throw_config("sweep_eta: empty grid");
  for (double eta : eta_grid)
    if (!(eta >= 0.0 && eta <= 2.0)) throw_config("sweep_eta: grid value outside [0, 2]");

  SweepResult result;
  result.kind = SweepKind::Eta;
  result.axis_names = {"eta"};
  result.points.resize(eta_grid.size());
  parallel_for(eta_grid.size(), workers, [&](std::size_t i) {
    MoleculeConfig cfg = base;
    cfg.eta = eta_grid[i];
    cfg.include_ancilla = false;
    ProtocolOptions opt = default_options(cfg);
    opt.compute_envelope = false;
    result.points[i] = run_point(cfg, Protocol::Emission, opt, {eta_grid[i]});
  });
  return result;
}

SweepResult sweep_detuning_distance(const MoleculeConfig& base,
                                    const std::vector<double>& detuning_grid,
                                    const std::vector<double>& distance_grid, int workers) {
  if (detuning_grid.empty() || distance_grid.empty())
    throw_config("sweep_detuning_distance: empty grid");
  for (double d : distance_grid)
    if (!(d > 0.0 && d <= 1.0)) throw_config("sweep_detuning_distance: d/lambda outside (0, 1]");

  SweepResult result;
  result.kind = SweepKind::DetuningDistance;
  result.axis_names = {"delta_omega_over_gamma_ph", "d_over_lambda"};
  const std::size_t nd = distance_grid.size();
  result.points.resize(detuning_grid.size() * nd);
  parallel_for(result.points.size(), workers, [&](std::size_t idx) {
    const double dw = detuning_grid[idx / nd];
    const double dl = distance_grid[idx % nd];
    MoleculeConfig cfg = base;
    cfg.include_ancilla = false;
    // symmetric split of the frequency difference (a convention; only the
    // difference enters the directionality)
    cfg.delta1 = -0.5 * dw * cfg.gamma_ph;
    cfg.delta2 = +0.5 * dw * cfg.gamma_ph;
    cfg.omega_p_d_over_pi = 2.0 * dl;
    ProtocolOptions opt = default_options(cfg);
    // Wider window than the protocol default: the detuning landmark depends
    // on the dark-mode dephasing accumulated since state preparation.
    opt.t_end = 25.0 / cfg.gamma_ph;
    opt.t_start = -opt.t_end;
    opt.compute_envelope = false;
    result.points[idx] = run_point(cfg, Protocol::Emission, opt, {dw, dl});
  });
  return result;
}

SweepResult sweep_bandwidth(const MoleculeConfig& base, const std::vector<double>& ratio_grid,
                            int workers) {
  if (ratio_grid.empty()) throw_config("sweep_bandwidth: empty grid");
  for (double r : ratio_grid)
    if (!(r > 0.0 && r < 1.0)) throw_config("sweep_bandwidth: gamma_ph/gamma outside (0, 1)");

  SweepResult result;
  result.kind = SweepKind::Bandwidth;
  result.axis_names = {"gamma_ph_over_gamma"};
  result.points.resize(ratio_grid.size());
  parallel_for(ratio_grid.size(), workers, [&](std::size_t i) {
    MoleculeConfig cfg = base;
    cfg.design = Design::QubitResonator;
    cfg.include_ancilla = true;
    cfg.gamma = cfg.gamma_ph / ratio_grid[i];
    ProtocolOptions opt = default_options(cfg);
    result.points[i] = run_point(cfg, Protocol::Transmission, opt, {ratio_grid[i]});
  });
  return result;
}

SweepResult run_sweep(const SweepSpec& spec) {
  switch (spec.kind) {
    case SweepKind::Eta:
      return sweep_eta(spec.base, spec.axes.at(0).values, spec.workers);
    case SweepKind::DetuningDistance:
      return sweep_detuning_distance(spec.base, spec.axes.at(0).values, spec.axes.at(1).values,
                                     spec.workers);
    case SweepKind::Bandwidth:
      return sweep_bandwidth(spec.base, spec.axes.at(0).values, spec.workers);
  }
  throw_config("run_sweep: unknown sweep kind");
}

}  // namespace chiralwg
