#include "chiralwg/protocols.hpp"

#include <cmath>

#include "chiralwg/errors.hpp"
#include "sparse_util.hpp"

namespace chiralwg {

namespace {

constexpr Complex kI{0.0, 1.0};

HealthSummary summarize(const Trajectory& traj, const IntegratorTolerances& tol) {
  HealthSummary h;
  h.max_trace_dev = traj.monitors.max_trace_dev;
  h.min_eig = traj.monitors.min_min_eig;
  h.max_herm_residual = traj.monitors.max_herm_residual;
  h.max_top_fock_leakage = traj.monitors.max_top_fock_leakage;
  h.passed = traj.healthy(tol);
  return h;
}

void merge_health(HealthSummary& a, const HealthSummary& b) {
  a.max_trace_dev = std::max(a.max_trace_dev, b.max_trace_dev);
  a.min_eig = std::min(a.min_eig, b.min_eig);
  a.max_herm_residual = std::max(a.max_herm_residual, b.max_herm_residual);
  a.max_top_fock_leakage = std::max(a.max_top_fock_leakage, b.max_top_fock_leakage);
  a.passed = a.passed && b.passed;
}

// Target entangled state on the reduced two-qubit space, basis |gg>,|ge>,|eg>,|ee>.
Eigen::VectorXcd psi_pm(Direction dir) {
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(4);
  psi(2) = 1.0 / std::sqrt(2.0);                                    // |eg>
  psi(1) = (dir == Direction::Right ? kI : -kI) / std::sqrt(2.0);   // |ge>
  return psi;
}

std::vector<double> sech_amplitude_series(const std::vector<double>& times, double gamma_ph) {
  std::vector<double> v(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) v[i] = sech_envelope(times[i], gamma_ph);
  return v;
}

std::vector<double> sech_flux_series(const std::vector<double>& times, double gamma_ph) {
  std::vector<double> v(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double a = sech_envelope(times[i], gamma_ph);
    v[i] = a * a;
  }
  return v;
}

FluxSeries oracle_impl(const MoleculeConfig& config, const ControlSet& controls,
                       const std::vector<double>& times, Direction dir);

}  // namespace

ProtocolOptions default_options(const MoleculeConfig& config) {
  ProtocolOptions opt;
  opt.t_end = 12.0 / config.gamma_ph;
  opt.t_start = -opt.t_end;
  opt.icfg.dt = default_dt(config);
  opt.icfg.record_stride = 0;  // fixed spacing 1/(40 gamma_ph)
  return opt;
}

ProtocolReport run_emission(const MoleculeConfig& config, Direction direction) {
  return run_emission(config, direction, default_options(config));
}

ProtocolReport run_emission(const MoleculeConfig& config, Direction direction,
                            const ProtocolOptions& opt) {
  MoleculeConfig cfg = config;
  cfg.include_ancilla = false;
  cfg.include_idle_qubits = true;
  cfg.validate();

  const ControlSet controls =
      opt.controls ? *opt.controls : emission_controls(cfg, opt.t_start, opt.t_end);
  const Generator gen = build_generator(cfg, controls);

  ProtocolReport report;
  report.protocol = Protocol::Emission;
  report.config = cfg;

  const Operator rho0 = prepare_state(
      direction == Direction::Right ? StateKind::PsiPlus : StateKind::PsiMinus, gen.layout);
  const Trajectory traj =
      integrate_generator(rho0, gen, {opt.t_start, opt.t_end}, opt.icfg, cfg.gamma_ph);
  report.flux = flux_and_amplitude(traj, cfg, controls);
  report.health = summarize(traj, opt.icfg.tol);
  report.record_trace_dev = traj.monitors.trace_dev;
  report.record_min_eig = traj.monitors.min_eig;

  auto [p_r, p_l] = emission_probabilities(report.flux);
  report.metrics.p_r = p_r;
  report.metrics.p_l = p_l;
  report.metrics.directionality = directionality(p_r, p_l, direction);

  const FluxSeries oracle = oracle_impl(cfg, controls, traj.times, direction);
  report.oracle_deviation = flux_deviation(report.flux, oracle);

  if (opt.compute_envelope) {
    // Amplitude probe: the pure entangled state carries no 0-1 excitation
    // coherence, so <L_j> and hence beta vanish identically; the equal
    // superposition with |gg> makes the emitted mode function measurable.
    const Operator rho0e =
        prepare_state(direction == Direction::Right ? StateKind::GgPsiPlusSuperposition
                                                    : StateKind::GgPsiMinusSuperposition,
                      gen.layout);
    const Trajectory probe =
        integrate_generator(rho0e, gen, {opt.t_start, opt.t_end}, opt.icfg, cfg.gamma_ph);
    const FluxSeries probe_flux = flux_and_amplitude(probe, cfg, controls);
    const auto& beta = direction == Direction::Right ? probe_flux.beta_r : probe_flux.beta_l;
    report.metrics.pulse_fidelity = pulse_fidelity(
        probe_flux.times, beta, sech_amplitude_series(probe_flux.times, cfg.gamma_ph), 0.0);
    merge_health(report.health, summarize(probe, opt.icfg.tol));
  }

  report.final_molecule_state = partial_trace(traj.states.back(), gen.layout, {"q1", "q2"});
  return report;
}

ProtocolReport run_absorption(const MoleculeConfig& config) {
  return run_absorption(config, default_options(config));
}

ProtocolReport run_absorption(const MoleculeConfig& config, const ProtocolOptions& opt) {
  MoleculeConfig cfg = config;
  if (!cfg.include_ancilla)
    throw_config("run_absorption requires include_ancilla = true (single-photon source)");
  cfg.include_idle_qubits = true;
  cfg.validate();

  const ControlSet controls =
      opt.controls ? *opt.controls : absorption_controls(cfg, opt.t_start, opt.t_end);
  const Generator gen = build_generator(cfg, controls);

  ProtocolReport report;
  report.protocol = Protocol::Absorption;
  report.config = cfg;

  const Operator rho0 = prepare_state(StateKind::AncillaExcited, gen.layout);
  const Trajectory traj =
      integrate_generator(rho0, gen, {opt.t_start, opt.t_end}, opt.icfg, cfg.gamma_ph);
  report.flux = flux_and_amplitude(traj, cfg, controls);
  report.health = summarize(traj, opt.icfg.tol);
  report.record_trace_dev = traj.monitors.trace_dev;
  report.record_min_eig = traj.monitors.min_eig;
  report.input_flux_reference = sech_flux_series(traj.times, cfg.gamma_ph);

  auto [p_r, p_l] = emission_probabilities(report.flux);
  report.metrics.p_r = p_r;  // scattered (unabsorbed) fluxes
  report.metrics.p_l = p_l;

  report.final_molecule_state = partial_trace(traj.states.back(), gen.layout, {"q1", "q2"});
  report.metrics.state_fidelity =
      state_fidelity(report.final_molecule_state, psi_pm(Direction::Right));
  return report;
}

ProtocolReport run_transmission(const MoleculeConfig& config) {
  return run_transmission(config, default_options(config));
}

ProtocolReport run_transmission(const MoleculeConfig& config, const ProtocolOptions& opt) {
  MoleculeConfig cfg = config;
  if (cfg.design != Design::QubitResonator)
    throw_config("run_transmission requires the qubit-resonator design");
  if (!cfg.include_ancilla)
    throw_config("run_transmission requires include_ancilla = true (single-photon source)");
  cfg.validate();

  const ControlSet controls =
      opt.controls ? *opt.controls : transmission_controls(cfg, opt.t_start, opt.t_end);
  const Generator gen = build_generator(cfg, controls);

  ProtocolReport report;
  report.protocol = Protocol::Transmission;
  report.config = cfg;

  const Operator rho0 = prepare_state(StateKind::AncillaExcited, gen.layout);
  const Trajectory traj =
      integrate_generator(rho0, gen, {opt.t_start, opt.t_end}, opt.icfg, cfg.gamma_ph);
  report.flux = flux_and_amplitude(traj, cfg, controls);
  report.health = summarize(traj, opt.icfg.tol);
  report.record_trace_dev = traj.monitors.trace_dev;
  report.record_min_eig = traj.monitors.min_eig;
  report.input_flux_reference = sech_flux_series(traj.times, cfg.gamma_ph);

  auto [p_r, p_l] = emission_probabilities(report.flux);
  report.metrics.p_r = p_r;
  report.metrics.p_l = p_l;
  report.metrics.transmittance = p_r;
  report.metrics.reflectance = p_l;
  report.metrics.group_delay_est =
      group_delay_estimate(report.flux.times, report.input_flux_reference, report.flux.n_r);

  {
    // Left-channel normal mode stays dark throughout ideal transmission.
    const LoweringOps ops = lowering_ops(cfg);
    const double phi = cfg.phase();
    const Complex c1 = std::exp(kI * (-0.5 * phi)), c2 = std::exp(kI * (0.5 * phi));
    const Operator l_left = (c1 * ops.l1 + c2 * ops.l2) / std::sqrt(2.0);
    const detail::SparseOp occ = detail::to_sparse(Operator(l_left.adjoint() * l_left));
    double peak = 0.0;
    for (const auto& rho : traj.states)
      peak = std::max(peak, detail::sparse_expectation(rho, occ).real());
    report.left_mode_occupation_max = peak;
  }

  {
    const Operator rho0s = prepare_state(StateKind::AncillaSuperposition, gen.layout);
    const Trajectory probe =
        integrate_generator(rho0s, gen, {opt.t_start, opt.t_end}, opt.icfg, cfg.gamma_ph);
    const FluxSeries probe_flux = flux_and_amplitude(probe, cfg, controls);
    report.metrics.pulse_fidelity = pulse_fidelity(
        probe_flux.times, probe_flux.beta_r,
        sech_amplitude_series(probe_flux.times, cfg.gamma_ph), 4.0 / cfg.gamma);
    merge_health(report.health, summarize(probe, opt.icfg.tol));
  }

  report.final_molecule_state = partial_trace(traj.states.back(), gen.layout, {"r1", "r2"});
  return report;
}

namespace {

// Closed single-excitation amplitude equations, integrated with RK4 on the
// complex amplitude vector; independent of the density-matrix path.
FluxSeries oracle_impl(const MoleculeConfig& config, const ControlSet& controls,
                       const std::vector<double>& times, Direction dir) {
  if (config.include_ancilla)
    throw_config("single_excitation_oracle: ancilla is outside the single-excitation model");
  config.validate();
  if (times.size() < 2) throw_config("single_excitation_oracle: empty time grid");

  const bool two_qubit = config.design == Design::TwoQubit;
  const double phi = config.phase();
  const WaveguideCoupling unit = waveguide_coupling(phi, phi, 1.0, 1.0);
  const double j_unit = unit.j.real();
  const double g12_unit = std::abs(unit.gamma12.real()) > 1e-15 ? unit.gamma12.real() : 0.0;
  const double eta = config.eta;

  auto gamma1 = [&](double t) {
    return two_qubit ? std::max(0.0, controls.gamma1(t)) : config.gamma;
  };
  auto gamma2 = [&](double t) {
    return two_qubit ? std::max(0.0, controls.gamma2(t)) : config.gamma;
  };

  using Vec = Eigen::Vector4cd;  // [q1, c1, q2, c2]; q's unused for TwoQubit
  auto rhs = [&](double t, const Vec& y) {
    const double g1 = gamma1(t), g2 = gamma2(t);
    const double root = g1 == g2 ? g1 : std::sqrt(g1 * g2);
    const Complex coupling = -kI * (j_unit * root + eta * controls.g_c(t)) - 0.5 * g12_unit * root;
    Vec dy = Vec::Zero();
    if (two_qubit) {
      dy(1) = (-kI * config.delta1 - 0.5 * g1) * y(1) + coupling * y(3);
      dy(3) = (-kI * config.delta2 - 0.5 * g2) * y(3) + coupling * y(1);
    } else {
      const double gq1 = controls.g1(t), gq2 = controls.g2(t);
      dy(0) = -kI * config.delta1 * y(0) - kI * gq1 * y(1);
      dy(1) = (-kI * config.delta1 - 0.5 * g1) * y(1) - kI * gq1 * y(0) + coupling * y(3);
      dy(2) = -kI * config.delta2 * y(2) - kI * gq2 * y(3);
      dy(3) = (-kI * config.delta2 - 0.5 * g2) * y(3) - kI * gq2 * y(2) + coupling * y(1);
    }
    return dy;
  };

  const Complex rel = dir == Direction::Right ? kI : -kI;
  Vec y = Vec::Zero();
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  if (two_qubit) {
    y(1) = inv_sqrt2;
    y(3) = rel * inv_sqrt2;
  } else {
    y(0) = inv_sqrt2;
    y(2) = rel * inv_sqrt2;
  }

  FluxSeries fs;
  fs.times = times;
  const std::size_t n = times.size();
  fs.n_r.resize(n);
  fs.n_l.resize(n);
  fs.beta_r.assign(n, Complex(0.0, 0.0));
  fs.beta_l.assign(n, Complex(0.0, 0.0));
  if (two_qubit) {
    fs.populations["q1"].resize(n);
    fs.populations["q2"].resize(n);
  } else {
    for (const char* k : {"q1", "r1", "q2", "r2"}) fs.populations[k].resize(n);
  }

  const double dt_target = default_dt(config) / 5.0;
  auto sample = [&](std::size_t i) {
    const double t = times[i];
    const double g1 = gamma1(t), g2 = gamma2(t);
    const Complex er = std::exp(kI * 0.5 * phi);
    const Complex right = std::sqrt(0.5 * g1) * y(1) * er + std::sqrt(0.5 * g2) * y(3) / er;
    const Complex left = std::sqrt(0.5 * g1) * y(1) / er + std::sqrt(0.5 * g2) * y(3) * er;
    fs.n_r[i] = std::norm(right);
    fs.n_l[i] = std::norm(left);
    if (two_qubit) {
      fs.populations["q1"][i] = std::norm(y(1));
      fs.populations["q2"][i] = std::norm(y(3));
    } else {
      fs.populations["q1"][i] = std::norm(y(0));
      fs.populations["r1"][i] = std::norm(y(1));
      fs.populations["q2"][i] = std::norm(y(2));
      fs.populations["r2"][i] = std::norm(y(3));
    }
  };

  sample(0);
  for (std::size_t i = 1; i < n; ++i) {
    const double span = times[i] - times[i - 1];
    const long sub = std::max<long>(1, std::lround(span / dt_target));
    const double h = span / static_cast<double>(sub);
    double t = times[i - 1];
    for (long s = 0; s < sub; ++s) {
      const Vec k1 = rhs(t, y);
      const Vec k2 = rhs(t + 0.5 * h, y + 0.5 * h * k1);
      const Vec k3 = rhs(t + 0.5 * h, y + 0.5 * h * k2);
      const Vec k4 = rhs(t + h, y + h * k3);
      y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      t += h;
    }
    sample(i);
  }
  return fs;
}

}  // namespace

FluxSeries single_excitation_oracle(const MoleculeConfig& config, const ControlSet& controls) {
  const double w = 12.0 / config.gamma_ph;
  const double spacing = record_spacing(config);
  std::vector<double> times;
  for (double t = -w; t <= w + 0.5 * spacing; t += spacing) times.push_back(t);
  return oracle_impl(config, controls, times, Direction::Right);
}

FluxSeries single_excitation_oracle(const MoleculeConfig& config, const ControlSet& controls,
                                    const std::vector<double>& times) {
  return oracle_impl(config, controls, times, Direction::Right);
}

double flux_deviation(const FluxSeries& a, const FluxSeries& b) {
  if (a.times.size() != b.times.size()) throw_config("flux_deviation: grid mismatch");
  double dev = 0.0;
  for (std::size_t i = 0; i < a.times.size(); ++i) {
    dev = std::max(dev, std::abs(a.n_r[i] - b.n_r[i]));
    dev = std::max(dev, std::abs(a.n_l[i] - b.n_l[i]));
  }
  return dev;
}

}  // namespace chiralwg
