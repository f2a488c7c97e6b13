#pragma once

#include "chiralwg/observables.hpp"

namespace chiralwg {

enum class Protocol { Emission, Absorption, Transmission };

struct HealthSummary {
  double max_trace_dev = 0.0;
  double min_eig = 0.0;
  double max_herm_residual = 0.0;
  double max_top_fock_leakage = 0.0;
  bool passed = true;
};

struct ProtocolReport {
  Protocol protocol;
  MoleculeConfig config;
  FluxSeries flux;
  MetricSet metrics;
  Operator final_molecule_state;  // reduced: qubit pair, or resonator pair in transmission
  double oracle_deviation = std::nan("");
  HealthSummary health;
  std::vector<double> input_flux_reference;  // analytic |phi(t)|^2 (absorption/transmission)
  double left_mode_occupation_max = std::nan("");  // transmission only
  std::vector<double> record_trace_dev, record_min_eig;  // monitors on the record grid
};

struct ProtocolOptions {
  double t_start, t_end;
  IntegratorConfig icfg;
  bool compute_envelope = true;  // emission: run the amplitude probe for pulse fidelity
  std::optional<ControlSet> controls;  // replaces the protocol's control factory
};

ProtocolOptions default_options(const MoleculeConfig& config);

ProtocolReport run_emission(const MoleculeConfig& config, Direction direction);
ProtocolReport run_emission(const MoleculeConfig& config, Direction direction,
                            const ProtocolOptions& opt);
ProtocolReport run_absorption(const MoleculeConfig& config);
ProtocolReport run_absorption(const MoleculeConfig& config, const ProtocolOptions& opt);
ProtocolReport run_transmission(const MoleculeConfig& config);
ProtocolReport run_transmission(const MoleculeConfig& config, const ProtocolOptions& opt);

/// Closed single-excitation amplitude ODE integrated independently of the
/// density-matrix path; emission without ancilla only.
FluxSeries single_excitation_oracle(const MoleculeConfig& config, const ControlSet& controls);
FluxSeries single_excitation_oracle(const MoleculeConfig& config, const ControlSet& controls,
                                    const std::vector<double>& times);

/// sup-norm deviation between two flux series on a common grid.
double flux_deviation(const FluxSeries& a, const FluxSeries& b);

}  // namespace chiralwg
