#pragma once

#include "chiralwg/protocols.hpp"

namespace chiralwg {

enum class SweepKind { Eta, DetuningDistance, Bandwidth };

struct SweepAxis {
  std::string name;
  std::vector<double> values;
};

struct SweepSpec {
  SweepKind kind = SweepKind::Eta;
  std::vector<SweepAxis> axes;
  MoleculeConfig base;
  int workers = 1;
};

struct SweepPoint {
  std::vector<double> coords;
  MetricSet metrics;
  bool ok = true;
  std::string error;  // failed points carry their error, never silently dropped
};

struct SweepResult {
  SweepKind kind;
  std::vector<std::string> axis_names;
  std::vector<SweepPoint> points;  // row-major over the axis grids
};

std::vector<double> default_eta_grid();                 // {0, 0.1, ..., 2.0}
std::vector<double> default_detuning_grid();            // 41 pts in [-0.02, 0.02] (units gamma_ph)
std::vector<double> default_distance_grid();            // 41 pts in [0.20, 0.30] (d / lambda)
std::vector<double> default_bandwidth_grid();           // 20 log-spaced in [0.05, 0.99]

SweepResult sweep_eta(const MoleculeConfig& base, const std::vector<double>& eta_grid,
                      int workers = 1);

/// 2D map over (omega2-omega1)/gamma_ph and d/lambda; detuning split
/// symmetrically (delta1 = -delta2 = -dw/2). Window +-25/gamma_ph.
SweepResult sweep_detuning_distance(const MoleculeConfig& base,
                                    const std::vector<double>& detuning_grid,
                                    const std::vector<double>& distance_grid, int workers = 1);

SweepResult sweep_bandwidth(const MoleculeConfig& base, const std::vector<double>& ratio_grid,
                            int workers = 1);

SweepResult run_sweep(const SweepSpec& spec);

}  // namespace chiralwg
