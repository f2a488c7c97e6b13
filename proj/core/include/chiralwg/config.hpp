#pragma once

#include <string>
#include <vector>

#include "chiralwg/sweeps.hpp"

namespace chiralwg {

/// Effective run configuration, all values in absolute simulation units
/// (rates in the file are multiplied by gamma_ph unless suffixed `abs`;
/// times are divided by gamma_ph).
struct RunConfig {
  MoleculeConfig model;
  Direction direction = Direction::Right;
  double t_start = -12.0;
  double t_end = 12.0;
  bool window_set = false;  // explicit [controls] t_start/t_end in the file

  double dt = 0.0;          // 0 = automatic
  int record_stride = 0;    // 0 = automatic
  Method method = Method::RK4Fixed;
  IntegratorTolerances tol;

  SweepKind sweep_kind = SweepKind::Eta;
  std::vector<double> eta_grid, detuning_grid, distance_grid, bandwidth_grid;

  std::string g1_csv, g2_csv, gamma1_csv, gamma2_csv, gamma_a_csv;
  std::string out_dir = "out";
  int workers = 1;
};

/// Parses the INI-style config file. Unknown sections or keys are a hard
/// error naming the offender.
RunConfig parse_config_file(const std::string& path);
RunConfig parse_config_text(const std::string& text, const std::string& origin = "<config>");

/// Applies one `key=value` override (bare key; keys are globally unique).
void apply_override(RunConfig& cfg, const std::string& key_value);

std::string config_to_json(const RunConfig& cfg);          // canonical echo
RunConfig config_from_json(const std::string& json_text);  // inverse of the echo
bool config_equal(const RunConfig& a, const RunConfig& b);

}  // namespace chiralwg
