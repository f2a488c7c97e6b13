#pragma once

#include <utility>
#include <vector>

#include "chiralwg/molecule.hpp"

namespace chiralwg {

enum class Method { RK4Fixed, RK4HalfStepAdaptive };

struct IntegratorTolerances {
  double trace_dev = 1e-9;
  double min_eig = -1e-9;
  double herm = 1e-10;
  double leakage = 1e-6;
};

struct IntegratorConfig {
  double dt = 0.0;  // 0 -> default_dt(config)
  Method method = Method::RK4Fixed;
  int record_stride = 0;  // 0 -> default stride (records every 1/(40 gamma_ph))
  IntegratorTolerances tol;
  bool fail_fast = false;  // throw Error(Numeric) on a violated gate
};

struct TrajectoryMonitors {
  // per recorded sample
  std::vector<double> trace_dev, min_eig, herm_residual, top_fock_leakage;
  // extrema over every step (min_eig over recorded samples only)
  double max_trace_dev = 0.0;
  double min_min_eig = 0.0;
  double max_herm_residual = 0.0;
  double max_top_fock_leakage = 0.0;
  double max_halfstep_defect = 0.0;  // RK4HalfStepAdaptive only
};

struct Trajectory {
  std::vector<double> times;
  std::vector<Operator> states;
  TrajectoryMonitors monitors;
  bool healthy(const IntegratorTolerances& tol) const;
};

/// Textbook dense evaluation of
///   -i[H, rho] + sum_k rate_k (B_k rho A_k^dag - 1/2 {A_k^dag B_k, rho}).
Operator lindblad_rhs(const Operator& rho, const Operator& h,
                      const std::vector<LindbladTerm>& terms);

/// Column-stacking superoperator: liouvillian_matrix * vec(rho) == vec(lindblad_rhs).
/// Guard: dim^2 <= 5184.
Operator liouvillian_matrix(const Operator& h, const std::vector<LindbladTerm>& terms);

double default_dt(const MoleculeConfig& config);
double record_spacing(const MoleculeConfig& config);  // 1/(40 gamma_ph)

Trajectory integrate(const Operator& rho0, const MoleculeConfig& config,
                     const ControlSet& controls, std::pair<double, double> t_span,
                     const IntegratorConfig& icfg);

/// Same integrator on a prebuilt generator (hot path used by the protocols).
Trajectory integrate_generator(const Operator& rho0, const Generator& gen,
                               std::pair<double, double> t_span, const IntegratorConfig& icfg,
                               double gamma_ph);

}  // namespace chiralwg
