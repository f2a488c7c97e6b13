#pragma once

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "chiralwg/dynamics.hpp"

namespace chiralwg {

/// Input-output quantities on the recorded time grid.
struct FluxSeries {
  std::vector<double> times;
  std::vector<double> n_r, n_l;       // photon fluxes (rate units)
  std::vector<Complex> beta_r, beta_l; // field amplitudes (sqrt(rate) units)
  std::map<std::string, std::vector<double>> populations;  // per subsystem label
};

struct MetricSet {
  double p_r = std::nan("");
  double p_l = std::nan("");
  double directionality = std::nan("");
  double pulse_fidelity = std::nan("");
  double state_fidelity = std::nan("");
  double transmittance = std::nan("");
  double reflectance = std::nan("");
  double group_delay_est = std::nan("");
};

enum class Direction { Right, Left };

FluxSeries flux_and_amplitude(const Trajectory& traj, const MoleculeConfig& config,
                              const ControlSet& controls);

double trapezoid(const std::vector<double>& t, const std::vector<double>& v);

/// (P_R, P_L) by trapezoidal integration of the flux series.
std::pair<double, double> emission_probabilities(const FluxSeries& fs);

/// P_intended / (P_R + P_L); throws Error(Numeric) when both vanish.
double directionality(double p_r, double p_l, Direction intended);

/// F = |int phi*(t) beta_hat(t + shift) dt|^2 with beta_hat the L2-normalized
/// measured amplitude (linear interpolation for the shift).
double pulse_fidelity(const std::vector<double>& times, const std::vector<Complex>& measured,
                      const std::vector<double>& target, double shift);

double state_fidelity(const Operator& rho, const Eigen::VectorXcd& target_pure);

struct TransmissionPoint {
  Complex s;     // all-pass coefficient, |s| = 1
  double theta;  // continuous phase, theta(0) = 0, monotone, winding 2 pi
};
/// S(Delta) = (gamma/2 + i Delta)/(gamma/2 - i Delta), theta = 2 atan(2 Delta / gamma).
TransmissionPoint transmission_spectrum(double omega_offset, double gamma);

/// Delay maximizing the cross-correlation of two unimodal flux series
/// (parabolic sub-sample refinement).
double group_delay_estimate(const std::vector<double>& times,
                            const std::vector<double>& input_flux,
                            const std::vector<double>& output_flux);

}  // namespace chiralwg
