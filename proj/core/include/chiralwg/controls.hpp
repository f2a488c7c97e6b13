#pragma once

#include <string>
#include <vector>

namespace chiralwg {

// Closed-form control waveforms.
//
// sech_envelope: phi(t) = (1/2) sqrt(gamma_ph) sech(gamma_ph t / 2),
//   the L2-normalized target photon envelope.
// gamma_modulation: external-coupling modulation emitting |phi(t)|^2 from a
//   directly coupled element, gamma(t) = |phi|^2 / int_t^inf |phi|^2
//                                      = (gamma_ph/2)(1 + tanh(gamma_ph t/2)).
// g_modulation: qubit-resonator coupling producing the same envelope through
//   a resonator with fixed external rate gamma; requires gamma_ph < gamma.
double sech_envelope(double t, double gamma_ph);
double gamma_modulation(double t, double gamma_ph);
double g_modulation(double t, double gamma_ph, double gamma);

enum class WaveformKind { Zero, Constant, SechEnvelope, GammaModulation, GModulation, Tabulated };

struct Waveform {
  WaveformKind kind = WaveformKind::Zero;
  double gamma_ph = 0.0;
  double gamma = 0.0;    // GModulation only
  double value = 0.0;    // Constant only
  double scale = 1.0;    // multiplies the kernel
  bool reversed = false; // evaluate the kernel at -t
  double t_start = 0.0;
  double t_end = 0.0;
  std::vector<double> tab_t, tab_v;  // Tabulated: uniform-grid samples

  double operator()(double t) const;
  bool is_zero() const { return kind == WaveformKind::Zero || scale == 0.0; }
};

Waveform make_zero();
Waveform make_constant(double value, double t_start, double t_end);
Waveform make_sech_envelope(double gamma_ph, double t_start, double t_end);
Waveform make_gamma_modulation(double gamma_ph, double t_start, double t_end);
Waveform make_g_modulation(double gamma_ph, double gamma, double t_start, double t_end);
Waveform make_tabulated(std::vector<double> t, std::vector<double> v);
Waveform load_tabulated_csv(const std::string& path);

/// evaluate(time_reverse(w), t) == evaluate(w, -t) exactly; domain mirrored.
Waveform time_reverse(const Waveform& w);
Waveform scaled(Waveform w, double factor);

/// The full set of drives for one protocol run. Unused entries are Zero.
struct ControlSet {
  Waveform gamma1, gamma2;  // TwoQubit external coupling rates
  Waveform g1, g2;          // QubitResonator qubit-resonator couplings
  Waveform gamma_a;         // ancilla source rate
  Waveform g_c;             // cancellation strength before eta scaling
};

}  // namespace chiralwg
