#include "chiralwg/controls.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "chiralwg/errors.hpp"

namespace chiralwg {

double sech_envelope(double t, double gamma_ph) {
  if (gamma_ph <= 0.0) throw_config("sech_envelope: gamma_ph must be positive");
  return 0.5 * std::sqrt(gamma_ph) / std::cosh(0.5 * gamma_ph * t);
}

double gamma_modulation(double t, double gamma_ph) {
  if (gamma_ph <= 0.0) throw_config("gamma_modulation: gamma_ph must be positive");
  // Bounded form of |phi|^2 / int_t^inf |phi|^2; the sech^2/(1-tanh) quotient
  // cancels catastrophically at large positive t.
  return 0.5 * gamma_ph * (1.0 + std::tanh(0.5 * gamma_ph * t));
}

double g_modulation(double t, double gamma_ph, double gamma) {
  if (gamma_ph <= 0.0) throw_config("g_modulation: gamma_ph must be positive");
  if (gamma_ph >= gamma)
    throw_config("BandwidthTooLarge: g_modulation requires gamma_ph < gamma");
  const double r = gamma / gamma_ph;
  const double u = 0.5 * gamma_ph * t;
  if (u <= 0.0) {
    const double x = std::exp(2.0 * u);  // <= 1
    const double num = (1.0 + r) + x * (r - 1.0);
    const double den = std::sqrt(r + x * (r - 1.0));
    return 0.25 * gamma_ph / std::cosh(u) * num / den;
  }
  // e^{2u} factored out to stay finite for large positive t;
  // g(+inf) = (gamma_ph/2) sqrt(r - 1).
  const double y = std::exp(-2.0 * u);  // < 1
  const double num = (r - 1.0) + (1.0 + r) * y;
  const double den = (1.0 + y) * std::sqrt((r - 1.0) + r * y);
  return 0.5 * gamma_ph * num / den;
}

double Waveform::operator()(double t) const {
  const double tt = reversed ? -t : t;
  double v = 0.0;
  switch (kind) {
    case WaveformKind::Zero:
      return 0.0;
    case WaveformKind::Constant:
      v = value;
      break;
    case WaveformKind::SechEnvelope:
      v = sech_envelope(tt, gamma_ph);
      break;
    case WaveformKind::GammaModulation:
      v = gamma_modulation(tt, gamma_ph);
      break;
    case WaveformKind::GModulation:
      v = g_modulation(tt, gamma_ph, gamma);
      break;
    case WaveformKind::Tabulated: {
      if (tab_t.empty()) return 0.0;
      if (tt <= tab_t.front()) {
        v = tab_v.front();  // out-of-domain returns the boundary value
      } else if (tt >= tab_t.back()) {
        v = tab_v.back();
      } else {
        auto it = std::upper_bound(tab_t.begin(), tab_t.end(), tt);
        const std::size_t i = static_cast<std::size_t>(it - tab_t.begin());
        const double w = (tt - tab_t[i - 1]) / (tab_t[i] - tab_t[i - 1]);
        v = (1.0 - w) * tab_v[i - 1] + w * tab_v[i];
      }
      break;
    }
  }
  return scale * v;
}

Waveform make_zero() { return Waveform{}; }

Waveform make_constant(double value, double t_start, double t_end) {
  Waveform w;
  w.kind = WaveformKind::Constant;
  w.value = value;
  w.t_start = t_start;
  w.t_end = t_end;
  return w;
}

Waveform make_sech_envelope(double gamma_ph, double t_start, double t_end) {
  if (gamma_ph <= 0.0) throw_config("sech_envelope: gamma_ph must be positive");
  Waveform w;
  w.kind = WaveformKind::SechEnvelope;
  w.gamma_ph = gamma_ph;
  w.t_start = t_start;
  w.t_end = t_end;
  return w;
}

Waveform make_gamma_modulation(double gamma_ph, double t_start, double t_end) {
  if (gamma_ph <= 0.0) throw_config("gamma_modulation: gamma_ph must be positive");
  Waveform w;
  w.kind = WaveformKind::GammaModulation;
  w.gamma_ph = gamma_ph;
  w.t_start = t_start;
  w.t_end = t_end;
  return w;
}

Waveform make_g_modulation(double gamma_ph, double gamma, double t_start, double t_end) {
  if (gamma_ph <= 0.0) throw_config("g_modulation: gamma_ph must be positive");
  if (gamma_ph >= gamma)
    throw_config("BandwidthTooLarge: g_modulation requires gamma_ph < gamma");
  Waveform w;
  w.kind = WaveformKind::GModulation;
  w.gamma_ph = gamma_ph;
  w.gamma = gamma;
  w.t_start = t_start;
  w.t_end = t_end;
  return w;
}

Waveform make_tabulated(std::vector<double> t, std::vector<double> v) {
  if (t.size() != v.size() || t.size() < 2)
    throw_config("tabulated waveform needs >= 2 matching samples");
  for (std::size_t i = 1; i < t.size(); ++i)
    if (t[i] <= t[i - 1]) throw_config("tabulated waveform times must increase strictly");
  Waveform w;
  w.kind = WaveformKind::Tabulated;
  w.t_start = t.front();
  w.t_end = t.back();
  w.tab_t = std::move(t);
  w.tab_v = std::move(v);
  return w;
}

Waveform load_tabulated_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw_io("cannot open waveform CSV '" + path + "'");
  std::vector<double> t, v;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    double a, b;
    if (!(row >> a >> b)) throw_config("bad row in waveform CSV '" + path + "': " + line);
    t.push_back(a);
    v.push_back(b);
  }
  return make_tabulated(std::move(t), std::move(v));
}

Waveform time_reverse(const Waveform& w) {
  Waveform out = w;
  out.reversed = !w.reversed;
  out.t_start = -w.t_end;
  out.t_end = -w.t_start;
  return out;
}

Waveform scaled(Waveform w, double factor) {
  w.scale *= factor;
  return w;
}

}  // namespace chiralwg
