#include "chiralwg/observables.hpp"

#include <algorithm>
#include <cmath>

#include "chiralwg/errors.hpp"
#include "sparse_util.hpp"

namespace chiralwg {

namespace {
constexpr Complex kI{0.0, 1.0};

Complex lerp_complex(const std::vector<double>& t, const std::vector<Complex>& v, double x) {
  if (x < t.front() || x > t.back()) return Complex(0.0, 0.0);
  auto it = std::upper_bound(t.begin(), t.end(), x);
  if (it == t.begin()) return v.front();
  if (it == t.end()) return v.back();
  const std::size_t i = static_cast<std::size_t>(it - t.begin());
  const double w = (x - t[i - 1]) / (t[i] - t[i - 1]);
  return (1.0 - w) * v[i - 1] + w * v[i];
}
}  // namespace

double trapezoid(const std::vector<double>& t, const std::vector<double>& v) {
  double acc = 0.0;
  for (std::size_t i = 1; i < t.size(); ++i)
    acc += 0.5 * (v[i] + v[i - 1]) * (t[i] - t[i - 1]);
  return acc;
}

FluxSeries flux_and_amplitude(const Trajectory& traj, const MoleculeConfig& config,
                              const ControlSet& controls) {
  using detail::sparse_expectation;
  using detail::to_sparse;

  const SpaceLayout layout = build_layout(config);
  if (traj.states.empty() || traj.states.front().rows() != layout.total_dim())
    throw_config("flux_and_amplitude: trajectory does not match the configuration");

  const LoweringOps ops = lowering_ops(config);
  const double phi = config.phase();
  const Complex e_m = std::exp(-kI * phi);  // multiplies <L1^dag L2> in n_R
  const Complex e_r1 = std::exp(kI * 0.5 * phi);   // e^{-i omega_p r_1}
  const Complex e_r2 = std::exp(-kI * 0.5 * phi);  // e^{-i omega_p r_2}

  const detail::SparseOp s_l1 = to_sparse(ops.l1), s_l2 = to_sparse(ops.l2);
  const detail::SparseOp s_n1 = to_sparse(Operator(ops.l1.adjoint() * ops.l1));
  const detail::SparseOp s_n2 = to_sparse(Operator(ops.l2.adjoint() * ops.l2));
  const detail::SparseOp s_x12 = to_sparse(Operator(ops.l1.adjoint() * ops.l2));

  const bool ancilla = config.include_ancilla && ops.sigma_a.has_value();
  detail::SparseOp s_sa, s_na, s_c1, s_c2;
  if (ancilla) {
    s_sa = to_sparse(*ops.sigma_a);
    s_na = to_sparse(Operator(ops.sigma_a->adjoint() * (*ops.sigma_a)));
    s_c1 = to_sparse(Operator(ops.l1.adjoint() * (*ops.sigma_a)));  // <L1^dag sigma_a>
    s_c2 = to_sparse(Operator(ops.l2.adjoint() * (*ops.sigma_a)));
  }

  std::vector<std::pair<std::string, detail::SparseOp>> number_ops;
  for (const auto& sub : layout.subsystems()) {
    Operator local = Operator::Zero(sub.dim, sub.dim);
    for (int n = 1; n < sub.dim; ++n) local(n, n) = static_cast<double>(n);
    number_ops.emplace_back(sub.label, to_sparse(embed(local, layout, sub.label)));
  }

  auto rate1 = [&](double t) {
    return config.design == Design::TwoQubit ? std::max(0.0, controls.gamma1(t)) : config.gamma;
  };
  auto rate2 = [&](double t) {
    return config.design == Design::TwoQubit ? std::max(0.0, controls.gamma2(t)) : config.gamma;
  };

  FluxSeries fs;
  fs.times = traj.times;
  const std::size_t n = traj.times.size();
  fs.n_r.resize(n);
  fs.n_l.resize(n);
  fs.beta_r.resize(n);
  fs.beta_l.resize(n);
  for (const auto& [label, op] : number_ops) fs.populations[label].resize(n);

  for (std::size_t i = 0; i < n; ++i) {
    const Operator& rho = traj.states[i];
    const double t = traj.times[i];
    const double g1 = rate1(t), g2 = rate2(t);
    const double g12 = g1 == g2 ? g1 : std::sqrt(g1 * g2);

    const double e11 = sparse_expectation(rho, s_n1).real();
    const double e22 = sparse_expectation(rho, s_n2).real();
    const Complex x12 = sparse_expectation(rho, s_x12);
    const Complex a1 = sparse_expectation(rho, s_l1);
    const Complex a2 = sparse_expectation(rho, s_l2);

    double n_r = 0.5 * (g1 * e11 + g2 * e22 + 2.0 * g12 * (e_m * x12).real());
    double n_l = 0.5 * (g1 * e11 + g2 * e22 + 2.0 * g12 * (std::conj(e_m) * x12).real());
    Complex b_r = -kI * (std::sqrt(0.5 * g1) * a1 * e_r1 + std::sqrt(0.5 * g2) * a2 * e_r2);
    Complex b_l = -kI * (std::sqrt(0.5 * g1) * a1 * std::conj(e_r1) +
                         std::sqrt(0.5 * g2) * a2 * std::conj(e_r2));

    if (ancilla) {
      const double ga = std::max(0.0, controls.gamma_a(t));
      const double na = sparse_expectation(rho, s_na).real();
      const Complex aa = sparse_expectation(rho, s_sa);
      const Complex c1 = sparse_expectation(rho, s_c1);
      const Complex c2 = sparse_expectation(rho, s_c2);
      // e^{+i omega_p r_j} multiplies <L_j^dag sigma_a>
      n_r += ga * na + std::sqrt(0.5 * g1 * ga) * 2.0 * (c1 * std::conj(e_r1)).real() +
             std::sqrt(0.5 * g2 * ga) * 2.0 * (c2 * std::conj(e_r2)).real();
      b_r += -kI * std::sqrt(ga) * aa;
    }

    fs.n_r[i] = n_r;
    fs.n_l[i] = n_l;
    fs.beta_r[i] = b_r;
    fs.beta_l[i] = b_l;
    for (const auto& [label, op] : number_ops)
      fs.populations[label][i] = sparse_expectation(rho, op).real();
  }
  return fs;
}

std::pair<double, double> emission_probabilities(const FluxSeries& fs) {
  if (fs.times.size() < 2) throw_config("emission_probabilities: empty series");
  return {trapezoid(fs.times, fs.n_r), trapezoid(fs.times, fs.n_l)};
}

double directionality(double p_r, double p_l, Direction intended) {
  const double total = p_r + p_l;
  if (total <= 1e-12) throw_numeric("NoEmission: total emitted probability vanishes");
  return (intended == Direction::Right ? p_r : p_l) / total;
}

double pulse_fidelity(const std::vector<double>& times, const std::vector<Complex>& measured,
                      const std::vector<double>& target, double shift) {
  if (times.size() < 2 || measured.size() != times.size() || target.size() != times.size())
    throw_config("pulse_fidelity: inconsistent series");
  std::vector<double> abs2(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) abs2[i] = std::norm(measured[i]);
  const double norm2 = trapezoid(times, abs2);
  if (norm2 <= 0.0) throw_config("pulse_fidelity: zero-norm measured series");

  std::vector<double> re(times.size()), im(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    const Complex m = lerp_complex(times, measured, times[i] + shift);
    const Complex term = target[i] * m;  // real target
    re[i] = term.real();
    im[i] = term.imag();
  }
  const Complex overlap(trapezoid(times, re), trapezoid(times, im));
  return std::norm(overlap) / norm2;
}

double state_fidelity(const Operator& rho, const Eigen::VectorXcd& target_pure) {
  if (rho.rows() != target_pure.size()) throw_config("state_fidelity: dimension mismatch");
  const Complex v = target_pure.dot(rho * target_pure);
  return v.real();
}

TransmissionPoint transmission_spectrum(double omega_offset, double gamma) {
  if (gamma <= 0.0) throw_config("transmission_spectrum: gamma must be positive");
  TransmissionPoint p;
  p.s = Complex(0.5 * gamma, omega_offset) / Complex(0.5 * gamma, -omega_offset);
  // branch unwrapped by continuity from resonance; monotone, winds by 2 pi
  p.theta = 2.0 * std::atan(2.0 * omega_offset / gamma);
  return p;
}

double group_delay_estimate(const std::vector<double>& times,
                            const std::vector<double>& input_flux,
                            const std::vector<double>& output_flux) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(times.size());
  if (n < 3 || input_flux.size() != times.size() || output_flux.size() != times.size())
    throw_config("group_delay_estimate: inconsistent series");
  auto flat = [](const std::vector<double>& v) {
    const auto [mn, mx] = std::minmax_element(v.begin(), v.end());
    return *mx - *mn <= 0.0;
  };
  if (flat(input_flux) || flat(output_flux))
    throw_numeric("group_delay_estimate: degenerate flux series");

  const double h = (times.back() - times.front()) / static_cast<double>(n - 1);
  const std::ptrdiff_t kmax = n / 2;
  std::ptrdiff_t best = 0;
  double best_val = -std::numeric_limits<double>::infinity();
  std::vector<double> corr(2 * kmax + 1, 0.0);
  for (std::ptrdiff_t k = -kmax; k <= kmax; ++k) {
    double acc = 0.0;
    for (std::ptrdiff_t i = std::max<std::ptrdiff_t>(0, -k); i < n && i + k < n; ++i)
      acc += input_flux[i] * output_flux[i + k];
    corr[k + kmax] = acc;
    if (acc > best_val) {
      best_val = acc;
      best = k;
    }
  }
  double delta = 0.0;
  if (best > -kmax && best < kmax) {
    const double cm = corr[best - 1 + kmax], c0 = corr[best + kmax], cp = corr[best + 1 + kmax];
    const double denom = cm - 2.0 * c0 + cp;
    if (denom < 0.0) delta = 0.5 * (cm - cp) / denom;
  }
  return (static_cast<double>(best) + delta) * h;
}

}  // namespace chiralwg
