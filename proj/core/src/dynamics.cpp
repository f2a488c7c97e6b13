#include "chiralwg/dynamics.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "chiralwg/errors.hpp"
#include "sparse_util.hpp"

namespace chiralwg {

namespace {

constexpr Complex kI{0.0, 1.0};

// x += alpha * (s * rho)
void apply_left(Complex alpha, const SparseOp& s, const Operator& rho, Operator& x) {
  for (int k = 0; k < s.outerSize(); ++k)
    for (SparseOp::InnerIterator it(s, k); it; ++it)
      x.row(it.row()) += (alpha * it.value()) * rho.row(it.col());
}

// x += alpha * (rho * s)
void apply_right(Complex alpha, const Operator& rho, const SparseOp& s, Operator& x) {
  for (int k = 0; k < s.outerSize(); ++k)
    for (SparseOp::InnerIterator it(s, k); it; ++it)
      x.col(it.col()) += (alpha * it.value()) * rho.col(it.row());
}

struct Workspace {
  Operator x, tmp, k1, k2, k3, k4, stage;
  explicit Workspace(int dim)
      : x(dim, dim), tmp(dim, dim), k1(dim, dim), k2(dim, dim), k3(dim, dim), k4(dim, dim),
        stage(dim, dim) {}
};

// rhs = X + X^dag with X collecting -iH rho, -(1/2) sum A^dag B rho and the
// jump sandwiches; the adjoint supplies the remaining halves, so Hermiticity
// of the output is exact.
void eval_rhs(const Generator& gen, double t, const Operator& rho, Operator& out, Workspace& ws) {
  ws.x.setZero();
  for (const auto& p : gen.h_parts) {
    const double c = p.coeff(t);
    if (c != 0.0) apply_left(Complex(0.0, -c), p.op, rho, ws.x);
  }
  for (const auto& p : gen.acomm_parts) {
    const double c = p.coeff(t);
    if (c != 0.0) apply_left(Complex(-0.5 * c, 0.0), p.op, rho, ws.x);
  }
  for (const auto& sw : gen.sandwiches) {
    const Complex r = sw.rate(t);
    if (r == Complex(0.0, 0.0)) continue;
    ws.tmp.setZero();
    apply_right(Complex(1.0, 0.0), rho, sw.a_dag, ws.tmp);
    apply_left(sw.weight * r, sw.b, ws.tmp, ws.x);
  }
  out = ws.x + ws.x.adjoint();
}

void rk4_step(const Generator& gen, double t, double dt, Operator& rho, Workspace& ws) {
  eval_rhs(gen, t, rho, ws.k1, ws);
  ws.stage = rho + (0.5 * dt) * ws.k1;
  eval_rhs(gen, t + 0.5 * dt, ws.stage, ws.k2, ws);
  ws.stage = rho + (0.5 * dt) * ws.k2;
  eval_rhs(gen, t + 0.5 * dt, ws.stage, ws.k3, ws);
  ws.stage = rho + dt * ws.k3;
  eval_rhs(gen, t + dt, ws.stage, ws.k4, ws);
  rho += (dt / 6.0) * (ws.k1 + 2.0 * ws.k2 + 2.0 * ws.k3 + ws.k4);
}

double sparse_trace_with(const SparseOp& s, const Operator& rho) {
  return detail::sparse_expectation(rho, s).real();
}

}  // namespace

bool Trajectory::healthy(const IntegratorTolerances& tol) const {
  return monitors.max_trace_dev <= tol.trace_dev && monitors.min_min_eig >= tol.min_eig &&
         monitors.max_herm_residual <= tol.herm && monitors.max_top_fock_leakage <= tol.leakage;
}

Operator lindblad_rhs(const Operator& rho, const Operator& h,
                      const std::vector<LindbladTerm>& terms) {
  if (rho.rows() != rho.cols() || h.rows() != h.cols() || rho.rows() != h.rows())
    throw_config("lindblad_rhs: dimension mismatch");
  Operator out = -kI * (h * rho - rho * h);
  for (const auto& term : terms) {
    if (term.left_op.rows() != rho.rows() || term.right_op.rows() != rho.rows())
      throw_config("lindblad_rhs: term dimension mismatch");
    const Operator adag_b = term.left_op.adjoint() * term.right_op;
    out += term.rate * (term.right_op * rho * term.left_op.adjoint()) -
           (0.5 * term.rate) * (adag_b * rho + rho * adag_b);
  }
  return out;
}

Operator liouvillian_matrix(const Operator& h, const std::vector<LindbladTerm>& terms) {
  const Eigen::Index dim = h.rows();
  if (dim * dim > 5184) throw_config("liouvillian_matrix: dimension guard exceeded");
  const Operator id = Operator::Identity(dim, dim);
  // column-stacking: vec(A X B) = (B^T kron A) vec(X)
  Operator lv = -kI * (kron(id, h) - kron(h.transpose(), id));
  for (const auto& term : terms) {
    const Operator adag_b = term.left_op.adjoint() * term.right_op;
    lv += term.rate * (kron(term.left_op.conjugate(), term.right_op) -
                       0.5 * kron(id, adag_b) - 0.5 * kron(adag_b.transpose(), id));
  }
  return lv;
}

double default_dt(const MoleculeConfig& config) {
  const double used =
      config.design == Design::QubitResonator ? config.gamma : config.gamma_ph;
  return 1.0 / (200.0 * std::max(used, 2.0 * config.gamma_ph));
}

double record_spacing(const MoleculeConfig& config) { return 1.0 / (40.0 * config.gamma_ph); }

Trajectory integrate_generator(const Operator& rho0, const Generator& gen,
                               std::pair<double, double> t_span, const IntegratorConfig& icfg,
                               double gamma_ph) {
  const int dim = gen.layout.total_dim();
  if (rho0.rows() != dim || rho0.cols() != dim)
    throw_config("integrate: initial state does not match the layout dimension");
  if (std::abs(rho0.trace() - Complex(1.0, 0.0)) > 1e-9)
    throw_config("integrate: initial state is not trace-one");
  const double span = t_span.second - t_span.first;
  if (span <= 0.0) throw_config("integrate: empty time span");

  double dt = icfg.dt > 0.0 ? icfg.dt : 1.0 / (200.0 * gen.max_rate);
  const long n_steps = std::max<long>(1, std::llround(span / dt));
  dt = span / static_cast<double>(n_steps);
  if (dt > 1.0 / (50.0 * gen.max_rate))
    std::fprintf(stderr, "warning: dt = %g exceeds 1/(50 max rate) = %g\n", dt,
                 1.0 / (50.0 * gen.max_rate));
  long stride = icfg.record_stride > 0
                    ? icfg.record_stride
                    : std::max<long>(1, std::llround(1.0 / (40.0 * gamma_ph) / dt));

  Trajectory traj;
  traj.monitors.min_min_eig = std::numeric_limits<double>::infinity();

  Workspace ws(dim);
  Operator rho = rho0;
  Operator half = rho0, big = rho0;
  const bool adaptive = icfg.method == Method::RK4HalfStepAdaptive;

  auto record = [&](double t) {
    const double trace_dev = std::abs(rho.trace() - Complex(1.0, 0.0));
    const double herm = hermiticity_residual(rho);
    const double eig = min_hermitian_eigenvalue(rho);
    const double leak =
        gen.top_fock_projector.nonZeros() > 0 ? sparse_trace_with(gen.top_fock_projector, rho) : 0.0;
    traj.times.push_back(t);
    traj.states.push_back(rho);
    traj.monitors.trace_dev.push_back(trace_dev);
    traj.monitors.herm_residual.push_back(herm);
    traj.monitors.min_eig.push_back(eig);
    traj.monitors.top_fock_leakage.push_back(leak);
    traj.monitors.max_herm_residual = std::max(traj.monitors.max_herm_residual, herm);
    traj.monitors.min_min_eig = std::min(traj.monitors.min_min_eig, eig);
    if (icfg.fail_fast) {
      if (trace_dev > icfg.tol.trace_dev || herm > icfg.tol.herm)
        throw_numeric("ToleranceViolation: trace/hermiticity gate breached at t = " +
                      std::to_string(t));
      if (eig < icfg.tol.min_eig)
        throw_numeric("ToleranceViolation: positivity gate breached at t = " + std::to_string(t));
      if (leak > icfg.tol.leakage)
        throw_numeric("LeakageViolation: top Fock level population " + std::to_string(leak));
    }
  };

  record(t_span.first);
  for (long i = 0; i < n_steps; ++i) {
    const double t = t_span.first + static_cast<double>(i) * dt;
    if (adaptive) {
      big = rho;
      rk4_step(gen, t, dt, big, ws);
      half = rho;
      rk4_step(gen, t, 0.5 * dt, half, ws);
      rk4_step(gen, t + 0.5 * dt, 0.5 * dt, half, ws);
      traj.monitors.max_halfstep_defect =
          std::max(traj.monitors.max_halfstep_defect, (big - half).norm());
      rho = half;
    } else {
      rk4_step(gen, t, dt, rho, ws);
    }

    const double trace_dev = std::abs(rho.trace() - Complex(1.0, 0.0));
    traj.monitors.max_trace_dev = std::max(traj.monitors.max_trace_dev, trace_dev);
    if (gen.top_fock_projector.nonZeros() > 0) {
      const double leak = sparse_trace_with(gen.top_fock_projector, rho);
      traj.monitors.max_top_fock_leakage = std::max(traj.monitors.max_top_fock_leakage, leak);
    }

    if ((i + 1) % stride == 0 || i + 1 == n_steps)
      record(t_span.first + static_cast<double>(i + 1) * dt);
  }
  return traj;
}

Trajectory integrate(const Operator& rho0, const MoleculeConfig& config,
                     const ControlSet& controls, std::pair<double, double> t_span,
                     const IntegratorConfig& icfg) {
  const Generator gen = build_generator(config, controls);
  return integrate_generator(rho0, gen, t_span, icfg, config.gamma_ph);
}

}  // namespace chiralwg
