#include "chiralwg/molecule.hpp"

#include <cmath>

#include "chiralwg/errors.hpp"
#include "sparse_util.hpp"

namespace chiralwg {

namespace {

using detail::to_sparse;

constexpr Complex kI{0.0, 1.0};

Operator qubit_lowering() {
  Operator s = Operator::Zero(2, 2);
  s(0, 1) = 1.0;  // ground-first: <g| s |e> = 1
  return s;
}

Operator fock_lowering(int cutoff) {
  Operator a = Operator::Zero(cutoff, cutoff);
  for (int n = 1; n < cutoff; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

double waveform_sup(const Waveform& w) {
  if (w.is_zero()) return 0.0;
  double sup = 0.0;
  const double t0 = std::min(w.t_start, w.t_end), t1 = std::max(w.t_start, w.t_end);
  const int n = 256;
  for (int i = 0; i <= n; ++i) {
    const double t = t0 + (t1 - t0) * i / n;
    sup = std::max(sup, std::abs(w(t)));
  }
  return sup;
}

bool waveform_equal(const Waveform& a, const Waveform& b) {
  return a.kind == b.kind && a.gamma_ph == b.gamma_ph && a.gamma == b.gamma &&
         a.value == b.value && a.scale == b.scale && a.reversed == b.reversed &&
         a.tab_t == b.tab_t && a.tab_v == b.tab_v;
}

}  // namespace

double MoleculeConfig::phase() const { return M_PI * omega_p_d_over_pi; }

void MoleculeConfig::validate() const {
  if (gamma_ph <= 0.0) throw_config("gamma_ph must be positive");
  if (design == Design::QubitResonator && gamma <= 0.0)
    throw_config("gamma must be positive for the qubit-resonator design");
  if (fock_cutoff < 2) throw_config("fock_cutoff must be at least 2");
  if (eta < 0.0 || eta > 2.0) throw_config("eta must lie in [0, 2]");
  if (omega_p_d_over_pi <= 0.0 || omega_p_d_over_pi > 2.0)
    throw_config("omega_p_d_over_pi must lie in (0, 2]");
}

WaveguideCoupling waveguide_coupling(double d_phase1, double d_phase2, double gamma1,
                                     double gamma2) {
  if (gamma1 < 0.0 || gamma2 < 0.0) throw_config("waveguide_coupling: negative rate");
  const double root = std::sqrt(gamma1 * gamma2);
  const Complex e2 = std::exp(kI * d_phase2);
  const Complex e1m = std::exp(-kI * d_phase1);
  WaveguideCoupling wc;
  wc.j = 0.5 * root * (e2 - e1m) / (2.0 * kI);
  wc.gamma12 = root * 0.5 * (e2 + e1m);
  return wc;
}

SpaceLayout build_layout(const MoleculeConfig& config) {
  config.validate();
  std::vector<SpaceLayout::Subsystem> subs;
  if (config.design == Design::TwoQubit) {
    subs.push_back({"q1", 2});
    subs.push_back({"q2", 2});
  } else {
    if (config.include_idle_qubits) {
      subs.push_back({"q1", 2});
      subs.push_back({"r1", config.fock_cutoff});
      subs.push_back({"q2", 2});
      subs.push_back({"r2", config.fock_cutoff});
    } else {
      subs.push_back({"r1", config.fock_cutoff});
      subs.push_back({"r2", config.fock_cutoff});
    }
  }
  if (config.include_ancilla) subs.push_back({"a", 2});
  return SpaceLayout(std::move(subs));
}

LoweringOps lowering_ops(const MoleculeConfig& config) {
  const SpaceLayout layout = build_layout(config);
  LoweringOps ops;
  if (config.design == Design::TwoQubit) {
    ops.l1 = embed(qubit_lowering(), layout, "q1");
    ops.l2 = embed(qubit_lowering(), layout, "q2");
  } else {
    ops.l1 = embed(fock_lowering(config.fock_cutoff), layout, "r1");
    ops.l2 = embed(fock_lowering(config.fock_cutoff), layout, "r2");
    if (layout.has("q1")) {
      ops.sigma1 = embed(qubit_lowering(), layout, "q1");
      ops.sigma2 = embed(qubit_lowering(), layout, "q2");
    }
  }
  if (config.include_ancilla) ops.sigma_a = embed(qubit_lowering(), layout, "a");
  return ops;
}

Generator build_generator(const MoleculeConfig& config, const ControlSet& controls) {
  config.validate();
  Generator gen;
  gen.layout = build_layout(config);
  const LoweringOps ops = lowering_ops(config);

  const double phi = config.phase();
  const double theta1 = -0.5 * phi;  // omega_p * r_1, r_1 = -d/2
  const double theta2 = +0.5 * phi;
  // Unit-rate couplings at the element spacing; equal phases make both real.
  const WaveguideCoupling unit = waveguide_coupling(phi, phi, 1.0, 1.0);
  const double j_unit = unit.j.real();
  const double g12_unit = unit.gamma12.real();

  // Element-waveguide rates as waveforms, uniform across both designs.
  const bool two_qubit = config.design == Design::TwoQubit;
  Waveform rate1 = two_qubit ? controls.gamma1
                             : make_constant(config.gamma, controls.g_c.t_start, controls.g_c.t_end);
  Waveform rate2 = two_qubit ? controls.gamma2 : rate1;
  // sqrt(a*a) can land one ulp off a; equal waveforms must give the exact
  // rate or the nominal cancellation would not be bit-exact.
  const bool equal_rates = waveform_equal(rate1, rate2);
  auto elem_rate = [rate1, rate2, equal_rates](double t) {
    const double a = std::max(0.0, rate1(t));
    if (equal_rates) return a;
    const double b = std::max(0.0, rate2(t));
    return std::sqrt(a * b);
  };

  const Operator dl1 = ops.l1, dl2 = ops.l2;
  const SparseOp l1 = to_sparse(dl1), l2 = to_sparse(dl2);
  const SparseOp n1 = to_sparse(dl1.adjoint() * dl1), n2 = to_sparse(dl2.adjoint() * dl2);
  const SparseOp exch = to_sparse(dl1.adjoint() * dl2 + dl2.adjoint() * dl1);

  // -- Hamiltonian --------------------------------------------------------
  if (config.delta1 != 0.0 || config.delta2 != 0.0) {
    Operator h = config.delta1 * (dl1.adjoint() * dl1) + config.delta2 * (dl2.adjoint() * dl2);
    if (ops.sigma1) {
      h += config.delta1 * (ops.sigma1->adjoint() * (*ops.sigma1));
      h += config.delta2 * (ops.sigma2->adjoint() * (*ops.sigma2));
    }
    gen.h_parts.push_back({[](double) { return 1.0; }, to_sparse(h)});
  }

  {
    // J(t) (L1^dag L2 + h.c.) + eta g_c(t) (L1^dag L2 + h.c.)
    const double eta = config.eta;
    Waveform gc = controls.g_c;
    auto coeff = [elem_rate, j_unit, eta, gc](double t) {
      return j_unit * elem_rate(t) + eta * gc(t);
    };
    gen.h_parts.push_back({coeff, exch});
  }

  if (!two_qubit && ops.sigma1 && !controls.g1.is_zero()) {
    Waveform g1 = controls.g1, g2 = controls.g2;
    gen.h_parts.push_back(
        {[g1](double t) { return g1(t); },
         to_sparse(dl1.adjoint() * (*ops.sigma1) + ops.sigma1->adjoint() * dl1)});
    gen.h_parts.push_back(
        {[g2](double t) { return g2(t); },
         to_sparse(dl2.adjoint() * (*ops.sigma2) + ops.sigma2->adjoint() * dl2)});
  }

  // -- Dissipator ----------------------------------------------------------
  auto rate1_fn = [rate1](double t) { return std::max(0.0, rate1(t)); };
  auto rate2_fn = [rate2](double t) { return std::max(0.0, rate2(t)); };
  gen.acomm_parts.push_back({rate1_fn, n1});
  gen.acomm_parts.push_back({rate2_fn, n2});
  gen.sandwiches.push_back(
      {[rate1_fn](double t) { return Complex(rate1_fn(t), 0.0); }, l1, to_sparse(dl1.adjoint()), 0.5});
  gen.sandwiches.push_back(
      {[rate2_fn](double t) { return Complex(rate2_fn(t), 0.0); }, l2, to_sparse(dl2.adjoint()), 0.5});

  const bool correlated = std::abs(g12_unit) > 1e-15;
  if (correlated) {
    auto g12_fn = [elem_rate, g12_unit](double t) { return g12_unit * elem_rate(t); };
    gen.acomm_parts.push_back({g12_fn, exch});
    gen.sandwiches.push_back(
        {[g12_fn](double t) { return Complex(g12_fn(t), 0.0); }, l2, to_sparse(dl1.adjoint()), 1.0});
  }

  if (config.include_ancilla) {
    const Operator dsa = *ops.sigma_a;
    const SparseOp sa = to_sparse(dsa);
    Waveform ga = controls.gamma_a;
    auto ga_fn = [ga](double t) { return std::max(0.0, ga(t)); };
    gen.acomm_parts.push_back({ga_fn, to_sparse(dsa.adjoint() * dsa)});
    gen.sandwiches.push_back(
        {[ga_fn](double t) { return Complex(ga_fn(t), 0.0); }, sa, to_sparse(dsa.adjoint()), 0.5});

    // Cascade onto the rightward mode. The coherent piece uses the
    // per-direction element rate gamma_j/2, i.e. |J'_j| = sqrt(gamma_j gamma_a / 2)/2;
    // a larger coefficient would act back on the source.
    const Complex e1 = std::exp(kI * theta1), e2c = std::exp(kI * theta2);
    auto root_fn = [elem_rate, ga_fn](double t) { return std::sqrt(elem_rate(t) * ga_fn(t)); };
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    Operator hj = (kI * std::conj(e1) * (dsa.adjoint() * dl1) - kI * e1 * (dl1.adjoint() * dsa) +
                   kI * std::conj(e2c) * (dsa.adjoint() * dl2) - kI * e2c * (dl2.adjoint() * dsa)) *
                  (0.5 * inv_sqrt2);
    gen.h_parts.push_back({root_fn, to_sparse(hj)});

    Operator cross = (e1 * (dl1.adjoint() * dsa) + std::conj(e1) * (dsa.adjoint() * dl1) +
                      e2c * (dl2.adjoint() * dsa) + std::conj(e2c) * (dsa.adjoint() * dl2)) *
                     inv_sqrt2;
    gen.acomm_parts.push_back({root_fn, to_sparse(cross)});

    gen.sandwiches.push_back({[root_fn, e1, inv_sqrt2](double t) { return root_fn(t) * inv_sqrt2 * e1; },
                              sa, to_sparse(dl1.adjoint()), 1.0});
    gen.sandwiches.push_back({[root_fn, e2c, inv_sqrt2](double t) { return root_fn(t) * inv_sqrt2 * e2c; },
                              sa, to_sparse(dl2.adjoint()), 1.0});
  }

  // -- Monitors ------------------------------------------------------------
  {
    Operator num = Operator::Zero(gen.layout.total_dim(), gen.layout.total_dim());
    for (const auto& s : gen.layout.subsystems()) {
      Operator local;
      if (s.dim == 2) {
        local = qubit_lowering();
      } else {
        local = fock_lowering(s.dim);
      }
      Operator emb = embed(local, gen.layout, s.label);
      num += emb.adjoint() * emb;
    }
    gen.excitation_number = to_sparse(num);
  }
  if (!two_qubit) {
    Operator proj = Operator::Zero(gen.layout.total_dim(), gen.layout.total_dim());
    for (const char* r : {"r1", "r2"}) {
      Operator local = Operator::Zero(config.fock_cutoff, config.fock_cutoff);
      local(config.fock_cutoff - 1, config.fock_cutoff - 1) = 1.0;
      proj += embed(local, gen.layout, r);
    }
    gen.top_fock_projector = to_sparse(proj);
  } else {
    gen.top_fock_projector = SparseOp(gen.layout.total_dim(), gen.layout.total_dim());
  }

  gen.max_rate = std::max(2.0 * config.gamma_ph, waveform_sup(rate1));
  gen.max_rate = std::max(gen.max_rate, waveform_sup(rate2));
  gen.max_rate = std::max(gen.max_rate, waveform_sup(controls.gamma_a));

  // -- Explicit term list (both members of every correlated pair) ----------
  {
    const MoleculeConfig cfg = config;
    const Operator cl1 = dl1, cl2 = dl2;
    std::optional<Operator> csa;
    if (config.include_ancilla) csa = *ops.sigma_a;
    Waveform ga = controls.gamma_a;
    gen.terms_at = [cfg, cl1, cl2, csa, rate1, rate2, ga, g12_unit, correlated, theta1,
                    theta2](double t) {
      std::vector<LindbladTerm> terms;
      const double r1 = std::max(0.0, rate1(t));
      const double r2 = std::max(0.0, rate2(t));
      terms.push_back({Complex(r1, 0.0), cl1, cl1});
      terms.push_back({Complex(r2, 0.0), cl2, cl2});
      if (correlated) {
        const Complex g12(g12_unit * std::sqrt(r1 * r2), 0.0);
        terms.push_back({g12, cl1, cl2});
        terms.push_back({std::conj(g12), cl2, cl1});
      }
      if (csa) {
        const double ra = std::max(0.0, ga(t));
        terms.push_back({Complex(ra, 0.0), *csa, *csa});
        const double c1 = std::sqrt(0.5 * r1 * ra);
        const double c2 = std::sqrt(0.5 * r2 * ra);
        terms.push_back({c1 * std::exp(kI * theta1), cl1, *csa});
        terms.push_back({c1 * std::exp(-kI * theta1), *csa, cl1});
        terms.push_back({c2 * std::exp(kI * theta2), cl2, *csa});
        terms.push_back({c2 * std::exp(-kI * theta2), *csa, cl2});
      }
      return terms;
    };
  }

  return gen;
}

Operator hamiltonian(const MoleculeConfig& config, const ControlSet& controls, double t) {
  const Generator gen = build_generator(config, controls);
  const int dim = gen.layout.total_dim();
  Operator h = Operator::Zero(dim, dim);
  for (const auto& part : gen.h_parts) h += part.coeff(t) * Operator(part.op);
  return h;
}

std::vector<LindbladTerm> dissipators(const MoleculeConfig& config, const ControlSet& controls,
                                      double t) {
  const Generator gen = build_generator(config, controls);
  return gen.terms_at(t);
}

Operator prepare_state(StateKind kind, const SpaceLayout& layout) {
  const int dim = layout.total_dim();
  const auto& subs = layout.subsystems();

  // composite index with one subsystem set to a local level, others ground
  auto level = [&](const std::string& label, int value) {
    int idx = 0;
    int stride = 1;
    for (int i = static_cast<int>(subs.size()) - 1; i >= 0; --i) {
      if (subs[i].label == label) idx += value * stride;
      stride *= subs[i].dim;
    }
    return idx;
  };
  auto require = [&](const char* label) {
    if (!layout.has(label))
      throw_config(std::string("prepare_state: layout lacks subsystem '") + label + "'");
  };

  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(dim);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  switch (kind) {
    case StateKind::GG:
    case StateKind::Vacuum:
      psi(0) = 1.0;
      break;
    case StateKind::PsiPlus:
    case StateKind::PsiMinus: {
      require("q1");
      require("q2");
      const Complex ph = kind == StateKind::PsiPlus ? kI : -kI;
      psi(level("q1", 1)) = inv_sqrt2;
      psi(level("q2", 1)) = ph * inv_sqrt2;
      break;
    }
    case StateKind::GgPsiPlusSuperposition:
    case StateKind::GgPsiMinusSuperposition: {
      require("q1");
      require("q2");
      const Complex ph = kind == StateKind::GgPsiPlusSuperposition ? kI : -kI;
      psi(0) = inv_sqrt2;
      psi(level("q1", 1)) = 0.5;
      psi(level("q2", 1)) = 0.5 * ph;
      break;
    }
    case StateKind::AncillaExcited:
      require("a");
      psi(level("a", 1)) = 1.0;
      break;
    case StateKind::AncillaSuperposition:
      require("a");
      psi(0) = inv_sqrt2;
      psi(level("a", 1)) = inv_sqrt2;
      break;
  }
  return psi * psi.adjoint();
}

ControlSet emission_controls(const MoleculeConfig& config, double t_start, double t_end) {
  config.validate();
  ControlSet c;
  c.gamma_a = make_zero();
  if (config.design == Design::TwoQubit) {
    c.gamma1 = make_gamma_modulation(config.gamma_ph, t_start, t_end);
    c.gamma2 = c.gamma1;
    c.g1 = c.g2 = make_zero();
    c.g_c = scaled(c.gamma1, -0.5);  // -J(t) at the nominal spacing
  } else {
    c.gamma1 = c.gamma2 = make_zero();
    c.g1 = make_g_modulation(config.gamma_ph, config.gamma, t_start, t_end);
    c.g2 = c.g1;
    c.g_c = make_constant(-0.5 * config.gamma, t_start, t_end);
  }
  return c;
}

ControlSet absorption_controls(const MoleculeConfig& config, double t_start, double t_end) {
  ControlSet c = emission_controls(config, -t_end, -t_start);
  c.gamma1 = time_reverse(c.gamma1);
  c.gamma2 = time_reverse(c.gamma2);
  c.g1 = time_reverse(c.g1);
  c.g2 = time_reverse(c.g2);
  c.g_c = time_reverse(c.g_c);
  c.gamma_a = make_gamma_modulation(config.gamma_ph, t_start, t_end);
  return c;
}

ControlSet transmission_controls(const MoleculeConfig& config, double t_start, double t_end) {
  config.validate();
  if (config.design != Design::QubitResonator)
    throw_config("transmission requires the qubit-resonator design");
  ControlSet c;
  c.gamma1 = c.gamma2 = make_zero();
  c.g1 = c.g2 = make_zero();
  c.g_c = make_constant(-0.5 * config.gamma, t_start, t_end);
  c.gamma_a = make_gamma_modulation(config.gamma_ph, t_start, t_end);
  return c;
}

}  // namespace chiralwg
