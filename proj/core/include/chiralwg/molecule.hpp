#pragma once

#include <Eigen/SparseCore>
#include <functional>
#include <optional>
#include <vector>

#include "chiralwg/controls.hpp"
#include "chiralwg/linop.hpp"

namespace chiralwg {

enum class Design { TwoQubit, QubitResonator };

/// Full physical description of one artificial molecule in the rotating frame
/// at the photon frequency. Rates are angular frequencies; time unit is set
/// by gamma_ph.
struct MoleculeConfig {
  Design design = Design::TwoQubit;
  double gamma = 10.0;            // element-waveguide rate (QubitResonator; unused for TwoQubit)
  double gamma_ph = 1.0;          // target photon bandwidth
  double omega_p_d_over_pi = 0.5; // omega_p * d in units of pi; 0.5 <=> d = lambda/4
  double delta1 = 0.0;            // detunings omega_j - omega_p
  double delta2 = 0.0;
  double eta = 1.0;               // coupling cancellation factor in [0, 2]
  int fock_cutoff = 3;            // local dimension of each transfer resonator
  bool include_ancilla = false;
  bool include_idle_qubits = true;

  double phase() const;  // omega_p * d in radians
  void validate() const; // throws Error(Config) on violated invariants
};

/// Waveguide-mediated couplings between the two elements.
struct WaveguideCoupling {
  Complex j;        // coherent energy-exchange strength
  Complex gamma12;  // correlated radiative decay rate (gamma21 = conj)
};

/// J   = (sqrt(g1 g2)/2) (e^{+i w2 d} - e^{-i w1 d}) / (2i)
/// g12 =  sqrt(g1 g2)    (e^{+i w2 d} + e^{-i w1 d}) / 2
WaveguideCoupling waveguide_coupling(double d_phase1, double d_phase2, double gamma1,
                                     double gamma2);

/// One term of the dissipator: rate * (B rho A^dag - 1/2 {A^dag B, rho}).
/// Individual decay has A == B and real rate; correlated terms come in
/// conjugate pairs (rate*, B, A).
struct LindbladTerm {
  Complex rate;
  Operator left_op;   // A
  Operator right_op;  // B
};

enum class StateKind {
  GG,
  PsiPlus,
  PsiMinus,
  AncillaExcited,
  AncillaSuperposition,
  Vacuum,
  GgPsiPlusSuperposition,   // (|gg> + |psi+>)/sqrt(2), amplitude probe for emission
  GgPsiMinusSuperposition,
};

SpaceLayout build_layout(const MoleculeConfig& config);

/// Embedded lowering operators on the full space. L1/L2 are the
/// waveguide-coupled elements (qubits for TwoQubit, resonators for
/// QubitResonator); sigma1/sigma2 the qubits behind the resonators.
struct LoweringOps {
  Operator l1, l2;
  std::optional<Operator> sigma1, sigma2;
  std::optional<Operator> sigma_a;
};
LoweringOps lowering_ops(const MoleculeConfig& config);

Operator hamiltonian(const MoleculeConfig& config, const ControlSet& controls, double t);
std::vector<LindbladTerm> dissipators(const MoleculeConfig& config, const ControlSet& controls,
                                      double t);
Operator prepare_state(StateKind kind, const SpaceLayout& layout);

// ---------------------------------------------------------------------------
// Precompiled generator. The master equation right-hand side is assembled as
//   rhs = X + X^dag,
//   X   = sum_p (-i f_p(t)) H_p rho               (Hamiltonian parts)
//       + sum_q (-c_q(t)/2)  G_q rho              (merged A^dag B blocks)
//       + sum_s  w_s r_s(t)  B_s (rho A_s^dag)    (jump sandwiches)
// with every H_p, G_q Hermitian and f_p, c_q real, so Hermiticity of rho is
// preserved by construction. Individual decays enter with weight 1/2 (the
// adjoint supplies the other half); correlated pairs enter once with weight 1
// (the adjoint supplies the conjugate partner).
// ---------------------------------------------------------------------------

using SparseOp = Eigen::SparseMatrix<Complex>;
using RealCoeff = std::function<double(double)>;
using ComplexCoeff = std::function<Complex(double)>;

struct HermitianPart {
  RealCoeff coeff;
  SparseOp op;
};

struct SandwichTerm {
  ComplexCoeff rate;
  SparseOp b;      // applied on the left
  SparseOp a_dag;  // applied on the right
  double weight;   // 0.5 individual, 1.0 correlated-pair representative
};

struct Generator {
  SpaceLayout layout;
  std::vector<HermitianPart> h_parts;      // Hamiltonian
  std::vector<HermitianPart> acomm_parts;  // sum rate A^dag B, Hermitian-merged
  std::vector<SandwichTerm> sandwiches;
  SparseOp excitation_number;   // total excitation operator
  SparseOp top_fock_projector;  // sum over resonators of |top><top| (empty for TwoQubit)
  double max_rate = 0.0;        // stiffest rate, for step-size heuristics

  // Explicit term list at time t (both members of each correlated pair).
  std::function<std::vector<LindbladTerm>(double)> terms_at;
};

Generator build_generator(const MoleculeConfig& config, const ControlSet& controls);

// Control-set factories for the protocols of this model.
ControlSet emission_controls(const MoleculeConfig& config, double t_start, double t_end);
ControlSet absorption_controls(const MoleculeConfig& config, double t_start, double t_end);
ControlSet transmission_controls(const MoleculeConfig& config, double t_start, double t_end);

}  // namespace chiralwg
