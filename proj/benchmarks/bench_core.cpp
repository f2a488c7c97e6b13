#include <benchmark/benchmark.h>

#include "chiralwg/dynamics.hpp"
#include "chiralwg/protocols.hpp"

namespace {

using namespace chiralwg;

MoleculeConfig make_config(Design design, bool ancilla) {
  MoleculeConfig cfg;
  cfg.design = design;
  cfg.gamma = 10.0;
  cfg.include_ancilla = ancilla;
  cfg.include_idle_qubits = true;
  return cfg;
}

void BM_lindblad_rhs_dense(benchmark::State& state, Design design, bool ancilla) {
  const MoleculeConfig cfg = make_config(design, ancilla);
  const ControlSet controls =
      ancilla ? absorption_controls(cfg, -12.0, 12.0) : emission_controls(cfg, -12.0, 12.0);
  const SpaceLayout layout = build_layout(cfg);
  const Operator rho =
      prepare_state(ancilla ? StateKind::AncillaExcited : StateKind::PsiPlus, layout);
  const Operator h = hamiltonian(cfg, controls, 0.0);
  const auto terms = dissipators(cfg, controls, 0.0);
  for (auto _ : state) {
    Operator out = lindblad_rhs(rho, h, terms);
    benchmark::DoNotOptimize(out.data());
  }
}

void BM_integrate_window(benchmark::State& state, Design design) {
  MoleculeConfig cfg = make_config(design, false);
  const ControlSet controls = emission_controls(cfg, -1.0, 1.0);
  const SpaceLayout layout = build_layout(cfg);
  const Operator rho0 = prepare_state(StateKind::PsiPlus, layout);
  IntegratorConfig icfg;
  icfg.dt = default_dt(cfg);
  for (auto _ : state) {
    Trajectory traj = integrate(rho0, cfg, controls, {-1.0, 1.0}, icfg);
    benchmark::DoNotOptimize(traj.states.back().data());
  }
}

void BM_partial_trace(benchmark::State& state) {
  const MoleculeConfig cfg = make_config(Design::QubitResonator, true);
  const SpaceLayout layout = build_layout(cfg);
  const Operator rho = prepare_state(StateKind::AncillaExcited, layout);
  for (auto _ : state) {
    Operator red = partial_trace(rho, layout, {"q1", "q2"});
    benchmark::DoNotOptimize(red.data());
  }
}

void BM_matrix_exponential(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Operator a = Operator::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      a(i, j) = Complex(std::sin(0.1 * i + j), std::cos(0.2 * j - i)) / static_cast<double>(n);
  for (auto _ : state) {
    Operator e = matrix_exponential(a);
    benchmark::DoNotOptimize(e.data());
  }
}

}  // namespace

BENCHMARK_CAPTURE(BM_lindblad_rhs_dense, two_qubit_dim4, Design::TwoQubit, false);
BENCHMARK_CAPTURE(BM_lindblad_rhs_dense, qubit_resonator_dim36, Design::QubitResonator, false);
BENCHMARK_CAPTURE(BM_lindblad_rhs_dense, cascaded_dim72, Design::QubitResonator, true);
BENCHMARK_CAPTURE(BM_integrate_window, two_qubit, Design::TwoQubit);
BENCHMARK_CAPTURE(BM_integrate_window, qubit_resonator, Design::QubitResonator);
BENCHMARK(BM_partial_trace);
BENCHMARK(BM_matrix_exponential)->Arg(16)->Arg(72);

BENCHMARK_MAIN();
