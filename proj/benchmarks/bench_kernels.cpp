#include <benchmark/benchmark.h>

#include "dicke/ed.hpp"
#include "dicke/gkba.hpp"
#include "dicke/leakage.hpp"

using namespace dicke;

namespace {

SystemParams params_for(std::int64_t L) {
  SystemParams p;
  p.L = static_cast<std::size_t>(L);
  return p;
}

void BM_GkbaBlockedRhs(benchmark::State& state) {
  const SystemParams p = params_for(state.range(0));
  const Model m = Model::build(p);
  const gkba::BlockedState s = gkba::initial_blocked_state(p);
  gkba::BlockedState d = s;
  for (auto _ : state) {
    gkba::rhs(m, s, 1.0, d);
    benchmark::DoNotOptimize(d.phi);
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_GkbaBlockedRhs)->RangeMultiplier(2)->Range(4, 64)->Complexity(benchmark::oN);

void BM_GkbaDenseRhs(benchmark::State& state) {
  const SystemParams p = params_for(state.range(0));
  const Model m = Model::build(p);
  const gkba::GkbaState s = gkba::initial_state(p);
  gkba::GkbaState d = s;
  for (auto _ : state) {
    gkba::rhs(m, s, 1.0, d);
    benchmark::DoNotOptimize(d.phi);
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_GkbaDenseRhs)->RangeMultiplier(2)->Range(4, 32)->Complexity(benchmark::oNCubed);

void BM_GkbaStep(benchmark::State& state) {
  const SystemParams p = params_for(state.range(0));
  gkba::Stepper st(p);
  gkba::BlockedState s = gkba::initial_blocked_state(p);
  for (auto _ : state) {
    st.step(s, p.dt);
    benchmark::DoNotOptimize(s.phi);
  }
}
BENCHMARK(BM_GkbaStep)->Arg(10)->Arg(30)->Arg(60);

void BM_CoupledStep(benchmark::State& state) {
  const SystemParams p = params_for(state.range(0));
  bath::CoupledStepper st(p, BathConfig{});
  bath::CoupledState s = st.initial_state();
  for (auto _ : state) {
    st.step(s, p.dt);
    benchmark::DoNotOptimize(s.amplitudes);
  }
}
BENCHMARK(BM_CoupledStep)->Arg(15)->Arg(25);

template <class Basis>
void ed_steps(benchmark::State& state, const SystemParams& p, const Basis& basis, const ed::SplitHamiltonian& H) {
  ed::PropagationOptions o;
  o.t_end = 100 * p.dt;
  o.stride = 1000;
  const ed::FockState s0 = ed::initial_state(basis, p.beta);
  for (auto _ : state) {
    auto r = ed::propagate(s0, H, basis, o);
    benchmark::DoNotOptimize(r.final_state.amplitudes);
  }
  state.counters["dim"] = static_cast<double>(basis.dim());
}

// 100 steps of the exact propagator; spin basis for arg 0, full basis for arg 1.
void BM_EdSteps(benchmark::State& state) {
  const SystemParams p = params_for(state.range(0));
  const int N_a = ed::default_cavity_cutoff(p.beta);
  if (state.range(1) != 0) {
    const ed::FockBasis b(p.L, N_a, 6);
    ed_steps(state, p, b, ed::assemble_hamiltonian(b, p));
  } else {
    const ed::SpinFockBasis b(p.L, N_a, 6);
    ed_steps(state, p, b, ed::assemble_spin_hamiltonian(b, p));
  }
}
BENCHMARK(BM_EdSteps)->Args({3, 0})->Args({20, 0})->Args({3, 1})->Args({4, 1})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
