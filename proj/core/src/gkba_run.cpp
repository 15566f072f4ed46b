#include <cmath>

#include "dicke/error.hpp"
#include "dicke/gkba.hpp"
#include "dicke/leakage.hpp"

namespace dicke::gkba {

namespace {

template <class State>
void record(RunResult& result, const State& s, const Observer& observer) {
  Observables o = observables(s);
  if (observer) observer(o);
  result.samples.push_back(std::move(o));
}

template <class State, class Step>
void integrate(const SystemParams& p, const RunOptions& options, const Observer& observer, State& s,
               const Matrix4cd& alpha, RunResult& result, Step&& step) {
  const std::size_t steps = p.step_count();
  const std::size_t stride = std::max<std::size_t>(options.stride, 1);
  if (options.check_conservation) accumulate(result.conservation, s, alpha);
  record(result, s, observer);
  for (std::size_t n = 1; n <= steps; ++n) {
    const double residue = step(s);
    // t is recomputed from the step count to keep the sample grid exact
    s.t = static_cast<double>(n) * p.dt;
    if (options.check_conservation) {
      result.conservation.max_rho_asymmetry = std::max(result.conservation.max_rho_asymmetry, residue);
      result.conservation.max_gamma_asymmetry = std::max(result.conservation.max_gamma_asymmetry, residue);
      accumulate(result.conservation, s, alpha);
    }
    if (n % stride == 0 || n == steps) record(result, s, observer);
  }
  result.steps = steps;
}

}  // namespace

RunResult run(const SystemParams& p, const RunOptions& options, const Observer& observer) {
  validate(p);
  RunResult result;
  if (options.bath) {
    validate(*options.bath);
    if (options.kernel != Kernel::blocked) throw InvalidArgument("the leakage bath requires the blocked kernel");
    bath::CoupledStepper stepper(p, *options.bath);
    bath::CoupledState s = stepper.initial_state();
    const Matrix4cd alpha = stepper.model().sym.alpha;
    integrate(p, options, observer, s.quantum, alpha, result, [&](BlockedState& q) {
      const double residue = stepper.step(s, p.dt);
      (void)q;
      return residue;
    });
    result.final_state = s.quantum.to_dense();
    result.final_bath = stepper.frame().to_state(s.amplitudes, s.quantum.t);
    return result;
  }
  Stepper stepper(p);
  const Matrix4cd alpha = stepper.model().sym.alpha;
  if (options.kernel == Kernel::dense) {
    GkbaState s = initial_state(p);
    integrate(p, options, observer, s, alpha, result, [&](GkbaState& y) { return stepper.step(y, p.dt); });
    result.final_state = s;
  } else {
    BlockedState s = initial_blocked_state(p);
    integrate(p, options, observer, s, alpha, result, [&](BlockedState& y) { return stepper.step(y, p.dt); });
    result.final_state = s.to_dense();
  }
  return result;
}

}  // namespace dicke::gkba
