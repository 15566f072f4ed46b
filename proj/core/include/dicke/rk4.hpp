#pragma once

namespace dicke {

// Classic fixed-step RK4. State must provide free functions
//   assign_sum(out, y, a, k)   // out = y + a k
//   add_scaled(y, a, k)        // y += a k
// and Rhs must be callable as rhs(const State& y, double t, State& dydt).
template <class State>
class Rk4 {
 public:
  explicit Rk4(const State& shape) : k1_(shape), k2_(shape), k3_(shape), k4_(shape), tmp_(shape) {}

  template <class Rhs>
  void step(State& y, double t, double dt, Rhs&& rhs) {
    rhs(y, t, k1_);
    assign_sum(tmp_, y, 0.5 * dt, k1_);
    rhs(tmp_, t + 0.5 * dt, k2_);
    assign_sum(tmp_, y, 0.5 * dt, k2_);
    rhs(tmp_, t + 0.5 * dt, k3_);
    assign_sum(tmp_, y, dt, k3_);
    rhs(tmp_, t + dt, k4_);
    add_scaled(y, dt / 6.0, k1_);
    add_scaled(y, dt / 3.0, k2_);
    add_scaled(y, dt / 3.0, k3_);
    add_scaled(y, dt / 6.0, k4_);
  }

 private:
  State k1_, k2_, k3_, k4_, tmp_;
};

}  // namespace dicke
