#include "dicke/params.hpp"

#include <cmath>
#include <string>

#include "dicke/error.hpp"

namespace dicke {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw InvalidArgument(what);
}

bool on_lattice(double t, double dt) {
  const double n = std::round(t / dt);
  return std::abs(n * dt - t) <= 1e-9 * std::max(1.0, std::abs(t));
}

}  // namespace

std::size_t SystemParams::step_count() const {
  return static_cast<std::size_t>(std::llround(t_end / dt));
}

void validate(const SystemParams& p) {
  for (double v : {p.eps_g, p.eps_e, p.delta, p.U_e, p.g_a, p.g_prime, p.Gamma, p.omega_a,
                   p.omega_b, p.beta, p.t_end, p.dt}) {
    require(std::isfinite(v), "parameters must be finite");
  }
  require(p.L >= 1, "L must be >= 1");
  require(p.Gamma >= 0.0, "Gamma must be >= 0");
  require(p.beta >= 0.0, "beta must be real and >= 0");
  require(p.dt > 0.0, "dt must be > 0");
  require(p.t_end >= 0.0, "t_end must be >= 0");
  require(on_lattice(p.t_end, p.dt), "t_end must be an integer multiple of dt");
}

void validate(const BathConfig& b) {
  require(b.N_bath >= 1, "bath.N_bath must be >= 1");
  require(std::isfinite(b.A) && std::isfinite(b.a) && std::isfinite(b.Delta_B),
          "bath parameters must be finite");
  require(b.Delta_B > 0.0, "bath.Delta_B must be > 0 (all omega_k > 0)");
  require(b.A >= 0.0, "bath.A must be >= 0 (C_k >= 0)");
}

std::size_t step_index(const SystemParams& p, double t) {
  if (t < 0.0 || t > p.t_end + 1e-9 * std::max(1.0, p.t_end) || !on_lattice(t, p.dt)) {
    throw InvalidArgument("time " + std::to_string(t) + " is not a step of [0, t_end] with dt = " +
                          std::to_string(p.dt));
  }
  return static_cast<std::size_t>(std::llround(t / p.dt));
}

}  // namespace dicke
