#pragma once

#include <cmath>
#include <cstddef>

namespace dicke {

// Physical constants of one simulation instance (hbar = 1). Defaults are the
// standard SHG parameter set: Delta = 1, g_a = 0.03, g' = 0.01, Gamma = 0.02,
// beta^2 = 9, omega_a = Delta/2, t_e = 250.
struct SystemParams {
  std::size_t L{3};       // number of two-level systems
  double eps_g{0.0};      // ground-level energy
  double eps_e{1.0};      // excited-level energy
  double delta{0.0};      // pseudo-disorder amplitude
  double U_e{0.0};        // nearest-neighbour excited-level interaction
  double g_a{0.03};       // cavity coupling
  double g_prime{0.01};   // probe coupling at t = 0
  double Gamma{0.02};     // probe-coupling decay rate
  double omega_a{0.5};    // cavity frequency
  double omega_b{1.0};    // probe (fluorescent) mode frequency
  double beta{3.0};       // coherent amplitude of the cavity, real
  double t_end{250.0};
  double dt{0.01};

  double level_splitting() const { return eps_e - eps_g; }
  double probe_coupling(double t) const { return g_prime * std::exp(-Gamma * t); }

  // Number of integrator steps covering [0, t_end]. Requires t_end to be an
  // integer multiple of dt (checked by validate()).
  std::size_t step_count() const;
};

// Throws InvalidArgument on L < 1, Gamma < 0, beta < 0, dt <= 0, t_end < 0,
// non-finite values, or t_end not commensurate with dt.
void validate(const SystemParams& p);

// Classical oscillator baths used for cavity leakage: one bath per mode,
// omega_k = Delta_B * k and C_k = A * (Delta_B * k)^a for k = 1..N_bath, unit masses.
struct BathConfig {
  std::size_t N_bath{200};
  double A{0.005};
  double a{0.6};
  double Delta_B{0.01};

  double frequency(std::size_t k) const { return Delta_B * static_cast<double>(k); }
  double coupling(std::size_t k) const { return A * std::pow(frequency(k), a); }
};

void validate(const BathConfig& b);

// Index of the step that lands on time t, or throws InvalidArgument when t
// is not on the dt lattice or lies outside [0, t_end].
std::size_t step_index(const SystemParams& p, double t);

}  // namespace dicke
