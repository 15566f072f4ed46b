#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "dicke/model.hpp"
#include "dicke/params.hpp"

namespace dicke::bath {

// Positions and momenta of the classical oscillators coupled to the cavity
// (a) and probe (b) modes. Zero at t = 0 (equilibrium).
struct BathState {
  std::vector<double> q_a, p_a, q_b, p_b;
  double t{0.0};

  static BathState equilibrium(const BathConfig& config);
};

// F_{1,1} = sqrt2 sum_k C_k q_{a,k}, F_{2,1} = sqrt2 sum_k C_k q_{b,k},
// momentum components zero.
Eigen::Vector4d bath_force(const BathState& bath, const BathConfig& config);

struct BathAccelerations {
  std::vector<double> a;  // d^2 q_{a,k} / dt^2
  std::vector<double> b;  // d^2 q_{b,k} / dt^2
};

// Ehrenfest accelerations for unit masses driven by <a^dag + a> = sqrt2 phi_x1
// and <b^dag + b> = sqrt2 phi_x2:
//   q''_{m,k} = -omega_k^2 q_{m,k} - C_k sqrt2 phi_{x_m}.
// The drive carries the sign that follows from H_ph-bath = sum_mu F_mu phi_mu.
BathAccelerations bath_accelerations(const BathState& bath, const BathConfig& config, const Eigen::Vector4d& phi);

// Rotating-frame amplitudes z = (omega_k q + i p_k) exp(i omega_k t), one
// block of N_bath entries per mode. A free oscillator has constant z, so the
// uncoupled bath is integrated without error.
class RotatingFrame {
 public:
  explicit RotatingFrame(const BathConfig& config);

  std::size_t size() const { return 2 * n_; }
  Eigen::VectorXcd to_amplitudes(const BathState& bath) const;
  BathState to_state(const Eigen::VectorXcd& z, double t) const;

  // Leakage force from amplitudes at time t.
  Eigen::Vector4d force(const Eigen::VectorXcd& z, double t) const;

  // dz/dt given the mode displacements at time t.
  void derivative(const Eigen::Vector4d& phi, double t, Eigen::VectorXcd& dz) const;

  // Total bath energy sum_k (p^2 + omega^2 q^2)/2 over both baths.
  double energy(const Eigen::VectorXcd& z) const { return 0.5 * z.squaredNorm(); }

 private:
  void phases(double t) const;  // fills phase_[k] = exp(i omega_k t)

  std::size_t n_;
  Eigen::VectorXd omega_;
  Eigen::VectorXd coupling_;
  double delta_b_;
  mutable Eigen::VectorXcd phase_;
};

double oscillator_energy(const BathState& bath, const BathConfig& config, std::size_t mode, std::size_t k);

}  // namespace dicke::bath
