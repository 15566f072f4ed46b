#include "dicke/bath.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "dicke/error.hpp"
#include "dicke/leakage.hpp"

namespace dicke::bath {

BathState BathState::equilibrium(const BathConfig& config) {
  BathState b;
  b.q_a.assign(config.N_bath, 0.0);
  b.p_a.assign(config.N_bath, 0.0);
  b.q_b.assign(config.N_bath, 0.0);
  b.p_b.assign(config.N_bath, 0.0);
  return b;
}

Eigen::Vector4d bath_force(const BathState& bath, const BathConfig& config) {
  double fa = 0.0, fb = 0.0;
  for (std::size_t k = 0; k < config.N_bath; ++k) {
    const double c = config.coupling(k + 1);
    fa += c * bath.q_a[k];
    fb += c * bath.q_b[k];
  }
  Eigen::Vector4d f = Eigen::Vector4d::Zero();
  f[quad::x1] = std::numbers::sqrt2 * fa;
  f[quad::x2] = std::numbers::sqrt2 * fb;
  return f;
}

BathAccelerations bath_accelerations(const BathState& bath, const BathConfig& config, const Eigen::Vector4d& phi) {
  BathAccelerations out;
  out.a.resize(config.N_bath);
  out.b.resize(config.N_bath);
  const double drive_a = std::numbers::sqrt2 * phi[quad::x1];
  const double drive_b = std::numbers::sqrt2 * phi[quad::x2];
  for (std::size_t k = 0; k < config.N_bath; ++k) {
    const double w = config.frequency(k + 1);
    const double c = config.coupling(k + 1);
    out.a[k] = -w * w * bath.q_a[k] - c * drive_a;
    out.b[k] = -w * w * bath.q_b[k] - c * drive_b;
  }
  return out;
}

double oscillator_energy(const BathState& bath, const BathConfig& config, std::size_t mode, std::size_t k) {
  const double w = config.frequency(k + 1);
  const double q = mode == 0 ? bath.q_a[k] : bath.q_b[k];
  const double p = mode == 0 ? bath.p_a[k] : bath.p_b[k];
  return 0.5 * (p * p + w * w * q * q);
}

RotatingFrame::RotatingFrame(const BathConfig& config)
    : n_(config.N_bath), omega_(config.N_bath), coupling_(config.N_bath), delta_b_(config.Delta_B),
      phase_(config.N_bath) {
  for (std::size_t k = 0; k < n_; ++k) {
    omega_[static_cast<Eigen::Index>(k)] = config.frequency(k + 1);
    coupling_[static_cast<Eigen::Index>(k)] = config.coupling(k + 1);
  }
}

void RotatingFrame::phases(double t) const {
  const Complex step = std::polar(1.0, delta_b_ * t);
  Complex z = step;
  for (std::size_t k = 0; k < n_; ++k) {
    phase_[static_cast<Eigen::Index>(k)] = z;
    z *= step;
  }
}

Eigen::VectorXcd RotatingFrame::to_amplitudes(const BathState& bath) const {
  phases(bath.t);
  Eigen::VectorXcd z(2 * n_);
  for (std::size_t k = 0; k < n_; ++k) {
    const auto i = static_cast<Eigen::Index>(k);
    const double w = omega_[i];
    z[i] = Complex(w * bath.q_a[k], bath.p_a[k]) * phase_[i];
    z[i + static_cast<Eigen::Index>(n_)] = Complex(w * bath.q_b[k], bath.p_b[k]) * phase_[i];
  }
  return z;
}

BathState RotatingFrame::to_state(const Eigen::VectorXcd& z, double t) const {
  phases(t);
  BathState b;
  b.t = t;
  b.q_a.resize(n_);
  b.p_a.resize(n_);
  b.q_b.resize(n_);
  b.p_b.resize(n_);
  for (std::size_t k = 0; k < n_; ++k) {
    const auto i = static_cast<Eigen::Index>(k);
    const Complex ua = z[i] * std::conj(phase_[i]);
    const Complex ub = z[i + static_cast<Eigen::Index>(n_)] * std::conj(phase_[i]);
    b.q_a[k] = ua.real() / omega_[i];
    b.p_a[k] = ua.imag();
    b.q_b[k] = ub.real() / omega_[i];
    b.p_b[k] = ub.imag();
  }
  return b;
}

Eigen::Vector4d RotatingFrame::force(const Eigen::VectorXcd& z, double t) const {
  phases(t);
  double fa = 0.0, fb = 0.0;
  for (std::size_t k = 0; k < n_; ++k) {
    const auto i = static_cast<Eigen::Index>(k);
    const double s = coupling_[i] / omega_[i];
    fa += s * (z[i] * std::conj(phase_[i])).real();
    fb += s * (z[i + static_cast<Eigen::Index>(n_)] * std::conj(phase_[i])).real();
  }
  Eigen::Vector4d f = Eigen::Vector4d::Zero();
  f[quad::x1] = std::numbers::sqrt2 * fa;
  f[quad::x2] = std::numbers::sqrt2 * fb;
  return f;
}

void RotatingFrame::derivative(const Eigen::Vector4d& phi, double t, Eigen::VectorXcd& dz) const {
  phases(t);
  dz.resize(static_cast<Eigen::Index>(2 * n_));
  const double drive_a = -std::numbers::sqrt2 * phi[quad::x1];
  const double drive_b = -std::numbers::sqrt2 * phi[quad::x2];
  for (std::size_t k = 0; k < n_; ++k) {
    const auto i = static_cast<Eigen::Index>(k);
    const Complex ip = I * phase_[i] * coupling_[i];
    dz[i] = ip * drive_a;
    dz[i + static_cast<Eigen::Index>(n_)] = ip * drive_b;
  }
}

void assign_sum(CoupledState& out, const CoupledState& y, double a, const CoupledState& k) {
  gkba::assign_sum(out.quantum, y.quantum, a, k.quantum);
  out.amplitudes = y.amplitudes + a * k.amplitudes;
}

void add_scaled(CoupledState& y, double a, const CoupledState& k) {
  gkba::add_scaled(y.quantum, a, k.quantum);
  y.amplitudes += a * k.amplitudes;
}

CoupledStepper::CoupledStepper(const SystemParams& p, const BathConfig& config)
    : model_(Model::build(p)), config_(config), frame_(config) {}

CoupledState CoupledStepper::initial_state() const {
  CoupledState s;
  s.quantum = gkba::initial_blocked_state(model_.params);
  s.amplitudes = frame_.to_amplitudes(BathState::equilibrium(config_));
  return s;
}

double CoupledStepper::step(CoupledState& s, double dt) {
  if (!rk4_) rk4_.emplace(s);
  rk4_->step(s, s.quantum.t, dt, [this](const CoupledState& y, double t, CoupledState& out) {
    const Eigen::Vector4d f = frame_.force(y.amplitudes, t);
    gkba::rhs(model_, y.quantum, t, out.quantum, &f);
    frame_.derivative(y.quantum.phi, t, out.amplitudes);
  });
  s.quantum.t += dt;
  const double residue = gkba::resymmetrize(s.quantum);
  if (!s.quantum.phi.allFinite() || !s.quantum.gamma.allFinite() || !s.amplitudes.allFinite()) {
    throw NumericalError("coupled GKBA/bath state became non-finite at t = " + std::to_string(s.quantum.t));
  }
  return residue;
}

std::pair<gkba::GkbaState, BathState> coupled_step(const gkba::GkbaState& quantum, const BathState& bath,
                                                   const SystemParams& p, const BathConfig& config, double dt) {
  CoupledStepper stepper(p, config);
  CoupledState s;
  s.quantum = gkba::BlockedState::from_dense(quantum);
  s.amplitudes = stepper.frame().to_amplitudes(bath);
  stepper.step(s, dt);
  return {s.quantum.to_dense(), stepper.frame().to_state(s.amplitudes, s.quantum.t)};
}

}  // namespace dicke::bath
