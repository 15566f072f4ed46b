#include "dicke/model.hpp"

#include <cmath>
#include <numbers>

namespace dicke {

SiteLevels disorder_levels(const SystemParams& p) {
  SiteLevels out;
  out.ground.resize(p.L);
  out.excited.resize(p.L);
  const double L = static_cast<double>(p.L);
  for (std::size_t j = 0; j < p.L; ++j) {
    const double s = static_cast<double>(j);
    out.ground[j] = p.eps_g - 0.5 * p.delta * std::sin(std::numbers::pi * s / L);
    out.excited[j] = p.eps_e + 0.5 * p.delta * std::sin(3.0 * std::numbers::pi * s / L);
  }
  return out;
}

SymplecticStructure SymplecticStructure::make(double omega_a, double omega_b) {
  SymplecticStructure s;
  s.alpha.setZero();
  s.omega.setZero();
  const double freq[2] = {omega_a, omega_b};
  for (std::size_t m = 0; m < 2; ++m) {
    const auto x = quad::x(m);
    const auto px = quad::p(m);
    s.alpha(x, px) = I;
    s.alpha(px, x) = -I;
    s.omega(x, x) = 0.5 * freq[m];
    s.omega(px, px) = 0.5 * freq[m];
  }
  return s;
}

Matrix4cd SymplecticStructure::boson_hamiltonian() const {
  return 2.0 * alpha * omega.cast<Complex>();
}

std::array<Eigen::MatrixXd, quad::count> CouplingTensor::dense() const {
  std::array<Eigen::MatrixXd, quad::count> out;
  for (std::size_t mu = 0; mu < quad::count; ++mu) out[mu] = component(mu);
  return out;
}

namespace {

Eigen::MatrixXd dipole_pattern(std::size_t L) {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(2 * L, 2 * L);
  for (std::size_t j = 0; j < L; ++j) {
    d(ElectronIndex::ground(j), ElectronIndex::excited(j)) = 1.0;
    d(ElectronIndex::excited(j), ElectronIndex::ground(j)) = 1.0;
  }
  return d;
}

}  // namespace

std::array<double, quad::count> coupling_scales(const SystemParams& p, double t) {
  std::array<double, quad::count> scale{};
  scale[quad::x1] = std::numbers::sqrt2 * p.g_a;
  scale[quad::x2] = std::numbers::sqrt2 * p.probe_coupling(t);
  return scale;
}

CouplingTensor build_coupling_tensor(const SystemParams& p, double t) {
  return CouplingTensor{dipole_pattern(p.L), coupling_scales(p, t)};
}

Matrix4cd vacuum_fluctuations(const SymplecticStructure& sym) {
  return 0.5 * (Matrix4cd::Identity() - sym.alpha);
}

MomentSet initial_conditions(const SystemParams& p) {
  const std::size_t n = 2 * p.L;
  MomentSet m;
  m.phi.setZero();
  m.phi[quad::x1] = std::numbers::sqrt2 * p.beta;
  m.rho = Eigen::MatrixXcd::Zero(n, n);
  for (std::size_t j = 0; j < p.L; ++j) m.rho(ElectronIndex::ground(j), ElectronIndex::ground(j)) = 1.0;
  m.gamma = vacuum_fluctuations(SymplecticStructure::make(p.omega_a, p.omega_b));
  for (auto& g : m.calG) g = Eigen::MatrixXcd::Zero(n, n);
  return m;
}

Model Model::build(const SystemParams& p) {
  Model m;
  m.params = p;
  m.levels = disorder_levels(p);
  m.sym = SymplecticStructure::make(p.omega_a, p.omega_b);
  m.boson_h = m.sym.boson_hamiltonian();
  const std::size_t n = 2 * p.L;
  m.h0 = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t j = 0; j < p.L; ++j) {
    m.h0(ElectronIndex::ground(j), ElectronIndex::ground(j)) = m.levels.ground[j];
    m.h0(ElectronIndex::excited(j), ElectronIndex::excited(j)) = m.levels.excited[j];
  }
  m.interaction = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t j = 0; j + 1 < p.L; ++j) {
    const auto a = ElectronIndex::excited(j);
    const auto b = ElectronIndex::excited(j + 1);
    m.interaction(a, b) = p.U_e;
    m.interaction(b, a) = p.U_e;
  }
  m.dipole = dipole_pattern(p.L);
  return m;
}

}  // namespace dicke
