#include "dicke/gkba.hpp"

#include <cmath>

#include "dicke/error.hpp"

namespace dicke::gkba {

namespace {

using Eigen::Matrix2cd;

Matrix2cd sigma_x() {
  Matrix2cd s;
  s << 0.0, 1.0, 1.0, 0.0;
  return s;
}

// Extracts the (g_j, e_j) block of a dense orbital matrix.
Matrix2cd block(const Eigen::MatrixXcd& m, std::size_t j) {
  return m.block<2, 2>(static_cast<Eigen::Index>(ElectronIndex::ground(j)),
                       static_cast<Eigen::Index>(ElectronIndex::ground(j)));
}

}  // namespace

BlockedState BlockedState::from_dense(const GkbaState& s) {
  const std::size_t L = static_cast<std::size_t>(s.rho.rows()) / 2;
  BlockedState b;
  b.phi = s.phi;
  b.gamma = s.gamma;
  b.t = s.t;
  b.rho.resize(L);
  for (auto& c : b.calG) c.resize(L);
  for (std::size_t j = 0; j < L; ++j) {
    b.rho[j] = block(s.rho, j);
    for (std::size_t mu = 0; mu < quad::count; ++mu) b.calG[mu][j] = block(s.calG[mu], j);
  }
  return b;
}

GkbaState BlockedState::to_dense() const {
  const std::size_t L = sites();
  const auto n = static_cast<Eigen::Index>(2 * L);
  GkbaState s;
  s.phi = phi;
  s.gamma = gamma;
  s.t = t;
  s.rho = Eigen::MatrixXcd::Zero(n, n);
  for (auto& c : s.calG) c = Eigen::MatrixXcd::Zero(n, n);
  for (std::size_t j = 0; j < L; ++j) {
    const auto o = static_cast<Eigen::Index>(ElectronIndex::ground(j));
    s.rho.block<2, 2>(o, o) = rho[j];
    for (std::size_t mu = 0; mu < quad::count; ++mu) s.calG[mu].block<2, 2>(o, o) = calG[mu][j];
  }
  return s;
}

BlockedState initial_blocked_state(const SystemParams& p) { return BlockedState::from_dense(initial_state(p)); }

void rhs(const Model& model, const BlockedState& s, double t, BlockedState& d, const Eigen::Vector4d* force) {
  const std::size_t L = s.sites();
  const auto scale = coupling_scales(model.params, t);
  const Matrix4cd& alpha = model.sym.alpha;
  const Matrix4cd& hb = model.boson_h;
  const Matrix2cd sx = sigma_x();
  const double U = model.params.U_e;

  Vector4cd c;
  for (std::size_t mu = 0; mu < quad::count; ++mu) c[static_cast<Eigen::Index>(mu)] = scale[mu];
  double field = 0.0;
  for (std::size_t mu = 0; mu < quad::count; ++mu) field += s.phi[static_cast<Eigen::Index>(mu)] * scale[mu];

  const Matrix4cd gamma_gtr = s.gamma + alpha;
  const Vector4cd a = gamma_gtr * c;
  const Vector4cd b = s.gamma * c;

  double dipole_sum = 0.0;  // sum_j Tr(sigma rho_j)
  Vector4cd w = Vector4cd::Zero();
  d.rho.resize(L);
  for (auto& v : d.calG) v.resize(L);

  for (std::size_t j = 0; j < L; ++j) {
    const Matrix2cd& r = s.rho[j];
    dipole_sum += 2.0 * r(0, 1).real();

    double hartree = 0.0;
    if (U != 0.0) {
      if (j > 0) hartree += s.rho[j - 1](1, 1).real();
      if (j + 1 < L) hartree += s.rho[j + 1](1, 1).real();
      hartree *= U;
    }
    Matrix2cd h;
    h << model.levels.ground[j], field, field, model.levels.excited[j] + hartree;

    Matrix2cd K = Matrix2cd::Zero();
    for (std::size_t mu = 0; mu < quad::count; ++mu) {
      if (scale[mu] != 0.0) K += scale[mu] * s.calG[mu][j];
    }
    const Matrix2cd Ie = I * (sx * K);
    d.rho[j] = -I * (h * r - r * h) - (Ie + Ie.adjoint());

    const Matrix2cd r_gtr = Matrix2cd::Identity() - r;
    const Matrix2cd M1 = r_gtr * sx * r;
    const Matrix2cd M2 = r * sx * r_gtr;
    for (std::size_t mu = 0; mu < quad::count; ++mu) {
      const auto m = static_cast<Eigen::Index>(mu);
      const Matrix2cd& G = s.calG[mu][j];
      w[m] += G(1, 0) + G(0, 1);
      Matrix2cd acc = h * G - G * h + a[m] * M1 - b[m] * M2;
      for (std::size_t nu = 0; nu < quad::count; ++nu) {
        const Complex hv = hb(m, static_cast<Eigen::Index>(nu));
        if (hv != Complex{}) acc += hv * s.calG[nu][j];
      }
      d.calG[mu][j] = -I * acc;
    }
  }

  Vector4cd v = dipole_sum * c;
  if (force) v += force->cast<Complex>();
  d.phi = (-I * (hb * s.phi.cast<Complex>() + alpha * v)).real();

  const Matrix4cd Ib = -I * (alpha * c) * w.transpose();
  d.gamma = -I * (hb * s.gamma - s.gamma * hb) + (Ib + Ib.adjoint());
  d.t = 0.0;
}

void assign_sum(BlockedState& out, const BlockedState& y, double a, const BlockedState& k) {
  const std::size_t L = y.sites();
  out.phi = y.phi + a * k.phi;
  out.gamma = y.gamma + a * k.gamma;
  out.rho.resize(L);
  for (std::size_t j = 0; j < L; ++j) out.rho[j] = y.rho[j] + a * k.rho[j];
  for (std::size_t mu = 0; mu < quad::count; ++mu) {
    out.calG[mu].resize(L);
    for (std::size_t j = 0; j < L; ++j) out.calG[mu][j] = y.calG[mu][j] + a * k.calG[mu][j];
  }
}

void add_scaled(BlockedState& y, double a, const BlockedState& k) {
  const std::size_t L = y.sites();
  y.phi += a * k.phi;
  y.gamma += a * k.gamma;
  for (std::size_t j = 0; j < L; ++j) y.rho[j] += a * k.rho[j];
  for (std::size_t mu = 0; mu < quad::count; ++mu) {
    for (std::size_t j = 0; j < L; ++j) y.calG[mu][j] += a * k.calG[mu][j];
  }
}

double resymmetrize(BlockedState& s) {
  double residue = (s.gamma - s.gamma.adjoint()).cwiseAbs().maxCoeff();
  s.gamma = 0.5 * (s.gamma + s.gamma.adjoint()).eval();
  for (auto& r : s.rho) {
    residue = std::max(residue, (r - r.adjoint()).cwiseAbs().maxCoeff());
    r = 0.5 * (r + r.adjoint()).eval();
  }
  return residue;
}

Observables observables(const BlockedState& s) {
  Observables o;
  o.t = s.t;
  o.n_a = photon_number(s.phi, s.gamma, 0);
  o.n_b = photon_number(s.phi, s.gamma, 1);
  o.excited.resize(s.sites());
  for (std::size_t j = 0; j < s.sites(); ++j) o.excited[j] = s.rho[j](1, 1).real();
  return o;
}

}  // namespace dicke::gkba
