#include "dicke/gkba.hpp"

#include <cmath>
#include <string>

#include "dicke/error.hpp"
#include "dicke/rk4.hpp"

namespace dicke::gkba {

GkbaState initial_state(const SystemParams& p) {
  GkbaState s;
  static_cast<MomentSet&>(s) = initial_conditions(p);
  s.t = 0.0;
  return s;
}

Eigen::MatrixXcd hf_hamiltonian(const Model& model, const Eigen::MatrixXcd& rho, const Eigen::Vector4d& phi,
                                double t) {
  const auto scale = coupling_scales(model.params, t);
  double field = 0.0;
  for (std::size_t mu = 0; mu < quad::count; ++mu) field += phi[static_cast<Eigen::Index>(mu)] * scale[mu];
  Eigen::MatrixXcd h = model.h0.cast<Complex>() + field * model.dipole.cast<Complex>();
  const Eigen::VectorXcd occ = rho.diagonal();
  h.diagonal() += model.interaction.cast<Complex>() * occ;
  h -= model.interaction.cast<Complex>().cwiseProduct(rho);
  return h;
}

Matrix4cd boson_hamiltonian(const SystemParams& p) {
  return SymplecticStructure::make(p.omega_a, p.omega_b).boson_hamiltonian();
}

std::array<Eigen::MatrixXcd, quad::count> psi_tensor(const Matrix4cd& gamma, const Eigen::MatrixXcd& rho,
                                                     const std::array<Eigen::MatrixXd, quad::count>& g,
                                                     const Matrix4cd& alpha) {
  const Eigen::Index n = rho.rows();
  const Eigen::MatrixXcd rho_gtr = Eigen::MatrixXcd::Identity(n, n) - rho;
  const Matrix4cd gamma_gtr = gamma + alpha;
  std::array<Eigen::MatrixXcd, quad::count> emit, absorb;
  for (std::size_t nu = 0; nu < quad::count; ++nu) {
    const Eigen::MatrixXcd gn = g[nu].cast<Complex>();
    emit[nu] = rho_gtr * gn * rho;
    absorb[nu] = rho * gn * rho_gtr;
  }
  std::array<Eigen::MatrixXcd, quad::count> psi;
  for (std::size_t mu = 0; mu < quad::count; ++mu) {
    psi[mu] = Eigen::MatrixXcd::Zero(n, n);
    for (std::size_t nu = 0; nu < quad::count; ++nu) {
      const auto m = static_cast<Eigen::Index>(mu);
      const auto v = static_cast<Eigen::Index>(nu);
      psi[mu] += gamma_gtr(m, v) * emit[nu] - gamma(m, v) * absorb[nu];
    }
  }
  return psi;
}

CollisionIntegrals collision_integrals(const std::array<Eigen::MatrixXcd, quad::count>& calG,
                                       const std::array<Eigen::MatrixXd, quad::count>& g, const Matrix4cd& alpha) {
  const Eigen::Index n = calG[0].rows();
  CollisionIntegrals out;
  out.electron = Eigen::MatrixXcd::Zero(n, n);
  for (std::size_t mu = 0; mu < quad::count; ++mu) out.electron += I * (g[mu].cast<Complex>() * calG[mu]);
  // trace_[eta][nu] = sum_mj g_eta,mj calG_nu,jm
  Matrix4cd trace;
  for (std::size_t eta = 0; eta < quad::count; ++eta) {
    for (std::size_t nu = 0; nu < quad::count; ++nu) {
      trace(static_cast<Eigen::Index>(eta), static_cast<Eigen::Index>(nu)) =
          (g[eta].cast<Complex>() * calG[nu]).trace();
    }
  }
  out.boson = -I * (alpha * trace);
  return out;
}

void rhs(const Model& model, const GkbaState& s, double t, GkbaState& d, const Eigen::Vector4d* force) {
  const auto g = build_coupling_tensor(model.params, t).dense();
  const Matrix4cd& alpha = model.sym.alpha;
  const Matrix4cd& hb = model.boson_h;
  const Eigen::MatrixXcd he = hf_hamiltonian(model, s.rho, s.phi, t);

  // i dphi/dt = h^b phi + alpha v (+ alpha F), v_nu = sum_ij g_nu,ij rho_ji
  Vector4cd v;
  for (std::size_t nu = 0; nu < quad::count; ++nu) {
    v[static_cast<Eigen::Index>(nu)] = (g[nu].cast<Complex>() * s.rho).trace();
  }
  if (force) v += force->cast<Complex>();
  const Vector4cd idphi = hb * s.phi.cast<Complex>() + alpha * v;
  d.phi = (-I * idphi).real();

  const CollisionIntegrals coll = collision_integrals(s.calG, g, alpha);
  d.rho = -I * (he * s.rho - s.rho * he) - (coll.electron + coll.electron.adjoint());
  d.gamma = -I * (hb * s.gamma - s.gamma * hb) + (coll.boson + coll.boson.adjoint());

  const auto psi = psi_tensor(s.gamma, s.rho, g, alpha);
  for (std::size_t mu = 0; mu < quad::count; ++mu) {
    Eigen::MatrixXcd acc = he * s.calG[mu] - s.calG[mu] * he + psi[mu];
    for (std::size_t nu = 0; nu < quad::count; ++nu) {
      const Complex h = hb(static_cast<Eigen::Index>(mu), static_cast<Eigen::Index>(nu));
      if (h != Complex{}) acc += h * s.calG[nu];
    }
    d.calG[mu] = -I * acc;
  }
}

void assign_sum(GkbaState& out, const GkbaState& y, double a, const GkbaState& k) {
  out.phi = y.phi + a * k.phi;
  out.rho = y.rho + a * k.rho;
  out.gamma = y.gamma + a * k.gamma;
  for (std::size_t mu = 0; mu < quad::count; ++mu) out.calG[mu] = y.calG[mu] + a * k.calG[mu];
}

void add_scaled(GkbaState& y, double a, const GkbaState& k) {
  y.phi += a * k.phi;
  y.rho += a * k.rho;
  y.gamma += a * k.gamma;
  for (std::size_t mu = 0; mu < quad::count; ++mu) y.calG[mu] += a * k.calG[mu];
}

double resymmetrize(GkbaState& s) {
  const double r = (s.rho - s.rho.adjoint()).cwiseAbs().maxCoeff();
  const double g = (s.gamma - s.gamma.adjoint()).cwiseAbs().maxCoeff();
  s.rho = 0.5 * (s.rho + s.rho.adjoint()).eval();
  s.gamma = 0.5 * (s.gamma + s.gamma.adjoint()).eval();
  return std::max(r, g);
}

double photon_number(const Eigen::Vector4d& phi, const Matrix4cd& gamma, std::size_t mode) {
  const auto x = static_cast<Eigen::Index>(quad::x(mode));
  const auto p = static_cast<Eigen::Index>(quad::p(mode));
  return 0.5 * (gamma(x, x).real() + gamma(p, p).real() - 1.0) + 0.5 * (phi[x] * phi[x] + phi[p] * phi[p]);
}

Observables observables(const GkbaState& s) {
  Observables o;
  o.t = s.t;
  o.n_a = photon_number(s.phi, s.gamma, 0);
  o.n_b = photon_number(s.phi, s.gamma, 1);
  const std::size_t L = static_cast<std::size_t>(s.rho.rows()) / 2;
  o.excited.resize(L);
  for (std::size_t j = 0; j < L; ++j) {
    const auto e = static_cast<Eigen::Index>(ElectronIndex::excited(j));
    o.excited[j] = s.rho(e, e).real();
  }
  return o;
}

void ConservationReport::merge(const ConservationReport& o) {
  max_trace_error = std::max(max_trace_error, o.max_trace_error);
  max_block_trace_error = std::max(max_block_trace_error, o.max_block_trace_error);
  min_rho_eigenvalue = std::min(min_rho_eigenvalue, o.min_rho_eigenvalue);
  max_rho_eigenvalue = std::max(max_rho_eigenvalue, o.max_rho_eigenvalue);
  max_rho_asymmetry = std::max(max_rho_asymmetry, o.max_rho_asymmetry);
  max_gamma_asymmetry = std::max(max_gamma_asymmetry, o.max_gamma_asymmetry);
  min_covariance_eigenvalue = std::min(min_covariance_eigenvalue, o.min_covariance_eigenvalue);
}

bool ConservationReport::within(double tol) const {
  return max_trace_error <= tol && max_block_trace_error <= tol && min_rho_eigenvalue >= -tol &&
         max_rho_eigenvalue <= 1.0 + tol && min_covariance_eigenvalue >= -tol && max_rho_asymmetry <= 1e-10 &&
         max_gamma_asymmetry <= 1e-10;
}

namespace {

double min_covariance_eigenvalue(const Matrix4cd& gamma, const Matrix4cd& alpha) {
  const Matrix4cd cov = gamma + 0.5 * alpha;
  Eigen::SelfAdjointEigenSolver<Matrix4cd> es(0.5 * (cov + cov.adjoint()), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

}  // namespace

void accumulate(ConservationReport& r, const GkbaState& s, const Matrix4cd& alpha) {
  const std::size_t L = static_cast<std::size_t>(s.rho.rows()) / 2;
  r.max_trace_error = std::max(r.max_trace_error, std::abs(s.rho.trace().real() - static_cast<double>(L)));
  for (std::size_t j = 0; j < L; ++j) {
    const auto g = static_cast<Eigen::Index>(ElectronIndex::ground(j));
    const auto e = static_cast<Eigen::Index>(ElectronIndex::excited(j));
    r.max_block_trace_error = std::max(r.max_block_trace_error, std::abs(s.rho(g, g).real() + s.rho(e, e).real() - 1.0));
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(s.rho, Eigen::EigenvaluesOnly);
  r.min_rho_eigenvalue = std::min(r.min_rho_eigenvalue, es.eigenvalues().minCoeff());
  r.max_rho_eigenvalue = std::max(r.max_rho_eigenvalue, es.eigenvalues().maxCoeff());
  r.min_covariance_eigenvalue = std::min(r.min_covariance_eigenvalue, min_covariance_eigenvalue(s.gamma, alpha));
}

void accumulate(ConservationReport& r, const BlockedState& s, const Matrix4cd& alpha) {
  double trace = 0.0;
  for (const auto& b : s.rho) {
    const double tr = b(0, 0).real() + b(1, 1).real();
    trace += tr;
    r.max_block_trace_error = std::max(r.max_block_trace_error, std::abs(tr - 1.0));
    // closed-form eigenvalues of a Hermitian 2x2 block
    const double half = 0.5 * tr;
    const double diff = 0.5 * (b(0, 0).real() - b(1, 1).real());
    const double rad = std::sqrt(diff * diff + std::norm(b(1, 0)));
    r.min_rho_eigenvalue = std::min(r.min_rho_eigenvalue, half - rad);
    r.max_rho_eigenvalue = std::max(r.max_rho_eigenvalue, half + rad);
  }
  r.max_trace_error = std::max(r.max_trace_error, std::abs(trace - static_cast<double>(s.sites())));
  r.min_covariance_eigenvalue = std::min(r.min_covariance_eigenvalue, min_covariance_eigenvalue(s.gamma, alpha));
}

namespace {

bool finite(const Eigen::Vector4d& phi, const Matrix4cd& gamma) { return phi.allFinite() && gamma.allFinite(); }

}  // namespace

Stepper::Stepper(const SystemParams& p) : model_(Model::build(p)) {}

double Stepper::step(GkbaState& s, double dt) {
  if (!dense_rk4_) dense_rk4_.emplace(s);
  dense_rk4_->step(s, s.t, dt, [this](const GkbaState& y, double t, GkbaState& out) { rhs(model_, y, t, out); });
  s.t += dt;
  const double residue = resymmetrize(s);
  if (!finite(s.phi, s.gamma) || !s.rho.allFinite()) {
    throw NumericalError("GKBA state became non-finite at t = " + std::to_string(s.t));
  }
  return residue;
}

double Stepper::step(BlockedState& s, double dt) {
  if (!blocked_rk4_) blocked_rk4_.emplace(s);
  blocked_rk4_->step(s, s.t, dt, [this](const BlockedState& y, double t, BlockedState& out) { rhs(model_, y, t, out); });
  s.t += dt;
  const double residue = resymmetrize(s);
  if (!finite(s.phi, s.gamma)) throw NumericalError("GKBA state became non-finite at t = " + std::to_string(s.t));
  return residue;
}

GkbaState step_rk4(const GkbaState& s, const SystemParams& p, double dt) {
  GkbaState out = s;
  Stepper(p).step(out, dt);
  return out;
}

}  // namespace dicke::gkba
