#include <doctest.h>

#include <cmath>
#include <vector>

#include "dicke/ed.hpp"
#include "dicke/error.hpp"
#include "dicke/gkba.hpp"

using namespace dicke;
using namespace dicke::gkba;

namespace {

// Exact moments at t0 - h, t0, t0 + h from full-basis ED.
std::vector<MomentSet> ed_moments(const SystemParams& p, double t0, double h, int N_a, int N_b) {
  const ed::FockBasis basis(p.L, N_a, N_b);
  const auto H = ed::assemble_hamiltonian(basis, p);
  std::vector<MomentSet> out;
  for (double t : {t0 - h, t0, t0 + h}) {
    ed::PropagationOptions o;
    o.dt = h / 20.0;
    o.t_end = t;
    o.stride = 1u << 30;
    const auto r = ed::propagate(ed::initial_state(basis, p.beta), H, basis, o);
    out.push_back(ed::moments(basis, r.final_state.amplitudes));
  }
  return out;
}

double max_abs(const Eigen::MatrixXcd& m) { return m.cwiseAbs().maxCoeff(); }

// Energy of the closed electron-photon system (U_e = 0, probe coupling constant).
double total_energy(const Model& m, const GkbaState& s) {
  const auto g = build_coupling_tensor(m.params, s.t).dense();
  double e = (m.h0.cast<Complex>() * s.rho).trace().real();
  for (int mu = 0; mu < 4; ++mu) {
    const Eigen::MatrixXcd gm = g[mu].cast<Complex>();
    e += s.phi[mu] * (gm * s.rho).trace().real() + (gm * s.calG[mu]).trace().real();
    e += m.sym.omega(mu, mu) * (s.phi[mu] * s.phi[mu] + s.gamma(mu, mu).real());
  }
  return e;
}

GkbaState evolved_dense_state(const SystemParams& p, int steps) {
  Stepper st(p);
  GkbaState s = initial_state(p);
  for (int n = 0; n < steps; ++n) st.step(s, p.dt);
  return s;
}

}  // namespace

TEST_CASE("equations of motion reproduce the exact initial slope (L = 1)") {
  SystemParams p;
  p.L = 1;
  p.beta = 1.0;
  p.g_a = 0.3;
  p.g_prime = 0.2;
  const double h = 1e-3;
  const auto M = ed_moments(p, h, h, 20, 6);  // t = 0, h, 2h
  const Model model = Model::build(p);
  GkbaState s;
  static_cast<MomentSet&>(s) = M[0];
  GkbaState d = s;
  rhs(model, s, 0.0, d);
  // one-sided second-order difference at t = 0
  auto fd = [&](auto get) {
    decltype(get(M[0])) r = (-3.0 * get(M[0]) + 4.0 * get(M[1]) - get(M[2])) / (2.0 * h);
    return r;
  };
  for (int mu = 0; mu < 4; ++mu) {
    const Eigen::MatrixXcd slope = fd([&](const MomentSet& m) { return Eigen::MatrixXcd(m.calG[mu]); });
    CHECK(max_abs(slope - d.calG[mu]) < 1e-6);
  }
  CHECK(max_abs(fd([](const MomentSet& m) { return Eigen::MatrixXcd(m.rho); }) - d.rho) < 1e-6);
  CHECK(max_abs(fd([](const MomentSet& m) { return Eigen::MatrixXcd(m.gamma); }) - d.gamma) < 1e-6);
  const Eigen::Vector4d dphi = fd([](const MomentSet& m) { return Eigen::Vector4d(m.phi); });
  CHECK((dphi - d.phi).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("correlator slope error at later times shrinks with the coupling") {
  // With correlations present the closure is approximate; its error relative
  // to the exact slope must vanish faster than the coupling itself.
  std::vector<double> rel;
  for (double g : {0.1, 0.05, 0.025}) {
    SystemParams p;
    p.L = 1;
    p.beta = 1.0;
    p.g_a = g;
    p.g_prime = g;
    p.Gamma = 0.0;
    p.omega_a = 0.7;
    p.omega_b = 1.3;
    const double h = 1e-3, t0 = 2.0;
    const auto M = ed_moments(p, t0, h, 20, 8);
    GkbaState s;
    static_cast<MomentSet&>(s) = M[1];
    s.t = t0;
    GkbaState d = s;
    rhs(Model::build(p), s, t0, d);
    double err = 0.0, mag = 0.0;
    for (int mu = 0; mu < 4; ++mu) {
      const Eigen::MatrixXcd slope = (M[2].calG[mu] - M[0].calG[mu]) / (2.0 * h);
      err = std::max(err, max_abs(slope - d.calG[mu]));
      mag = std::max(mag, max_abs(slope));
    }
    rel.push_back(err / mag);
  }
  CHECK(rel[0] < 0.1);
  CHECK(rel[1] < 0.5 * rel[0]);
  CHECK(rel[2] < 0.5 * rel[1]);
}

TEST_CASE("Hartree-Fock Hamiltonian") {
  SystemParams p;
  p.L = 3;
  p.U_e = 0.5;
  const Model m = Model::build(p);
  MomentSet s = initial_conditions(p);
  s.rho(3, 3) = 0.4;  // excited level of the middle TLS
  s.rho(2, 2) = 0.6;
  const auto h = hf_hamiltonian(m, s.rho, s.phi, 0.0);
  CHECK(h(0, 1).real() == doctest::Approx(0.18));  // 3 sqrt2 * sqrt2 * 0.03
  CHECK(h(1, 1).real() == doctest::Approx(1.0 + 0.5 * 0.4));
  CHECK(h(5, 5).real() == doctest::Approx(1.0 + 0.5 * 0.4));
  CHECK(h(3, 3).real() == doctest::Approx(1.0));
  CHECK(std::abs(h(1, 3)) == doctest::Approx(0.0));  // exchange needs inter-TLS coherence
}

TEST_CASE("photon numbers") {
  Eigen::Vector4d phi = Eigen::Vector4d::Zero();
  phi[quad::x1] = 3.0 * std::sqrt(2.0);
  const Matrix4cd vac = vacuum_fluctuations(SymplecticStructure::make(0.5, 1.0));
  CHECK(photon_number(phi, vac, 0) == doctest::Approx(9.0));
  CHECK(photon_number(phi, vac, 1) == doctest::Approx(0.0));
  Matrix4cd g = vac;
  g(2, 2) = 1.5;
  g(3, 3) = 1.5;
  CHECK(photon_number(phi, g, 1) == doctest::Approx(1.0));
}

TEST_CASE("dense and blocked kernels agree") {
  SystemParams p;
  p.L = 4;
  p.delta = 0.2;
  p.U_e = 0.3;
  p.omega_b = 1.05;
  const GkbaState s = evolved_dense_state(p, 400);
  const Model m = Model::build(p);
  GkbaState dd = s;
  rhs(m, s, s.t, dd);
  const BlockedState b = BlockedState::from_dense(s);
  BlockedState db = b;
  rhs(m, b, s.t, db);
  const GkbaState conv = db.to_dense();
  CHECK(max_abs(conv.rho - dd.rho) < 1e-14);
  CHECK(max_abs(conv.gamma - dd.gamma) < 1e-14);
  CHECK((conv.phi - dd.phi).cwiseAbs().maxCoeff() < 1e-14);
  for (int mu = 0; mu < 4; ++mu) CHECK(max_abs(conv.calG[mu] - dd.calG[mu]) < 1e-14);

  RunOptions o;
  o.stride = 100;
  p.t_end = 5.0;
  o.kernel = Kernel::dense;
  const auto rd = run(p, o);
  o.kernel = Kernel::blocked;
  const auto rb = run(p, o);
  REQUIRE(rd.samples.size() == rb.samples.size());
  for (std::size_t i = 0; i < rd.samples.size(); ++i) {
    CHECK(rd.samples[i].n_b == doctest::Approx(rb.samples[i].n_b).epsilon(1e-12));
  }
}

TEST_CASE("the state keeps its per-TLS block structure") {
  SystemParams p;
  p.L = 3;
  p.delta = 0.1;
  p.U_e = 0.5;
  const GkbaState s = evolved_dense_state(p, 500);
  Eigen::MatrixXcd off = s.rho;
  for (int j = 0; j < 3; ++j) off.block<2, 2>(2 * j, 2 * j).setZero();
  CHECK(max_abs(off) == 0.0);
}

TEST_CASE("trace of rho is a constant of motion") {
  SystemParams p;
  p.L = 3;
  p.delta = 0.2;
  const GkbaState s = evolved_dense_state(p, 300);
  GkbaState d = s;
  rhs(Model::build(p), s, s.t, d);
  CHECK(std::abs(d.rho.trace()) < 1e-12);
  for (int j = 0; j < 3; ++j) CHECK(std::abs(d.rho(2 * j, 2 * j) + d.rho(2 * j + 1, 2 * j + 1)) < 1e-12);
}

TEST_CASE("free photon energy is conserved") {
  SystemParams p;
  p.L = 1;
  p.g_a = 0.0;
  p.g_prime = 0.0;
  Stepper st(p);
  BlockedState s = initial_blocked_state(p);
  const double e0 = 0.5 * (s.phi.squaredNorm() + s.gamma.trace().real());
  for (int n = 0; n < 25000; ++n) st.step(s, p.dt);
  const double e1 = 0.5 * (s.phi.squaredNorm() + s.gamma.trace().real());
  CHECK(std::abs(e1 - e0) < 1e-10);
  CHECK(observables(s).n_a == doctest::Approx(9.0).epsilon(1e-10));
}

TEST_CASE("total energy of the closed system is conserved") {
  SystemParams p;
  p.L = 3;
  p.Gamma = 0.0;
  p.omega_b = 1.0;
  const Model m = Model::build(p);
  Stepper st(p);
  GkbaState s = initial_state(p);
  const double e0 = total_energy(m, s);
  for (int n = 0; n < 5000; ++n) st.step(s, p.dt);
  CHECK(std::abs(total_energy(m, s) - e0) < 1e-9);
}

TEST_CASE("run bookkeeping and conservation report") {
  SystemParams p;
  p.L = 3;
  p.t_end = 20.0;
  RunOptions o;
  o.stride = 500;
  std::vector<double> seen;
  const auto r = run(p, o, [&](const Observables& obs) { seen.push_back(obs.t); });
  CHECK(r.steps == 2000);
  REQUIRE(r.samples.size() == 5);
  CHECK(r.samples.front().t == 0.0);
  CHECK(r.samples.back().t == doctest::Approx(20.0));
  CHECK(seen.size() == 5);
  CHECK(r.samples.front().n_b == 0.0);
  CHECK(r.conservation.within(1e-8));
  CHECK(r.conservation.max_trace_error < 1e-12);
  CHECK(r.final_state.rho.trace().real() == doctest::Approx(3.0));
}

TEST_CASE("zero probe coupling gives no emission") {
  SystemParams p;
  p.L = 2;
  p.g_prime = 0.0;
  p.t_end = 30.0;
  const auto r = run(p, RunOptions{});
  for (const auto& s : r.samples) CHECK(s.n_b == 0.0);
}

TEST_CASE("resymmetrize removes anti-Hermitian residue") {
  SystemParams p;
  p.L = 2;
  GkbaState s = initial_state(p);
  s.rho(0, 1) = Complex(0.1, 0.0);
  const double r = resymmetrize(s);
  CHECK(r == doctest::Approx(0.1));
  CHECK(s.rho(0, 1) == Complex(0.05, 0.0));
  CHECK(s.rho(1, 0) == Complex(0.05, 0.0));
}

TEST_CASE("step_rk4 agrees with the stepper") {
  SystemParams p;
  p.L = 2;
  const GkbaState s0 = initial_state(p);
  const GkbaState a = step_rk4(s0, p, p.dt);
  GkbaState b = s0;
  Stepper(p).step(b, p.dt);
  CHECK(max_abs(a.rho - b.rho) == 0.0);
  CHECK(a.t == doctest::Approx(p.dt));
}
