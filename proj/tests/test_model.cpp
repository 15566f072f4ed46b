#include <doctest.h>

#include <cmath>
#include <numbers>

#include "dicke/model.hpp"

using namespace dicke;

TEST_CASE("electron and boson index conventions") {
  CHECK(ElectronIndex::ground(0) == 0);
  CHECK(ElectronIndex::excited(0) == 1);
  CHECK(ElectronIndex::flat(Level::excited, 2) == 5);
  CHECK(ElectronIndex::split(4).first == Level::ground);
  CHECK(ElectronIndex::split(4).second == 2);
  CHECK(quad::x(1) == quad::x2);
  CHECK(quad::p(0) == quad::p1);
}

TEST_CASE("pseudo-disorder levels") {
  SystemParams p;
  p.delta = 0.2;
  const auto lv = disorder_levels(p);
  REQUIRE(lv.ground.size() == 3);
  CHECK(lv.ground[0] == doctest::Approx(0.0));
  CHECK(lv.excited[0] == doctest::Approx(1.0));
  CHECK(lv.ground[1] == doctest::Approx(-0.1 * std::sin(std::numbers::pi / 3.0)));
  CHECK(lv.ground[1] == doctest::Approx(-0.0866).epsilon(1e-3));
  CHECK(lv.excited[1] == doctest::Approx(1.0 + 0.1 * std::sin(std::numbers::pi)).epsilon(1e-12));
  p.delta = 0.0;
  for (double e : disorder_levels(p).ground) CHECK(e == 0.0);
}

TEST_CASE("symplectic structure and boson Hamiltonian") {
  const auto s = SymplecticStructure::make(0.5, 1.0);
  CHECK(s.alpha(0, 1) == I);
  CHECK(s.alpha(1, 0) == -I);
  CHECK((s.alpha - s.alpha.adjoint()).norm() == 0.0);
  const Matrix4cd hb = s.boson_hamiltonian();
  CHECK(hb(0, 1) == Complex(0.0, 0.5));
  CHECK(hb(1, 0) == Complex(0.0, -0.5));
  CHECK(hb(2, 3) == Complex(0.0, 1.0));
  CHECK(std::abs(hb(0, 0)) == 0.0);
  const Matrix4cd g = vacuum_fluctuations(s);
  CHECK(g(0, 0).real() == doctest::Approx(0.5));
  CHECK(g(0, 1) == Complex(0.0, -0.5));
}

TEST_CASE("coupling tensor entries") {
  const SystemParams p;
  const auto c0 = build_coupling_tensor(p, 0.0);
  CHECK(c0.scale[quad::x1] == doctest::Approx(std::sqrt(2.0) * 0.03));
  CHECK(c0.scale[quad::p1] == 0.0);
  CHECK(c0.scale[quad::p2] == 0.0);
  const auto c50 = build_coupling_tensor(p, 50.0);
  CHECK(c50.scale[quad::x2] == doctest::Approx(std::sqrt(2.0) * 0.01 * std::exp(-1.0)));
  const auto g = c50.dense();
  CHECK(g[quad::x1](0, 1) == doctest::Approx(std::sqrt(2.0) * 0.03));
  CHECK(g[quad::x1](0, 2) == 0.0);
  CHECK(g[quad::x1](2, 3) == doctest::Approx(std::sqrt(2.0) * 0.03));
  CHECK((g[quad::x2] - g[quad::x2].transpose()).norm() == 0.0);
}

TEST_CASE("initial moments") {
  const SystemParams p;
  const MomentSet m = initial_conditions(p);
  CHECK(m.phi[quad::x1] == doctest::Approx(3.0 * std::sqrt(2.0)));
  CHECK(m.phi[quad::p1] == 0.0);
  CHECK(m.rho.trace().real() == doctest::Approx(3.0));
  CHECK(m.rho(1, 1) == Complex(0.0));
  for (const auto& g : m.calG) CHECK(g.norm() == 0.0);
}

TEST_CASE("interaction matrix couples excited levels of neighbouring sites") {
  SystemParams p;
  p.L = 4;
  p.U_e = 0.5;
  const Model m = Model::build(p);
  CHECK(m.interaction(1, 3) == 0.5);
  CHECK(m.interaction(3, 5) == 0.5);
  CHECK(m.interaction(1, 5) == 0.0);
  CHECK(m.interaction(1, 7) == 0.0);  // open chain
  CHECK(m.interaction(0, 2) == 0.0);
  CHECK(m.interaction.sum() == doctest::Approx(6 * 0.5));
}
