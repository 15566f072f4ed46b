#include <doctest.h>

#include <cmath>
#include <limits>

#include "dicke/error.hpp"
#include "dicke/sweep.hpp"

using namespace dicke;
using namespace dicke::sweep;

namespace {

SweepRequest small_request(Engine engine) {
  SweepRequest r;
  r.params.L = 2;
  r.params.t_end = 20.0;
  r.engine = engine;
  r.grid = FrequencyGrid::uniform(0.9, 1.1, 0.05);
  r.snapshots = {10.0, 20.0};
  r.N_b = 3;
  return r;
}

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

}  // namespace

TEST_CASE("frequency grids") {
  const auto g = FrequencyGrid::uniform(kDefaultOmegaMin, kDefaultOmegaMax, kDefaultOmegaStep);
  CHECK(g.size() == 241);
  CHECK(g.omegas.front() == 0.3);
  CHECK(g.omegas.back() == doctest::Approx(1.5));
  CHECK(g.omegas[140] == doctest::Approx(1.0));
  CHECK_THROWS_AS(FrequencyGrid::uniform(0.3, 1.5, 0.007), InvalidArgument);
  CHECK_THROWS_AS(FrequencyGrid::list({1.0, 0.9}), InvalidArgument);
  CHECK_THROWS_AS(FrequencyGrid::list({0.0, 0.9}), InvalidArgument);
  CHECK_THROWS_AS(FrequencyGrid::list({}), InvalidArgument);
  CHECK(FrequencyGrid::list({0.5}).size() == 1);
}

TEST_CASE("default snapshots") {
  CHECK(default_snapshots(250.0) == std::vector<double>{50, 100, 150, 200, 250});
  CHECK(default_snapshots(120.0) == std::vector<double>{50, 100, 120});
  CHECK(default_snapshots(30.0) == std::vector<double>{30});
}

TEST_CASE("engine and basis names") {
  CHECK(parse_engine("gkba") == Engine::gkba);
  CHECK(parse_engine("ed") == Engine::ed);
  CHECK_THROWS_AS(parse_engine("dmft"), InvalidArgument);
  CHECK(parse_ed_basis("spin") == EdBasis::spin);
  CHECK(std::string(to_string(EdBasis::automatic)) == "auto");
  SystemParams p;
  CHECK(resolve_basis(EdBasis::automatic, p) == EdBasis::spin);
  p.U_e = 0.1;
  CHECK(resolve_basis(EdBasis::automatic, p) == EdBasis::full);
  CHECK(resolve_basis(EdBasis::spin, p) == EdBasis::spin);
}

TEST_CASE("peak metrics") {
  const std::vector<double> w{0.7, 0.8, 0.9, 1.0, 1.1, 1.2, 1.3};
  SUBCASE("single interior maximum") {
    const auto m = peak_metrics(w, vec({9, 1, 2, 5, 2, 1, 9}), kShgWindow);
    CHECK(m.index == 3);
    CHECK(m.omega_max == 1.0);
    CHECK(m.I_max == 5.0);
  }
  SUBCASE("ties resolve to the lower frequency") {
    const auto m = peak_metrics(w, vec({0, 1, 4, 2, 4, 1, 0}), kShgWindow);
    CHECK(m.omega_max == 0.9);
  }
  SUBCASE("monotone row peaks at the window edge") {
    const auto m = peak_metrics(w, vec({1, 2, 3, 4, 5, 6, 7}), kShgWindow);
    CHECK(m.omega_max == 1.2);
  }
  SUBCASE("single grid point inside the window") {
    const auto m = peak_metrics(w, vec({1, 2, 3, 4, 5, 6, 7}), Window{0.95, 1.05});
    CHECK(m.index == 3);
  }
  SUBCASE("NaN entries are skipped") {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    const auto m = peak_metrics(w, vec({0, nan, 1, nan, 0.5, 0, 0}), kShgWindow);
    CHECK(m.omega_max == 0.9);
    CHECK_THROWS_AS(peak_metrics(w, vec({0, nan, nan, nan, nan, nan, 0}), kShgWindow), NumericalError);
  }
  SUBCASE("empty window") {
    CHECK_THROWS_AS(peak_metrics(w, vec({1, 2, 3, 4, 5, 6, 7}), Window{1.01, 1.09}), InvalidArgument);
  }
}

TEST_CASE("peak counting") {
  const std::vector<double> w{0.8, 0.85, 0.9, 0.95, 1.0, 1.05, 1.1, 1.15, 1.2};
  CHECK(count_peaks(w, vec({0, 1, 0, 0, 5, 0, 0, 2, 0}), kShgWindow) == 3);
  CHECK(count_peaks(w, vec({0, 0.1, 0, 0, 5, 0, 0, 2, 0}), kShgWindow) == 2);    // below 5 %
  CHECK(count_peaks(w, vec({0, 1, 3, 3, 3, 1, 0, 0, 0}), kShgWindow) == 1);      // plateau
  CHECK(count_peaks(w, vec({1, 2, 3, 4, 5, 6, 7, 8, 9}), kShgWindow) == 0);      // edge only
  CHECK(count_peaks(w, vec({0, 1, 0, 1, 0, 1, 0, 1, 0}), kShgWindow, 0.0) == 4);
}

TEST_CASE("mean-field shift estimate") {
  const auto a = hf_shift_estimate(100.0, 0.5, 3.0);
  CHECK(a.omega == doctest::Approx(1.0 + 100.0 * (1.0 - 2.0 * std::sqrt(0.045))));
  CHECK(a.omega == doctest::Approx(58.57).epsilon(1e-4));
  CHECK(a.valid);
  const auto edge = hf_shift_estimate(18.0, 0.5, 3.0);
  CHECK(edge.omega == doctest::Approx(1.0));
  CHECK(edge.valid);
  const auto small = hf_shift_estimate(0.5, 0.5, 3.0);
  CHECK(small.omega == doctest::Approx(-1.5));
  CHECK_FALSE(small.valid);
  CHECK_THROWS_AS(hf_shift_estimate(-1.5, 0.5, 3.0), InvalidArgument);
  CHECK_THROWS_AS(hf_shift_estimate(0.0, 0.5, 3.0), InvalidArgument);
}

TEST_CASE("vanishing probe coupling gives a flat zero spectrum") {
  for (Engine e : {Engine::gkba, Engine::ed}) {
    auto r = small_request(e);
    r.params.g_prime = 0.0;
    const auto s = run_sweep(r);
    CHECK(s.failures.empty());
    CHECK(s.values.cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("sweep surfaces are well formed and independent of the worker count") {
  for (Engine e : {Engine::gkba, Engine::ed}) {
    auto r = small_request(e);
    const auto one = run_sweep(r);
    r.workers = 3;
    const auto three = run_sweep(r);
    CHECK(one.values == three.values);
    CHECK(one.values.rows() == 5);
    CHECK(one.values.cols() == 2);
    CHECK(one.times == std::vector<double>{10.0, 20.0});
    CHECK(one.values.minCoeff() >= -1e-8);
    CHECK(one.values.maxCoeff() > 0.0);
    CHECK(one.failures.empty());
    CHECK(one.engine == to_string(e));
    CHECK(one.row(20.0).size() == 5);
    CHECK_THROWS_AS(one.snapshot_index(15.0), InvalidArgument);
  }
}

TEST_CASE("sweep points match single runs") {
  const auto r = small_request(Engine::gkba);
  const auto s = run_sweep(r);
  SystemParams p = r.params;
  p.omega_b = 1.0;
  gkba::RunOptions o;
  o.stride = 1000;
  const auto direct = gkba::run(p, o);
  CHECK(s.values(2, 0) == doctest::Approx(direct.samples[1].n_b).epsilon(1e-13));
  CHECK(s.values(2, 1) == doctest::Approx(direct.samples[2].n_b).epsilon(1e-13));
  CHECK(s.conservation.within());
}

TEST_CASE("engines agree at weak coupling") {
  auto r = small_request(Engine::gkba);
  r.params.L = 1;
  const auto [ed, gk] = run_both_engines(r);
  CHECK(ed.engine == "ed");
  const auto rep = compare_surfaces(ed, gk, 20.0);
  CHECK(rep.peak_linf < 0.05);
  CHECK(ed.max_norm_drift < 1e-9);
}

TEST_CASE("surface comparison") {
  const auto s = run_sweep(small_request(Engine::gkba));
  const auto self = compare_surfaces(s, s, 20.0);
  CHECK(self.linf == 0.0);
  CHECK(self.omega_shift == 0.0);
  CHECK(self.relative_peak == 0.0);
  auto other = s;
  other.omegas.back() = 1.2;
  CHECK_THROWS_AS(compare_surfaces(s, other, 20.0), InvalidArgument);
  other = s;
  other.times.back() = 25.0;
  CHECK_THROWS_AS(compare_surfaces(s, other, 20.0), InvalidArgument);
}

TEST_CASE("failed points are recorded and the sweep continues") {
  auto r = small_request(Engine::ed);
  r.params.delta = 0.1;
  r.basis = EdBasis::spin;  // not valid with disorder
  const auto s = run_sweep(r);
  CHECK(s.failures.size() == 5);
  CHECK(std::isnan(s.values(0, 0)));
  CHECK(s.failures[1].omega == doctest::Approx(0.95));
  CHECK_FALSE(s.failures[0].message.empty());
}

TEST_CASE("snapshots off the time lattice are rejected") {
  auto r = small_request(Engine::gkba);
  r.snapshots = {10.005};
  CHECK_THROWS_AS(run_sweep(r), InvalidArgument);
  r.snapshots = {30.0};
  CHECK_THROWS_AS(run_sweep(r), InvalidArgument);
}
