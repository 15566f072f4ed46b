#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <string>

#include "dicke/config.hpp"
#include "dicke/error.hpp"

using namespace dicke;

namespace {

ConfigError config_error(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e;
  }
  FAIL("expected a ConfigError");
  return ConfigError(0, "", "");
}

std::string to_text(const std::vector<std::pair<std::string, std::string>>& entries) {
  std::string out;
  for (const auto& [k, v] : entries) out += k + " = " + v + "\n";
  return out;
}

}  // namespace

TEST_CASE("an empty config gives the defaults") {
  const RunConfig c = parse_config("");
  CHECK(c.engine == sweep::Engine::gkba);
  CHECK(c.system.L == 3);
  CHECK(c.system.g_a == 0.03);
  CHECK(c.system.beta == 3.0);
  CHECK(c.system.t_end == 250.0);
  CHECK(c.N_a == -1);
  CHECK(c.N_b == 6);
  CHECK_FALSE(c.bath.has_value());
  CHECK(c.grid().size() == 241);
  CHECK(c.request().snapshots.empty());
}

TEST_CASE("keys, comments and whitespace") {
  const RunConfig c = parse_config(
      "# leading comment\n"
      "engine = ed\n"
      "  system.L=5   # trailing comment\n"
      "\n"
      "system.U_e = 0.5\r\n"
      "ed.basis = full\n"
      "ed.N_b = 4\n"
      "grid.omegas = 0.9, 1.0 ,1.1\n"
      "sweep.snapshots = 100,250\n"
      "run.workers = 2\n"
      "run.strict = true\n"
      "output.path = out.csv\n");
  CHECK(c.engine == sweep::Engine::ed);
  CHECK(c.system.L == 5);
  CHECK(c.system.U_e == 0.5);
  CHECK(c.ed_basis == sweep::EdBasis::full);
  CHECK(c.N_b == 4);
  CHECK(c.grid().omegas == std::vector<double>{0.9, 1.0, 1.1});
  CHECK(c.snapshots == std::vector<double>{100.0, 250.0});
  CHECK(c.workers == 2);
  CHECK(c.strict);
  CHECK(c.output == "out.csv");
  const auto r = c.request();
  CHECK(r.engine == sweep::Engine::ed);
  CHECK(r.params.L == 5);
  CHECK(r.workers == 2);
}

TEST_CASE("bath keys") {
  const RunConfig c = parse_config("bath.A = 0.01\nbath.N_bath = 50\n");
  REQUIRE(c.bath.has_value());
  CHECK(c.bath->A == 0.01);
  CHECK(c.bath->N_bath == 50);
  CHECK(c.bath->a == 0.6);
  CHECK(parse_config("bath.enabled = true\n").bath.has_value());
  CHECK_FALSE(parse_config("bath.A = 0.01\nbath.enabled = false\n").bath.has_value());
  CHECK(parse_config("bath.A = 0.01\n").request().bath.has_value());
}

TEST_CASE("errors name the line and the key") {
  auto e = config_error("engine = gkba\nsystem.Lx = 3\n");
  CHECK(e.line() == 2);
  CHECK(e.key() == "system.Lx");

  e = config_error("system.L = 3\nsystem.L = 4\n");
  CHECK(e.line() == 2);
  CHECK(std::string(e.what()).find("duplicate") != std::string::npos);

  e = config_error("system.g_a =\n");
  CHECK(e.key() == "system.g_a");
  CHECK(std::string(e.what()).find("missing value") != std::string::npos);

  e = config_error("\n\nsystem.g_a = fast\n");
  CHECK(e.line() == 3);
  CHECK(e.key() == "system.g_a");

  CHECK(config_error("system.L = 2.5\n").key() == "system.L");
  CHECK(config_error("system.L = 0\n").key() == "system.L");
  CHECK(config_error("system.Gamma = -0.1\n").key() == "system.Gamma");
  CHECK(config_error("system.dt = 0\n").key() == "system.dt");
  CHECK(config_error("system.g_a = nan\n").key() == "system.g_a");
  CHECK(config_error("ed.basis = wavelet\n").key() == "ed.basis");
  CHECK(config_error("engine = fast\n").key() == "engine");
  CHECK(config_error("grid.omegas = 1.0,,1.1\n").key() == "grid.omegas");
  CHECK(config_error("grid.omegas = 1.1,1.0\n").key() == "grid.omegas");
  CHECK(config_error("run.strict = maybe\n").key() == "run.strict");
  CHECK(config_error("bath.A = -1\n").key() == "bath.A");
  CHECK(config_error("just words\n").line() == 1);
}

TEST_CASE("cross-key validation") {
  auto e = config_error("engine = ed\n\nbath.A = 0.01\nbath.N_bath = 10\n");
  CHECK(e.line() == 3);
  CHECK(e.key() == "bath.A");
  CHECK(std::string(e.what()).find("GKBA") != std::string::npos);

  e = config_error("system.dt = 0.01\nsystem.t_end = 10.005\n");
  CHECK(e.key() == "system.t_end");
  CHECK(e.line() == 2);

  e = config_error("grid.omega_step = 0.007\n");
  CHECK(e.key() == "grid.omega_step");

  e = config_error("system.t_end = 100\nsweep.snapshots = 50,150\n");
  CHECK(e.key() == "sweep.snapshots");
  CHECK(e.line() == 2);
  CHECK(config_error("sweep.snapshots = 100,50\n").key() == "sweep.snapshots");
}

TEST_CASE("config entries reproduce the config") {
  RunConfig c = parse_config(
      "engine = ed\nsystem.L = 4\nsystem.delta = 0.2\nsystem.g_prime = 0.1\n"
      "ed.basis = full\ned.N_a = 30\ngrid.omega_min = 0.75\ngrid.omega_max = 1.25\ngrid.omega_step = 0.01\n");
  auto entries = config_entries(c);
  CHECK(entries.front().first == "engine");
  const RunConfig back = parse_config(to_text(entries));
  CHECK(config_entries(back) == entries);
  CHECK(back.system.g_prime == 0.1);
  CHECK(back.N_a == 30);
  CHECK(back.grid().omegas == c.grid().omegas);

  c = parse_config("bath.A = 0.003\ngrid.omegas = 0.5,1\nsystem.t_end = 120\n");
  entries = config_entries(c);
  for (const auto& [k, v] : entries) CHECK(k.rfind("ed.", 0) != 0);
  const RunConfig back2 = parse_config(to_text(entries));
  REQUIRE(back2.bath.has_value());
  CHECK(back2.bath->A == 0.003);
  CHECK(back2.snapshots == std::vector<double>{50.0, 100.0, 120.0});
  CHECK(config_entries(back2) == entries);
}

TEST_CASE("shortest round-trip number formatting") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(250.0) == "250");
  CHECK(format_double(1e-7) == "1e-07");
  const double x = 0.1 + 0.2;
  CHECK(std::stod(format_double(x)) == x);
}

TEST_CASE("load_config reads files and spectrum headers") {
  const std::string path = "test_config_tmp.cfg";
  {
    std::ofstream out(path);
    out << "system.L = 2\n";
  }
  CHECK(load_config(path).system.L == 2);
  {
    std::ofstream out(path);
    out << "# dicke-harmonics spectrum v1\n# engine=gkba\n# system.L=7\n# grid.omegas=1\n"
           "# sweep.snapshots=250\nomega,t,n_b\n1,250,0.5\n";
  }
  const RunConfig c = load_config(path);
  CHECK(c.system.L == 7);
  CHECK(c.grid().omegas == std::vector<double>{1.0});
  std::remove(path.c_str());
  CHECK_THROWS_AS(load_config("does/not/exist.cfg"), IoError);
}
