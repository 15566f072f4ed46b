#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dicke/params.hpp"
#include "dicke/sweep.hpp"

namespace dicke {

// Everything a CLI run needs. Flat dotted keys, one "key = value" per line,
// '#' starts a comment:
//   engine                       gkba | ed
//   system.{L, eps_g, eps_e, delta, U_e, g_a, g_prime, Gamma, omega_a, omega_b, beta, t_end, dt}
//   ed.{basis, N_a, N_b}         basis: auto | full | spin; N_a = -1 picks the cutoff automatically
//   grid.{omega_min, omega_max, omega_step} or grid.omegas = w1,w2,...
//   sweep.snapshots              t1,t2,...
//   bath.{enabled, N_bath, A, a, Delta_B}   any bath.* key other than enabled=false turns the bath on
//   run.{workers, strict}
//   output.path
struct RunConfig {
  SystemParams system;
  sweep::Engine engine{sweep::Engine::gkba};
  sweep::EdBasis ed_basis{sweep::EdBasis::automatic};
  int N_a{-1};
  int N_b{6};
  double omega_min{sweep::kDefaultOmegaMin};
  double omega_max{sweep::kDefaultOmegaMax};
  double omega_step{sweep::kDefaultOmegaStep};
  std::optional<std::vector<double>> omegas;  // explicit grid, overrides the range
  std::vector<double> snapshots;              // empty: default for t_end
  std::optional<BathConfig> bath;
  std::size_t workers{1};
  bool strict{false};
  std::string output;

  sweep::FrequencyGrid grid() const;
  sweep::SweepRequest request() const;
};

// Throws ConfigError with the offending line and key.
RunConfig parse_config(std::string_view text);

// Reads a config file. A spectrum CSV is accepted too: its "# key=value"
// header is parsed as the config that produced it.
RunConfig load_config(const std::string& path);

// Key/value pairs that determine the output of a run, in a fixed order and
// with numbers in shortest round-trip form. parse_config on these lines
// reproduces the same values.
std::vector<std::pair<std::string, std::string>> config_entries(const RunConfig& config);

std::string format_double(double v);

}  // namespace dicke
