#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "dicke/gkba.hpp"
#include "dicke/params.hpp"

namespace dicke::sweep {

enum class Engine { gkba, ed };
enum class EdBasis { automatic, full, spin };

const char* to_string(Engine e);
const char* to_string(EdBasis b);
Engine parse_engine(const std::string& s);
EdBasis parse_ed_basis(const std::string& s);

// Probe frequencies, strictly increasing and positive.
struct FrequencyGrid {
  std::vector<double> omegas;

  // lo, lo + step, ..., hi; (hi - lo) must be a whole number of steps.
  static FrequencyGrid uniform(double lo, double hi, double step);
  static FrequencyGrid list(std::vector<double> omegas);

  std::size_t size() const { return omegas.size(); }
  void validate() const;
};

inline constexpr double kDefaultOmegaMin = 0.3;
inline constexpr double kDefaultOmegaMax = 1.5;
inline constexpr double kDefaultOmegaStep = 0.005;

// {50, 100, ...} up to t_end, with t_end itself always included.
std::vector<double> default_snapshots(double t_end);

struct SweepRequest {
  SystemParams params;
  Engine engine{Engine::gkba};
  EdBasis basis{EdBasis::automatic};
  int N_a{-1};  // < 0: smallest cutoff with coherent tail below 1e-10
  int N_b{6};
  std::optional<BathConfig> bath;
  FrequencyGrid grid;
  std::vector<double> snapshots;  // empty: default_snapshots(params.t_end)
  std::size_t workers{1};
};

struct PointFailure {
  std::size_t index;
  double omega;
  std::string message;
};

// n_b(omega_i, t_s): rows follow the grid, columns the snapshots. Failed
// points hold NaN and are listed in failures.
struct SpectrumSurface {
  std::vector<double> omegas;
  std::vector<double> times;
  Eigen::MatrixXd values;
  std::string engine;
  SystemParams params;
  std::vector<PointFailure> failures;
  gkba::ConservationReport conservation;  // merged over all GKBA points
  double max_norm_drift{0.0};             // largest ED norm drift over all points

  std::size_t snapshot_index(double t) const;  // throws when t is not a snapshot
  Eigen::VectorXd row(double t) const { return values.col(static_cast<Eigen::Index>(snapshot_index(t))); }
};

// Resolves the ED basis for a parameter set: spin when delta = U_e = 0.
EdBasis resolve_basis(EdBasis requested, const SystemParams& p);

struct PointResult {
  std::vector<double> n_b;  // one entry per snapshot
  gkba::ConservationReport conservation;
  double max_norm_drift{0.0};
};

// n_b at every snapshot for a single probe frequency.
PointResult run_point(const SweepRequest& request, double omega);

// One independent simulation per grid point with omega_b = omega_i. The
// result does not depend on the worker count.
SpectrumSurface run_sweep(const SweepRequest& request);

struct Window {
  double lo;
  double hi;
};

inline constexpr Window kShgWindow{0.75, 1.25};
inline constexpr Window kElasticWindow{0.4, 0.6};

struct PeakMetrics {
  std::size_t index{0};
  double omega_max{0.0};
  double I_max{0.0};
};

// argmax of n_b over the grid points inside [lo, hi]; ties go to the lower
// omega and NaN entries are skipped. Throws InvalidArgument on an empty window.
PeakMetrics peak_metrics(const SpectrumSurface& surface, double snapshot, Window window);
PeakMetrics peak_metrics(const std::vector<double>& omegas, const Eigen::VectorXd& values, Window window);

// Interior local maxima inside the window whose height is at least
// rel_threshold * (window maximum). Plateaus count once.
std::size_t count_peaks(const std::vector<double>& omegas, const Eigen::VectorXd& values, Window window,
                        double rel_threshold = 0.05);

struct HfShiftEstimate {
  double omega;
  bool valid;  // false when U_e < 4 omega_a beta^2, outside the large-U_e regime
};

// Mean-field fluorescence frequency 1 + U_e (1 - 2 sqrt(omega_a beta^2 / U_e)).
// Throws InvalidArgument for U_e <= 0.
HfShiftEstimate hf_shift_estimate(double U_e, double omega_a, double beta);

struct DiscrepancyReport {
  double linf{0.0};          // max |b - a| over the surface
  double peak_linf{0.0};     // linf divided by the larger peak intensity
  PeakMetrics a;
  PeakMetrics b;
  double omega_shift{0.0};   // b.omega_max - a.omega_max
  double relative_peak{0.0}; // (b.I_max - a.I_max) / a.I_max
};

// Throws InvalidArgument when the grids or snapshot sets differ.
DiscrepancyReport compare_surfaces(const SpectrumSurface& a, const SpectrumSurface& b, double snapshot,
                                   Window window = kShgWindow);

// Runs the request once with each engine (ED first) and compares.
std::pair<SpectrumSurface, SpectrumSurface> run_both_engines(const SweepRequest& request);

}  // namespace dicke::sweep
