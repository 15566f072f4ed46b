#include "dicke/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numeric>
#include <thread>

#include "dicke/ed.hpp"
#include "dicke/error.hpp"
#include "dicke/gkba.hpp"

namespace dicke::sweep {

const char* to_string(Engine e) { return e == Engine::ed ? "ed" : "gkba"; }

const char* to_string(EdBasis b) {
  switch (b) {
    case EdBasis::full: return "full";
    case EdBasis::spin: return "spin";
    default: return "auto";
  }
}

Engine parse_engine(const std::string& s) {
  if (s == "gkba") return Engine::gkba;
  if (s == "ed") return Engine::ed;
  throw InvalidArgument("unknown engine '" + s + "' (expected gkba or ed)");
}

EdBasis parse_ed_basis(const std::string& s) {
  if (s == "auto") return EdBasis::automatic;
  if (s == "full") return EdBasis::full;
  if (s == "spin") return EdBasis::spin;
  throw InvalidArgument("unknown ED basis '" + s + "' (expected auto, full or spin)");
}

FrequencyGrid FrequencyGrid::uniform(double lo, double hi, double step) {
  if (!(step > 0.0) || !std::isfinite(step)) throw InvalidArgument("grid step must be > 0");
  if (!(hi >= lo)) throw InvalidArgument("grid omega_max must be >= omega_min");
  const double count = (hi - lo) / step;
  const double n = std::round(count);
  if (std::abs(count - n) > 1e-9 * std::max(1.0, n)) {
    throw InvalidArgument("grid range is not a whole number of steps");
  }
  FrequencyGrid g;
  for (long i = 0; i <= static_cast<long>(n); ++i) g.omegas.push_back(lo + static_cast<double>(i) * step);
  g.validate();
  return g;
}

FrequencyGrid FrequencyGrid::list(std::vector<double> omegas) {
  FrequencyGrid g{std::move(omegas)};
  g.validate();
  return g;
}

void FrequencyGrid::validate() const {
  if (omegas.empty()) throw InvalidArgument("frequency grid is empty");
  for (std::size_t i = 0; i < omegas.size(); ++i) {
    if (!(omegas[i] > 0.0) || !std::isfinite(omegas[i])) throw InvalidArgument("grid frequencies must be > 0");
    if (i > 0 && !(omegas[i] > omegas[i - 1])) throw InvalidArgument("grid frequencies must be strictly increasing");
  }
}

std::vector<double> default_snapshots(double t_end) {
  std::vector<double> s;
  for (int k = 1; 50.0 * k < t_end - 1e-9; ++k) s.push_back(50.0 * k);
  s.push_back(t_end);
  return s;
}

std::size_t SpectrumSurface::snapshot_index(double t) const {
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (std::abs(times[i] - t) <= 1e-9 * std::max(1.0, std::abs(t))) return i;
  }
  throw InvalidArgument("snapshot t = " + std::to_string(t) + " is not part of the surface");
}

EdBasis resolve_basis(EdBasis requested, const SystemParams& p) {
  if (requested != EdBasis::automatic) return requested;
  return (p.delta == 0.0 && p.U_e == 0.0) ? EdBasis::spin : EdBasis::full;
}

namespace {

std::vector<double> effective_snapshots(const SweepRequest& r) {
  return r.snapshots.empty() ? default_snapshots(r.params.t_end) : r.snapshots;
}

std::vector<std::size_t> snapshot_steps(const SystemParams& p, const std::vector<double>& snapshots) {
  std::vector<std::size_t> steps;
  for (double t : snapshots) steps.push_back(step_index(p, t));
  return steps;
}

std::size_t sample_stride(const std::vector<std::size_t>& steps) {
  std::size_t g = 0;
  for (std::size_t s : steps) g = std::gcd(g, s);
  return g == 0 ? 1 : g;
}

void check_request(const SweepRequest& r) {
  validate(r.params);
  r.grid.validate();
  if (r.bath) {
    if (r.engine == Engine::ed) throw InvalidArgument("the leakage bath requires the GKBA engine");
    validate(*r.bath);
  }
  const auto snaps = effective_snapshots(r);
  if (snaps.empty()) throw InvalidArgument("at least one snapshot is required");
  for (std::size_t i = 1; i < snaps.size(); ++i) {
    if (!(snaps[i] > snaps[i - 1])) throw InvalidArgument("snapshots must be strictly increasing");
  }
  snapshot_steps(r.params, snaps);
}

}  // namespace

PointResult run_point(const SweepRequest& request, double omega) {
  SystemParams p = request.params;
  p.omega_b = omega;
  validate(p);
  const auto snaps = effective_snapshots(request);
  const auto steps = snapshot_steps(p, snaps);
  const std::size_t stride = sample_stride(steps);

  PointResult result;
  std::vector<double>& out = result.n_b;
  out.assign(snaps.size(), std::numeric_limits<double>::quiet_NaN());
  auto store = [&](double t, double n_b) {
    const auto n = static_cast<std::size_t>(std::llround(t / p.dt));
    for (std::size_t i = 0; i < steps.size(); ++i) {
      if (steps[i] == n) out[i] = n_b;
    }
  };

  if (request.engine == Engine::gkba) {
    gkba::RunOptions o;
    o.stride = stride;
    o.bath = request.bath;
    const gkba::RunResult r = gkba::run(p, o, [&](const gkba::Observables& obs) { store(obs.t, obs.n_b); });
    result.conservation = r.conservation;
  } else {
    if (request.bath) throw InvalidArgument("the leakage bath requires the GKBA engine");
    ed::EdOptions o;
    o.basis = resolve_basis(request.basis, p) == EdBasis::spin ? ed::BasisKind::spin : ed::BasisKind::full;
    o.N_a = request.N_a;
    o.N_b = request.N_b;
    o.stride = stride;
    const ed::EdRun r = ed::run(p, o);
    for (const auto& s : r.samples) store(s.t, s.n_b);
    result.max_norm_drift = r.max_norm_drift;
  }
  for (double v : out) {
    if (std::isnan(v)) throw NumericalError("snapshot missing from the propagation output");
  }
  return result;
}

SpectrumSurface run_sweep(const SweepRequest& request) {
  check_request(request);
  SpectrumSurface surface;
  surface.omegas = request.grid.omegas;
  surface.times = effective_snapshots(request);
  surface.engine = to_string(request.engine);
  surface.params = request.params;
  const std::size_t n = surface.omegas.size();
  surface.values = Eigen::MatrixXd::Constant(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(surface.times.size()),
                                             std::numeric_limits<double>::quiet_NaN());

  std::vector<std::optional<std::string>> errors(n);
  std::vector<PointResult> results(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        results[i] = run_point(request, surface.omegas[i]);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  const std::size_t workers = std::clamp<std::size_t>(request.workers, 1, std::max<std::size_t>(n, 1));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (errors[i]) {
      surface.failures.push_back(PointFailure{i, surface.omegas[i], *errors[i]});
      continue;
    }
    const auto& row = results[i].n_b;
    for (std::size_t s = 0; s < row.size(); ++s) {
      surface.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(s)) = row[s];
    }
    surface.conservation.merge(results[i].conservation);
    surface.max_norm_drift = std::max(surface.max_norm_drift, results[i].max_norm_drift);
  }
  return surface;
}

PeakMetrics peak_metrics(const std::vector<double>& omegas, const Eigen::VectorXd& values, Window window) {
  if (static_cast<Eigen::Index>(omegas.size()) != values.size()) {
    throw InvalidArgument("frequency and value arrays differ in length");
  }
  std::optional<PeakMetrics> best;
  bool any = false;
  for (std::size_t i = 0; i < omegas.size(); ++i) {
    if (omegas[i] < window.lo || omegas[i] > window.hi) continue;
    any = true;
    const double v = values[static_cast<Eigen::Index>(i)];
    if (std::isnan(v)) continue;
    if (!best || v > best->I_max) best = PeakMetrics{i, omegas[i], v};
  }
  if (!any) throw InvalidArgument("peak window contains no grid points");
  if (!best) throw NumericalError("peak window contains only failed points");
  return *best;
}

PeakMetrics peak_metrics(const SpectrumSurface& surface, double snapshot, Window window) {
  return peak_metrics(surface.omegas, surface.row(snapshot), window);
}

std::size_t count_peaks(const std::vector<double>& omegas, const Eigen::VectorXd& values, Window window,
                        double rel_threshold) {
  const PeakMetrics top = peak_metrics(omegas, values, window);
  std::vector<double> v;
  for (std::size_t i = 0; i < omegas.size(); ++i) {
    if (omegas[i] >= window.lo && omegas[i] <= window.hi) v.push_back(values[static_cast<Eigen::Index>(i)]);
  }
  std::size_t count = 0;
  for (std::size_t i = 1; i + 1 < v.size();) {
    if (!(v[i] > v[i - 1])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < v.size() && v[j + 1] == v[i]) ++j;
    if (j + 1 < v.size() && v[j + 1] < v[i] && v[i] >= rel_threshold * top.I_max) ++count;
    i = j + 1;
  }
  return count;
}

HfShiftEstimate hf_shift_estimate(double U_e, double omega_a, double beta) {
  if (!(U_e > 0.0)) throw InvalidArgument("the mean-field shift estimate needs U_e > 0");
  const double x = omega_a * beta * beta;
  return HfShiftEstimate{1.0 + U_e * (1.0 - 2.0 * std::sqrt(x / U_e)), U_e >= 4.0 * x};
}

DiscrepancyReport compare_surfaces(const SpectrumSurface& a, const SpectrumSurface& b, double snapshot, Window window) {
  if (a.omegas != b.omegas) throw InvalidArgument("surfaces are defined on different frequency grids");
  if (a.times != b.times) throw InvalidArgument("surfaces have different snapshot times");
  DiscrepancyReport r;
  r.linf = (a.values - b.values).cwiseAbs().maxCoeff();
  r.a = peak_metrics(a, snapshot, window);
  r.b = peak_metrics(b, snapshot, window);
  const double scale = std::max(r.a.I_max, r.b.I_max);
  r.peak_linf = scale > 0.0 ? r.linf / scale : 0.0;
  r.omega_shift = r.b.omega_max - r.a.omega_max;
  r.relative_peak = r.a.I_max != 0.0 ? (r.b.I_max - r.a.I_max) / r.a.I_max : 0.0;
  return r;
}

std::pair<SpectrumSurface, SpectrumSurface> run_both_engines(const SweepRequest& request) {
  SweepRequest ed_req = request;
  ed_req.engine = Engine::ed;
  ed_req.bath.reset();
  SweepRequest gkba_req = request;
  gkba_req.engine = Engine::gkba;
  return {run_sweep(ed_req), run_sweep(gkba_req)};
}

}  // namespace dicke::sweep
