#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dicke/config.hpp"
#include "dicke/csv.hpp"
#include "dicke/error.hpp"
#include "dicke/sweep.hpp"

namespace {

using namespace dicke;

struct Common {
  std::string config;
  std::string out;
  std::size_t workers{0};
  bool strict{false};
};

void add_common(CLI::App* sub, Common& c, bool config_required) {
  auto* opt = sub->add_option("--config", c.config, "configuration file, or a spectrum CSV to reproduce");
  if (config_required) opt->required();
  sub->add_option("--out", c.out, "output CSV path ('-' for stdout)");
  sub->add_option("--workers", c.workers, "worker threads for the frequency sweep")->check(CLI::PositiveNumber);
  sub->add_flag("--strict", c.strict, "exit nonzero when any grid point fails");
}

RunConfig load(const Common& c) {
  RunConfig cfg = c.config.empty() ? parse_config("") : load_config(c.config);
  if (c.workers > 0) cfg.workers = c.workers;
  if (c.strict) cfg.strict = true;
  if (!c.out.empty()) cfg.output = c.out;
  return cfg;
}

sweep::Window report_window(const std::vector<double>& omegas) {
  for (double w : omegas) {
    if (w >= sweep::kShgWindow.lo && w <= sweep::kShgWindow.hi) return sweep::kShgWindow;
  }
  return {omegas.front(), omegas.back()};
}

int report_failures(const sweep::SpectrumSurface& s, bool strict) {
  for (const auto& f : s.failures) {
    std::fprintf(stderr, "failed point %zu (omega = %.12g): %s\n", f.index, f.omega, f.message.c_str());
  }
  if (!s.failures.empty()) {
    std::fprintf(stderr, "%zu of %zu grid points failed\n", s.failures.size(), s.omegas.size());
    if (strict) return 3;
  }
  return 0;
}

void report_peak(const sweep::SpectrumSurface& s) {
  try {
    const double t = s.times.back();
    const auto m = sweep::peak_metrics(s, t, report_window(s.omegas));
    std::fprintf(stderr, "%s: peak at omega = %.12g, n_b = %.12g (t = %.12g)\n", s.engine.c_str(), m.omega_max,
                 m.I_max, t);
  } catch (const Error&) {
  }
}

int run_spectrum(RunConfig cfg) {
  const sweep::SpectrumSurface s = sweep::run_sweep(cfg.request());
  csv::write_spectrum(cfg.output.empty() ? "-" : cfg.output, csv::table_of(s, config_entries(cfg)));
  report_peak(s);
  return report_failures(s, cfg.strict);
}

int run_compare_files(const std::string& a, const std::string& b, const std::string& out) {
  const csv::SpectrumTable ta = csv::read_spectrum(a);
  const csv::SpectrumTable tb = csv::read_spectrum(b);
  csv::write_text(out.empty() ? "-" : out, csv::format_delta(ta, tb, {{"reference", a}, {"other", b}}));
  return 0;
}

int run_compare_config(RunConfig cfg) {
  if (cfg.bath) throw InvalidArgument("compare runs the bath-free model on both engines; disable the bath");
  cfg.engine = sweep::Engine::ed;
  auto header = config_entries(cfg);
  header.erase(header.begin());  // engine
  header.insert(header.begin(), {{"reference", "ed"}, {"other", "gkba"}});
  const auto [ed, gkba] = sweep::run_both_engines(cfg.request());
  const csv::SpectrumTable ta = csv::table_of(ed, {});
  const csv::SpectrumTable tb = csv::table_of(gkba, {});
  csv::write_text(cfg.output.empty() ? "-" : cfg.output, csv::format_delta(ta, tb, header));
  const double t = ed.times.back();
  const auto r = sweep::compare_surfaces(ed, gkba, t, report_window(ed.omegas));
  std::fprintf(stderr,
               "max |gkba - ed| = %.6g (%.4g of peak)\n"
               "ed   peak: omega = %.12g, n_b = %.12g\n"
               "gkba peak: omega = %.12g, n_b = %.12g\n"
               "peak shift = %.6g, relative peak difference = %.6g\n",
               r.linf, r.peak_linf, r.a.omega_max, r.a.I_max, r.b.omega_max, r.b.I_max, r.omega_shift,
               r.relative_peak);
  const int a = report_failures(ed, cfg.strict);
  const int b = report_failures(gkba, cfg.strict);
  return a ? a : b;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Harmonic-generation spectra of the extended Dicke model (ED and NEGF-GKBA)"};
  app.require_subcommand(1);
  Common ed_opts, gkba_opts, sweep_opts, compare_opts, leak_opts;
  std::vector<std::string> compare_files;

  auto* ed = app.add_subcommand("ed", "exact-diagonalization sweep");
  add_common(ed, ed_opts, true);
  auto* gkba = app.add_subcommand("gkba", "NEGF-GKBA sweep");
  add_common(gkba, gkba_opts, true);
  auto* sw = app.add_subcommand("sweep", "sweep with the engine named in the config");
  add_common(sw, sweep_opts, true);
  auto* cmp = app.add_subcommand("compare", "ED vs GKBA from a config, or the delta of two spectrum CSVs");
  add_common(cmp, compare_opts, false);
  cmp->add_option("files", compare_files, "two spectrum CSV files")->expected(0, 2);
  auto* leak = app.add_subcommand("leakage", "GKBA sweep with classical-bath cavity leakage");
  add_common(leak, leak_opts, true);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*ed) {
      RunConfig cfg = load(ed_opts);
      if (cfg.bath) throw InvalidArgument("leakage requires the GKBA engine");
      cfg.engine = sweep::Engine::ed;
      return run_spectrum(cfg);
    }
    if (*gkba) {
      RunConfig cfg = load(gkba_opts);
      cfg.engine = sweep::Engine::gkba;
      return run_spectrum(cfg);
    }
    if (*sw) return run_spectrum(load(sweep_opts));
    if (*leak) {
      RunConfig cfg = load(leak_opts);
      cfg.engine = sweep::Engine::gkba;
      if (!cfg.bath) cfg.bath = BathConfig{};
      return run_spectrum(cfg);
    }
    if (*cmp) {
      if (compare_files.size() == 2) return run_compare_files(compare_files[0], compare_files[1], compare_opts.out);
      if (!compare_files.empty()) throw InvalidArgument("compare takes exactly two spectrum files");
      if (compare_opts.config.empty()) throw InvalidArgument("compare needs --config or two spectrum files");
      return run_compare_config(load(compare_opts));
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
