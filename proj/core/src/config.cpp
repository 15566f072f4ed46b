#include "dicke/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "dicke/error.hpp"

namespace dicke {

std::string format_double(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double to_double(const std::string& v) {
  double out = 0.0;
  const auto r = std::from_chars(v.data(), v.data() + v.size(), out);
  if (r.ec != std::errc{} || r.ptr != v.data() + v.size()) throw InvalidArgument("expected a number, got '" + v + "'");
  if (!std::isfinite(out)) throw InvalidArgument("value must be finite");
  return out;
}

long to_integer(const std::string& v) {
  long out = 0;
  const auto r = std::from_chars(v.data(), v.data() + v.size(), out);
  if (r.ec != std::errc{} || r.ptr != v.data() + v.size()) throw InvalidArgument("expected an integer, got '" + v + "'");
  return out;
}

bool to_bool(const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw InvalidArgument("expected true or false, got '" + v + "'");
}

std::vector<double> to_list(const std::string& v) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= v.size()) {
    const auto comma = v.find(',', start);
    const std::string item = trim(std::string_view(v).substr(start, comma == std::string::npos ? std::string::npos : comma - start));
    if (item.empty()) throw InvalidArgument("empty entry in list '" + v + "'");
    out.push_back(to_double(item));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string join(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + format_double(v[i]);
  return out;
}

double positive(double v, const char* what) {
  if (!(v > 0.0)) throw InvalidArgument(std::string(what) + " must be > 0");
  return v;
}

double non_negative(double v, const char* what) {
  if (!(v >= 0.0)) throw InvalidArgument(std::string(what) + " must be >= 0");
  return v;
}

struct Key {
  const char* name;
  std::function<void(RunConfig&, const std::string&)> set;
};

BathConfig& bath_of(RunConfig& c) {
  if (!c.bath) c.bath = BathConfig{};
  return *c.bath;
}

const std::vector<Key>& keys() {
  static const std::vector<Key> table = {
      {"engine", [](RunConfig& c, const std::string& v) { c.engine = sweep::parse_engine(v); }},
      {"system.L",
       [](RunConfig& c, const std::string& v) {
         const long L = to_integer(v);
         if (L < 1) throw InvalidArgument("L must be >= 1");
         c.system.L = static_cast<std::size_t>(L);
       }},
      {"system.eps_g", [](RunConfig& c, const std::string& v) { c.system.eps_g = to_double(v); }},
      {"system.eps_e", [](RunConfig& c, const std::string& v) { c.system.eps_e = to_double(v); }},
      {"system.delta", [](RunConfig& c, const std::string& v) { c.system.delta = to_double(v); }},
      {"system.U_e", [](RunConfig& c, const std::string& v) { c.system.U_e = to_double(v); }},
      {"system.g_a", [](RunConfig& c, const std::string& v) { c.system.g_a = to_double(v); }},
      {"system.g_prime", [](RunConfig& c, const std::string& v) { c.system.g_prime = to_double(v); }},
      {"system.Gamma", [](RunConfig& c, const std::string& v) { c.system.Gamma = non_negative(to_double(v), "Gamma"); }},
      {"system.omega_a", [](RunConfig& c, const std::string& v) { c.system.omega_a = to_double(v); }},
      {"system.omega_b", [](RunConfig& c, const std::string& v) { c.system.omega_b = to_double(v); }},
      {"system.beta", [](RunConfig& c, const std::string& v) { c.system.beta = non_negative(to_double(v), "beta"); }},
      {"system.t_end", [](RunConfig& c, const std::string& v) { c.system.t_end = non_negative(to_double(v), "t_end"); }},
      {"system.dt", [](RunConfig& c, const std::string& v) { c.system.dt = positive(to_double(v), "dt"); }},
      {"ed.basis", [](RunConfig& c, const std::string& v) { c.ed_basis = sweep::parse_ed_basis(v); }},
      {"ed.N_a",
       [](RunConfig& c, const std::string& v) {
         const long n = to_integer(v);
         if (n < -1) throw InvalidArgument("N_a must be >= 0, or -1 for automatic");
         c.N_a = static_cast<int>(n);
       }},
      {"ed.N_b",
       [](RunConfig& c, const std::string& v) {
         const long n = to_integer(v);
         if (n < 0) throw InvalidArgument("N_b must be >= 0");
         c.N_b = static_cast<int>(n);
       }},
      {"grid.omega_min", [](RunConfig& c, const std::string& v) { c.omega_min = positive(to_double(v), "omega_min"); }},
      {"grid.omega_max", [](RunConfig& c, const std::string& v) { c.omega_max = positive(to_double(v), "omega_max"); }},
      {"grid.omega_step", [](RunConfig& c, const std::string& v) { c.omega_step = positive(to_double(v), "omega_step"); }},
      {"grid.omegas", [](RunConfig& c, const std::string& v) { c.omegas = sweep::FrequencyGrid::list(to_list(v)).omegas; }},
      {"sweep.snapshots", [](RunConfig& c, const std::string& v) { c.snapshots = to_list(v); }},
      {"bath.enabled",
       [](RunConfig& c, const std::string& v) {
         if (to_bool(v)) {
           bath_of(c);
         } else {
           c.bath.reset();
         }
       }},
      {"bath.N_bath",
       [](RunConfig& c, const std::string& v) {
         const long n = to_integer(v);
         if (n < 1) throw InvalidArgument("N_bath must be >= 1");
         bath_of(c).N_bath = static_cast<std::size_t>(n);
       }},
      {"bath.A", [](RunConfig& c, const std::string& v) { bath_of(c).A = non_negative(to_double(v), "A"); }},
      {"bath.a", [](RunConfig& c, const std::string& v) { bath_of(c).a = to_double(v); }},
      {"bath.Delta_B", [](RunConfig& c, const std::string& v) { bath_of(c).Delta_B = positive(to_double(v), "Delta_B"); }},
      {"run.workers",
       [](RunConfig& c, const std::string& v) {
         const long n = to_integer(v);
         if (n < 1) throw InvalidArgument("workers must be >= 1");
         c.workers = static_cast<std::size_t>(n);
       }},
      {"run.strict", [](RunConfig& c, const std::string& v) { c.strict = to_bool(v); }},
      {"output.path", [](RunConfig& c, const std::string& v) { c.output = v; }},
  };
  return table;
}

}  // namespace

sweep::FrequencyGrid RunConfig::grid() const {
  if (omegas) return sweep::FrequencyGrid::list(*omegas);
  return sweep::FrequencyGrid::uniform(omega_min, omega_max, omega_step);
}

sweep::SweepRequest RunConfig::request() const {
  sweep::SweepRequest r;
  r.params = system;
  r.engine = engine;
  r.basis = ed_basis;
  r.N_a = N_a;
  r.N_b = N_b;
  r.bath = bath;
  r.grid = grid();
  r.snapshots = snapshots;
  r.workers = workers;
  return r;
}

RunConfig parse_config(std::string_view text) {
  RunConfig c;
  std::map<std::string, std::size_t> seen;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    ++line_no;
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string_view::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(line_no, "", "expected 'key = value'");
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    if (key.empty()) throw ConfigError(line_no, "", "missing key");
    const Key* def = nullptr;
    for (const auto& k : keys()) {
      if (key == k.name) def = &k;
    }
    if (!def) throw ConfigError(line_no, key, "unknown key");
    if (seen.count(key)) {
      throw ConfigError(line_no, key, "duplicate key (first set on line " + std::to_string(seen[key]) + ")");
    }
    if (value.empty()) throw ConfigError(line_no, key, "missing value");
    seen[key] = line_no;
    try {
      def->set(c, value);
    } catch (const Error& e) {
      throw ConfigError(line_no, key, e.what());
    }
  }

  auto line_of = [&](const std::string& key) -> std::size_t {
    const auto it = seen.find(key);
    return it == seen.end() ? 0 : it->second;
  };
  if (c.bath && c.engine == sweep::Engine::ed) {
    std::string key = "bath.enabled";
    std::size_t line = line_of(key);
    for (const auto& [k, l] : seen) {
      if (k.rfind("bath.", 0) == 0 && (line == 0 || l < line)) {
        key = k;
        line = l;
      }
    }
    throw ConfigError(line, key, "leakage requires the GKBA engine");
  }
  try {
    validate(c.system);
  } catch (const Error& e) {
    const std::string key = seen.count("system.t_end") ? "system.t_end" : (seen.count("system.dt") ? "system.dt" : "system");
    throw ConfigError(line_of(key), key, e.what());
  }
  try {
    (void)c.grid();
  } catch (const Error& e) {
    const std::string key = c.omegas ? "grid.omegas" : "grid.omega_step";
    throw ConfigError(line_of(key), key, e.what());
  }
  try {
    sweep::SweepRequest r = c.request();
    const auto snaps = r.snapshots.empty() ? sweep::default_snapshots(c.system.t_end) : r.snapshots;
    for (std::size_t i = 0; i < snaps.size(); ++i) {
      step_index(c.system, snaps[i]);
      if (i > 0 && !(snaps[i] > snaps[i - 1])) throw InvalidArgument("snapshots must be strictly increasing");
    }
  } catch (const Error& e) {
    throw ConfigError(line_of("sweep.snapshots"), "sweep.snapshots", e.what());
  }
  return c;
}

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("error reading '" + path + "'");
  return ss.str();
}

}  // namespace

RunConfig load_config(const std::string& path) {
  const std::string text = read_file(path);
  static const std::string magic = "# dicke-harmonics spectrum";
  if (text.rfind(magic, 0) != 0) return parse_config(text);
  // Header of a spectrum file: every "# key=value" line up to the column row.
  std::string cfg;
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line) && line.rfind("# ", 0) == 0) {
    if (line.find('=') != std::string::npos) cfg += line.substr(2) + "\n";
  }
  return parse_config(cfg);
}

std::vector<std::pair<std::string, std::string>> config_entries(const RunConfig& c) {
  std::vector<std::pair<std::string, std::string>> e;
  const SystemParams& p = c.system;
  e.emplace_back("engine", sweep::to_string(c.engine));
  e.emplace_back("system.L", std::to_string(p.L));
  e.emplace_back("system.eps_g", format_double(p.eps_g));
  e.emplace_back("system.eps_e", format_double(p.eps_e));
  e.emplace_back("system.delta", format_double(p.delta));
  e.emplace_back("system.U_e", format_double(p.U_e));
  e.emplace_back("system.g_a", format_double(p.g_a));
  e.emplace_back("system.g_prime", format_double(p.g_prime));
  e.emplace_back("system.Gamma", format_double(p.Gamma));
  e.emplace_back("system.omega_a", format_double(p.omega_a));
  e.emplace_back("system.omega_b", format_double(p.omega_b));
  e.emplace_back("system.beta", format_double(p.beta));
  e.emplace_back("system.t_end", format_double(p.t_end));
  e.emplace_back("system.dt", format_double(p.dt));
  if (c.engine == sweep::Engine::ed) {
    e.emplace_back("ed.basis", sweep::to_string(c.ed_basis));
    e.emplace_back("ed.N_a", std::to_string(c.N_a));
    e.emplace_back("ed.N_b", std::to_string(c.N_b));
  }
  if (c.omegas) {
    e.emplace_back("grid.omegas", join(*c.omegas));
  } else {
    e.emplace_back("grid.omega_min", format_double(c.omega_min));
    e.emplace_back("grid.omega_max", format_double(c.omega_max));
    e.emplace_back("grid.omega_step", format_double(c.omega_step));
  }
  e.emplace_back("sweep.snapshots", join(c.snapshots.empty() ? sweep::default_snapshots(p.t_end) : c.snapshots));
  if (c.bath) {
    e.emplace_back("bath.enabled", "true");
    e.emplace_back("bath.N_bath", std::to_string(c.bath->N_bath));
    e.emplace_back("bath.A", format_double(c.bath->A));
    e.emplace_back("bath.a", format_double(c.bath->a));
    e.emplace_back("bath.Delta_B", format_double(c.bath->Delta_B));
  }
  return e;
}

}  // namespace dicke
