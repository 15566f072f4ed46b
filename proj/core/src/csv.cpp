#include "dicke/csv.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "dicke/error.hpp"

namespace dicke::csv {

namespace {

std::string fmt12(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

double parse_number(const std::string& s, std::size_t line) {
  if (s == "nan") return std::nan("");
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) {
    throw IoError("line " + std::to_string(line) + ": malformed number '" + s + "'");
  }
  return v;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(line);
  while (std::getline(in, cur, ',')) out.push_back(cur);
  return out;
}

}  // namespace

SpectrumTable table_of(const sweep::SpectrumSurface& surface, Header header) {
  return SpectrumTable{std::move(header), surface.omegas, surface.times, surface.values};
}

std::string format_spectrum(const SpectrumTable& t) {
  std::string out = std::string(kSpectrumMagic) + "\n";
  for (const auto& [k, v] : t.header) out += "# " + k + "=" + v + "\n";
  out += "omega,t,n_b\n";
  for (std::size_t i = 0; i < t.omegas.size(); ++i) {
    for (std::size_t s = 0; s < t.times.size(); ++s) {
      out += fmt12(t.omegas[i]) + "," + fmt12(t.times[s]) + "," +
             fmt12(t.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(s))) + "\n";
    }
  }
  return out;
}

void write_text(const std::string& path, const std::string& text) {
  if (path == "-" || path.empty()) {
    std::cout << text;
    std::cout.flush();
    if (!std::cout) throw IoError("error writing to stdout");
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << text;
  out.close();
  if (!out) throw IoError("error writing '" + path + "'");
}

void write_spectrum(const std::string& path, const SpectrumTable& table) { write_text(path, format_spectrum(table)); }

SpectrumTable parse_spectrum(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t n = 0;
  if (!std::getline(in, line) || line != kSpectrumMagic) throw IoError("not a dicke-harmonics spectrum file");
  ++n;
  SpectrumTable t;
  bool columns = false;
  while (std::getline(in, line)) {
    ++n;
    if (line.rfind("# ", 0) == 0) {
      const auto eq = line.find('=');
      if (eq == std::string::npos) throw IoError("line " + std::to_string(n) + ": malformed header");
      t.header.emplace_back(line.substr(2, eq - 2), line.substr(eq + 1));
      continue;
    }
    if (line != "omega,t,n_b") throw IoError("line " + std::to_string(n) + ": expected column row 'omega,t,n_b'");
    columns = true;
    break;
  }
  if (!columns) throw IoError("missing column row");
  std::vector<double> om, ts, vs;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty()) continue;
    const auto f = split(line);
    if (f.size() != 3) throw IoError("line " + std::to_string(n) + ": expected 3 fields");
    om.push_back(parse_number(f[0], n));
    ts.push_back(parse_number(f[1], n));
    vs.push_back(parse_number(f[2], n));
  }
  // Recover the (omega, t) layout from the omega-major ordering.
  for (std::size_t i = 0; i < ts.size() && (t.times.empty() || ts[i] != t.times.front()); ++i) t.times.push_back(ts[i]);
  if (t.times.empty()) {
    t.values = Eigen::MatrixXd(0, 0);
    return t;
  }
  const std::size_t nt = t.times.size();
  if (vs.size() % nt != 0) throw IoError("row count is not a multiple of the snapshot count");
  const std::size_t nw = vs.size() / nt;
  t.values.resize(static_cast<Eigen::Index>(nw), static_cast<Eigen::Index>(nt));
  for (std::size_t i = 0; i < nw; ++i) {
    t.omegas.push_back(om[i * nt]);
    for (std::size_t s = 0; s < nt; ++s) {
      const std::size_t r = i * nt + s;
      if (om[r] != om[i * nt] || ts[r] != t.times[s]) throw IoError("rows are not omega-major on a regular table");
      t.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(s)) = vs[r];
    }
  }
  return t;
}

SpectrumTable read_spectrum(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_spectrum(ss.str());
  } catch (const IoError& e) {
    throw IoError(path + ": " + e.what());
  }
}

std::string format_delta(const SpectrumTable& a, const SpectrumTable& b, const Header& header) {
  if (a.omegas != b.omegas) throw InvalidArgument("spectra are defined on different frequency grids");
  if (a.times != b.times) throw InvalidArgument("spectra have different snapshot times");
  std::string out = std::string(kDeltaMagic) + "\n";
  for (const auto& [k, v] : header) out += "# " + k + "=" + v + "\n";
  out += "omega,t,n_b,delta\n";
  for (std::size_t i = 0; i < a.omegas.size(); ++i) {
    for (std::size_t s = 0; s < a.times.size(); ++s) {
      const auto r = static_cast<Eigen::Index>(i);
      const auto c = static_cast<Eigen::Index>(s);
      out += fmt12(a.omegas[i]) + "," + fmt12(a.times[s]) + "," + fmt12(a.values(r, c)) + "," +
             fmt12(b.values(r, c) - a.values(r, c)) + "\n";
    }
  }
  return out;
}

}  // namespace dicke::csv
