#pragma once

#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "dicke/sweep.hpp"

namespace dicke::csv {

using Header = std::vector<std::pair<std::string, std::string>>;

inline constexpr const char* kSpectrumMagic = "# dicke-harmonics spectrum v1";
inline constexpr const char* kDeltaMagic = "# dicke-harmonics spectrum-delta v1";

// Spectrum as stored on disk. values is omegas.size() x times.size().
struct SpectrumTable {
  Header header;
  std::vector<double> omegas;
  std::vector<double> times;
  Eigen::MatrixXd values;
};

SpectrumTable table_of(const sweep::SpectrumSurface& surface, Header header);

// Magic line, one "# key=value" line per header entry, the column row
// "omega,t,n_b", then one row per (omega, t), omega-major, 12 significant digits.
std::string format_spectrum(const SpectrumTable& table);
void write_spectrum(const std::string& path, const SpectrumTable& table);

// Inverse of format_spectrum. Throws IoError on malformed input.
SpectrumTable parse_spectrum(const std::string& text);
SpectrumTable read_spectrum(const std::string& path);

// Rows "omega,t,n_b,delta" with n_b from the reference and delta = other - reference.
// Throws InvalidArgument when the two tables have different grids or snapshots.
std::string format_delta(const SpectrumTable& reference, const SpectrumTable& other, const Header& header);

// Writes text to a file or, for path "-", to stdout.
void write_text(const std::string& path, const std::string& text);

}  // namespace dicke::csv
