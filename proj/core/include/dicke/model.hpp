#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "dicke/params.hpp"

namespace dicke {

using Complex = std::complex<double>;
using Matrix4cd = Eigen::Matrix<Complex, 4, 4>;
using Vector4cd = Eigen::Matrix<Complex, 4, 1>;

inline constexpr Complex I{0.0, 1.0};

enum class Level { ground, excited };

// Flat electron index over (level, site). Sites are 0-based here; the
// 1-based convention (g,j) -> 2j-1, (e,j) -> 2j is the same map shifted by one.
struct ElectronIndex {
  static constexpr std::size_t flat(Level level, std::size_t site) {
    return 2 * site + (level == Level::excited ? 1 : 0);
  }
  static constexpr std::pair<Level, std::size_t> split(std::size_t index) {
    return {(index % 2 == 1) ? Level::excited : Level::ground, index / 2};
  }
  static constexpr std::size_t ground(std::size_t site) { return 2 * site; }
  static constexpr std::size_t excited(std::size_t site) { return 2 * site + 1; }
};

// Combined boson index mu = (mode, quadrature): x1, p1 (cavity), x2, p2 (probe).
namespace quad {
inline constexpr std::size_t x1 = 0;
inline constexpr std::size_t p1 = 1;
inline constexpr std::size_t x2 = 2;
inline constexpr std::size_t p2 = 3;
inline constexpr std::size_t count = 4;
constexpr std::size_t x(std::size_t mode) { return 2 * mode; }
constexpr std::size_t p(std::size_t mode) { return 2 * mode + 1; }
}  // namespace quad

struct SiteLevels {
  std::vector<double> ground;
  std::vector<double> excited;
};

// eps_g,i = eps_g - (delta/2) sin(pi (i-1)/L), eps_e,i = eps_e + (delta/2) sin(3 pi (i-1)/L).
SiteLevels disorder_levels(const SystemParams& p);

// alpha_{mu nu} = [phi_mu, phi_nu] and the quadratic form Omega of H_ph.
struct SymplecticStructure {
  Matrix4cd alpha;
  Eigen::Matrix4d omega;

  static SymplecticStructure make(double omega_a, double omega_b);

  // h^b = 2 alpha Omega.
  Matrix4cd boson_hamiltonian() const;
};

// g_{mu,ij}(t) = scale[mu] * dipole_ij, where dipole couples (g,j) <-> (e,j)
// on every site. Only the x-quadratures carry weight: sqrt(2) g_a for the
// cavity and sqrt(2) g' exp(-Gamma t) for the probe.
struct CouplingTensor {
  Eigen::MatrixXd dipole;
  std::array<double, quad::count> scale{};

  Eigen::MatrixXd component(std::size_t mu) const { return scale[mu] * dipole; }
  std::array<Eigen::MatrixXd, quad::count> dense() const;
};

CouplingTensor build_coupling_tensor(const SystemParams& p, double t);

// Scalar prefactors only, for kernels that exploit the shared dipole pattern.
std::array<double, quad::count> coupling_scales(const SystemParams& p, double t);

// One-body and boson moments of a state: phi_mu = <phi_mu>,
// rho_ij = <c_j^dag c_i>, gamma_{mu nu} = <dphi_nu dphi_mu> and the connected
// correlator calG_{mu,ij} = <c_j^dag c_i dphi_mu>.
struct MomentSet {
  Eigen::Vector4d phi;
  Eigen::MatrixXcd rho;
  Matrix4cd gamma;
  std::array<Eigen::MatrixXcd, quad::count> calG;
};

// Electrons in the all-ground product state, cavity in |beta>, probe in vacuum,
// no electron-boson correlation.
MomentSet initial_conditions(const SystemParams& p);

// Vacuum (and coherent-state) quadrature fluctuations: gamma^< = (1 - alpha)/2,
// so that gamma^> - gamma^< = alpha with gamma^>_{mu nu} = <dphi_mu dphi_nu>.
Matrix4cd vacuum_fluctuations(const SymplecticStructure& sym);

// Quantities derived once per parameter set and shared by both GKBA kernels.
struct Model {
  SystemParams params;
  SiteLevels levels;
  SymplecticStructure sym;
  Matrix4cd boson_h;
  Eigen::MatrixXd h0;           // diagonal bare levels, 2L x 2L
  Eigen::MatrixXd interaction;  // calU_ij = U_e on excited levels of adjacent sites
  Eigen::MatrixXd dipole;

  static Model build(const SystemParams& p);
  std::size_t orbitals() const { return 2 * params.L; }
};

}  // namespace dicke
