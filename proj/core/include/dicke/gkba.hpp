#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "dicke/bath.hpp"
#include "dicke/model.hpp"
#include "dicke/params.hpp"
#include "dicke/rk4.hpp"

namespace dicke::gkba {

// (phi, rho^<, gamma^<, calG^b) at time t. gamma^> = gamma^< + alpha and
// rho^> = 1 - rho^< are always derived, never stored.
struct GkbaState : MomentSet {
  double t{0.0};
};

GkbaState initial_state(const SystemParams& p);

// h^e_ij = h0_ij + delta_ij sum_m calU_im rho_mm - calU_ij rho_ij + sum_mu phi_mu g_mu,ij(t).
Eigen::MatrixXcd hf_hamiltonian(const Model& model, const Eigen::MatrixXcd& rho, const Eigen::Vector4d& phi,
                                double t);

// h^b = 2 alpha Omega.
Matrix4cd boson_hamiltonian(const SystemParams& p);

// Source of the correlator equation,
//   Psi_mu = sum_nu gamma^>_{mu nu} rho^> g_nu rho^< - gamma^<_{mu nu} rho^< g_nu rho^>,
// entering as i dcalG_mu/dt = [h^e, calG_mu] + sum_nu h^b_{mu nu} calG_nu + Psi_mu
// for calG_{mu,ij} = <c_j^dag c_i dphi_mu>.
std::array<Eigen::MatrixXcd, quad::count> psi_tensor(const Matrix4cd& gamma, const Eigen::MatrixXcd& rho,
                                                     const std::array<Eigen::MatrixXd, quad::count>& g,
                                                     const Matrix4cd& alpha);

struct CollisionIntegrals {
  Eigen::MatrixXcd electron;  // I^e_mj = i sum_{mu,l} g_mu,ml calG_mu,lj
  Matrix4cd boson;            // I^b_{mu nu} = -i sum_{eta,mj} alpha_{mu eta} g_eta,mj calG_nu,jm
};

CollisionIntegrals collision_integrals(const std::array<Eigen::MatrixXcd, quad::count>& calG,
                                       const std::array<Eigen::MatrixXd, quad::count>& g, const Matrix4cd& alpha);

// Time derivative of the full state. force, when given, is the classical
// leakage force F_mu entering the phi equation as + alpha F.
void rhs(const Model& model, const GkbaState& state, double t, GkbaState& dydt,
         const Eigen::Vector4d* force = nullptr);

// Per-TLS representation. Every term of the equations of motion preserves
// the block structure of an initial state without inter-TLS coherence (the
// dipole coupling is intra-TLS and the exchange term needs inter-TLS
// coherence to act), so this layout is exact for the model and costs O(L)
// per step rather than O(L^3).
struct BlockedState {
  Eigen::Vector4d phi;
  Matrix4cd gamma;
  std::vector<Eigen::Matrix2cd> rho;                          // basis (g, e) of each TLS
  std::array<std::vector<Eigen::Matrix2cd>, quad::count> calG;  // [mu][site]
  double t{0.0};

  std::size_t sites() const { return rho.size(); }
  static BlockedState from_dense(const GkbaState& s);
  GkbaState to_dense() const;
};

BlockedState initial_blocked_state(const SystemParams& p);

void rhs(const Model& model, const BlockedState& state, double t, BlockedState& dydt,
         const Eigen::Vector4d* force = nullptr);

void assign_sum(GkbaState& out, const GkbaState& y, double a, const GkbaState& k);
void add_scaled(GkbaState& y, double a, const GkbaState& k);
void assign_sum(BlockedState& out, const BlockedState& y, double a, const BlockedState& k);
void add_scaled(BlockedState& y, double a, const BlockedState& k);

// rho <- (rho + rho^dag)/2, gamma likewise. Returns the largest entry of the
// anti-Hermitian parts removed.
double resymmetrize(GkbaState& s);
double resymmetrize(BlockedState& s);

struct Observables {
  double t{0.0};
  double n_a{0.0};
  double n_b{0.0};
  std::vector<double> excited;  // rho^<_{e_j e_j}
};

// n_m = (gamma_xx + gamma_pp - 1)/2 + (phi_x^2 + phi_p^2)/2.
double photon_number(const Eigen::Vector4d& phi, const Matrix4cd& gamma, std::size_t mode);
Observables observables(const GkbaState& s);
Observables observables(const BlockedState& s);

struct ConservationReport {
  double max_trace_error{0.0};        // |Tr rho - L|
  double max_block_trace_error{0.0};  // |rho_gg + rho_ee - 1| per TLS
  double min_rho_eigenvalue{std::numeric_limits<double>::infinity()};
  double max_rho_eigenvalue{-std::numeric_limits<double>::infinity()};
  double max_rho_asymmetry{0.0};     // anti-Hermitian residue removed per step
  double max_gamma_asymmetry{0.0};
  double min_covariance_eigenvalue{std::numeric_limits<double>::infinity()};  // eig(gamma + alpha/2)

  void merge(const ConservationReport& other);
  bool within(double tol = 1e-8) const;
};

void accumulate(ConservationReport& report, const BlockedState& s, const Matrix4cd& alpha);
void accumulate(ConservationReport& report, const GkbaState& s, const Matrix4cd& alpha);

enum class Kernel { blocked, dense };

// One RK4 step on the concatenated state, followed by re-symmetrisation.
// Throws NumericalError on NaN/Inf. step() returns the anti-Hermitian
// residue removed by the re-symmetrisation.
class Stepper {
 public:
  explicit Stepper(const SystemParams& p);
  double step(GkbaState& s, double dt);
  double step(BlockedState& s, double dt);
  const Model& model() const { return model_; }

 private:
  Model model_;
  std::optional<Rk4<GkbaState>> dense_rk4_;
  std::optional<Rk4<BlockedState>> blocked_rk4_;
};

GkbaState step_rk4(const GkbaState& s, const SystemParams& p, double dt);

struct RunOptions {
  std::size_t stride{1};
  Kernel kernel{Kernel::blocked};
  std::optional<BathConfig> bath;
  bool check_conservation{true};
};

struct RunResult {
  std::vector<Observables> samples;  // every stride-th step, plus the last
  GkbaState final_state;
  std::optional<bath::BathState> final_bath;
  ConservationReport conservation;
  std::size_t steps{0};
};

using Observer = std::function<void(const Observables&)>;

// Integrates from initial_conditions to t_end.
RunResult run(const SystemParams& p, const RunOptions& options = {}, const Observer& observer = {});

}  // namespace dicke::gkba
