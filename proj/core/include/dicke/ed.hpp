#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "dicke/model.hpp"
#include "dicke/params.hpp"

namespace dicke::ed {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor, int>;

// Electronic sector (x) two truncated photon ladders. Index layout:
// ((electronic * (N_a+1)) + n_a) * (N_b+1) + n_b.
class ProductBasis {
 public:
  ProductBasis(std::size_t electronic_dim, int N_a, int N_b);

  std::size_t dim() const { return electronic_dim_ * na_dim_ * nb_dim_; }
  std::size_t electronic_dim() const { return electronic_dim_; }
  int N_a() const { return static_cast<int>(na_dim_) - 1; }
  int N_b() const { return static_cast<int>(nb_dim_) - 1; }

  std::size_t index(std::size_t electronic, int n_a, int n_b) const {
    return (electronic * na_dim_ + static_cast<std::size_t>(n_a)) * nb_dim_ + static_cast<std::size_t>(n_b);
  }
  std::size_t electronic_of(std::size_t idx) const { return idx / (na_dim_ * nb_dim_); }
  int n_a_of(std::size_t idx) const { return static_cast<int>((idx / nb_dim_) % na_dim_); }
  int n_b_of(std::size_t idx) const { return static_cast<int>(idx % nb_dim_); }

 private:
  std::size_t electronic_dim_;
  std::size_t na_dim_;
  std::size_t nb_dim_;
};

// Electron configurations sigma in {g,e}^L, one electron per TLS. Bit j of
// the electronic index is set when site j is excited.
class FockBasis : public ProductBasis {
 public:
  FockBasis(std::size_t L, int N_a, int N_b);
  std::size_t L() const { return L_; }
  static bool excited(std::size_t config, std::size_t site) { return (config >> site) & 1U; }

 private:
  std::size_t L_;
};

// Symmetric sector S = L/2; electronic index k = m + L/2 runs over L+1 states.
class SpinFockBasis : public ProductBasis {
 public:
  SpinFockBasis(std::size_t L, int N_a, int N_b);
  std::size_t L() const { return L_; }
  double m_of_electronic(std::size_t k) const { return static_cast<double>(k) - 0.5 * static_cast<double>(L_); }

 private:
  std::size_t L_;
};

// H(t) = h0 + exp(-Gamma t) h1. h0 holds the bare electronic and photon
// energies, the interaction and the cavity dipole coupling; h1 is the probe
// dipole coupling carrying g'.
struct SplitHamiltonian {
  SparseMatrix h0;
  SparseMatrix h1;
  double Gamma{0.0};

  // Both dipole couplings share the electronic operator sum_j sigma^x_j, so
  // the off-diagonal part is dipole (x) [g_a (a + a^dag) + f(t) g' (b + b^dag)].
  // The propagator uses this factorisation for its matrix-vector product.
  struct Factored {
    SparseMatrix dipole;  // electronic_dim x electronic_dim
    double g_a{0.0};
    double g_prime{0.0};
    int N_a{0};
    int N_b{0};
  };
  std::optional<Factored> factored;

  double probe_factor(double t) const;
  SparseMatrix at(double t) const;
};

SplitHamiltonian assemble_hamiltonian(const FockBasis& basis, const SystemParams& p);

// Clean noninteracting model only: throws InvalidArgument when delta != 0 or U_e != 0.
SplitHamiltonian assemble_spin_hamiltonian(const SpinFockBasis& basis, const SystemParams& p);

inline constexpr double kCoherentTailTolerance = 1e-10;

// Weight of the Poisson distribution with mean beta^2 above n = N_a.
double coherent_tail_weight(double beta, int N_a);

// Smallest cutoff whose coherent-state tail weight is below tol.
int default_cavity_cutoff(double beta, double tol = kCoherentTailTolerance);

// Amplitudes e^{-beta^2/2} beta^n / sqrt(n!) for n <= N_a, renormalised.
// Throws InvalidArgument when the discarded tail weight exceeds tol.
Eigen::VectorXcd coherent_state_vector(double beta, int N_a, double tol = kCoherentTailTolerance);

struct FockState {
  Eigen::VectorXcd amplitudes;
  double t{0.0};
};

// All-ground electrons (x) |beta> (x) |0>.
FockState initial_state(const ProductBasis& basis, double beta);

double norm(const FockState& s);
double expectation_na(const ProductBasis& basis, const FockState& s);
double expectation_nb(const ProductBasis& basis, const FockState& s);

struct PropagationOptions {
  double dt{0.01};
  double t_end{250.0};
  std::size_t stride{1};        // sample every stride-th step (and the last one)
  double abort_drift{1e-6};     // |norm - 1| beyond this aborts
  bool use_factored{true};      // Kronecker matvec when the Hamiltonian provides it
};

struct EdSample {
  double t;
  double n_a;
  double n_b;
  double norm;
};

struct PropagationResult {
  std::vector<EdSample> samples;
  FockState final_state;
  double max_norm_drift{0.0};
};

using StateObserver = std::function<void(const FockState&)>;

// Fixed-step RK4 for i d|psi>/dt = H(t)|psi>, carried out in the interaction
// picture of diag(h0) so that only the weak off-diagonal couplings are
// integrated numerically. exp(-Gamma t) is evaluated at the RK4 stage times.
// The observer, when set, receives the Schrodinger-picture state at every
// sampled step.
PropagationResult propagate(const FockState& initial, const SplitHamiltonian& H, const ProductBasis& basis,
                            const PropagationOptions& options, const StateObserver& observer = {});

enum class BasisKind { full, spin };

struct EdOptions {
  BasisKind basis{BasisKind::full};
  int N_a{-1};  // < 0 selects default_cavity_cutoff(beta)
  int N_b{6};
  std::size_t stride{1};
};

struct EdRun {
  std::vector<EdSample> samples;
  double max_norm_drift{0.0};
  std::size_t dimension{0};
};

EdRun run(const SystemParams& p, const EdOptions& options);

// Moments of the kind propagated by the GKBA engine, measured on a state of
// the full electron-configuration basis. Correlators between different TLSs
// vanish identically and are returned as zero.
MomentSet moments(const FockBasis& basis, const Eigen::VectorXcd& psi);

// <S^2> with S = sum of the per-TLS spin-1/2 operators.
double total_spin_squared(const FockBasis& basis, const Eigen::VectorXcd& psi);

}  // namespace dicke::ed
