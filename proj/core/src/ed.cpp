#include "dicke/ed.hpp"

#include <cmath>
#include <optional>
#include <string>

#include "dicke/error.hpp"

namespace dicke::ed {

namespace {

using Triplet = Eigen::Triplet<double, int>;

int checked_cutoff(int n, const char* name) {
  if (n < 0) throw InvalidArgument(std::string(name) + " must be >= 0");
  return n;
}

SparseMatrix from_triplets(std::size_t dim, const std::vector<Triplet>& t) {
  SparseMatrix m(static_cast<int>(dim), static_cast<int>(dim));
  m.setFromTriplets(t.begin(), t.end());
  m.makeCompressed();
  return m;
}

// Adds the symmetric pair (i,j), (j,i) with value v.
void add_pair(std::vector<Triplet>& t, std::size_t i, std::size_t j, double v) {
  t.emplace_back(static_cast<int>(i), static_cast<int>(j), v);
  t.emplace_back(static_cast<int>(j), static_cast<int>(i), v);
}

}  // namespace

ProductBasis::ProductBasis(std::size_t electronic_dim, int N_a, int N_b)
    : electronic_dim_(electronic_dim),
      na_dim_(static_cast<std::size_t>(checked_cutoff(N_a, "N_a")) + 1),
      nb_dim_(static_cast<std::size_t>(checked_cutoff(N_b, "N_b")) + 1) {}

FockBasis::FockBasis(std::size_t L, int N_a, int N_b)
    : ProductBasis((L >= 1 && L < 26) ? (std::size_t{1} << L) : 0, N_a, N_b), L_(L) {
  if (L < 1 || L >= 26) throw InvalidArgument("full ED basis supports 1 <= L <= 25");
}

SpinFockBasis::SpinFockBasis(std::size_t L, int N_a, int N_b) : ProductBasis(L + 1, N_a, N_b), L_(L) {
  if (L < 1) throw InvalidArgument("L must be >= 1");
}

double SplitHamiltonian::probe_factor(double t) const { return std::exp(-Gamma * t); }

SparseMatrix SplitHamiltonian::at(double t) const { return h0 + probe_factor(t) * h1; }

SplitHamiltonian assemble_hamiltonian(const FockBasis& basis, const SystemParams& p) {
  validate(p);
  if (basis.L() != p.L) throw InvalidArgument("basis L does not match parameters");
  const SiteLevels lv = disorder_levels(p);
  const int Na = basis.N_a();
  const int Nb = basis.N_b();
  const std::size_t L = basis.L();

  std::vector<Triplet> t0;
  std::vector<Triplet> t1;
  t0.reserve(basis.dim() * (1 + 2 * L));
  t1.reserve(basis.dim() * 2 * L);

  for (std::size_t cfg = 0; cfg < basis.electronic_dim(); ++cfg) {
    double e_el = 0.0;
    for (std::size_t j = 0; j < L; ++j) e_el += FockBasis::excited(cfg, j) ? lv.excited[j] : lv.ground[j];
    for (std::size_t j = 0; j + 1 < L; ++j) {
      if (FockBasis::excited(cfg, j) && FockBasis::excited(cfg, j + 1)) e_el += p.U_e;
    }
    for (int na = 0; na <= Na; ++na) {
      for (int nb = 0; nb <= Nb; ++nb) {
        const std::size_t idx = basis.index(cfg, na, nb);
        const double e = e_el + p.omega_a * na + p.omega_b * nb;
        if (e != 0.0) t0.emplace_back(static_cast<int>(idx), static_cast<int>(idx), e);
        for (std::size_t j = 0; j < L; ++j) {
          const std::size_t flipped = cfg ^ (std::size_t{1} << j);
          if (na < Na && p.g_a != 0.0) {
            add_pair(t0, idx, basis.index(flipped, na + 1, nb), p.g_a * std::sqrt(na + 1.0));
          }
          if (nb < Nb && p.g_prime != 0.0) {
            add_pair(t1, idx, basis.index(flipped, na, nb + 1), p.g_prime * std::sqrt(nb + 1.0));
          }
        }
      }
    }
  }
  std::vector<Triplet> td;
  for (std::size_t cfg = 0; cfg < basis.electronic_dim(); ++cfg) {
    for (std::size_t j = 0; j < L; ++j) {
      td.emplace_back(static_cast<int>(cfg), static_cast<int>(cfg ^ (std::size_t{1} << j)), 1.0);
    }
  }
  SplitHamiltonian H{from_triplets(basis.dim(), t0), from_triplets(basis.dim(), t1), p.Gamma, {}};
  H.factored = SplitHamiltonian::Factored{from_triplets(basis.electronic_dim(), td), p.g_a, p.g_prime, Na, Nb};
  return H;
}

SplitHamiltonian assemble_spin_hamiltonian(const SpinFockBasis& basis, const SystemParams& p) {
  validate(p);
  if (p.delta != 0.0 || p.U_e != 0.0) {
    throw InvalidArgument("spin-symmetric ED requires delta = 0 and U_e = 0");
  }
  if (basis.L() != p.L) throw InvalidArgument("basis L does not match parameters");
  const int Na = basis.N_a();
  const int Nb = basis.N_b();
  const std::size_t L = basis.L();
  const double S = 0.5 * static_cast<double>(L);
  const double offset = 0.5 * static_cast<double>(L) * (p.eps_g + p.eps_e);
  const double Delta = p.level_splitting();

  std::vector<Triplet> t0;
  std::vector<Triplet> t1;
  for (std::size_t k = 0; k <= L; ++k) {
    const double m = basis.m_of_electronic(k);
    // <m+1| 2 S^x |m>
    const double ladder = (k < L) ? std::sqrt(S * (S + 1.0) - m * (m + 1.0)) : 0.0;
    for (int na = 0; na <= Na; ++na) {
      for (int nb = 0; nb <= Nb; ++nb) {
        const std::size_t idx = basis.index(k, na, nb);
        const double e = offset + Delta * m + p.omega_a * na + p.omega_b * nb;
        if (e != 0.0) t0.emplace_back(static_cast<int>(idx), static_cast<int>(idx), e);
        if (k == L) continue;
        if (na < Na && p.g_a != 0.0) {
          const double v = p.g_a * ladder * std::sqrt(na + 1.0);
          add_pair(t0, idx, basis.index(k + 1, na + 1, nb), v);
          add_pair(t0, basis.index(k + 1, na, nb), basis.index(k, na + 1, nb), v);
        }
        if (nb < Nb && p.g_prime != 0.0) {
          const double v = p.g_prime * ladder * std::sqrt(nb + 1.0);
          add_pair(t1, idx, basis.index(k + 1, na, nb + 1), v);
          add_pair(t1, basis.index(k + 1, na, nb), basis.index(k, na, nb + 1), v);
        }
      }
    }
  }
  std::vector<Triplet> td;
  for (std::size_t k = 0; k < L; ++k) {
    const double m = basis.m_of_electronic(k);
    add_pair(td, k, k + 1, std::sqrt(S * (S + 1.0) - m * (m + 1.0)));
  }
  SplitHamiltonian H{from_triplets(basis.dim(), t0), from_triplets(basis.dim(), t1), p.Gamma, {}};
  H.factored = SplitHamiltonian::Factored{from_triplets(basis.electronic_dim(), td), p.g_a, p.g_prime, Na, Nb};
  return H;
}

double coherent_tail_weight(double beta, int N_a) {
  if (N_a < 0) throw InvalidArgument("N_a must be >= 0");
  // Sum the tail directly; 1 - head loses the digits we need near 1e-10.
  const double mean = beta * beta;
  if (mean == 0.0) return 0.0;
  double log_term = -mean + (N_a + 1) * std::log(mean) - std::lgamma(N_a + 2.0);
  double term = std::exp(log_term);
  double tail = 0.0;
  for (int n = N_a + 1; n < N_a + 100000; ++n) {
    tail += term;
    term *= mean / (n + 1.0);
    if (n > mean && term < 1e-300 + 1e-18 * tail) break;
  }
  return tail;
}

int default_cavity_cutoff(double beta, double tol) {
  int n = 0;
  while (coherent_tail_weight(beta, n) >= tol) ++n;
  return n;
}

Eigen::VectorXcd coherent_state_vector(double beta, int N_a, double tol) {
  if (beta < 0.0 || !std::isfinite(beta)) throw InvalidArgument("beta must be real and >= 0");
  const double tail = coherent_tail_weight(beta, N_a);
  if (tail > tol) {
    throw InvalidArgument("coherent state truncated at N_a = " + std::to_string(N_a) +
                          " discards weight " + std::to_string(tail));
  }
  Eigen::VectorXcd c(N_a + 1);
  const double mean = beta * beta;
  for (int n = 0; n <= N_a; ++n) {
    // log amplitude: -beta^2/2 + n log beta - lgamma(n+1)/2
    const double la = (n == 0) ? -0.5 * mean : -0.5 * mean + n * std::log(beta) - 0.5 * std::lgamma(n + 1.0);
    c[n] = (beta == 0.0 && n > 0) ? 0.0 : std::exp(la);
  }
  c /= c.norm();
  return c;
}

FockState initial_state(const ProductBasis& basis, double beta) {
  FockState s;
  s.amplitudes = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(basis.dim()));
  const Eigen::VectorXcd cav = coherent_state_vector(beta, basis.N_a());
  for (int na = 0; na <= basis.N_a(); ++na) s.amplitudes[static_cast<Eigen::Index>(basis.index(0, na, 0))] = cav[na];
  return s;
}

double norm(const FockState& s) { return s.amplitudes.norm(); }

double expectation_na(const ProductBasis& basis, const FockState& s) {
  double acc = 0.0;
  for (std::size_t i = 0; i < basis.dim(); ++i) acc += basis.n_a_of(i) * std::norm(s.amplitudes[static_cast<Eigen::Index>(i)]);
  return acc;
}

double expectation_nb(const ProductBasis& basis, const FockState& s) {
  double acc = 0.0;
  for (std::size_t i = 0; i < basis.dim(); ++i) acc += basis.n_b_of(i) * std::norm(s.amplitudes[static_cast<Eigen::Index>(i)]);
  return acc;
}

namespace {

struct OffDiagonalSplit {
  Eigen::VectorXd diagonal;
  SparseMatrix v0;
  SparseMatrix v1;
};

SparseMatrix without_diagonal(const SparseMatrix& m) {
  SparseMatrix out = m;
  out.prune([](int r, int c, double) { return r != c; });
  out.makeCompressed();
  return out;
}

// out = -i P .* (V0 + f V1) (conj(P) .* y)
void interaction_rhs(const OffDiagonalSplit& h, double f, const Eigen::VectorXcd& phase, const Eigen::VectorXcd& y,
                     Eigen::VectorXcd& scratch, Eigen::VectorXcd& out) {
  const Eigen::Index n = y.size();
  for (Eigen::Index i = 0; i < n; ++i) scratch[i] = std::conj(phase[i]) * y[i];
  const int* o0 = h.v0.outerIndexPtr();
  const int* i0 = h.v0.innerIndexPtr();
  const double* x0 = h.v0.valuePtr();
  const int* o1 = h.v1.outerIndexPtr();
  const int* i1 = h.v1.innerIndexPtr();
  const double* x1 = h.v1.valuePtr();
  for (Eigen::Index r = 0; r < n; ++r) {
    Complex a0{0.0, 0.0};
    for (int k = o0[r]; k < o0[r + 1]; ++k) a0 += x0[k] * scratch[i0[k]];
    Complex a1{0.0, 0.0};
    for (int k = o1[r]; k < o1[r + 1]; ++k) a1 += x1[k] * scratch[i1[k]];
    const Complex w = a0 + f * a1;
    out[r] = Complex(w.imag(), -w.real()) * phase[r];  // -i w P
  }
}

// Same product through the Kronecker factorisation: each electronic block
// is acted on by the boson operator, then the blocks are mixed by the dipole.
// Complex vectors are viewed as interleaved doubles so every pass is a plain
// real array operation.
struct FactoredKernel {
  using RealMap = Eigen::Map<Eigen::ArrayXd>;
  using ConstRealMap = Eigen::Map<const Eigen::ArrayXd>;
  using Strided = Eigen::Map<Eigen::ArrayXd, 0, Eigen::InnerStride<2>>;
  using ConstStrided = Eigen::Map<const Eigen::ArrayXd, 0, Eigen::InnerStride<2>>;

  const SplitHamiltonian::Factored& h;
  Eigen::Index row, box;                 // in doubles: one n_b row and one boson block
  Eigen::ArrayXd up_a, dn_a, up_b, dn_b;  // ladder weights, each entry duplicated for (re, im)

  explicit FactoredKernel(const SplitHamiltonian::Factored& f)
      : h(f), row(2 * (f.N_b + 1)), box(2 * static_cast<Eigen::Index>(f.N_a + 1) * (f.N_b + 1)),
        up_a(box), dn_a(box), up_b(box), dn_b(box) {
    const Eigen::Index nb_dim = f.N_b + 1;
    for (Eigen::Index i = 0; i < box; ++i) {
      const Eigen::Index c = i / 2;
      const auto a = static_cast<double>(c / nb_dim);
      const auto b = static_cast<double>(c % nb_dim);
      up_a[i] = h.g_a * std::sqrt(a + 1.0);
      dn_a[i] = h.g_a * std::sqrt(a);
      up_b[i] = (c % nb_dim) + 1 < nb_dim ? std::sqrt(b + 1.0) : 0.0;
      dn_b[i] = std::sqrt(b);
    }
  }

  // out = conj(p) .* in (sign = -1) or -i p .* in (sign = +1), elementwise.
  static void rotate(const Eigen::VectorXcd& p, const Eigen::VectorXcd& in, Eigen::VectorXcd& out, bool forward) {
    const Eigen::Index n = p.size();
    const double* pd = reinterpret_cast<const double*>(p.data());
    const double* id = reinterpret_cast<const double*>(in.data());
    double* od = reinterpret_cast<double*>(out.data());
    ConstStrided pr(pd, n), pi(pd + 1, n), xr(id, n), xi(id + 1, n);
    Strided yr(od, n), yi(od + 1, n);
    if (forward) {
      // -i (pr + i pi)(xr + i xi) = (pr xi + pi xr) - i (pr xr - pi xi)
      const Eigen::ArrayXd re = pr * xi + pi * xr;
      yi = pi * xi - pr * xr;
      yr = re;
    } else {
      const Eigen::ArrayXd re = pr * xr + pi * xi;
      yi = pr * xi - pi * xr;
      yr = re;
    }
  }

  void operator()(double f, const Eigen::VectorXcd& phase, const Eigen::VectorXcd& y, Eigen::VectorXcd& scratch,
                  Eigen::VectorXcd& boson, Eigen::VectorXcd& out) const {
    const Eigen::Index blocks = 2 * y.size() / box;
    rotate(phase, y, scratch, false);
    const double gb = f * h.g_prime;
    const Eigen::Index m = box - row;
    const double* sd = reinterpret_cast<const double*>(scratch.data());
    double* wd = reinterpret_cast<double*>(boson.data());
    for (Eigen::Index e = 0; e < blocks; ++e) {
      ConstRealMap s(sd + e * box, box);
      RealMap w(wd + e * box, box);
      w.head(row).setZero();
      w.tail(m) = dn_a.tail(m) * s.head(m);
      w.head(m) += up_a.head(m) * s.tail(m);
      if (gb != 0.0) {
        w.head(box - 2) += gb * up_b.head(box - 2) * s.tail(box - 2);
        w.tail(box - 2) += gb * dn_b.tail(box - 2) * s.head(box - 2);
      }
    }
    const int* outer = h.dipole.outerIndexPtr();
    const int* inner = h.dipole.innerIndexPtr();
    const double* val = h.dipole.valuePtr();
    double* od = reinterpret_cast<double*>(out.data());
    for (Eigen::Index e = 0; e < blocks; ++e) {
      RealMap dst(od + e * box, box);
      dst.setZero();
      for (int k = outer[e]; k < outer[e + 1]; ++k) dst += val[k] * ConstRealMap(wd + inner[k] * box, box);
    }
    rotate(phase, out, out, true);
  }
};

void fill_phase(const Eigen::VectorXd& d, double t, Eigen::VectorXcd& phase) {
  for (Eigen::Index i = 0; i < d.size(); ++i) phase[i] = std::polar(1.0, d[i] * t);
}

struct OccupationWeights {
  Eigen::VectorXd n_a, n_b;

  explicit OccupationWeights(const ProductBasis& basis) : n_a(basis.dim()), n_b(basis.dim()) {
    for (std::size_t i = 0; i < basis.dim(); ++i) {
      n_a[static_cast<Eigen::Index>(i)] = basis.n_a_of(i);
      n_b[static_cast<Eigen::Index>(i)] = basis.n_b_of(i);
    }
  }
};

EdSample sample(const OccupationWeights& w, const Eigen::VectorXcd& y, double t) {
  const Eigen::VectorXd p = y.cwiseAbs2();
  return EdSample{t, w.n_a.dot(p), w.n_b.dot(p), std::sqrt(p.sum())};
}

}  // namespace

PropagationResult propagate(const FockState& initial, const SplitHamiltonian& H, const ProductBasis& basis,
                            const PropagationOptions& options, const StateObserver& observer) {
  const Eigen::Index n = static_cast<Eigen::Index>(basis.dim());
  if (initial.amplitudes.size() != n || H.h0.rows() != n || H.h1.rows() != n) {
    throw InvalidArgument("state and Hamiltonian dimensions do not match the basis");
  }
  if (!(options.dt > 0.0)) throw InvalidArgument("dt must be > 0");
  if (options.stride == 0) throw InvalidArgument("stride must be >= 1");
  const double norm0 = initial.amplitudes.norm();
  if (std::abs(norm0 - 1.0) > 1e-10) throw InvalidArgument("initial state must be normalised");

  OffDiagonalSplit split{H.h0.diagonal(), without_diagonal(H.h0), without_diagonal(H.h1)};
  if (split.v1.nonZeros() != H.h1.nonZeros()) throw InvalidArgument("probe coupling must be off-diagonal");
  const double dt = options.dt;
  const auto steps = static_cast<std::size_t>(std::llround((options.t_end - initial.t) / dt));

  Eigen::VectorXcd phase(n), phase_mid(n), phase_end(n), half_step(n);
  for (Eigen::Index i = 0; i < n; ++i) half_step[i] = std::polar(1.0, 0.5 * dt * split.diagonal[i]);

  double t = initial.t;
  fill_phase(split.diagonal, t, phase);
  Eigen::VectorXcd y = initial.amplitudes.cwiseProduct(phase);
  Eigen::VectorXcd k1(n), k2(n), k3(n), k4(n), tmp(n), scratch(n), boson(n);
  const bool factored = options.use_factored && H.factored.has_value();
  std::optional<FactoredKernel> kernel;
  if (factored) kernel.emplace(*H.factored);
  auto evaluate = [&](double f, const Eigen::VectorXcd& ph, const Eigen::VectorXcd& x, Eigen::VectorXcd& k) {
    if (factored) {
      (*kernel)(f, ph, x, scratch, boson, k);
    } else {
      interaction_rhs(split, f, ph, x, scratch, k);
    }
  };

  const OccupationWeights weights(basis);
  PropagationResult result;
  auto emit = [&](std::size_t step) {
    const double nrm = y.norm();
    result.max_norm_drift = std::max(result.max_norm_drift, std::abs(nrm - 1.0));
    if (step % options.stride == 0 || step == steps) {
      result.samples.push_back(sample(weights, y, t));
      if (observer) observer(FockState{y.cwiseProduct(phase.conjugate()), t});
    }
    if (!std::isfinite(nrm)) throw NumericalError("ED propagation produced a non-finite state at t = " + std::to_string(t));
    if (std::abs(nrm - 1.0) > options.abort_drift) {
      throw NumericalError("ED norm drift " + std::to_string(std::abs(nrm - 1.0)) + " exceeds " +
                           std::to_string(options.abort_drift) + " at t = " + std::to_string(t));
    }
  };
  emit(0);

  constexpr std::size_t kPhaseRefresh = 1024;
  for (std::size_t step = 1; step <= steps; ++step) {
    phase_mid = phase.cwiseProduct(half_step);
    phase_end = phase_mid.cwiseProduct(half_step);
    const double f0 = H.probe_factor(t);
    const double fm = H.probe_factor(t + 0.5 * dt);
    const double f1 = H.probe_factor(t + dt);

    evaluate(f0, phase, y, k1);
    tmp = y + (0.5 * dt) * k1;
    evaluate(fm, phase_mid, tmp, k2);
    tmp = y + (0.5 * dt) * k2;
    evaluate(fm, phase_mid, tmp, k3);
    tmp = y + dt * k3;
    evaluate(f1, phase_end, tmp, k4);
    y += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

    t = initial.t + static_cast<double>(step) * dt;
    if (step % kPhaseRefresh == 0) {
      fill_phase(split.diagonal, t, phase);
    } else {
      phase = phase_end;
    }
    emit(step);
  }
  result.final_state = FockState{y.cwiseProduct(phase.conjugate()), t};
  return result;
}

EdRun run(const SystemParams& p, const EdOptions& options) {
  validate(p);
  const int Na = options.N_a < 0 ? default_cavity_cutoff(p.beta) : options.N_a;
  PropagationOptions po{p.dt, p.t_end, options.stride, 1e-6};
  EdRun out;
  if (options.basis == BasisKind::spin) {
    SpinFockBasis basis(p.L, Na, options.N_b);
    const auto H = assemble_spin_hamiltonian(basis, p);
    auto r = propagate(initial_state(basis, p.beta), H, basis, po);
    out.samples = std::move(r.samples);
    out.max_norm_drift = r.max_norm_drift;
    out.dimension = basis.dim();
  } else {
    FockBasis basis(p.L, Na, options.N_b);
    const auto H = assemble_hamiltonian(basis, p);
    auto r = propagate(initial_state(basis, p.beta), H, basis, po);
    out.samples = std::move(r.samples);
    out.max_norm_drift = r.max_norm_drift;
    out.dimension = basis.dim();
  }
  return out;
}

namespace {

// (a^dag + a)/sqrt2 for q = 0, i (a^dag - a)/sqrt2 for q = 1, on the given mode.
Eigen::VectorXcd apply_quadrature(const FockBasis& basis, std::size_t mu, const Eigen::VectorXcd& psi) {
  const std::size_t mode = mu / 2;
  const bool momentum = (mu % 2) == 1;
  const int cutoff = mode == 0 ? basis.N_a() : basis.N_b();
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(psi.size());
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (std::size_t i = 0; i < basis.dim(); ++i) {
    const Complex amp = psi[static_cast<Eigen::Index>(i)];
    if (amp == Complex{}) continue;
    const std::size_t e = basis.electronic_of(i);
    const int na = basis.n_a_of(i);
    const int nb = basis.n_b_of(i);
    const int n = mode == 0 ? na : nb;
    auto target = [&](int m) { return mode == 0 ? basis.index(e, m, nb) : basis.index(e, na, m); };
    if (n < cutoff) {  // a^dag
      const Complex c = (momentum ? I : Complex{1.0}) * std::sqrt(n + 1.0) * inv_sqrt2;
      out[static_cast<Eigen::Index>(target(n + 1))] += c * amp;
    }
    if (n > 0) {  // a
      const Complex c = (momentum ? -I : Complex{1.0}) * std::sqrt(static_cast<double>(n)) * inv_sqrt2;
      out[static_cast<Eigen::Index>(target(n - 1))] += c * amp;
    }
  }
  return out;
}

// c^dag_{to} c_{from} restricted to one site; no fermionic sign arises
// because the electron stays inside its own TLS.
Eigen::VectorXcd apply_transition(const FockBasis& basis, std::size_t site, Level from, Level to,
                                  const Eigen::VectorXcd& psi) {
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(psi.size());
  for (std::size_t i = 0; i < basis.dim(); ++i) {
    const std::size_t cfg = basis.electronic_of(i);
    const bool exc = FockBasis::excited(cfg, site);
    if (exc != (from == Level::excited)) continue;
    const std::size_t new_cfg = (from == to) ? cfg : (cfg ^ (std::size_t{1} << site));
    out[static_cast<Eigen::Index>(basis.index(new_cfg, basis.n_a_of(i), basis.n_b_of(i)))] +=
        psi[static_cast<Eigen::Index>(i)];
  }
  return out;
}

}  // namespace

MomentSet moments(const FockBasis& basis, const Eigen::VectorXcd& psi) {
  const std::size_t L = basis.L();
  const std::size_t n = 2 * L;
  MomentSet m;
  std::array<Eigen::VectorXcd, quad::count> phi_psi;
  for (std::size_t mu = 0; mu < quad::count; ++mu) {
    phi_psi[mu] = apply_quadrature(basis, mu, psi);
    m.phi[static_cast<Eigen::Index>(mu)] = psi.dot(phi_psi[mu]).real();
  }
  for (std::size_t mu = 0; mu < quad::count; ++mu) {
    for (std::size_t nu = 0; nu < quad::count; ++nu) {
      // <dphi_nu dphi_mu> = (phi_nu psi)^dag (phi_mu psi) - phi_nu phi_mu
      m.gamma(mu, nu) = phi_psi[nu].dot(phi_psi[mu]) - m.phi[nu] * m.phi[mu];
    }
  }
  m.rho = Eigen::MatrixXcd::Zero(n, n);
  for (auto& g : m.calG) g = Eigen::MatrixXcd::Zero(n, n);
  const Level levels[2] = {Level::ground, Level::excited};
  for (std::size_t s = 0; s < L; ++s) {
    for (Level li : levels) {
      for (Level lj : levels) {
        const std::size_t i = ElectronIndex::flat(li, s);
        const std::size_t j = ElectronIndex::flat(lj, s);
        // rho_ij = <c_j^dag c_i>: move the electron from level i to level j.
        m.rho(i, j) = psi.dot(apply_transition(basis, s, li, lj, psi));
        for (std::size_t mu = 0; mu < quad::count; ++mu) {
          const Complex full = psi.dot(apply_transition(basis, s, li, lj, phi_psi[mu]));
          m.calG[mu](i, j) = full - m.rho(i, j) * m.phi[mu];
        }
      }
    }
  }
  return m;
}

double total_spin_squared(const FockBasis& basis, const Eigen::VectorXcd& psi) {
  // S^2 = S^- S^+ + S_z^2 + S_z
  Eigen::VectorXcd raised = Eigen::VectorXcd::Zero(psi.size());
  double sz = 0.0, sz2 = 0.0;
  for (std::size_t i = 0; i < basis.dim(); ++i) {
    const std::size_t cfg = basis.electronic_of(i);
    double m = 0.0;
    for (std::size_t j = 0; j < basis.L(); ++j) m += FockBasis::excited(cfg, j) ? 0.5 : -0.5;
    const double w = std::norm(psi[static_cast<Eigen::Index>(i)]);
    sz += m * w;
    sz2 += m * m * w;
  }
  for (std::size_t j = 0; j < basis.L(); ++j) raised += apply_transition(basis, j, Level::ground, Level::excited, psi);
  return raised.squaredNorm() + sz2 + sz;
}

}  // namespace dicke::ed
