#pragma once
// Concrete tight-binding models used throughout: the chiral two-band
// chain, its time-reversal symmetric spin chain variant, and the
// quantum-spin-Hall type models in two and three dimensions, all with
// optional symmetry-preserving disorder drawn from the counter RNG.

#include <cstdint>

#include "clifford.hpp"
#include "degree.hpp"
#include "lattice.hpp"
#include "rng.hpp"
#include "types.hpp"

namespace speclocal {

struct DisorderSpec {
  std::uint64_t seed = 0;
  double lambda = 0;  // uniform amplitude, must stay below 1
};

inline void validate(const DisorderSpec& dis) {
  if (dis.lambda < 0 || dis.lambda >= 1)
    throw ConfigError("disorder amplitude must lie in [0, 1)");
}

// ---- chiral two-band chain ------------------------------------------------

// Clean chain with off-diagonal symbol m + e^{-ik}: nontrivial (winding -1)
// for |m| < 1.  Orbital 0 and 1 are the two sublattices.
inline TranslationInvariantOperator ssh_clean(cplx m) {
  TranslationInvariantOperator op;
  op.d = 1;
  op.L = 2;
  Mat t0 = Mat::Zero(2, 2), tm = Mat::Zero(2, 2), tp = Mat::Zero(2, 2);
  t0(0, 1) = m;
  t0(1, 0) = std::conj(m);
  tm(0, 1) = 1;  // displacement -1 contributes e^{-ik} to the upper block
  tp(1, 0) = 1;
  set_hopping(op, {0}, t0);
  set_hopping(op, {-1}, tm);
  set_hopping(op, {1}, tp);
  validate_hoppings(op);
  return op;
}

/* Off-diagonal block of the disordered chain on 2 rho sites: diagonal
   m + m_y and subdiagonal 1 + t_y with independent uniform [-lambda,
   lambda] draws per bond (counter streams 2 idx and 2 idx + 1).  The
   subdiagonal wraps for periodic boundary and is dropped for Dirichlet. */
inline Mat ssh_a_block(cplx m, const DisorderSpec& dis, int rho,
                       Boundary bd = Boundary::periodic) {
  validate(dis);
  const long n = 2L * rho;
  CounterRng rng(dis.seed);
  Mat a = Mat::Zero(n, n);
  for (long y = 0; y < n; ++y) {
    a(y, y) += m + rng.symmetric(2 * std::uint64_t(y), dis.lambda);
    const long yn = (y + 1) % n;
    if (yn != y + 1 && bd == Boundary::dirichlet) continue;
    a(yn, y) += 1.0 + rng.symmetric(2 * std::uint64_t(y) + 1, dis.lambda);
  }
  return a;
}

// Per-site grading that anticommutes with any block off-diagonal matrix:
// +1 on the first L/2 orbitals of each site, -1 on the rest.
inline VecR chiral_grading(long sites, int L) {
  VecR j(sites * L);
  for (long s = 0; s < sites; ++s)
    for (int o = 0; o < L; ++o) j(s * L + o) = o < L / 2 ? 1.0 : -1.0;
  return j;
}

// Assemble the full chain from a sublattice block: orbitals (0, 1) per
// site, H[2x, 2y+1] = A[x, y].
inline FiniteVolumeOperator chiral_from_block(const Mat& a, int rho, int d,
                                              Boundary bd) {
  const long n = a.rows();
  FiniteVolumeOperator f;
  f.d = d;
  f.rho = rho;
  f.boundary = bd;
  const long sites = num_sites(d, rho);
  if (n % sites != 0) throw ConfigError("chiral_from_block: size mismatch");
  const int half = int(n / sites);
  f.L = 2 * half;
  f.matrix = Mat::Zero(2 * n, 2 * n);
  for (long x = 0; x < sites; ++x)
    for (long y = 0; y < sites; ++y)
      for (int p = 0; p < half; ++p)
        for (int q = 0; q < half; ++q) {
          const cplx v = a(x * half + p, y * half + q);
          if (v == cplx(0, 0)) continue;
          f.matrix(x * f.L + p, y * f.L + half + q) = v;
          f.matrix(y * f.L + half + q, x * f.L + p) = std::conj(v);
        }
  return f;
}

// Extract the off-diagonal block back out of a chiral finite-volume
// operator, checking that the grading really anticommutes with it.
inline Mat chiral_block_of(const FiniteVolumeOperator& h) {
  const long sites = h.sites();
  const int half = h.L / 2;
  if (h.L % 2 != 0) throw NotChiral("chiral_block_of: odd fiber dimension");
  VecR j = chiral_grading(sites, h.L);
  Mat anti = j.asDiagonal() * h.matrix * j.asDiagonal() + h.matrix;
  if (anti.cwiseAbs().maxCoeff() >
      1e-10 * std::max(1.0, h.matrix.cwiseAbs().maxCoeff()))
    throw NotChiral("chiral_block_of: grading does not anticommute");
  Mat a(sites * half, sites * half);
  for (long x = 0; x < sites; ++x)
    for (long y = 0; y < sites; ++y)
      for (int p = 0; p < half; ++p)
        for (int q = 0; q < half; ++q)
          a(x * half + p, y * half + q) = h.matrix(x * h.L + p, y * h.L + half + q);
  return a;
}

inline FiniteVolumeOperator ssh_chiral(cplx m, const DisorderSpec& dis, int rho,
                                       Boundary bd = Boundary::periodic) {
  return chiral_from_block(ssh_a_block(m, dis, rho, bd), rho, 1, bd);
}

// ---- time-reversal symmetric spin chain (class DIII) ----------------------

// Real single-particle block of the chain before the spin structure.
inline MatR diii_site_block(double m, const DisorderSpec& dis, int rho) {
  validate(dis);
  const long n = 2L * rho;
  CounterRng rng(dis.seed);
  MatR a = MatR::Zero(n, n);
  for (long y = 0; y < n; ++y) {
    a(y, y) += m + rng.symmetric(2 * std::uint64_t(y), dis.lambda);
    a((y + 1) % n, y) += 1.0 + rng.symmetric(2 * std::uint64_t(y) + 1, dis.lambda);
  }
  return a;
}

/* Spinful off-diagonal block A = Sym(a) x 1 + Antisym(a) x s2 for real a.
   Both terms are complex symmetric, so A^T = A holds for any disorder
   draw; that transpose symmetry is the DIII condition on the block. */
inline Mat diii_a_block(double m, const DisorderSpec& dis, int rho) {
  MatR a = diii_site_block(m, dis, rho);
  MatR sym = 0.5 * (a + a.transpose());
  MatR anti = 0.5 * (a - a.transpose());
  return kron(sym.cast<cplx>().eval(), Mat(pauli(0))) +
         kron(anti.cast<cplx>().eval(), Mat(pauli(2)));
}

// Full chiral chain with four orbitals per site: sublattice (outer) and
// spin (inner), H = [[0, A], [A^*, 0]] in the sublattice grading.
inline FiniteVolumeOperator diii_chain(double m, const DisorderSpec& dis,
                                       int rho) {
  return chiral_from_block(diii_a_block(m, dis, rho), rho, 1,
                           Boundary::periodic);
}

// ---- quantum-spin-Hall type models (class AII) ----------------------------

// Fiber part of the time-reversal operator (the antiunitary is this matrix
// followed by complex conjugation); squares to -1 in both dimensions.
inline Mat aii_trs_fiber(int d) {
  if (d == 2) {
    Mat s = Mat::Zero(4, 4);  // swap the two Dirac copies, s2 inside
    s.block(0, 2, 2, 2) = pauli(2);
    s.block(2, 0, 2, 2) = pauli(2);
    return s;
  }
  if (d == 3) return kron(Mat(pauli(2)), Mat(pauli(0)));
  throw ConfigError("aii_trs_fiber: only d = 2, 3");
}

/* Clean models.  d = 2: the two-band Chern model doubled with its
   time-reversed copy s2 conj(T_a) s2, giving a quantum spin Hall pair.
   d = 3: four-band model m (1 x t3) + hopping -(1/2)(1 x t3) -+ (i/2)
   (s_j x t1), time-reversal invariant on its own; nontrivial for
   1 < |m| < 3. */
inline TranslationInvariantOperator aii_model_clean(int d, double m) {
  TranslationInvariantOperator op;
  op.d = d;
  if (d == 2) {
    TranslationInvariantOperator base = dirac_bloch_model(2, m);
    op.L = 4;
    for (const auto& [a, t] : base.hoppings) {
      Mat dbl = Mat::Zero(4, 4);
      dbl.block(0, 0, 2, 2) = t;
      dbl.block(2, 2, 2, 2) = pauli(2) * t.conjugate() * pauli(2);
      set_hopping(op, a, dbl);
    }
  } else if (d == 3) {
    op.L = 4;
    const Mat t1 = pauli(1), t3 = pauli(3), one2 = pauli(0);
    set_hopping(op, {0, 0, 0}, m * kron(one2, t3));
    for (int j = 0; j < 3; ++j) {
      std::vector<int> a(3, 0);
      Mat sj = pauli(j + 1);
      a[j] = 1;
      set_hopping(op, a, -0.5 * kron(one2, t3) - cplx(0, 0.5) * kron(sj, t1));
      a[j] = -1;
      set_hopping(op, a, -0.5 * kron(one2, t3) + cplx(0, 0.5) * kron(sj, t1));
    }
  } else {
    throw ConfigError("aii_model_clean: only d = 2, 3");
  }
  validate_hoppings(op);
  return op;
}

// S conj(T_a) S^* = T_a for every hopping, plus S conj(S) = -1.
inline bool check_aii_symmetry(const TranslationInvariantOperator& op,
                               const Mat& s) {
  if ((s * s.conjugate() + Mat::Identity(s.rows(), s.cols()))
          .cwiseAbs()
          .maxCoeff() > 1e-12)
    return false;
  for (const auto& [a, t] : op.hoppings)
    if ((s * t.conjugate() * s.adjoint() - t).cwiseAbs().maxCoeff() >
        1e-12 * std::max(1.0, t.cwiseAbs().maxCoeff()))
      return false;
  return true;
}

// Scalar on-site potential (safe for any antiunitary symmetry), one draw
// per site, expanded over orbitals.
inline VecR scalar_disorder_diagonal(const DisorderSpec& dis, int d, int rho,
                                     int L) {
  validate(dis);
  CounterRng rng(dis.seed);
  return site_diagonal(rho, d, L, [&](const std::vector<int>& x) {
    return rng.symmetric(std::uint64_t(site_linear(x, d, rho)), dis.lambda);
  });
}

inline FiniteVolumeOperator aii_model(int d, double m, const DisorderSpec& dis,
                                      int rho) {
  FiniteVolumeOperator f = fold_periodic(aii_model_clean(d, m), rho);
  Vec v = scalar_disorder_diagonal(dis, d, rho, f.L).cast<cplx>();
  f.matrix += Mat(v.asDiagonal());
  return f;
}

}  // namespace speclocal
