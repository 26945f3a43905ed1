#pragma once
// Real skew-symmetric localizer pairs for time-reversal symmetric models.
//
// When the Hamiltonian carries an antiunitary symmetry squaring to -1,
// a fixed unitary R (built from the spin structure) conjugates the
// periodic localizer into i R^* L R, a real antisymmetric matrix whose
// Pfaffian sign is well defined.  Dividing by the Pfaffian sign of a
// reference matrix D of the same shape (the localizer of the zero
// Hamiltonian with a rank-one puncture at the origin, which removes the
// position kernel) gives a basis-independent Z2 invariant.  In three
// dimensions the rotated localizer is block off-diagonal and the two
// Pfaffians reduce to determinant signs of one real block each, which is
// what makes a sparse treatment of large boxes possible.

#include <vector>

#include "clifford.hpp"
#include "inertia.hpp"
#include "lattice.hpp"
#include "localizer.hpp"
#include "models.hpp"
#include "types.hpp"

#include <Eigen/SparseLU>

namespace speclocal {

enum class SymClass { DIII, AII };

struct SkewPair {
  MatR l_skew;  // rotated localizer, real antisymmetric
  MatR d_skew;  // rotated punctured reference, real antisymmetric
  SymClass cls = SymClass::AII;
};

// s2 A^T s2 = A on the spin fiber: the transpose symmetry a chiral block
// inherits from time reversal in class DIII.
inline bool check_diii_block(const Mat& a, double tol_rel = 1e-10) {
  const long n = a.rows() / 2;
  Mat s = kron(Mat::Identity(n, n).eval(), Mat(pauli(2)));
  return (s * a.transpose() * s - a).cwiseAbs().maxCoeff() <=
         tol_rel * std::max(1.0, a.cwiseAbs().maxCoeff());
}

// S conj(H) S^* = H on the finite volume, S = 1 x s_fiber.
inline bool check_finite_trs(const Mat& h, const Mat& s_fiber,
                             double tol_rel = 1e-10) {
  const long f = s_fiber.rows();
  Mat s = kron(Mat::Identity(h.rows() / f, h.rows() / f).eval(), s_fiber);
  return (s * h.conjugate() * s.adjoint() - h).cwiseAbs().maxCoeff() <=
         tol_rel * std::max(1.0, h.cwiseAbs().maxCoeff());
}

namespace detail {

// i R^* M R for R = ((1+i)/2) [[1, S], [-S, 1]], with the result checked
// to be real antisymmetric before the imaginary part is dropped.
inline MatR rotate_to_real_skew(const Mat& m, const Mat& s_expanded,
                                const char* who) {
  const long n = s_expanded.rows();
  if (m.rows() != 2 * n) throw ConfigError("rotate_to_real_skew: size");
  Mat r(2 * n, 2 * n);
  const Mat id = Mat::Identity(n, n);
  r << id, s_expanded, -s_expanded, id;
  r *= cplx(0.5, 0.5);
  Mat k = cplx(0, 1) * (r.adjoint() * m * r);
  const double scale = std::max(1.0, k.cwiseAbs().maxCoeff());
  if (max_imag_abs(k) > 1e-10 * scale)
    throw SymmetryViolation(std::string(who) + ": rotated matrix not real");
  MatR kr = k.real();
  if ((kr + kr.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale)
    throw SymmetryViolation(std::string(who) +
                            ": rotated matrix not antisymmetric");
  return kr;
}

inline VecR origin_projector_diag(int rho, int d, int L) {
  return site_diagonal(rho, d, L, [&](const std::vector<int>& x) {
    for (int v : x)
      if (v != 0) return 0.0;
    return 1.0;
  });
}

}  // namespace detail

// ---- one dimension, class DIII --------------------------------------------

/* Input is the chiral block A on site x spin space (two orbitals per
   site).  The skew pair is the rotated chiral localizer together with
   the rotated reference [[s + p0, c], [c, -s - p0]], where p0 projects
   onto the origin site. */
inline SkewPair skew_localizer_d1_diii(const Mat& a, int rho, double eta) {
  if (!check_diii_block(a))
    throw SymmetryViolation("skew_localizer_d1_diii: block breaks s2 A^T s2 = A");
  const long n = a.rows();
  if (n != 4L * rho) throw ConfigError("skew_localizer_d1_diii: block size");
  VecR s = sine_slots(rho, 1, 2)[0];
  VecR c = one_minus_cos_slot(rho, 1, 2);
  Mat loc = odd_localizer_assemble(s, c, a / eta);
  VecR sp = s + detail::origin_projector_diag(rho, 1, 2);
  Mat ref(2 * n, 2 * n);
  Mat spd = Mat(sp.cast<cplx>().asDiagonal());
  Mat cd = Mat(c.cast<cplx>().asDiagonal());
  ref << spd, cd, cd, -spd;
  Mat s_exp = kron(Mat::Identity(n / 2, n / 2).eval(), Mat(pauli(2)));
  SkewPair p;
  p.cls = SymClass::DIII;
  p.l_skew = detail::rotate_to_real_skew(loc, s_exp, "d1 localizer");
  p.d_skew = detail::rotate_to_real_skew(ref, s_exp, "d1 reference");
  return p;
}

// ---- two dimensions, class AII --------------------------------------------

/* Input is the folded Hamiltonian with its four-dimensional fiber and the
   fiber part of the time-reversal operator.  The reference replaces H by
   zero and punctures the position kernel through the off-diagonal
   blocks. */
inline SkewPair skew_localizer_d2_aii(const FiniteVolumeOperator& h,
                                      const Mat& s_fiber, double eta) {
  if (h.d != 2) throw ConfigError("skew_localizer_d2_aii: d must be 2");
  if (!check_finite_trs(h.matrix, s_fiber))
    throw SymmetryViolation("skew_localizer_d2_aii: H breaks time reversal");
  Mat loc = even_periodic_localizer(h, eta);
  const long n = h.matrix.rows();
  std::vector<VecR> s = sine_slots(h.rho, 2, h.L);
  VecR c = one_minus_cos_slot(h.rho, 2, h.L);
  Mat off = Mat((s[0].cast<cplx>() + cplx(0, 1) * s[1].cast<cplx>()).asDiagonal());
  off += Mat(detail::origin_projector_diag(h.rho, 2, h.L).cast<cplx>().asDiagonal());
  Mat cd = Mat(c.cast<cplx>().asDiagonal());
  Mat ref(2 * n, 2 * n);
  ref << cd, off.adjoint(), off, -cd;
  Mat s_exp = kron(Mat::Identity(n / s_fiber.rows(), n / s_fiber.rows()).eval(),
                   s_fiber);
  SkewPair p;
  p.cls = SymClass::AII;
  p.l_skew = detail::rotate_to_real_skew(loc, s_exp, "d2 localizer");
  p.d_skew = detail::rotate_to_real_skew(ref, s_exp, "d2 reference");
  return p;
}

inline int z2_index(const SkewPair& p) {
  return pfaffian_sign(p.l_skew) * pfaffian_sign(p.d_skew);
}

// ---- three dimensions, class AII ------------------------------------------

namespace detail {

// Fiber-level rotation for d = 3: M = s_fiber x s2 is real symmetric with
// square one, and R = ((1+i)/2) 1 + ((1-i)/2) M is a unitary square root
// of M with conj(R) = M R.
inline Mat d3_m_fiber(const Mat& s_fiber) {
  return kron(s_fiber, Mat(pauli(2)));
}

inline Mat d3_r_fiber(const Mat& s_fiber) {
  Mat m = d3_m_fiber(s_fiber);
  return cplx(0.5, 0.5) * Mat::Identity(m.rows(), m.cols()) +
         cplx(0.5, -0.5) * m;
}

}  // namespace detail

/* Dense d = 3 path for small boxes.  The rotated localizer is
   [[0, B], [-B^T, 0]] with one real block B; the same holds for the
   punctured reference with block C, and the invariant is
   sgn(det B) sgn(det C).  The pre-rotation blocks are
     N_B = i sum_j sin_j x (1 x s_j) - (C_diag x 1) + (H x 1)/eta
     N_C = the same with H = 0 and + i p0 x (1 x s1)
   and conjugation by the block-diagonal R keeps determinants. */
inline Mat d3_pre_block(const FiniteVolumeOperator& h, double eta,
                        bool reference) {
  if (h.d != 3) throw ConfigError("d3_pre_block: d must be 3");
  const long ns = h.sites();
  const Mat i4 = Mat::Identity(4, 4);
  Mat n = Mat::Zero(ns * 8, ns * 8);
  for (int j = 1; j <= 3; ++j) {
    VecR sj = site_diagonal(h.rho, 3, 1, [&](const std::vector<int>& x) {
      return std::sin(M_PI * x[j - 1] / double(h.rho));
    });
    n += cplx(0, 1) *
         kron(Mat(sj.cast<cplx>().asDiagonal()), kron(i4, Mat(pauli(j))));
  }
  VecR cdiag = site_diagonal(h.rho, 3, 1, [&](const std::vector<int>& x) {
    double c = 0;
    for (int v : x) c += 1.0 - std::cos(M_PI * v / double(h.rho));
    return c;
  });
  n -= kron(Mat(cdiag.cast<cplx>().asDiagonal()), Mat::Identity(8, 8).eval());
  if (reference) {
    // the puncture couples through the same first sigma slot as sin_1 and
    // inherits its i in this block form
    VecR p0 = detail::origin_projector_diag(h.rho, 3, 1);
    n += cplx(0, 1) *
         kron(Mat(p0.cast<cplx>().asDiagonal()), kron(i4, Mat(pauli(1))));
  } else {
    n += kron(Mat(h.matrix / eta), Mat::Identity(2, 2).eval());
  }
  return n;
}

inline MatR d3_det_block_dense(const FiniteVolumeOperator& h,
                               const Mat& s_fiber, double eta,
                               bool reference) {
  if (!reference && !check_finite_trs(h.matrix, s_fiber))
    throw SymmetryViolation("d3_det_block_dense: H breaks time reversal");
  Mat n = d3_pre_block(h, eta, reference);
  Mat r = kron(Mat::Identity(h.sites(), h.sites()).eval(),
               detail::d3_r_fiber(s_fiber));
  Mat b = r.adjoint() * n * r;
  const double scale = std::max(1.0, b.cwiseAbs().maxCoeff());
  if (max_imag_abs(b) > 1e-10 * scale)
    throw SymmetryViolation("d3_det_block_dense: rotated block not real");
  return b.real();
}

inline int sign_of_det_dense(const MatR& b) {
  Eigen::PartialPivLU<MatR> lu(b);
  int sign = int(lu.permutationP().determinant());
  const double scale = b.cwiseAbs().maxCoeff();
  for (long i = 0; i < b.rows(); ++i) {
    const double u = lu.matrixLU()(i, i);
    if (std::abs(u) < 1e-13 * scale)
      throw NearSingular("sign_of_det_dense: vanishing pivot");
    if (u < 0) sign = -sign;
  }
  return sign;
}

/* Sparse d = 3 path.  Blocks are assembled per site pair directly in the
   rotated (real) form: every 8x8 fiber block F of the pre-rotation
   matrix turns into r^* F r with the fixed fiber rotation r, so the
   rotated matrix keeps the hopping sparsity.  max_imag reports the
   largest imaginary part discarded, which a symmetry-clean model keeps
   at rounding level. */
inline SpMatR d3_det_block_sparse(const TranslationInvariantOperator& op,
                                  const DisorderSpec& dis, int rho, double eta,
                                  const Mat& s_fiber, bool reference,
                                  double* max_imag = nullptr) {
  if (op.d != 3 || op.L != 4) throw ConfigError("d3_det_block_sparse: shape");
  validate(dis);
  const long ns = num_sites(3, rho);
  const Mat r = detail::d3_r_fiber(s_fiber);
  const Mat i2 = Mat::Identity(2, 2);
  const Mat i4 = Mat::Identity(4, 4);
  CounterRng rng(dis.seed);
  double imag_max = 0;
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(std::size_t(ns) * 8 * 64);
  auto add_block = [&](long xs, long ys, const Mat& f) {
    Mat b = r.adjoint() * f * r;
    imag_max = std::max(imag_max, max_imag_abs(b));
    for (int p = 0; p < 8; ++p)
      for (int q = 0; q < 8; ++q)
        if (b(p, q) != cplx(0, 0))
          trip.emplace_back(xs * 8 + p, ys * 8 + q, b(p, q).real());
  };
  for (long idx = 0; idx < ns; ++idx) {
    std::vector<int> x = site_coords(idx, 3, rho);
    Mat f = Mat::Zero(8, 8);
    double c = 0;
    for (int j = 1; j <= 3; ++j) {
      f += cplx(0, std::sin(M_PI * x[j - 1] / double(rho))) *
           kron(i4, Mat(pauli(j)));
      c += 1.0 - std::cos(M_PI * x[j - 1] / double(rho));
    }
    f -= c * Mat::Identity(8, 8);
    if (reference) {
      bool origin = (x[0] == 0 && x[1] == 0 && x[2] == 0);
      if (origin) f += cplx(0, 1) * kron(i4, Mat(pauli(1)));
    } else if (dis.lambda > 0) {
      f += (rng.symmetric(std::uint64_t(idx), dis.lambda) / eta) *
           Mat::Identity(8, 8);
    }
    add_block(idx, idx, f);
  }
  if (!reference) {
    for (const auto& [a, t] : op.hoppings) {
      Mat f = kron(Mat(t / eta), i2);
      for (long idx = 0; idx < ns; ++idx) {
        std::vector<int> x = site_coords(idx, 3, rho);
        std::vector<int> y(3);
        for (int j = 0; j < 3; ++j) {
          int v = x[j] + a[j];
          int m = (v + rho - 1) % (2 * rho);
          if (m < 0) m += 2 * rho;
          y[j] = m - rho + 1;
        }
        add_block(idx, site_linear(y, 3, rho), f);
      }
    }
  }
  if (max_imag) *max_imag = imag_max;
  if (imag_max > 1e-8)
    throw SymmetryViolation("d3_det_block_sparse: rotation left imaginary parts");
  SpMatR m(ns * 8, ns * 8);
  m.setFromTriplets(trip.begin(), trip.end());
  return m;
}

inline int sign_of_det_sparse(const SpMatR& m) {
  Eigen::SparseLU<SpMatR> lu;
  lu.compute(m);
  if (lu.info() != Eigen::Success)
    throw NearSingular("sign_of_det_sparse: factorization failed");
  const double s = lu.signDeterminant();
  if (s == 0) throw NearSingular("sign_of_det_sparse: zero determinant");
  return s > 0 ? 1 : -1;
}

// Z2 invariant in three dimensions from the two real determinant signs.
inline int z2_index_d3(int sign_b, int sign_c) { return sign_b * sign_c; }

}  // namespace speclocal
