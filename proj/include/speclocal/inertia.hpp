#pragma once
// Inertia (eigenvalue sign counts) of Hermitian matrices, signatures,
// and the sign of the Pfaffian of real skew-symmetric matrices.
//
// The LDL^T route uses LAPACK's Bunch-Kaufman factorization and reads the
// inertia off the block diagonal; it is the fast path for large localizers
// where full eigensolves would dominate the runtime.

#include <algorithm>
#include <cmath>
#include <vector>
#include <complex>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include "types.hpp"

namespace speclocal {

struct InertiaResult {
  long n_plus = 0;
  long n_minus = 0;
  long n_zero = 0;
  double min_abs_eig = 0;  // exact for Eigensolve, a lower bound otherwise
  double tol = 0;
};

enum class InertiaMethod { Eigensolve, ShiftedLdl };

namespace detail {

// Sign counts of the block diagonal produced by zhetrf (lower, col-major).
// ipiv > 0 marks a 1x1 block; a pair of equal negative entries marks a 2x2.
inline void ldl_counts(Mat a, long& pos, long& neg) {
  const lapack_int n = lapack_int(a.rows());
  std::vector<lapack_int> ipiv(n);
  lapack_int info = LAPACKE_zhetrf(LAPACK_COL_MAJOR, 'L', n, a.data(), n,
                                   ipiv.data());
  if (info < 0) throw Failure("zhetrf: bad argument");
  pos = neg = 0;
  for (lapack_int k = 0; k < n; ++k) {
    if (ipiv[k] > 0) {
      double dk = a(k, k).real();
      if (dk > 0) ++pos;
      else if (dk < 0) ++neg;
      // dk == 0 only when info > 0 flagged singularity; count as zero
    } else {
      // 2x2 block [[a, conj(b)], [b, c]] spanning columns k, k+1
      double ar = a(k, k).real();
      double cr = a(k + 1, k + 1).real();
      double b2 = std::norm(a(k + 1, k));
      double det = ar * cr - b2;
      if (det < 0) { ++pos; ++neg; }
      else if (ar + cr > 0) pos += 2;
      else neg += 2;
      ++k;
    }
  }
}

}  // namespace detail

/* Eigenvalue sign counts of a Hermitian matrix.  Eigensolve counts signs
   of the actual spectrum; ShiftedLdl factors M + tol*I and M - tol*I and
   reads the counts from the shifted inertias (eigenvalues within tol of
   zero land in n_zero; min_abs_eig then degrades to the bound tol).
   With tol 0 the ShiftedLdl path factors once and classifies by the raw
   pivot signs, half the cost when the caller knows the matrix is well
   clear of singular. */
inline InertiaResult inertia(const Mat& m, double tol_zero = 1e-8,
                             InertiaMethod method = InertiaMethod::Eigensolve) {
  require_self_adjoint(m, "inertia");
  InertiaResult r;
  r.tol = tol_zero;
  const long n = m.rows();
  if (method == InertiaMethod::Eigensolve) {
    Eigen::SelfAdjointEigenSolver<Mat> es(m, Eigen::EigenvaluesOnly);
    const VecR& ev = es.eigenvalues();
    r.min_abs_eig = ev.cwiseAbs().minCoeff();
    for (long i = 0; i < n; ++i) {
      if (ev(i) > tol_zero) ++r.n_plus;
      else if (ev(i) < -tol_zero) ++r.n_minus;
      else ++r.n_zero;
    }
  } else if (tol_zero == 0) {
    detail::ldl_counts(m, r.n_plus, r.n_minus);
    r.n_zero = n - r.n_plus - r.n_minus;
    r.min_abs_eig = 0;  // no separation information at zero tolerance
  } else {
    // M + tol I has n - n_minus nonnegative directions: everything at or
    // above -tol moves up.  Its negative count is exactly n_minus.
    long pos_up, neg_up, pos_dn, neg_dn;
    detail::ldl_counts(m + tol_zero * Mat::Identity(n, n), pos_up, neg_up);
    detail::ldl_counts(m - tol_zero * Mat::Identity(n, n), pos_dn, neg_dn);
    r.n_minus = neg_up;
    r.n_plus = pos_dn;
    r.n_zero = n - r.n_plus - r.n_minus;
    r.min_abs_eig = r.n_zero == 0 ? tol_zero : 0.0;  // bound only
  }
  return r;
}

inline long signature(const Mat& m, double tol_zero = 1e-8,
                      InertiaMethod method = InertiaMethod::Eigensolve) {
  InertiaResult r = inertia(m, tol_zero, method);
  return r.n_plus - r.n_minus;
}

inline long half_signature(const Mat& m, double tol_zero = 1e-8,
                           InertiaMethod method = InertiaMethod::Eigensolve) {
  long s = signature(m, tol_zero, method);
  if (s % 2 != 0)
    throw Failure("half_signature: signature is odd");
  return s / 2;
}

inline double spectral_gap(const Mat& m) {
  require_self_adjoint(m, "spectral_gap");
  Eigen::SelfAdjointEigenSolver<Mat> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().minCoeff();
}

inline bool realness_check(const Mat& m, double tol_real = tol::realness) {
  return max_imag_abs(m) <= tol_real * std::max(1.0, m.cwiseAbs().maxCoeff());
}

// ---- Pfaffian sign --------------------------------------------------------

struct PfaffianSign {
  int sign = 0;        // +1 or -1
  double log_abs = 0;  // log |Pf|, for consistency checks against det
};

/* Sign of the Pfaffian of a real skew-symmetric matrix by Parlett-Reid
   tridiagonalization with partial pivoting.  Row/column swaps each flip
   the sign; the eliminations are congruences by unit lower-triangular
   matrices and leave it unchanged.  The Pfaffian of the resulting
   skew tridiagonal form is the product of every other superdiagonal
   entry. */
inline PfaffianSign pfaffian_sign_detail(MatR a) {
  const long n = a.rows();
  if (a.cols() != n) throw ConfigError("pfaffian: matrix not square");
  if (n % 2 != 0) throw OddDimension("pfaffian: odd dimension");
  const double scale = a.cwiseAbs().maxCoeff();
  if ((a + a.transpose()).cwiseAbs().maxCoeff() > 1e-10 * std::max(1.0, scale))
    throw NotSkewSymmetric("pfaffian: matrix not skew-symmetric");
  if (scale == 0.0) throw NearSingular("pfaffian: zero matrix");

  PfaffianSign p;
  p.sign = 1;
  for (long k = 0; k + 2 < n; ++k) {
    // pivot: largest entry below the diagonal in column k
    long piv = k + 1;
    double best = std::abs(a(k + 1, k));
    for (long i = k + 2; i < n; ++i)
      if (std::abs(a(i, k)) > best) { best = std::abs(a(i, k)); piv = i; }
    if (best < tol::pivot_rel * scale) {
      // column k is dead: if k is even the tridiagonal factor is zero
      if (k % 2 == 0) throw NearSingular("pfaffian: vanishing pivot");
      continue;  // odd k entries never enter the product
    }
    if (piv != k + 1) {
      a.row(piv).swap(a.row(k + 1));
      a.col(piv).swap(a.col(k + 1));
      p.sign = -p.sign;
    }
    const double akk1 = a(k + 1, k);
    for (long i = k + 2; i < n; ++i) {
      const double mu = a(i, k) / akk1;
      if (mu == 0.0) continue;
      a.row(i) -= mu * a.row(k + 1);
      a.col(i) -= mu * a.col(k + 1);
    }
  }
  for (long k = 0; k < n; k += 2) {
    const double t = a(k, k + 1);
    if (std::abs(t) < tol::pivot_rel * scale)
      throw NearSingular("pfaffian: tridiagonal factor near zero");
    if (t < 0) p.sign = -p.sign;
    p.log_abs += std::log(std::abs(t));
  }
  return p;
}

inline int pfaffian_sign(const MatR& a) { return pfaffian_sign_detail(a).sign; }

}  // namespace speclocal
