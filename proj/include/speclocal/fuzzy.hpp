#pragma once
// Fuzzy tori: finite families of almost-commuting, almost-unitary
// matrices, optionally with a grading operator, together with the
// G-operators whose half-signatures carry their K-theory.  Includes the
// positive-part reduction of a graded torus, quantitative invertibility
// bounds for the G-operator, the clock and shift pair, the determinant
// path winding, and a linear trivializing homotopy whose minimal gap
// witnesses (non)triviality.

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "clifford.hpp"
#include "types.hpp"

namespace speclocal {

inline Mat re_part(const Mat& a) { return 0.5 * (a + a.adjoint()); }
inline Mat im_part(const Mat& a) { return (a - a.adjoint()) / cplx(0, 2); }

struct FuzzyTorus {
  int d = 0;              // number of torus generators
  std::vector<Mat> ops;   // invertible, near-unitary generators
  Mat graded;             // optional grading; zero size when absent
  double width = 0;       // computed defect, see fuzzy_width
  bool has_graded() const { return graded.size() != 0; }
};

/* Largest of: distance of each generator from unitary (both orders),
   every pairwise commutator norm, every commutator with the grading, and
   the distance of the squared grading from the identity. */
inline double fuzzy_width(const std::vector<Mat>& ops, const Mat& graded) {
  const long n = ops.front().rows();
  const Mat id = Mat::Identity(n, n);
  double w = 0;
  for (const Mat& a : ops) {
    w = std::max(w, op_norm(a * a.adjoint() - id));
    w = std::max(w, op_norm(a.adjoint() * a - id));
  }
  for (std::size_t i = 0; i < ops.size(); ++i)
    for (std::size_t j = i + 1; j < ops.size(); ++j)
      w = std::max(w, op_norm(ops[i] * ops[j] - ops[j] * ops[i]));
  if (graded.size() != 0) {
    for (const Mat& a : ops)
      w = std::max(w, op_norm(a * graded - graded * a));
    w = std::max(w, op_norm(graded * graded - id));
  }
  return w;
}

inline FuzzyTorus make_fuzzy_torus(std::vector<Mat> ops, Mat graded = Mat()) {
  if (ops.empty()) throw ConfigError("make_fuzzy_torus: no generators");
  const long n = ops.front().rows();
  for (const Mat& a : ops) {
    if (a.rows() != n || a.cols() != n)
      throw ConfigError("make_fuzzy_torus: generator shapes differ");
    Eigen::BDCSVD<Mat> svd(a);
    if (svd.singularValues()(svd.singularValues().size() - 1) <=
        tol::invertible_sv)
      throw NotInvertible("make_fuzzy_torus: generator nearly singular");
  }
  if (graded.size() != 0) {
    if (graded.rows() != n || graded.cols() != n)
      throw ConfigError("make_fuzzy_torus: grading shape differs");
    require_self_adjoint(graded, "make_fuzzy_torus grading");
  }
  FuzzyTorus t;
  t.d = int(ops.size());
  t.ops = std::move(ops);
  t.graded = std::move(graded);
  t.width = fuzzy_width(t.ops, t.graded);
  return t;
}

namespace detail {
inline void check_index_set(const FuzzyTorus& t, const std::vector<int>& idx) {
  if (idx.empty()) throw ConfigError("g_operator: empty index set");
  for (int i : idx)
    if (i < 1 || i > t.d)
      throw ConfigError("g_operator: generator index out of range");
}
}  // namespace detail

/* G-operator of the generators selected by I (1-based):
     G = sum_j Im(A_{I_j}) x gamma_j + ((|I|-1) - sum_j Re(A_{I_j})) x gamma_{|I|+1}.
   The default gamma set is the standard |I|+1 chain; a caller may pass
   any other family of |I|+1 pairwise anticommuting involutions. */
inline Mat g_operator(const FuzzyTorus& t, const std::vector<int>& idx,
                      const std::vector<Mat>* gammas = nullptr) {
  detail::check_index_set(t, idx);
  const int m = int(idx.size());
  std::vector<Mat> gs;
  if (gammas) {
    if ((int)gammas->size() != m + 1)
      throw ConfigError("g_operator: need |I|+1 gamma matrices");
    gs = *gammas;
  } else {
    gs = clifford_jw(m + 1).gamma;
  }
  const long n = t.ops.front().rows();
  Mat coeff = double(m - 1) * Mat::Identity(n, n);
  Mat g = Mat::Zero(n * gs.front().rows(), n * gs.front().rows());
  for (int j = 0; j < m; ++j) {
    const Mat& a = t.ops[idx[j] - 1];
    g += kron(im_part(a), gs[j]);
    coeff -= re_part(a);
  }
  g += kron(coeff, gs[m]);
  return g;
}

/* Graded variant: the grading joins the generator set, its imaginary
   part vanishes, and its real part (itself) moves into the coefficient,
   which therefore counts |I| instead of |I|-1.  The gamma slots come
   from the split basis, whose last element anticommutes with the first
   |I| and doubles as the grading slot. */
inline Mat g_hat_operator(const FuzzyTorus& t, const std::vector<int>& idx) {
  detail::check_index_set(t, idx);
  if (!t.has_graded())
    throw ConfigError("g_hat_operator: torus has no grading");
  const int m = int(idx.size());
  SplitBasis sb = split_basis_graded(m);
  const long n = t.ops.front().rows();
  Mat coeff = double(m) * Mat::Identity(n, n) - t.graded;
  Mat g = Mat::Zero(n * sb.gamma.front().rows(), n * sb.gamma.front().rows());
  for (int j = 0; j < m; ++j) {
    const Mat& a = t.ops[idx[j] - 1];
    g += kron(im_part(a), sb.gamma[j]);
    coeff -= re_part(a);
  }
  g += kron(coeff, sb.gamma[m]);
  return g;
}

/* Positive-part reduction of a graded torus: compress the generators to
   the upper spectral subspace of the grading.  Eigenvalues of the
   grading sit within delta of +-1 by the width bound, so anything inside
   (-sqrt(1-delta), sqrt(1-delta)) means the grading gap closed.  The
   compressed family is again a fuzzy torus, with width at most six times
   the input width. */
inline FuzzyTorus reduce_graded(const FuzzyTorus& t) {
  if (!t.has_graded()) throw ConfigError("reduce_graded: torus has no grading");
  const double delta = t.width;
  if (delta >= 1) throw WidthTooLarge("reduce_graded: width must be below 1");
  const double thr = std::sqrt(1.0 - delta);
  Eigen::SelfAdjointEigenSolver<Mat> es(t.graded);
  const VecR& ev = es.eigenvalues();
  long rank = 0;
  for (long i = 0; i < ev.size(); ++i) {
    if (ev(i) > -thr && ev(i) < thr)
      throw GradedGapClosed("reduce_graded: grading eigenvalue near zero");
    if (ev(i) >= thr) ++rank;
  }
  Mat v = es.eigenvectors().rightCols(rank);
  std::vector<Mat> red;
  for (const Mat& a : t.ops) red.push_back(v.adjoint() * a * v);
  FuzzyTorus out = make_fuzzy_torus(red);
  if (out.width > 6.0 * delta + 1e-12)
    throw Failure("reduce_graded: compressed width exceeds its bound");
  return out;
}

// ---- invertibility bounds for the full G-operator -------------------------

// For exactly unitary generators: 1 - 7 sum_{i<j} ||[U_i, U_j]||.  The
// G-operator over all generators is invertible whenever this is positive.
inline double gap_bound_unitary(const FuzzyTorus& t) {
  const long n = t.ops.front().rows();
  const Mat id = Mat::Identity(n, n);
  double s = 0;
  for (const Mat& a : t.ops)
    if (op_norm(a.adjoint() * a - id) > 1e-10)
      throw NotUnitary("gap_bound_unitary: generator not unitary");
  for (std::size_t i = 0; i < t.ops.size(); ++i)
    for (std::size_t j = i + 1; j < t.ops.size(); ++j)
      s += op_norm(t.ops[i] * t.ops[j] - t.ops[j] * t.ops[i]);
  return 1.0 - 7.0 * s;
}

// For merely invertible generators, in terms of the total width:
// 1 - 24 d^2 width, meaningful only for width up to one half.
inline double gap_bound_invertible(const FuzzyTorus& t) {
  if (t.width > 0.5)
    throw WidthTooLarge("gap_bound_invertible: width exceeds one half");
  return 1.0 - 24.0 * double(t.d) * double(t.d) * t.width;
}

// ---- canonical examples and probes ----------------------------------------

// Clock and shift pair on C^N: U1 U2 = e^{2 pi i / N} U2 U1, each exactly
// unitary; the commutator norm (and hence the width) is 2 sin(pi / N).
inline FuzzyTorus clock_shift(int n) {
  if (n < 2) throw ConfigError("clock_shift: need at least two sites");
  Mat u1 = Mat::Zero(n, n), u2 = Mat::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    u1(j, j) = std::exp(cplx(0, 2.0 * M_PI * j / n));
    u2((j + 1) % n, j) = 1;
  }
  return make_fuzzy_torus({u1, u2});
}

/* Winding of t -> det(t U1 U2 + (1-t) U2 U1) around zero.  The endpoints
   share the value det(U1 U2) = det(U2 U1), so the path closes.  The grid
   refines until no phase step reaches pi/2; a determinant passing
   through zero is reported as such rather than wound over. */
inline long det_path_winding(const Mat& u1, const Mat& u2, int n0 = 256) {
  const int cap = 1 << 20;
  const Mat f = u1 * u2, b = u2 * u1;
  for (int n = n0; n <= cap; n *= 2) {
    std::vector<cplx> dets(std::size_t(n) + 1);
    double dmax = 0, dmin = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= n; ++i) {
      const double s = double(i) / n;
      dets[i] = cplx((s * f + (1.0 - s) * b).determinant());
      dmax = std::max(dmax, std::abs(dets[i]));
      dmin = std::min(dmin, std::abs(dets[i]));
    }
    if (dmin < 1e-12 * dmax)
      throw DetVanishes("det_path_winding: determinant crosses zero");
    double total = 0;
    bool fine = true;
    for (int i = 0; i < n; ++i) {
      const double step = std::arg(dets[i + 1] / dets[i]);
      if (std::abs(step) >= M_PI / 2) { fine = false; break; }
      total += step;
    }
    if (!fine) continue;
    const double w = total / (2.0 * M_PI);
    const long rounded = std::lround(w);
    if (std::abs(w - rounded) > 1e-6)
      throw Failure("det_path_winding: phase sum not an integer");
    return rounded;
  }
  throw GridTooCoarse("det_path_winding: grid cap reached");
}

/* Minimal spectral gap along the straight line from the reference
   1 x gamma_{d+1} to the shifted full G-operator
     sum_j Im(A_j) x gamma_j + ((d+1) - sum_j Re(A_j)) x gamma_{d+1},
   whose coefficient counts one extra (constant) generator so the line
   cannot pinch for an exactly commuting family: there the gap stays at
   least 1 for every step, exactly 1 when the width vanishes.  A small
   returned value flags an obstruction (or a genuinely non-invertible
   input); this probe never throws on gap closing, it just reports it. */
inline double trivial_homotopy_gap(const FuzzyTorus& t, int steps = 21) {
  if (steps < 2) throw ConfigError("trivial_homotopy_gap: need two steps");
  const int m = t.d;
  std::vector<Mat> gs = clifford_jw(m + 1).gamma;
  const long n = t.ops.front().rows();
  Mat coeff = double(m + 1) * Mat::Identity(n, n);
  Mat gtil = Mat::Zero(n * gs.front().rows(), n * gs.front().rows());
  for (int j = 0; j < m; ++j) {
    gtil += kron(im_part(t.ops[j]), gs[j]);
    coeff -= re_part(t.ops[j]);
  }
  gtil += kron(coeff, gs[m]);
  Mat ref = kron(Mat::Identity(n, n).eval(), gs[m]);
  double gap = std::numeric_limits<double>::infinity();
  for (int k = 0; k < steps; ++k) {
    const double tau = double(k) / (steps - 1);
    Mat p = (1.0 - tau) * ref + tau * gtil;
    Eigen::SelfAdjointEigenSolver<Mat> es(p, Eigen::EigenvaluesOnly);
    gap = std::min(gap, es.eigenvalues().cwiseAbs().minCoeff());
  }
  return gap;
}

// Sign function of a gapped self-adjoint matrix, H |H|^{-1}.
inline Mat spectral_flatten(const Mat& h, double tol_gap = 1e-8) {
  require_self_adjoint(h, "spectral_flatten");
  Eigen::SelfAdjointEigenSolver<Mat> es(h);
  const VecR& ev = es.eigenvalues();
  if (ev.cwiseAbs().minCoeff() < tol_gap)
    throw GapClosed("spectral_flatten: eigenvalue too close to zero");
  VecR sgn(ev.size());
  for (long i = 0; i < ev.size(); ++i) sgn(i) = ev(i) > 0 ? 1.0 : -1.0;
  return es.eigenvectors() * sgn.asDiagonal() *
         es.eigenvectors().adjoint();
}

}  // namespace speclocal
