#pragma once
// Gamma-matrix factories.  A Jordan-Wigner tensor chain realizes n mutually
// anticommuting self-adjoint involutions on C^(2^floor(n/2)); on top of that
// sit the two orderings the rest of the library consumes: the (d-1)-element
// basis entering the even localizer (whose d-th slot is the explicit factor
// i in the assembly) and the split basis used for graded G-operators, whose
// last Pauli factor carries the grading.

#include <vector>

#include "types.hpp"

namespace speclocal {

inline Mat pauli(int j) {
  Mat m(2, 2);
  const cplx i(0.0, 1.0);
  switch (j) {
    case 0: m << 1, 0, 0, 1; break;
    case 1: m << 0, 1, 1, 0; break;
    case 2: m << 0, -i, i, 0; break;
    case 3: m << 1, 0, 0, -1; break;
    default: throw Failure("pauli: index out of range");
  }
  return m;
}

struct CliffordRep {
  int n = 0;    // number of generators
  int dim = 1;  // 2^floor(n/2)
  std::vector<Mat> gamma;
};

/* Jordan-Wigner chain.  gamma_{2k-1} = s3^(k-1) x s1 x 1...,
   gamma_{2k} = s3^(k-1) x s2 x 1..., and for odd n the last generator is
   the full s3 string.  For odd n the product gamma_1...gamma_n is pinned
   to i^{(n-1)/2} times the identity (flip the last generator if a basis
   change ever breaks this); the assemblies downstream rely on that phase. */
inline CliffordRep clifford_jw(int n) {
  if (n < 1) throw Failure("clifford_jw: need at least one generator");
  const int q = n / 2;
  CliffordRep rep;
  rep.n = n;
  rep.dim = 1 << q;
  auto chain = [&](int slot, int p) {
    // s3 x ... x s3 (slot times) x pauli(p) x 1 x ... x 1, q factors total
    Mat m = Mat::Identity(1, 1);
    for (int f = 0; f < q; ++f) {
      if (f < slot) m = kron(m, pauli(3)).eval();
      else if (f == slot) m = kron(m, pauli(p)).eval();
      else m = kron(m, pauli(0)).eval();
    }
    return m;
  };
  for (int k = 0; k < q; ++k) {
    rep.gamma.push_back(chain(k, 1));
    rep.gamma.push_back(chain(k, 2));
  }
  if (n % 2 == 1) {
    Mat last = Mat::Identity(1, 1);  // full s3 string
    for (int f = 0; f < q; ++f) last = kron(last, pauli(3)).eval();
    rep.gamma.push_back(last);
    // pin the product phase
    Mat prod = Mat::Identity(rep.dim, rep.dim);
    for (const Mat& g : rep.gamma) prod = (prod * g).eval();
    cplx expect = std::pow(cplx(0, 1), (n - 1) / 2);
    if (std::abs(prod(0, 0) - expect) > 1e-9) {
      rep.gamma.back() = -rep.gamma.back();
      prod = -prod;
    }
    if ((prod - expect * Mat::Identity(rep.dim, rep.dim)).cwiseAbs().maxCoeff() >
        1e-9)
      throw Failure("clifford_jw: odd-count product phase not scalar");
  }
  return rep;
}

/* Generators entering the even periodic localizer.  For even d there are
   d-1 matrices, paired with the first d-1 sine diagonals; the d-th sine
   couples through the explicit scalar i.  For odd d a full set of d
   anticommuting matrices exists at the same fiber dimension, so every
   sine carries one and the off-diagonal block is self-adjoint.  d=2
   gives the 1x1 matrix +1 (the one-time orientation calibration of the
   whole chain). */
inline std::vector<Mat> even_localizer_basis(int d) {
  if (d < 2) throw Failure("even_localizer_basis: d must be >= 2");
  if (d == 2) return {Mat::Identity(1, 1)};
  return d % 2 == 0 ? clifford_jw(d - 1).gamma : clifford_jw(d).gamma;
}

/* Split basis for graded G-operators: d+1 generators plus a grading that
   anticommutes with all of them.  Every generator except the last two is a
   base gamma tensored with s1; the last two slots are 1 x s2 and 1 x s3.
   For even d the 1 x s3 element is both the final generator and the
   grading; for odd d the grading is a separate matrix. */
struct SplitBasis {
  std::vector<Mat> gamma;  // d+1 generators
  Mat grading;
};

inline SplitBasis split_basis_graded(int d) {
  if (d < 1) throw Failure("split_basis_graded: d must be positive");
  std::vector<Mat> base;
  if (d % 2 == 0) base = even_localizer_basis(d);  // d-1 generators
  else if (d == 1) base = {Mat::Identity(1, 1)};
  else base = clifford_jw(d).gamma;  // d generators
  SplitBasis sb;
  const Eigen::Index bd = base.front().rows();
  const Mat ib = Mat::Identity(bd, bd);
  for (const Mat& g : base) sb.gamma.push_back(kron(g, pauli(1)));
  sb.gamma.push_back(kron(ib, pauli(2)));
  sb.grading = kron(ib, pauli(3));
  if (d % 2 == 0) sb.gamma.push_back(sb.grading);
  if ((int)sb.gamma.size() != d + 1)
    throw Failure("split_basis_graded: generator count mismatch");
  return sb;
}

/* Dimension of the commutant of a generator set: 1 means the set acts
   irreducibly (Schur).  Solves g X = X g for all g by stacking the
   vectorized equations and counting the kernel. */
inline int commutant_dimension(const std::vector<Mat>& gens) {
  if (gens.empty()) throw Failure("commutant_dimension: empty generator set");
  const Eigen::Index n = gens.front().rows();
  Mat stacked(gens.size() * n * n, n * n);
  const Mat id = Mat::Identity(n, n);
  for (std::size_t k = 0; k < gens.size(); ++k)
    stacked.middleRows(k * n * n, n * n) =
        kron(id, gens[k]) - kron(gens[k].transpose(), id);
  Eigen::BDCSVD<Mat> svd(stacked);
  const auto& sv = svd.singularValues();
  double thr = 1e-10 * std::max(1.0, sv(0));
  int null_dim = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) < thr) ++null_dim;
  null_dim += int(n * n - sv.size());
  return null_dim;
}

}  // namespace speclocal
