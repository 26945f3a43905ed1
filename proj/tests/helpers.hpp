#pragma once
// Shared test fixtures: deterministic random matrices and norm shorthands.

#include <speclocal/speclocal.hpp>

namespace testutil {

using namespace speclocal;

// Dense random Hermitian with entries of order one, reproducible via the
// counter stream.  ctr_base separates draws within one test.
inline Mat random_hermitian(const CounterRng& rng, long n,
                            std::uint64_t ctr_base = 0) {
  Mat m(n, n);
  std::uint64_t c = ctr_base;
  for (long i = 0; i < n; ++i)
    for (long j = 0; j < n; ++j) {
      double re = rng.symmetric(c++, 1.0);
      double im = rng.symmetric(c++, 1.0);
      m(i, j) = cplx(re, im);
    }
  return 0.5 * (m + Mat(m.adjoint()));
}

inline MatR random_skew(const CounterRng& rng, long n,
                        std::uint64_t ctr_base = 0) {
  MatR m(n, n);
  std::uint64_t c = ctr_base;
  for (long i = 0; i < n; ++i)
    for (long j = 0; j < n; ++j) m(i, j) = rng.symmetric(c++, 1.0);
  return 0.5 * (m - MatR(m.transpose()));
}

inline MatR random_real(const CounterRng& rng, long n,
                        std::uint64_t ctr_base = 0) {
  MatR m(n, n);
  std::uint64_t c = ctr_base;
  for (long i = 0; i < n; ++i)
    for (long j = 0; j < n; ++j) m(i, j) = rng.symmetric(c++, 1.0);
  return m;
}

// Random unitary through the QR of a complex Gaussian-ish draw.
inline Mat random_unitary(const CounterRng& rng, long n,
                          std::uint64_t ctr_base = 0) {
  Mat m(n, n);
  std::uint64_t c = ctr_base;
  for (long i = 0; i < n; ++i)
    for (long j = 0; j < n; ++j) {
      double re = rng.symmetric(c++, 1.0);
      double im = rng.symmetric(c++, 1.0);
      m(i, j) = cplx(re, im);
    }
  Eigen::HouseholderQR<Mat> qr(m);
  Mat q = qr.householderQ();
  // fix the phase of each column so the result does not depend on the
  // internal sign conventions of the factorization
  Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (long j = 0; j < n; ++j) {
    cplx d = r(j, j);
    if (std::abs(d) > 0) q.col(j) *= d / std::abs(d);
  }
  return q;
}

inline double max_abs(const Mat& m) { return m.cwiseAbs().maxCoeff(); }
inline double max_abs(const MatR& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace testutil
