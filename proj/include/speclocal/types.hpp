#pragma once
// Shared scalar/matrix aliases, tolerance constants, and the error
// taxonomy.  Every other header in the library includes this first.

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace speclocal {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using MatR = Eigen::MatrixXd;
using Vec = Eigen::VectorXcd;
using VecR = Eigen::VectorXd;
using SpMatR = Eigen::SparseMatrix<double>;
using SpMatC = Eigen::SparseMatrix<cplx>;

namespace tol {
// Self-adjointness and realness are relative to the matrix scale.
inline constexpr double self_adjoint = 1e-10;
inline constexpr double realness = 1e-10;
inline constexpr double gap_closed = 1e-10;
inline constexpr double invertible_sv = 1e-10;
inline constexpr double pivot_rel = 1e-12;
inline constexpr double spectral_inclusion = 1e-9;
inline constexpr double exact = 1e-12;
}  // namespace tol

// Failure taxonomy.  Callers branch on these; the CLI maps every Failure
// subtype to a nonzero exit code.
struct Failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GapClosed : Failure { using Failure::Failure; };
struct GridTooCoarse : Failure { using Failure::Failure; };
struct DetVanishes : Failure { using Failure::Failure; };
struct MassAtTransition : Failure { using Failure::Failure; };
struct NotSelfAdjoint : Failure { using Failure::Failure; };
struct NotSkewSymmetric : Failure { using Failure::Failure; };
struct OddDimension : Failure { using Failure::Failure; };
struct NearSingular : Failure { using Failure::Failure; };
struct NotChiral : Failure { using Failure::Failure; };
struct NotUnitary : Failure { using Failure::Failure; };
struct NotInvertible : Failure { using Failure::Failure; };
struct WidthTooLarge : Failure { using Failure::Failure; };
struct GradedGapClosed : Failure { using Failure::Failure; };
struct SymmetryViolation : Failure { using Failure::Failure; };
struct ProfileUnknown : Failure { using Failure::Failure; };
struct ConfigError : Failure { using Failure::Failure; };

// Dense Kronecker product, left factor slowest:
// out(i*p + k, j*q + l) = a(i,j) * b(k,l) for b of size p x q.
template <typename DA, typename DB>
auto kron(const Eigen::MatrixBase<DA>& a, const Eigen::MatrixBase<DB>& b) {
  using Scalar = std::common_type_t<typename DA::Scalar, typename DB::Scalar>;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out(
      a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) =
          Scalar(a(i, j)) * b.template cast<Scalar>();
  return out;
}

inline double matrix_scale(const Mat& m) {
  double s = m.cwiseAbs().maxCoeff();
  return s > 0 ? s : 1.0;
}

inline bool is_self_adjoint(const Mat& m, double rel = tol::self_adjoint) {
  if (m.rows() != m.cols()) return false;
  double dev = (m - m.adjoint()).cwiseAbs().maxCoeff();
  return dev <= rel * matrix_scale(m);
}

inline void require_self_adjoint(const Mat& m, const std::string& what,
                                 double rel = tol::self_adjoint) {
  if (!is_self_adjoint(m, rel))
    throw NotSelfAdjoint(what + ": matrix deviates from its adjoint");
}

inline double max_imag_abs(const Mat& m) {
  return m.imag().cwiseAbs().maxCoeff();
}

// Spectral (operator 2-) norm.  SVD-based, fine for the dense sizes used in
// tests; hot paths use eigensolves of self-adjoint matrices instead.
inline double op_norm(const Mat& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0.0;
  Eigen::BDCSVD<Mat> svd(m);
  return svd.singularValues()(0);
}

inline const char* version_string() { return "1.0.0"; }

}  // namespace speclocal
