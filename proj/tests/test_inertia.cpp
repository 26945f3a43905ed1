#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"

using namespace speclocal;
using testutil::max_abs;

TEST_CASE("inertia of a known diagonal", "[inertia]") {
  VecR d(6);
  d << 3.0, 1.0, 0.5, -2.0, -0.25, 0.0;
  Mat m = Mat(d.cast<cplx>().asDiagonal());
  InertiaResult r = inertia(m);
  CHECK(r.n_plus == 3);
  CHECK(r.n_minus == 2);
  CHECK(r.n_zero == 1);
  CHECK(r.min_abs_eig == 0.0);
  CHECK(signature(m) == 1);
}

TEST_CASE("eigensolve and shifted ldl agree", "[inertia]") {
  CounterRng rng(101);
  for (int trial = 0; trial < 50; ++trial) {
    long n = 3 + trial % 10;
    Mat m = testutil::random_hermitian(rng, n, 100000ull * trial);
    InertiaResult a = inertia(m, 1e-8, InertiaMethod::Eigensolve);
    InertiaResult b = inertia(m, 1e-8, InertiaMethod::ShiftedLdl);
    InertiaResult c = inertia(m, 0.0, InertiaMethod::ShiftedLdl);
    INFO("trial " << trial << ", n = " << n);
    CHECK(a.n_plus == b.n_plus);
    CHECK(a.n_minus == b.n_minus);
    CHECK(a.n_zero == b.n_zero);
    // single-factorization path at zero tolerance: random spectra carry no
    // exact zeros, so the raw pivot signs give the same counts
    CHECK(c.n_plus == a.n_plus);
    CHECK(c.n_minus == a.n_minus);
    CHECK(c.n_zero == 0);
  }
}

TEST_CASE("shifted ldl counts a deliberate kernel", "[inertia]") {
  VecR d(5);
  d << 2.0, 1.0, 1e-12, -1.0, -3.0;
  Mat m = Mat(d.cast<cplx>().asDiagonal());
  // rotate so the kernel direction is not a coordinate axis
  CounterRng rng(7);
  Mat u = testutil::random_unitary(rng, 5);
  m = u * m * Mat(u.adjoint());
  InertiaResult r = inertia(m, 1e-8, InertiaMethod::ShiftedLdl);
  CHECK(r.n_plus == 2);
  CHECK(r.n_minus == 2);
  CHECK(r.n_zero == 1);
}

TEST_CASE("half signature needs an even signature", "[inertia]") {
  VecR even(4), odd(3);
  even << 2, 1, -1, -2;
  odd << 2, 1, -1;
  CHECK(half_signature(Mat(even.cast<cplx>().asDiagonal())) == 0);
  CHECK_THROWS_AS(half_signature(Mat(odd.cast<cplx>().asDiagonal())), Failure);
  VecR two(4);
  two << 3, 2, 1, -1;
  CHECK(half_signature(Mat(two.cast<cplx>().asDiagonal())) == 1);
}

TEST_CASE("spectral gap", "[inertia]") {
  VecR d(4);
  d << 5.0, 0.125, -0.5, -4.0;
  CHECK(std::abs(spectral_gap(Mat(d.cast<cplx>().asDiagonal())) - 0.125) <
        1e-14);
  Mat nh(2, 2);
  nh << cplx(0, 0), cplx(1, 0), cplx(0, 0), cplx(0, 0);
  CHECK_THROWS_AS(spectral_gap(nh), NotSelfAdjoint);
}

TEST_CASE("realness check", "[inertia]") {
  Mat r = Mat::Identity(3, 3);
  CHECK(realness_check(r));
  r(0, 1) = cplx(0.5, 1e-7);
  CHECK_FALSE(realness_check(r));
}

TEST_CASE("pfaffian sign on a four by four oracle", "[inertia]") {
  // pf = a01 a23 - a02 a13 + a03 a12
  CounterRng rng(55);
  for (int trial = 0; trial < 20; ++trial) {
    MatR a = testutil::random_skew(rng, 4, 5000ull * trial);
    double pf = a(0, 1) * a(2, 3) - a(0, 2) * a(1, 3) + a(0, 3) * a(1, 2);
    if (std::abs(pf) < 1e-3) continue;  // give the sign something to bite on
    PfaffianSign r = pfaffian_sign_detail(a);
    INFO("trial " << trial);
    CHECK(r.sign == (pf > 0 ? 1 : -1));
    CHECK(std::abs(r.log_abs - std::log(std::abs(pf))) < 1e-8);
  }
}

TEST_CASE("pfaffian squares to the determinant", "[inertia]") {
  CounterRng rng(56);
  for (long n : {2L, 4L, 6L, 8L, 12L}) {
    MatR a = testutil::random_skew(rng, n, 77ull * n);
    PfaffianSign r = pfaffian_sign_detail(a);
    double det = a.determinant();
    INFO("n = " << n);
    REQUIRE(det > 0);  // det = pf^2 for even skew dimension
    CHECK(std::abs(2.0 * r.log_abs - std::log(det)) < 1e-8);
  }
}

TEST_CASE("pfaffian under congruence", "[inertia]") {
  // pf(B^T A B) = det(B) pf(A)
  CounterRng rng(57);
  for (int trial = 0; trial < 20; ++trial) {
    MatR a = testutil::random_skew(rng, 6, 900ull * trial);
    MatR b = testutil::random_real(rng, 6, 900ull * trial + 450);
    double detb = b.determinant();
    if (std::abs(detb) < 1e-3) continue;
    int lhs = pfaffian_sign_detail(MatR(b.transpose() * a * b)).sign;
    int rhs = (detb > 0 ? 1 : -1) * pfaffian_sign_detail(a).sign;
    INFO("trial " << trial);
    CHECK(lhs == rhs);
  }
}

TEST_CASE("pfaffian guards", "[inertia]") {
  CHECK_THROWS_AS(pfaffian_sign(MatR::Zero(3, 3)), OddDimension);
  MatR not_skew = MatR::Identity(4, 4);
  CHECK_THROWS_AS(pfaffian_sign(not_skew), NotSkewSymmetric);
  MatR singular = MatR::Zero(4, 4);
  singular(0, 1) = 1;
  singular(1, 0) = -1;  // rows 2,3 identically zero
  CHECK_THROWS_AS(pfaffian_sign(singular), NearSingular);
}
