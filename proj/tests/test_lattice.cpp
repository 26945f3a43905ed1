#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>

#include "helpers.hpp"

using namespace speclocal;
using testutil::max_abs;

TEST_CASE("site indexing round trip", "[lattice]") {
  for (int d : {1, 2, 3}) {
    const int rho = 3;
    for (long idx = 0; idx < num_sites(d, rho); ++idx) {
      std::vector<int> x = site_coords(idx, d, rho);
      for (int v : x) {
        CHECK(v >= -rho + 1);
        CHECK(v <= rho);
      }
      CHECK(site_linear(x, d, rho) == idx);
    }
  }
  // first axis is the slowest
  CHECK(site_linear({-1, 2}, 2, 2) == site_linear({-1, -1}, 2, 2) + 3);
}

TEST_CASE("periodic fold reproduces bloch spectra", "[lattice]") {
  // on a box of 2 rho sites the plane waves with k in (pi/rho) Z diagonalize
  // the folded operator, so its spectrum is the union of those fibers
  TranslationInvariantOperator op = ssh_clean(cplx(0.9, 0.0));
  const int rho = 4;
  FiniteVolumeOperator h = fold_periodic(op, rho);
  Eigen::SelfAdjointEigenSolver<Mat> es(h.matrix, Eigen::EigenvaluesOnly);
  std::vector<double> folded(es.eigenvalues().data(),
                             es.eigenvalues().data() + es.eigenvalues().size());
  std::vector<double> fibers;
  for (int m = 0; m < 2 * rho; ++m) {
    VecR k(1);
    k(0) = M_PI * m / rho;
    Mat hk = bloch_fiber(op, k);
    Eigen::SelfAdjointEigenSolver<Mat> ek(hk, Eigen::EigenvaluesOnly);
    for (long i = 0; i < ek.eigenvalues().size(); ++i)
      fibers.push_back(ek.eigenvalues()(i));
  }
  std::sort(fibers.begin(), fibers.end());
  REQUIRE(folded.size() == fibers.size());
  for (std::size_t i = 0; i < folded.size(); ++i)
    CHECK(std::abs(folded[i] - fibers[i]) < 1e-9);
}

TEST_CASE("wrap flag and dirichlet boundary", "[lattice]") {
  TranslationInvariantOperator op = ssh_clean(cplx(0.9, 0.0));
  CHECK(fold_periodic(op, 4).wrapped == false);
  // the flag marks hoppings wrapping more than once: 2 rho <= range
  TranslationInvariantOperator wide;
  wide.d = 1;
  wide.L = 1;
  set_hopping(wide, {2}, Mat::Constant(1, 1, cplx(1, 0)));
  set_hopping(wide, {-2}, Mat::Constant(1, 1, cplx(1, 0)));
  CHECK(fold_periodic(wide, 1).wrapped == true);
  CHECK(fold_periodic(wide, 2).wrapped == false);

  FiniteVolumeOperator per = fold_periodic(op, 3);
  FiniteVolumeOperator dir = restrict_dirichlet(op, 3);
  CHECK(dir.boundary == Boundary::dirichlet);
  CHECK(dir.wrapped == false);
  // interior agrees, and the open box drops exactly the wrap entries
  Mat diff = per.matrix - dir.matrix;
  long nz = 0;
  for (long i = 0; i < diff.rows(); ++i)
    for (long j = 0; j < diff.cols(); ++j)
      if (std::abs(diff(i, j)) > 1e-14) ++nz;
  CHECK(nz == 2);  // one hopping across the seam plus its adjoint
  CHECK(max_abs(Mat(per.matrix - per.matrix.adjoint())) < 1e-14);
  CHECK(max_abs(Mat(dir.matrix - dir.matrix.adjoint())) < 1e-14);
}

TEST_CASE("sparse fold agrees with the dense one", "[lattice]") {
  TranslationInvariantOperator op = aii_model_clean(3, 2.0);
  const int rho = 2;
  FiniteVolumeOperator dense = fold_periodic(op, rho);
  SpMatC sparse = fold_periodic_sparse(op, rho);
  CHECK(max_abs(Mat(Mat(sparse) - dense.matrix)) < 1e-14);
}

TEST_CASE("hopping validation", "[lattice]") {
  TranslationInvariantOperator op;
  op.d = 1;
  op.L = 1;
  set_hopping(op, {1}, Mat::Constant(1, 1, cplx(1, 0)));
  CHECK_THROWS_AS(validate_hoppings(op), NotSelfAdjoint);  // missing T_{-1}
  set_hopping(op, {-1}, Mat::Constant(1, 1, cplx(1, 0)));
  CHECK_NOTHROW(validate_hoppings(op));
  CHECK_THROWS_AS(set_hopping(op, {1, 0}, Mat::Identity(1, 1)), ConfigError);
}

TEST_CASE("profiles", "[lattice]") {
  // odd switch: x (2 - |x|) on [-1, 1], saturating at +-1
  CHECK(switch_chi(-2.0) == -1.0);
  CHECK(switch_chi(0.5) == 0.75);
  CHECK(switch_chi(1.0) == 1.0);
  CHECK(switch_chi(2.0) == 1.0);
  CHECK(switch_chi(0.25) == -switch_chi(-0.25));
  // even taper: plateau 1 on |u| <= 1/2, support |u| < 1
  CHECK(taper_g(0.5) == 1.0);
  CHECK(taper_g(-0.5) == 1.0);
  CHECK(taper_g(1.0) == 0.0);
  CHECK(taper_g(2.0) == 0.0);
  CHECK(std::abs(taper_g(0.75) - 0.5) < 1e-15);
  CHECK(std::abs(xi_profile(4.0, 8) - std::sin(M_PI * 4 / 16)) < 1e-15);
}

TEST_CASE("operator statistics on the dimer chain", "[lattice]") {
  OperatorStats st = operator_stats(ssh_clean(cplx(0.9, 0.0)));
  // band edges of |m + e^{-ik}| are |1 - m| and 1 + m
  CHECK(std::abs(st.norm - 1.9) < 1e-6);
  CHECK(std::abs(st.gap - 0.1) < 1e-6);
  CHECK(st.hopping_bound > 0);
  CHECK_THROWS_AS(operator_stats(ssh_clean(cplx(1.0, 0.0))), GapClosed);
}

TEST_CASE("commutator ratios stay below their bounds", "[lattice]") {
  for (int rho : {8, 16}) {
    CommutatorBoundReport r1 =
        commutator_bound_report(ssh_clean(cplx(0.9, 0.0)), rho);
    INFO("rho = " << rho);
    CHECK(r1.ratio_cos <= 1.0 + 1e-12);
    CHECK(r1.ratio_sin <= 1.0 + 1e-12);
    CHECK(r1.ratio_xi <= 1.0 + 1e-12);
    CHECK(r1.ratio_abs_xi <= 1.0 + 1e-12);
  }
  CommutatorBoundReport r2 =
      commutator_bound_report(dirac_bloch_model(2, 1.0), 8);
  CHECK(r2.ratio_cos <= 1.0 + 1e-12);
  CHECK(r2.ratio_sin <= 1.0 + 1e-12);
  CHECK(r2.ratio_xi <= 1.0 + 1e-12);
  CHECK(r2.ratio_abs_xi <= 1.0 + 1e-12);
}

TEST_CASE("model json round trip", "[lattice]") {
  TranslationInvariantOperator op = dirac_bloch_model(2, 1.5);
  nlohmann::json j = model_to_json(op);
  TranslationInvariantOperator back = model_from_json(j);
  CHECK(back.d == op.d);
  CHECK(back.L == op.L);
  CHECK(back.self_adjoint == op.self_adjoint);
  REQUIRE(back.hoppings.size() == op.hoppings.size());
  for (const auto& [a, t] : op.hoppings)
    CHECK(max_abs(Mat(back.hoppings.at(a) - t)) < 1e-15);

  std::string path = "/tmp/speclocal_model_rt.json";
  write_model_json(op, path);
  TranslationInvariantOperator disk = read_model_json(path);
  CHECK(disk.hoppings.size() == op.hoppings.size());
  std::remove(path.c_str());
}

TEST_CASE("matrix csv round trip", "[lattice]") {
  CounterRng rng(11);
  Mat m = testutil::random_hermitian(rng, 5);
  std::string path = "/tmp/speclocal_matrix_rt.csv";
  write_matrix_csv(m, path);
  Mat back = read_matrix_csv(path, 5);
  CHECK(max_abs(Mat(back - m)) < 1e-12);
  std::remove(path.c_str());
}

TEST_CASE("taper empties the shell rows", "[lattice]") {
  TranslationInvariantOperator op = ssh_clean(cplx(0.9, 0.0));
  const int rho = 10;
  const double s = 0.25;  // cut at 7.5: sites with |x| >= 8 are zeroed
  FiniteVolumeOperator h = fold_periodic(op, rho);
  FiniteVolumeOperator t = taper_matrix_elements(h, s);
  CHECK(t.boundary == Boundary::free_form);
  long zero_rows = 0;
  for (long i = 0; i < t.matrix.rows(); ++i)
    if (t.matrix.row(i).cwiseAbs().maxCoeff() < 1e-15 &&
        t.matrix.col(i).cwiseAbs().maxCoeff() < 1e-15)
      ++zero_rows;
  // coordinates run -9..10, so |x| > 7.5 covers -9..-8 and 8..10, five
  // sites of two orbitals each
  CHECK(zero_rows == 10);
  // tapering only removes entries
  for (long i = 0; i < t.matrix.rows(); ++i)
    for (long j = 0; j < t.matrix.cols(); ++j)
      if (std::abs(t.matrix(i, j)) > 1e-15)
        CHECK(std::abs(t.matrix(i, j) - h.matrix(i, j)) < 1e-15);
}

TEST_CASE("named position profiles", "[lattice]") {
  const int rho = 4;
  FiniteVolumeOperator s = position_function_diagonal("sin", rho, 1, 1, 2);
  REQUIRE(s.matrix.rows() == 16);
  // site x = 2 lives at linear index x + rho - 1 = 5, two orbitals per site
  CHECK(std::abs(s.matrix(10, 10).real() - std::sin(M_PI * 2 / 4.0)) < 1e-15);
  FiniteVolumeOperator c = position_function_diagonal("cos", rho, 1, 1, 2);
  CHECK(std::abs(c.matrix(10, 10).real() - std::cos(M_PI * 2 / 4.0)) < 1e-15);
  CHECK_THROWS_AS(position_function_diagonal("step", rho, 1, 1, 2),
                  ProfileUnknown);
  CHECK_THROWS_AS(position_function_diagonal("sin", rho, 1, 2, 2),
                  ConfigError);
}
