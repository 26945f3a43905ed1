#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"

using namespace speclocal;
using testutil::max_abs;

namespace {

double anticommutator_defect(const std::vector<Mat>& g) {
  const long dim = g.front().rows();
  const Mat id = Mat::Identity(dim, dim);
  double worst = 0;
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = 0; j < g.size(); ++j) {
      Mat ac = g[i] * g[j] + g[j] * g[i];
      if (i == j) ac -= 2.0 * id;
      worst = std::max(worst, max_abs(ac));
    }
  return worst;
}

double hermiticity_defect(const std::vector<Mat>& g) {
  double worst = 0;
  for (const Mat& m : g) worst = std::max(worst, max_abs(Mat(m - m.adjoint())));
  return worst;
}

}  // namespace

TEST_CASE("pauli matrices", "[clifford]") {
  CHECK(pauli(0).isApprox(Mat::Identity(2, 2)));
  CHECK(max_abs(Mat(pauli(1) * pauli(2) - cplx(0, 1) * pauli(3))) < 1e-15);
  for (int j = 1; j <= 3; ++j)
    CHECK(max_abs(Mat(pauli(j) * pauli(j) - pauli(0))) < 1e-15);
}

TEST_CASE("jordan-wigner generators are a clifford family", "[clifford]") {
  for (int n = 1; n <= 6; ++n) {
    CliffordRep rep = clifford_jw(n);
    INFO("n = " << n);
    CHECK(rep.n == n);
    CHECK(rep.dim == (1 << (n / 2)));
    CHECK((int)rep.gamma.size() == n);
    CHECK(rep.gamma.front().rows() == rep.dim);
    CHECK(anticommutator_defect(rep.gamma) < 1e-14);
    CHECK(hermiticity_defect(rep.gamma) < 1e-14);
  }
}

TEST_CASE("odd chains pin the product phase", "[clifford]") {
  // gamma_1 ... gamma_n = i^{(n-1)/2} for odd n; assemblies rely on this.
  for (int n : {1, 3, 5, 7}) {
    CliffordRep rep = clifford_jw(n);
    Mat prod = Mat::Identity(rep.dim, rep.dim);
    for (const Mat& g : rep.gamma) prod = prod * g;
    cplx phase = std::pow(cplx(0, 1), (n - 1) / 2);
    INFO("n = " << n);
    CHECK(max_abs(Mat(prod - phase * Mat::Identity(rep.dim, rep.dim))) < 1e-14);
  }
}

TEST_CASE("irreducibility via the commutant", "[clifford]") {
  for (int n = 1; n <= 5; ++n)
    CHECK(commutant_dimension(clifford_jw(n).gamma) == 1);
  // a manifestly reducible set: identities only
  std::vector<Mat> red{Mat::Identity(2, 2), Mat::Identity(2, 2)};
  CHECK(commutant_dimension(red) == 4);
}

TEST_CASE("even localizer basis sizes", "[clifford]") {
  CHECK_THROWS_AS(even_localizer_basis(1), Failure);

  std::vector<Mat> b2 = even_localizer_basis(2);
  REQUIRE(b2.size() == 1);
  CHECK(b2[0].isApprox(Mat::Identity(1, 1)));

  // even d uses d-1 generators (the last sine slot rides on i*identity),
  // odd d uses a full d-generator family
  CHECK(even_localizer_basis(4).size() == 3);
  CHECK(even_localizer_basis(3).size() == 3);
  CHECK(even_localizer_basis(5).size() == 5);
  CHECK(anticommutator_defect(even_localizer_basis(4)) < 1e-14);
  CHECK(anticommutator_defect(even_localizer_basis(5)) < 1e-14);
}

TEST_CASE("split basis for graded operators", "[clifford]") {
  for (int d = 1; d <= 5; ++d) {
    SplitBasis sb = split_basis_graded(d);
    INFO("d = " << d);
    REQUIRE((int)sb.gamma.size() == d + 1);
    CHECK(anticommutator_defect(sb.gamma) < 1e-14);
    // the grading anticommutes with every generator except, for even d,
    // the final slot it occupies itself
    for (int j = 0; j < d + 1; ++j) {
      Mat ac = sb.grading * sb.gamma[j] + sb.gamma[j] * sb.grading;
      if (d % 2 == 0 && j == d)
        CHECK(max_abs(Mat(ac - 2.0 * Mat::Identity(ac.rows(), ac.cols()))) <
              1e-14);
      else
        CHECK(max_abs(ac) < 1e-14);
    }
    CHECK(max_abs(Mat(sb.grading * sb.grading -
                      Mat::Identity(sb.grading.rows(), sb.grading.cols()))) <
          1e-14);
  }
}

TEST_CASE("kron matches hand-expanded blocks", "[clifford]") {
  Mat a(2, 2), b(2, 2);
  a << cplx(1, 0), cplx(0, 1), cplx(2, 0), cplx(0, -1);
  b << cplx(0, 0), cplx(1, 0), cplx(1, 0), cplx(0, 0);
  Mat k = kron(a, b);
  REQUIRE(k.rows() == 4);
  CHECK(k(0, 1) == a(0, 0) * b(0, 1));
  CHECK(k(1, 2) == a(0, 1) * b(1, 0));
  CHECK(k(2, 3) == a(1, 1) * b(0, 1));
}
