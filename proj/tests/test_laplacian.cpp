#include <doctest.h>

#include <stdexcept>

#include "lgbt/dataset.hpp"
#include "lgbt/laplacian.hpp"
#include "support.hpp"

using namespace lgbt;

TEST_CASE("Laplacian predicates") {
  Matrix l(3, 3);
  l << 2, -1, -1, -1, 1, 0, -1, 0, 1;
  CHECK(is_laplacian(l));
  CHECK_FALSE(is_super_laplacian(l));
  CHECK(is_super_laplacian(l + 0.1 * Matrix::Identity(3, 3)));
  CHECK(is_laplacian(Matrix::Zero(4, 4)));

  Matrix positive_off = l;
  positive_off(1, 2) = positive_off(2, 1) = 0.5;
  positive_off(1, 1) = 0.5;
  positive_off(2, 2) = 0.5;
  CHECK_FALSE(is_laplacian(positive_off));

  Matrix bad_rows = l;
  bad_rows(0, 0) = 3;
  CHECK_FALSE(is_laplacian(bad_rows));
  CHECK_FALSE(is_super_laplacian(bad_rows));
  CHECK(is_super_laplacian(bad_rows + 0.01 * Matrix::Identity(3, 3)));

  Matrix asym = l;
  asym(0, 1) = -0.5;
  CHECK_THROWS_AS(is_laplacian(asym), std::invalid_argument);
  CHECK_THROWS_AS(is_super_laplacian(Matrix::Zero(2, 3)), std::invalid_argument);
}

TEST_CASE("named Laplacians") {
  const Matrix s = single_edge_laplacian(4, 1, 3, 2.5);
  CHECK(is_laplacian(s));
  CHECK(s(1, 3) == -2.5);
  CHECK(s(3, 3) == 2.5);
  CHECK(s(0, 0) == 0.0);
  const Matrix k = complete_graph_laplacian(3);
  Matrix want(3, 3);
  want << 2, -1, -1, -1, 2, -1, -1, -1, 2;
  CHECK(k == want);
}

TEST_CASE("max diagonal dominance and its arg-min pair") {
  Matrix m(3, 3);
  m << 3, 4, 1, 4, 8, 4, 1, 4, 3;
  m /= 8;
  const auto d = max_diag_margin(m);
  CHECK(d.a == 0);
  CHECK(d.b == 1);
  CHECK(d.margin == doctest::Approx(-1.0 / 8));
  CHECK_FALSE(max_diag_dominant(m));
  CHECK(max_diag_dominant(Matrix::Identity(3, 3)));
}

TEST_CASE("Hessian of the dataset term has zero row sums") {
  const RootLaw law(RootLawKind::uniform);
  Dataset data(4, {{0, 1, 0.2}, {1, 2, -0.9}, {0, 1, 1.0}, {3, 0, 0.0}});
  Vector theta(4);
  theta << 0.3, -1.0, 2.0, 0.0;
  const Matrix h = hessian_of_dataset(data, theta, law);
  CHECK(h.rowwise().sum().cwiseAbs().maxCoeff() < 1e-15);
  CHECK(is_laplacian(h));
  CHECK(h(0, 1) == doctest::Approx(-2 * phi_second(law, 1.3)));
  CHECK(h(2, 3) == 0.0);
}

TEST_CASE("inverse of super-Laplacians is max-diagonally dominant") {
  RngStream rng(99);
  for (int i = 0; i < 300; ++i) {
    const Matrix delta = random_super_laplacian(testing::between(2, 8, rng), rng);
    REQUIRE(is_super_laplacian(delta));
    CHECK(inverse_dominance_check(delta));
  }
  CHECK_THROWS_AS(spd_inverse(-Matrix::Identity(3, 3)), NumericalError);
}

TEST_CASE("random Laplacians are Laplacians") {
  RngStream rng(4);
  for (int i = 0; i < 100; ++i) CHECK(is_laplacian(random_laplacian(testing::between(1, 9, rng), rng)));
  RngStream dense(4);
  const Matrix full = random_laplacian(6, dense, 1.0);
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 6; ++b)
      if (a != b) CHECK(full(a, b) < 0.0);
}

TEST_CASE("DiagDom") {
  // (I + cK_3)^{-1} = (I + c(3I - J))^{-1}; diagonal minus off-diagonal is 1/(1+3c)
  for (double c : {0.1, 1.0, 7.0}) CHECK(diag_dom(c * complete_graph_laplacian(3)) == doctest::Approx(1 / (1 + 3 * c)));
  CHECK(diag_dom(Matrix::Zero(3, 3)) == doctest::Approx(1.0));
  CHECK_THROWS(diag_dom(Matrix::Zero(1, 1)));
}
