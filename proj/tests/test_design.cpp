#include <doctest.h>

#include <random>

#include "lrfr/design.hpp"
#include "test_util.hpp"

using namespace lrfr;

TEST_SUITE_BEGIN("design");

TEST_CASE("subject design blocks") {
  const TimeGrid grid = TimeGrid::uniform(2);
  BasisMatrix B{BasisSpec{BasisFamily::Fourier, 2}, grid, Matrix(2, 2)};
  B.values << 1, 1, 0, 1;

  SUBCASE("scalar one reproduces the basis") {
    Vector x(1);
    x << 1.0;
    CHECK(subject_design(x, B) == B.values);
  }
  SUBCASE("zero covariates annihilate") {
    Vector x(2);
    x << 0.0, 0.0;
    CHECK(subject_design(x, B).isZero(0.0));
  }
  SUBCASE("hand-expanded kronecker block") {
    Vector x(2);
    x << 2.0, -1.0;
    Matrix expected(4, 2);
    expected << 2, 2, 0, 2, -1, -1, 0, -1;
    CHECK(subject_design(x, B) == expected);
  }
  SUBCASE("empty covariate vector rejected") {
    CHECK_THROWS_AS(subject_design(Vector(), B), validation_error);
  }
}

TEST_CASE("stacking reproduces the generating model exactly") {
  auto prob = testutil::make_problem(3, 2, 2, 4, 2, BasisFamily::Fourier, 11);
  const StackedSystem sys = stack_system(prob.data, prob.B);
  CHECK(sys.X.rows() == 12);
  CHECK(sys.X.cols() == 4);
  const Matrix residual = sys.Y - sys.X * prob.M_star.M.transpose();
  CHECK(residual.cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("stacking layout") {
  auto prob = testutil::make_problem(2, 2, 3, 5, 2, BasisFamily::Chebyshev2, 3);
  // duplicate subject 0 into subject 1
  prob.data.covariates.row(1) = prob.data.covariates.row(0);
  prob.data.responses[1] = prob.data.responses[0];
  const StackedSystem sys = stack_system(prob.data, prob.B);
  CHECK(sys.X.topRows(5) == sys.X.bottomRows(5));
  CHECK(sys.Y.topRows(5) == sys.Y.bottomRows(5));

  SUBCASE("single subject equals the transposed subject design") {
    Dataset one{prob.data.covariates.topRows(1), {prob.data.responses[0]}, prob.data.grid};
    const StackedSystem s1 = stack_system(one, prob.B);
    CHECK(s1.X == subject_design(one.covariates.row(0), prob.B).transpose());
    CHECK(s1.Y == prob.data.responses[0].transpose());
  }

  SUBCASE("unstacking is bit-exact") {
    for (Index i = 1; i <= 2; ++i) {
      CHECK(unstack_response(sys, i) == prob.data.responses[static_cast<size_t>(i - 1)]);
      CHECK(unstack_design(sys, i) ==
            subject_design(prob.data.covariates.row(i - 1), prob.B));
    }
  }
}

TEST_CASE("grid mismatch is rejected") {
  auto prob = testutil::make_problem(2, 2, 2, 4, 2, BasisFamily::Fourier, 5);
  const BasisMatrix other =
      basis_matrix(prob.B.spec, TimeGrid::uniform_closed(4));
  CHECK_THROWS_AS(stack_system(prob.data, other), validation_error);
}

TEST_CASE("model product identities") {
  std::mt19937_64 rng(21);
  const TimeGrid grid = TimeGrid::uniform(3);
  const BasisMatrix B = basis_matrix(BasisSpec{BasisFamily::Fourier, 2}, grid);

  SUBCASE("zero coefficients") {
    const CoefMatrix M = CoefMatrix::zero(2, 2, 2);
    Vector x(2);
    x << 0.3, -1.2;
    CHECK(model_product(M, subject_design(x, B)).isZero(0.0));
  }
  SUBCASE("single block identity") {
    CoefMatrix M{testutil::random_matrix(2, 2, rng), 1, 2};
    Vector x(1);
    x << 1.0;
    const Matrix direct = model_product(M, subject_design(x, B));
    CHECK((direct - M.block(1) * B.values).cwiseAbs().maxCoeff() <= 1e-12);
  }
  SUBCASE("two computation paths agree") {
    CoefMatrix M{testutil::random_matrix(2, 4, rng), 2, 2};
    Vector x(2);
    x << 0.7, -0.4;
    const Matrix direct = model_product(M, subject_design(x, B));
    const Matrix blockwise = x[0] * M.block(1) * B.values + x[1] * M.block(2) * B.values;
    CHECK((direct - blockwise).cwiseAbs().maxCoeff() <= 1e-12);
  }
  SUBCASE("dimension mismatch") {
    CoefMatrix M{testutil::random_matrix(2, 4, rng), 2, 2};
    CHECK_THROWS_AS(model_product(M, Matrix::Zero(3, 3)), validation_error);
  }
}

TEST_CASE("kronecker-block identity holds on random instances") {
  std::mt19937_64 rng(1234);
  for (int rep = 0; rep < 100; ++rep) {
    const Index s = 1 + static_cast<Index>(rng() % 4);
    const int c = 1 + static_cast<int>(rng() % 4);
    const Index p = 1 + static_cast<Index>(rng() % 5);
    const Index T = 2 + static_cast<Index>(rng() % 6);
    const BasisMatrix B =
        basis_matrix(BasisSpec{BasisFamily::Chebyshev2, c}, TimeGrid::uniform(T));
    CoefMatrix M{testutil::random_matrix(p, s * c, rng), s, c};
    const Vector x = testutil::random_vector(s, rng);

    const Matrix direct = model_product(M, subject_design(x, B));
    Matrix blockwise = Matrix::Zero(p, T);
    for (Index j = 1; j <= s; ++j) blockwise += x[j - 1] * M.block(j) * B.values;

    const double scale = std::max(1.0, direct.norm());
    CHECK((direct - blockwise).norm() / scale <= 1e-10);
  }
}

TEST_CASE("standardization centers and scales") {
  auto prob = testutil::make_problem(40, 3, 4, 16, 2, BasisFamily::Fourier, 77, 0.5);
  prob.data.covariates.array() += 2.0;  // off-center on purpose
  standardize_dataset(prob.data);

  for (Index j = 0; j < prob.data.s(); ++j)
    CHECK(std::abs(prob.data.covariates.col(j).mean()) < 1e-12);
  const double count = static_cast<double>(prob.data.n() * prob.data.T());
  for (Index l = 0; l < prob.data.p(); ++l) {
    double mean = 0.0, ss = 0.0;
    for (const Matrix& Yi : prob.data.responses) mean += Yi.row(l).sum();
    mean /= count;
    for (const Matrix& Yi : prob.data.responses)
      ss += (Yi.row(l).array() - mean).square().sum();
    CHECK(std::abs(mean) < 1e-12);
    CHECK(ss / count == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_SUITE_END();
