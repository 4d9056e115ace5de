#include <doctest.h>

#include <Eigen/SVD>
#include <cmath>
#include <numbers>

#include "lrfr/basis.hpp"
#include "lrfr/io.hpp"
#include "test_util.hpp"

using namespace lrfr;

namespace {

// reference implementation: the recurrence written recursively
double cheb2_recursive(int j, double t) {
  const double r = 2.0 * (t - 0.5);
  const double b1 = 2.0 * std::pow(std::max(0.0, 1.0 - r * r), 0.25) /
                    std::sqrt(std::numbers::pi);
  if (j == 1) return b1;
  if (j == 2) return 2.0 * t * b1;
  return 2.0 * t * cheb2_recursive(j - 1, t) - cheb2_recursive(j - 2, t);
}

double operator_norm(const Matrix& A) {
  return Eigen::JacobiSVD<Matrix>(A).singularValues()(0);
}

}  // namespace

TEST_SUITE_BEGIN("basis");

TEST_CASE("time grid validation") {
  CHECK_THROWS_AS(TimeGrid(Vector::Zero(0)), validation_error);
  Vector bad(2);
  bad << 0.5, 0.2;
  CHECK_THROWS_AS(TimeGrid(bad), validation_error);
  Vector out_of_range(2);
  out_of_range << 0.0, 1.5;
  CHECK_THROWS_AS(TimeGrid(out_of_range), validation_error);

  const TimeGrid open = TimeGrid::uniform(4);
  CHECK(open.size() == 4);
  CHECK(open[0] == 0.0);
  CHECK(open[3] == doctest::Approx(0.75));

  const TimeGrid closed = TimeGrid::uniform_closed(5);
  CHECK(closed[4] == 1.0);
}

TEST_CASE("fourier family") {
  CHECK(eval_fourier(1, 0.37) == 1.0);
  CHECK(std::abs(eval_fourier(2, 0.5)) < 1e-15);   // sqrt(2) sin(pi)
  CHECK(std::abs(eval_fourier(3, 0.25)) < 1e-15);  // sqrt(2) cos(pi/2)
  CHECK(eval_fourier(4, 0.125) ==
        doctest::Approx(std::numbers::sqrt2 * std::sin(std::numbers::pi * 0.5)));
  CHECK_THROWS_AS(eval_fourier(0, 0.3), validation_error);
}

TEST_CASE("chebyshev2 family") {
  const double two_over_sqrt_pi = 2.0 / std::sqrt(std::numbers::pi);
  CHECK(eval_chebyshev2(1, 0.5) == doctest::Approx(two_over_sqrt_pi).epsilon(1e-12));
  CHECK(eval_chebyshev2(1, 0.0) == 0.0);
  CHECK(eval_chebyshev2(1, 1.0) == 0.0);
  CHECK(eval_chebyshev2(3, 0.5) == 0.0);  // 2*0.5*b2 - b1 with b2 = b1 at t = 1/2
  CHECK_THROWS_AS(eval_chebyshev2(0, 0.3), validation_error);
}

TEST_CASE("chebyshev2 iterative matches recursive reference") {
  for (int j = 1; j <= 10; ++j)
    for (int k = 0; k <= 20; ++k) {
      const double t = k / 20.0;
      CHECK(eval_chebyshev2(j, t) ==
            doctest::Approx(cheb2_recursive(j, t)).epsilon(1e-12));
    }
}

TEST_CASE("basis matrix entries are bit-identical to scalar evaluation") {
  const TimeGrid grid = TimeGrid::uniform(17);
  for (const BasisFamily family : {BasisFamily::Fourier, BasisFamily::Chebyshev2}) {
    const BasisMatrix B = basis_matrix(BasisSpec{family, 6}, grid);
    for (int h = 1; h <= 6; ++h)
      for (Index k = 0; k < grid.size(); ++k)
        CHECK(B.values(h - 1, k) == eval_basis(family, h, grid[k]));
  }
}

TEST_CASE("constant fourier row") {
  const BasisMatrix B =
      basis_matrix(BasisSpec{BasisFamily::Fourier, 1}, TimeGrid::uniform(4));
  CHECK(B.values.rows() == 1);
  CHECK((B.values.array() == 1.0).all());
}

TEST_CASE("fourier near-orthonormality on the uniform grid") {
  const BasisMatrix B =
      basis_matrix(BasisSpec{BasisFamily::Fourier, 4}, TimeGrid::uniform(256));
  const Matrix gram = B.values * B.values.transpose() / 256.0;
  CHECK(operator_norm(gram - Matrix::Identity(4, 4)) < 0.01);

  for (const Index T : {Index{64}, Index{128}, Index{256}}) {
    const BasisMatrix B8 =
        basis_matrix(BasisSpec{BasisFamily::Fourier, 8}, TimeGrid::uniform(T));
    const Matrix g = B8.values * B8.values.transpose() / static_cast<double>(T);
    double max_off = 0.0;
    for (Index a = 0; a < 8; ++a)
      for (Index b = 0; b < 8; ++b)
        if (a != b) max_off = std::max(max_off, std::abs(g(a, b)));
    CHECK(max_off < 10.0 / (static_cast<double>(T) * static_cast<double>(T)));
  }
}

TEST_CASE("chebyshev2 matrix on the three-point grid") {
  Vector pts(3);
  pts << 0.0, 0.5, 1.0;
  const BasisMatrix B =
      basis_matrix(BasisSpec{BasisFamily::Chebyshev2, 2}, TimeGrid(pts));
  const double mid = 2.0 / std::sqrt(std::numbers::pi);
  CHECK(B.values(0, 0) == 0.0);
  CHECK(B.values(0, 1) == doctest::Approx(mid).epsilon(1e-14));
  CHECK(B.values(0, 2) == 0.0);
  // b_2 = 2 t b_1 pointwise
  CHECK(B.values(1, 0) == 0.0);
  CHECK(B.values(1, 1) == doctest::Approx(mid).epsilon(1e-14));
  CHECK(B.values(1, 2) == 0.0);
}

TEST_CASE("xi diagnostic stays within sqrt(2) for fourier") {
  const BasisMatrix B =
      basis_matrix(BasisSpec{BasisFamily::Fourier, 8}, TimeGrid::uniform(512));
  CHECK(B.xi() <= std::numbers::sqrt2);
  CHECK(B.xi() > 1.0);
}

TEST_CASE("basis csv round-trips exactly") {
  testutil::TempDir dir("basis_csv");
  const BasisMatrix B =
      basis_matrix(BasisSpec{BasisFamily::Chebyshev2, 5}, TimeGrid::uniform(23));
  write_basis_csv(B, dir.path() / "basis.csv");
  const Matrix back = read_matrix_csv(dir.path() / "basis.csv");
  CHECK(back.rows() == B.values.rows());
  CHECK(back.cols() == B.values.cols());
  CHECK(back == B.values);
}

TEST_SUITE_END();
