#pragma once

#include <string>

#include "lrfr/common.hpp"

namespace lrfr {

/// Sorted sampling grid on [0,1]. The default simulation grid is
/// t_k = (k-1)/T, k = 1..T; fitting accepts any strictly increasing grid.
class TimeGrid {
 public:
  explicit TimeGrid(Vector points);

  /// t_k = (k-1)/T, k = 1..T (right endpoint excluded).
  static TimeGrid uniform(Index T);
  /// n equispaced points spanning [0,1] inclusive; used for quadrature.
  static TimeGrid uniform_closed(Index n);

  Index size() const { return points_.size(); }
  double operator[](Index k) const { return points_[k]; }
  const Vector& points() const { return points_; }

  bool operator==(const TimeGrid& other) const;

 private:
  Vector points_;
};

enum class BasisFamily { Fourier, Chebyshev2 };

BasisFamily basis_family_from_string(const std::string& name);
std::string to_string(BasisFamily family);

struct BasisSpec {
  BasisFamily family = BasisFamily::Fourier;
  int c = 1;  // truncation count, >= 1
};

/// Evaluated basis: values(h-1, k-1) = b_h(t_k), h = 1..c.
struct BasisMatrix {
  BasisSpec spec;
  TimeGrid grid;
  Matrix values;  // c x T

  Index c() const { return values.rows(); }
  Index T() const { return values.cols(); }
  /// sup-norm diagnostic xi = max_{h,t_k} |b_h(t_k)|.
  double xi() const { return values.cwiseAbs().maxCoeff(); }
};

/// Fourier family: 1 for j = 1, sqrt(2) sin(pi j t) for even j,
/// sqrt(2) cos(pi (j-1) t) for odd j > 1.
double eval_fourier(int j, double t);

/// Chebyshev second-kind family via the recurrence
/// b_1(t) = 2 (1 - [2(t - 1/2)]^2)^{1/4} / sqrt(pi), b_2(t) = 2 t b_1(t),
/// b_j(t) = 2 t b_{j-1}(t) - b_{j-2}(t), evaluated iteratively.
double eval_chebyshev2(int j, double t);

double eval_basis(BasisFamily family, int j, double t);

/// b(t) = (b_1(t), ..., b_c(t)).
Vector basis_vector(const BasisSpec& spec, double t);

BasisMatrix basis_matrix(const BasisSpec& spec, const TimeGrid& grid);

}  // namespace lrfr
