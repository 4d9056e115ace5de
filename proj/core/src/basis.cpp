#include "lrfr/basis.hpp"

#include <cmath>
#include <numbers>

namespace lrfr {

std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t component) {
  // splitmix64 finalizer
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (component + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

TimeGrid::TimeGrid(Vector points) : points_(std::move(points)) {
  if (points_.size() == 0) throw validation_error("TimeGrid: empty grid");
  for (Index k = 0; k < points_.size(); ++k) {
    const double t = points_[k];
    if (!(t >= 0.0 && t <= 1.0))
      throw validation_error("TimeGrid: points must lie in [0,1]");
    if (k > 0 && !(points_[k - 1] < t))
      throw validation_error("TimeGrid: points must be strictly increasing");
  }
}

TimeGrid TimeGrid::uniform(Index T) {
  if (T < 1) throw validation_error("TimeGrid::uniform: T must be >= 1");
  Vector pts(T);
  for (Index k = 0; k < T; ++k) pts[k] = static_cast<double>(k) / static_cast<double>(T);
  return TimeGrid(std::move(pts));
}

TimeGrid TimeGrid::uniform_closed(Index n) {
  if (n < 2) throw validation_error("TimeGrid::uniform_closed: need n >= 2");
  Vector pts(n);
  for (Index k = 0; k < n; ++k)
    pts[k] = static_cast<double>(k) / static_cast<double>(n - 1);
  return TimeGrid(std::move(pts));
}

bool TimeGrid::operator==(const TimeGrid& other) const {
  return points_.size() == other.points_.size() && points_ == other.points_;
}

BasisFamily basis_family_from_string(const std::string& name) {
  if (name == "fourier" || name == "Fourier") return BasisFamily::Fourier;
  if (name == "chebyshev2" || name == "Chebyshev2") return BasisFamily::Chebyshev2;
  throw validation_error("unknown basis family: " + name);
}

std::string to_string(BasisFamily family) {
  return family == BasisFamily::Fourier ? "fourier" : "chebyshev2";
}

double eval_fourier(int j, double t) {
  if (j < 1) throw validation_error("eval_fourier: basis index must be >= 1");
  if (j == 1) return 1.0;
  constexpr double pi = std::numbers::pi;
  const double root2 = std::numbers::sqrt2;
  if (j % 2 == 0) return root2 * std::sin(pi * j * t);
  return root2 * std::cos(pi * (j - 1) * t);
}

double eval_chebyshev2(int j, double t) {
  if (j < 1) throw validation_error("eval_chebyshev2: basis index must be >= 1");
  const double r = 2.0 * (t - 0.5);
  // radicand is >= 0 for t in [0,1]; max() keeps the endpoint limit exact
  const double b1 =
      2.0 * std::pow(std::max(0.0, 1.0 - r * r), 0.25) / std::sqrt(std::numbers::pi);
  if (j == 1) return b1;
  double prev = b1;            // b_1
  double cur = 2.0 * t * b1;   // b_2
  for (int h = 3; h <= j; ++h) {
    const double next = 2.0 * t * cur - prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

double eval_basis(BasisFamily family, int j, double t) {
  return family == BasisFamily::Fourier ? eval_fourier(j, t) : eval_chebyshev2(j, t);
}

Vector basis_vector(const BasisSpec& spec, double t) {
  if (spec.c < 1) throw validation_error("BasisSpec: c must be >= 1");
  Vector b(spec.c);
  for (int h = 1; h <= spec.c; ++h) b[h - 1] = eval_basis(spec.family, h, t);
  return b;
}

BasisMatrix basis_matrix(const BasisSpec& spec, const TimeGrid& grid) {
  if (spec.c < 1) throw validation_error("BasisSpec: c must be >= 1");
  Matrix values(spec.c, grid.size());
  for (int h = 1; h <= spec.c; ++h)
    for (Index k = 0; k < grid.size(); ++k)
      values(h - 1, k) = eval_basis(spec.family, h, grid[k]);
  return BasisMatrix{spec, grid, std::move(values)};
}

}  // namespace lrfr
