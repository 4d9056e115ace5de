#pragma once

#include <filesystem>
#include <random>
#include <string>

#include "lrfr/design.hpp"

namespace testutil {

inline lrfr::Matrix random_matrix(lrfr::Index rows, lrfr::Index cols,
                                  std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  lrfr::Matrix M(rows, cols);
  for (lrfr::Index r = 0; r < rows; ++r)
    for (lrfr::Index c = 0; c < cols; ++c) M(r, c) = scale * gauss(rng);
  return M;
}

inline lrfr::Vector random_vector(lrfr::Index n, std::mt19937_64& rng,
                                  double scale = 1.0) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  lrfr::Vector v(n);
  for (lrfr::Index i = 0; i < n; ++i) v[i] = scale * gauss(rng);
  return v;
}

/// Random dataset generated exactly from a known coefficient matrix
/// (noiseless unless sigma > 0).
struct TestProblem {
  lrfr::Dataset data;
  lrfr::CoefMatrix M_star;
  lrfr::BasisMatrix B;
};

inline TestProblem make_problem(lrfr::Index n, lrfr::Index s, lrfr::Index p,
                                lrfr::Index T, int c, lrfr::BasisFamily family,
                                std::uint64_t seed, double sigma = 0.0) {
  std::mt19937_64 rng(seed);
  const lrfr::TimeGrid grid = lrfr::TimeGrid::uniform(T);
  const lrfr::BasisMatrix B = lrfr::basis_matrix(lrfr::BasisSpec{family, c}, grid);
  lrfr::CoefMatrix M{random_matrix(p, s * c, rng), s, c};
  lrfr::Dataset data{random_matrix(n, s, rng), {}, grid};
  data.responses.reserve(static_cast<size_t>(n));
  for (lrfr::Index i = 0; i < n; ++i) {
    lrfr::Matrix Yi = M.M * lrfr::subject_design(data.covariates.row(i), B);
    if (sigma > 0.0) Yi += random_matrix(p, T, rng, sigma);
    data.responses.push_back(std::move(Yi));
  }
  return TestProblem{std::move(data), std::move(M), B};
}

/// Self-deleting temporary directory for file-format tests.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::atomic<unsigned> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("lrfr_test_" + tag + "_" + std::to_string(counter.fetch_add(1)) + "_" +
             std::to_string(::getpid()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }
  std::string str(const std::string& child = "") const {
    return child.empty() ? path_.string() : (path_ / child).string();
  }

 private:
  std::filesystem::path path_;
};

}  // namespace testutil
