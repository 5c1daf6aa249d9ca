#pragma once

#include <cmath>
#include <random>

#include "geninv/geninv.hpp"

namespace testing_support {

using geninv::Matrix;
using geninv::Scalar;

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double normal() { return normal_(gen_); }
  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(gen_);
  }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen_); }

  Matrix gaussian(Eigen::Index rows, Eigen::Index cols, bool complex) {
    Matrix m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
      for (Eigen::Index i = 0; i < rows; ++i)
        m(i, j) = Scalar(normal(), complex ? normal() : 0.0);
    return m;
  }

  /// Product of two gaussian factors: rank min(rank, rows, cols) almost surely.
  Matrix of_rank(Eigen::Index rows, Eigen::Index cols, Eigen::Index rank, bool complex) {
    if (rank == 0) return Matrix::Zero(rows, cols);
    return gaussian(rows, rank, complex) * gaussian(rank, cols, complex);
  }

  std::mt19937_64& engine() { return gen_; }

 private:
  std::mt19937_64 gen_;
  std::normal_distribution<double> normal_;
};

inline double dist(const Matrix& a, const Matrix& b) { return (a - b).norm(); }

inline Matrix real(std::initializer_list<std::initializer_list<double>> rows) {
  const auto r = static_cast<Eigen::Index>(rows.size());
  const auto c = static_cast<Eigen::Index>(rows.begin()->size());
  Matrix m(r, c);
  Eigen::Index i = 0;
  for (const auto& row : rows) {
    Eigen::Index j = 0;
    for (double v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

inline Matrix diag(std::initializer_list<double> d) {
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(d.size()),
                          static_cast<Eigen::Index>(d.size()));
  Eigen::Index i = 0;
  for (double v : d) {
    m(i, i) = v;
    ++i;
  }
  return m;
}

inline Matrix unit(Eigen::Index n, Eigen::Index k) {
  Matrix e = Matrix::Zero(n, 1);
  e(k, 0) = 1.0;
  return e;
}

/// Reference outer inverse with range R(t) and null space R(s): with s_perp a
/// basis of the orthogonal complement of R(s), X = t (s_perp^* a t)^{-1} s_perp^*.
inline Matrix outer_reference(const Matrix& a, const Matrix& t, const Matrix& s) {
  const Eigen::Index m = a.rows();
  Matrix s_perp;
  if (s.cols() == 0) {
    s_perp = Matrix::Identity(m, m);
  } else {
    Eigen::JacobiSVD<Matrix> svd(s, Eigen::ComputeFullU);
    const Eigen::Index r = (svd.singularValues().array() > 1e-12).count();
    s_perp = svd.matrixU().rightCols(m - r);
  }
  const Matrix core = s_perp.adjoint() * a * t;
  return t * core.fullPivLu().inverse() * s_perp.adjoint();
}

}  // namespace testing_support
