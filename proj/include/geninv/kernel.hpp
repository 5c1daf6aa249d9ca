#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "geninv/error.hpp"

namespace geninv {

using Scalar = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

struct ToleranceConfig {
  double rank_rel_tol = 1e-10;
  double residual_tol = 1e-9;
  std::vector<double> fd_step_sweep = {1e-2, 1e-3, 1e-4, 1e-5};

  /// Throws an input error if any field is out of range.
  void validate() const;
};

struct SvdResult {
  Matrix u;           // rows x k, orthonormal columns
  RealVector sigma;   // k values, nonincreasing
  Matrix v;           // cols x k, orthonormal columns
};

/// Throws an input error when `a` has a NaN or Inf entry.
void require_finite(const Matrix& a, const char* what = "matrix");

/// Thin SVD, k = min(rows, cols). With `full` set, U and V are square.
SvdResult svd(const Matrix& a, bool full = false);

/// Number of singular values above rank_rel_tol * sigma_0.
int numerical_rank(const RealVector& sigma, const ToleranceConfig& tol = {});

double spectral_norm(const Matrix& a);

/// Coefficients W with (A * basis) W equal to `target` projected onto
/// span(A * basis), i.e. the inverse of the restriction A|_T : T -> A(T)
/// applied to `target`. Throws existence error "restriction not injective"
/// when the smallest singular value of A * basis is at or below
/// rank_rel_tol * ||A||.
Matrix solve_on_subspace(const Matrix& a, const Matrix& range_basis,
                         const Matrix& target, const ToleranceConfig& tol = {});

inline Matrix identity(Eigen::Index n) { return Matrix::Identity(n, n); }

}  // namespace geninv
