#pragma once

#include <cstdint>

#include "geninv/kernel.hpp"

namespace geninv {

/// Subspace of C^n held as an orthonormal column basis. The trivial
/// subspace has a basis with zero columns.
struct Subspace {
  Eigen::Index ambient_dim = 0;
  Matrix basis;
  ToleranceConfig tol_used;

  Eigen::Index dim() const { return basis.cols(); }

  /// Orthogonal projector onto the subspace.
  Matrix orthogonal_projector() const;

  static Subspace trivial(Eigen::Index ambient, const ToleranceConfig& tol = {});
  static Subspace full(Eigen::Index ambient, const ToleranceConfig& tol = {});
};

/// Idempotent with recorded range and null space.
struct ObliqueProjector {
  Matrix matrix;
  Subspace range;
  Subspace nullspace;
};

Subspace column_space(const Matrix& a, const ToleranceConfig& tol = {});
Subspace null_space(const Matrix& a, const ToleranceConfig& tol = {});

/// Projector onto T along S. Throws existence error "not complementary"
/// carrying the smallest singular value of [T | S] as margin.
ObliqueProjector oblique_projector(const Subspace& t, const Subspace& s,
                                   const ToleranceConfig& tol = {});

/// Wraps an idempotent matrix, recovering its range and null space.
/// Throws an input error if ||P^2 - P|| exceeds residual_tol * max(1, ||P||).
ObliqueProjector projector_from_matrix(const Matrix& p,
                                       const ToleranceConfig& tol = {});

struct GapResult {
  double delta_mn = 0.0;
  double delta_nm = 0.0;
  double gap = 0.0;
};

/// One-sided deviations and gap in the Euclidean norm. delta(0, N) = 0 and
/// delta(M, 0) = 1 for M != 0.
GapResult gap(const Subspace& m, const Subspace& n);

/// Brute-force lower bound on delta(M, N): the largest distance to N over
/// `trials` random unit vectors of M.
double gap_sampling_oracle(const Subspace& m, const Subspace& n, int trials,
                           std::uint64_t seed);

struct DirectSum {
  bool holds = false;
  double margin = 0.0;
};

DirectSum direct_sum_check(const Subspace& t, const Subspace& s,
                           const ToleranceConfig& tol = {});

}  // namespace geninv
