#pragma once

#include <map>
#include <string>

#include "geninv/subspace.hpp"

namespace geninv {

enum class InverseKind { moore_penrose, outer_prescribed, bc, bott_duffin, along };

const char* to_string(InverseKind kind);

/// An inverse bundled with the residuals of its defining equations.
///
/// `range` and `nullspace` are the prescribed subspaces the inverse was built
/// against (for Moore-Penrose: R(A*) and N(A*)); `operand` is the matrix that
/// was inverted. Residuals are raw spectral norms; acceptance compares them
/// against residual_tol * scale with scale = max(1, ||A|| ||X||).
struct InverseCertificate {
  Matrix inverse;
  InverseKind kind = InverseKind::outer_prescribed;
  std::map<std::string, double> residuals;
  double restricted_condition = 1.0;
  double range_gap = 0.0;
  double nullspace_gap = 0.0;
  double direct_sum_margin = 0.0;
  double scale = 1.0;

  Matrix operand;
  Subspace range;
  Subspace nullspace;

  double max_residual() const;
};

/// A^dagger from the SVD. Never fails; singular values at or below
/// rank_rel_tol * sigma_0 are treated as zero.
InverseCertificate moore_penrose(const Matrix& a, const ToleranceConfig& tol = {});

/// Convenience: the bare Moore-Penrose matrix.
Matrix pinv(const Matrix& a, const ToleranceConfig& tol = {});

/// The outer inverse X of A (m x n) with R(X) = T (in C^n) and N(X) = S
/// (in C^m). X vanishes on S and inverts the restriction A|_T on A(T).
///
/// Existence failures (ErrorKind::existence) carry one of two clauses:
///   "A|_T injective"    A annihilates a direction of T;
///   "R(A·T) ⊕ S ≠ Y"   A(T) and S are not complementary in C^m.
InverseCertificate outer_prescribed(const Matrix& a, const Subspace& t,
                                    const Subspace& s,
                                    const ToleranceConfig& tol = {});

/// The (B,C)-inverse: the outer inverse with range R(B) and null space N(C).
InverseCertificate bc_inverse(const Matrix& a, const Matrix& b, const Matrix& c,
                              const ToleranceConfig& tol = {});

/// Bott-Duffin (P,Q)-inverse for idempotents P and Q.
InverseCertificate bott_duffin(const Matrix& a, const ObliqueProjector& p,
                               const ObliqueProjector& q,
                               const ToleranceConfig& tol = {});

/// Inverse of A along D, i.e. the (D,D)-inverse.
InverseCertificate inverse_along(const Matrix& a, const Matrix& d,
                                 const ToleranceConfig& tol = {});

/// Reflexive generalized inverse of F with range N and null space M. Requires
/// N(F) + N = domain and R(F) + M = codomain as direct sums.
Matrix sf_inverse(const Matrix& f, const Subspace& n, const Subspace& m,
                  const ToleranceConfig& tol = {});

/// Matrix of x -> a x on k x k matrices under column-stacking vec.
Matrix left_regular(const Matrix& a, Eigen::Index k);

/// Matrix of x -> x a on k x k matrices under column-stacking vec.
Matrix right_regular(const Matrix& a, Eigen::Index k);

/// Kronecker product, used to cross-check the regular representations.
Matrix kronecker(const Matrix& lhs, const Matrix& rhs);

Matrix vec(const Matrix& x);
Matrix unvec(const Matrix& v, Eigen::Index rows, Eigen::Index cols);

}  // namespace geninv
