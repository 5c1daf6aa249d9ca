#pragma once

#include <optional>

#include "geninv/geninv.hpp"

namespace geninv {

/// Perturbation of A with the prescribed range and null space held fixed.
struct PerturbationReport {
  double radius = 0.0;
  bool outside_ball = false;
  Matrix formula_inverse;      // (I + X E)^{-1} X
  Matrix formula_inverse_alt;  // X (I + E X)^{-1}
  double formula_mutual_discrepancy = 0.0;
  bool direct_exists = false;
  Matrix direct_inverse;       // outer inverse of A + E recomputed from scratch
  double discrepancy = 0.0;    // ||formula - direct||, NaN when direct is missing
  std::optional<double> bound_value;
  double actual_error = 0.0;   // ||formula - X||
  double scale = 1.0;
};

/// 1 / ||X||. Throws an existence error for the zero inverse.
double openness_radius(const InverseCertificate& cert);

/// Closed-form inverse of A + E with R(X), N(X) unchanged.
///
/// With `allow_outside` unset, ||E|| >= radius throws "outside openness
/// ball"; with it set the formula is evaluated anyway (if I + XE stays
/// invertible) and `outside_ball` is raised.
PerturbationReport perturbed_bc_inverse(const InverseCertificate& cert,
                                        const Matrix& e,
                                        const ToleranceConfig& tol = {},
                                        bool allow_outside = false);

/// Error bound on ||X_n - X|| for a perturbed problem:
///
///   ((1+k)(v+u) + (1+u) z) / (1 - (1+k) v - k u - (1+u) z) * inv_norm
///
/// with k = ||A|| ||X||, u and v the null-space and range gaps and
/// z = ||X|| ||A - A_n||. Returns nullopt unless u < 1/(3+k),
/// v < 1/(1+k)^2, z < 2k/((1+k)(4+k)) and the denominator is positive.
std::optional<double> perturbation_bound(double kappa, double u, double v,
                                         double z, double inv_norm);

}  // namespace geninv
