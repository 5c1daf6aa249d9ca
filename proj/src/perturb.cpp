#include "geninv/perturb.hpp"

#include <cmath>
#include <limits>

namespace geninv {

double openness_radius(const InverseCertificate& cert) {
  const double norm = spectral_norm(cert.inverse);
  if (norm == 0.0) {
    throw Error(ErrorKind::existence, "radius undefined for zero inverse",
                "X != 0", 0.0);
  }
  return 1.0 / norm;
}

PerturbationReport perturbed_bc_inverse(const InverseCertificate& cert,
                                        const Matrix& e,
                                        const ToleranceConfig& tol,
                                        bool allow_outside) {
  const Matrix& x = cert.inverse;
  const Matrix& a = cert.operand;
  if (e.rows() != a.rows() || e.cols() != a.cols())
    throw input_error("perturbation must have the shape of A");
  require_finite(e, "E");

  PerturbationReport rep;
  rep.radius = openness_radius(cert);
  const double e_norm = spectral_norm(e);
  rep.outside_ball = !(e_norm < rep.radius);
  if (rep.outside_ball && !allow_outside) {
    throw Error(ErrorKind::existence, "outside openness ball", "||E|| < 1/||X||",
                rep.radius - e_norm);
  }

  const Matrix left = identity(x.rows()) + x * e;
  const Matrix right = identity(e.rows()) + e * x;
  const Eigen::FullPivLU<Matrix> left_lu(left);
  const Eigen::FullPivLU<Matrix> right_lu(right.adjoint());
  if (!left_lu.isInvertible() || !right_lu.isInvertible()) {
    throw Error(ErrorKind::existence, "I + XE is singular", "I + XE invertible",
                0.0);
  }
  rep.formula_inverse = left_lu.solve(x);
  // X (I + EX)^{-1} = ((I + EX)^{-*} X^*)^*
  rep.formula_inverse_alt = right_lu.solve(x.adjoint()).adjoint();
  rep.formula_mutual_discrepancy =
      spectral_norm(rep.formula_inverse - rep.formula_inverse_alt);

  const Matrix perturbed = a + e;
  rep.scale = std::max(1.0, spectral_norm(perturbed) * spectral_norm(rep.formula_inverse));
  try {
    rep.direct_inverse = outer_prescribed(perturbed, cert.range, cert.nullspace, tol).inverse;
    rep.direct_exists = true;
    rep.discrepancy = spectral_norm(rep.formula_inverse - rep.direct_inverse);
  } catch (const Error& err) {
    if (err.kind() != ErrorKind::existence) throw;
    rep.direct_exists = false;
    rep.discrepancy = std::numeric_limits<double>::quiet_NaN();
  }

  const double x_norm = spectral_norm(x);
  rep.actual_error = spectral_norm(rep.formula_inverse - x);
  rep.bound_value = perturbation_bound(spectral_norm(a) * x_norm, 0.0, 0.0,
                                       x_norm * e_norm, x_norm);
  return rep;
}

std::optional<double> perturbation_bound(double kappa, double u, double v,
                                         double z, double inv_norm) {
  if (kappa < 0.0 || u < 0.0 || v < 0.0 || z < 0.0 || inv_norm < 0.0)
    throw input_error("perturbation_bound: arguments must be nonnegative");
  const double kp1 = 1.0 + kappa;
  const bool premises = u < 1.0 / (3.0 + kappa) && v < 1.0 / (kp1 * kp1) &&
                        z < 2.0 * kappa / (kp1 * (4.0 + kappa));
  if (!premises) return std::nullopt;
  const double denom = 1.0 - kp1 * v - kappa * u - (1.0 + u) * z;
  if (!(denom > 0.0)) return std::nullopt;
  return (kp1 * (v + u) + (1.0 + u) * z) / denom * inv_norm;
}

}  // namespace geninv
