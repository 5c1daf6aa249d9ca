#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "geninv/geninv.hpp"

namespace geninv {

/// A matrix-valued function of one real parameter. The evaluator must be
/// pure in t; the harness may call it from several threads.
struct MatrixCurve {
  std::function<Matrix(double)> evaluator;
  double lo = -1.0;
  double hi = 1.0;
  std::string label;

  Matrix operator()(double t) const { return evaluator(t); }
  bool contains(double t) const { return lo < t && t < hi; }
};

/// Derivative of t -> a(t)^{-(b(t), c(t))} at t0:
///   X (hc)' X - (I - X a) (bg)' X - X a' X
/// where g(t), h(t) are inner inverses of b(t), c(t).
Matrix bc_derivative(const Matrix& ainv0, const Matrix& a0, const Matrix& aprime,
                     const Matrix& hc_prime, const Matrix& bg_prime);

/// Derivative of t -> A(t)^(2)_{R(P(t)), R(Q(t))} at t0:
///   -X Q' (I - A X) + (I - X A) P' X - X A' X
Matrix oip_derivative(const Matrix& ainv0, const Matrix& a0, const Matrix& aprime,
                      const Matrix& pprime, const Matrix& qprime);

/// Derivative of t -> a(t)^dagger at t0:
///   a+ (aa+)' a+ - (I - a+ a) (a+a)' a+ - a+ a' a+
Matrix mp_derivative(const Matrix& a0, const Matrix& adag0, const Matrix& aprime,
                     const Matrix& aadag_prime, const Matrix& adaga_prime);

/// Derivative obtained by differentiating X = X (hc) and X a (bg) = bg:
///   X (hc)' (I - a X) + (I - X a) (bg)' X - X a' X
/// Same shape as oip_derivative with P = bg, Q = I - hc. Differs from
/// bc_derivative in the first two terms whenever hc or bg moves.
Matrix bc_derivative_projector_form(const Matrix& ainv0, const Matrix& a0,
                                    const Matrix& aprime, const Matrix& hc_prime,
                                    const Matrix& bg_prime);

///   a+ (aa+)' (I - a a+) + (I - a+ a) (a+a)' a+ - a+ a' a+
Matrix mp_derivative_projector_form(const Matrix& a0, const Matrix& adag0,
                                    const Matrix& aprime, const Matrix& aadag_prime,
                                    const Matrix& adaga_prime);

enum class DerivativeKind { bc, oip, mp };

const char* to_string(DerivativeKind kind);

/// Curves feeding one finite-difference check.
///
///   bc:  a, b, c; optional inner-inverse curves g (of b) and h (of c),
///        defaulting to the Moore-Penrose inverses.
///   oip: a, p, q; the inverse at t has range R(p(t)) and null space R(q(t)).
///   mp:  a only.
struct CurveFamily {
  DerivativeKind kind = DerivativeKind::mp;
  MatrixCurve a;
  std::optional<MatrixCurve> b, c, g, h;
  std::optional<MatrixCurve> p, q;

  static CurveFamily bc(MatrixCurve a, MatrixCurve b, MatrixCurve c);
  static CurveFamily oip(MatrixCurve a, MatrixCurve p, MatrixCurve q);
  static CurveFamily mp(MatrixCurve a);

  /// The inverse of the family at t. Throws "curve leaves invertible set"
  /// when it does not exist (for mp: when the rank differs from `rank_at`).
  Matrix inverse_at(double t, const ToleranceConfig& tol,
                    std::optional<int> rank_at = std::nullopt) const;
};

struct DerivativeReport {
  DerivativeKind kind = DerivativeKind::mp;
  double t0 = 0.0;
  Matrix inverse_at_t0;
  Matrix formula_derivative;
  std::vector<std::pair<double, double>> fd_errors;  // (step, error)
  bool exact = false;
  double observed_order = 0.0;  // NaN when exact or not enough data
  double scale = 1.0;
  /// The projector-form derivative and its comparison against the same
  /// finite differences (identical to the above for oip).
  Matrix projector_form_derivative;
  std::vector<std::pair<double, double>> projector_form_fd_errors;
  bool projector_form_exact = false;
  double projector_form_order = 0.0;
};

/// Central difference (f(t0 + h) - f(t0 - h)) / 2h.
Matrix central_difference(const std::function<Matrix(double)>& f, double t0,
                          double h);

/// Fourth-order five-point central difference.
Matrix central_difference4(const std::function<Matrix(double)>& f, double t0,
                           double h);

/// Least-squares slope of log(error) against log(step) over the middle of
/// the sweep (all points when fewer than four). NaN when fewer than two
/// positive errors remain.
double fitted_order(const std::vector<std::pair<double, double>>& fd_errors);

/// Compares the closed-form derivative at t0 with central differences of the
/// inverse curve at every step of tol.fd_step_sweep. Curve derivatives fed to
/// the formula are themselves five-point central differences.
DerivativeReport finite_difference_check(const CurveFamily& family, double t0,
                                         const ToleranceConfig& tol = {});

/// Residual of the exact identity
///   Y - X = Y (P_S - P_U)(I - A X) + (I - Y B)(P_V - P_T) X - Y (B - A) X
/// for X = A^(2)_{T,S}, Y = B^(2)_{V,U} and idempotents onto T, V, S, U.
double difference_identity_residual(const Matrix& a, const Matrix& b, const Matrix& ainv,
                                    const Matrix& binv, const ObliqueProjector& pt,
                                    const ObliqueProjector& pv, const ObliqueProjector& ps,
                                    const ObliqueProjector& pu);

}  // namespace geninv
