#include "geninv/calculus.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace geninv {

namespace {

void require_shape(const Matrix& m, Eigen::Index rows, Eigen::Index cols,
                   const char* what) {
  if (m.rows() != rows || m.cols() != cols) {
    std::ostringstream os;
    os << "dimension mismatch: " << what << " is " << m.rows() << "x" << m.cols()
       << ", expected " << rows << "x" << cols;
    throw input_error(os.str());
  }
}

Error left_invertible_set(double t, const std::string& why) {
  std::ostringstream os;
  os.precision(17);
  os << "curve leaves invertible set at t = " << t << " (" << why << ")";
  return Error(ErrorKind::existence, os.str(), "inverse exists along curve", t);
}

const MatrixCurve& need(const std::optional<MatrixCurve>& curve, const char* name) {
  if (!curve) throw input_error(std::string("curve family is missing ") + name);
  return *curve;
}

}  // namespace

Matrix bc_derivative(const Matrix& ainv0, const Matrix& a0, const Matrix& aprime,
                     const Matrix& hc_prime, const Matrix& bg_prime) {
  const Eigen::Index n = a0.rows();
  require_shape(a0, n, n, "a(t0)");
  require_shape(ainv0, n, n, "inverse");
  require_shape(aprime, n, n, "a'");
  require_shape(hc_prime, n, n, "(hc)'");
  require_shape(bg_prime, n, n, "(bg)'");
  const Matrix& x = ainv0;
  return x * hc_prime * x - (identity(n) - x * a0) * bg_prime * x - x * aprime * x;
}

Matrix oip_derivative(const Matrix& ainv0, const Matrix& a0, const Matrix& aprime,
                      const Matrix& pprime, const Matrix& qprime) {
  const Eigen::Index m = a0.rows();
  const Eigen::Index n = a0.cols();
  require_shape(ainv0, n, m, "inverse");
  require_shape(aprime, m, n, "A'");
  require_shape(pprime, n, n, "P'");
  require_shape(qprime, m, m, "Q'");
  const Matrix& x = ainv0;
  return -x * qprime * (identity(m) - a0 * x) + (identity(n) - x * a0) * pprime * x -
         x * aprime * x;
}

Matrix mp_derivative(const Matrix& a0, const Matrix& adag0, const Matrix& aprime,
                     const Matrix& aadag_prime, const Matrix& adaga_prime) {
  const Eigen::Index m = a0.rows();
  const Eigen::Index n = a0.cols();
  require_shape(adag0, n, m, "a+");
  require_shape(aprime, m, n, "a'");
  require_shape(aadag_prime, m, m, "(aa+)'");
  require_shape(adaga_prime, n, n, "(a+a)'");
  const Matrix& x = adag0;
  return x * aadag_prime * x - (identity(n) - x * a0) * adaga_prime * x -
         x * aprime * x;
}

Matrix bc_derivative_projector_form(const Matrix& ainv0, const Matrix& a0,
                                    const Matrix& aprime, const Matrix& hc_prime,
                                    const Matrix& bg_prime) {
  const Eigen::Index n = a0.rows();
  require_shape(a0, n, n, "a(t0)");
  require_shape(ainv0, n, n, "inverse");
  require_shape(aprime, n, n, "a'");
  require_shape(hc_prime, n, n, "(hc)'");
  require_shape(bg_prime, n, n, "(bg)'");
  const Matrix& x = ainv0;
  return x * hc_prime * (identity(n) - a0 * x) + (identity(n) - x * a0) * bg_prime * x -
         x * aprime * x;
}

Matrix mp_derivative_projector_form(const Matrix& a0, const Matrix& adag0,
                                    const Matrix& aprime, const Matrix& aadag_prime,
                                    const Matrix& adaga_prime) {
  const Eigen::Index m = a0.rows();
  const Eigen::Index n = a0.cols();
  require_shape(adag0, n, m, "a+");
  require_shape(aprime, m, n, "a'");
  require_shape(aadag_prime, m, m, "(aa+)'");
  require_shape(adaga_prime, n, n, "(a+a)'");
  const Matrix& x = adag0;
  return x * aadag_prime * (identity(m) - a0 * x) + (identity(n) - x * a0) * adaga_prime * x -
         x * aprime * x;
}

const char* to_string(DerivativeKind kind) {
  switch (kind) {
    case DerivativeKind::bc: return "bc";
    case DerivativeKind::oip: return "oip";
    case DerivativeKind::mp: return "mp";
  }
  return "unknown";
}

CurveFamily CurveFamily::bc(MatrixCurve a, MatrixCurve b, MatrixCurve c) {
  CurveFamily f;
  f.kind = DerivativeKind::bc;
  f.a = std::move(a);
  f.b = std::move(b);
  f.c = std::move(c);
  return f;
}

CurveFamily CurveFamily::oip(MatrixCurve a, MatrixCurve p, MatrixCurve q) {
  CurveFamily f;
  f.kind = DerivativeKind::oip;
  f.a = std::move(a);
  f.p = std::move(p);
  f.q = std::move(q);
  return f;
}

CurveFamily CurveFamily::mp(MatrixCurve a) {
  CurveFamily f;
  f.kind = DerivativeKind::mp;
  f.a = std::move(a);
  return f;
}

Matrix CurveFamily::inverse_at(double t, const ToleranceConfig& tol,
                               std::optional<int> rank_at) const {
  if (!a.contains(t)) throw left_invertible_set(t, "outside curve domain");
  try {
    switch (kind) {
      case DerivativeKind::bc:
        return bc_inverse(a(t), need(b, "b")(t), need(c, "c")(t), tol).inverse;
      case DerivativeKind::oip: {
        const Subspace range = column_space(need(p, "p")(t), tol);
        const Subspace null = column_space(need(q, "q")(t), tol);
        return outer_prescribed(a(t), range, null, tol).inverse;
      }
      case DerivativeKind::mp: {
        const Matrix at = a(t);
        if (rank_at && numerical_rank(svd(at).sigma, tol) != *rank_at)
          throw left_invertible_set(t, "rank changes");
        return pinv(at, tol);
      }
    }
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::existence) throw;
    if (e.clause() == "inverse exists along curve") throw;
    throw left_invertible_set(t, e.what());
  }
  throw input_error("unknown derivative kind");
}

Matrix central_difference(const std::function<Matrix(double)>& f, double t0,
                          double h) {
  return (f(t0 + h) - f(t0 - h)) / (2.0 * h);
}

Matrix central_difference4(const std::function<Matrix(double)>& f, double t0,
                           double h) {
  return (-f(t0 + 2 * h) + 8.0 * f(t0 + h) - 8.0 * f(t0 - h) + f(t0 - 2 * h)) /
         (12.0 * h);
}

double fitted_order(const std::vector<std::pair<double, double>>& fd_errors) {
  std::size_t first = 0;
  std::size_t last = fd_errors.size();
  if (fd_errors.size() >= 4) {
    first = 1;
    last = fd_errors.size() - 1;
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int count = 0;
  for (std::size_t i = first; i < last; ++i) {
    const auto [step, err] = fd_errors[i];
    if (!(err > 0.0)) continue;
    const double x = std::log(step);
    const double y = std::log(err);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++count;
  }
  if (count < 2) return std::numeric_limits<double>::quiet_NaN();
  return (count * sxy - sx * sy) / (count * sxx - sx * sx);
}

DerivativeReport finite_difference_check(const CurveFamily& family, double t0,
                                         const ToleranceConfig& tol) {
  tol.validate();
  const double max_step = tol.fd_step_sweep.front();
  if (!family.a.contains(t0 - max_step) || !family.a.contains(t0 + max_step))
    throw input_error("finite_difference_check: step window leaves the curve domain");

  DerivativeReport rep;
  rep.kind = family.kind;
  rep.t0 = t0;

  const Matrix a0 = family.a(t0);
  std::optional<int> rank0;
  if (family.kind == DerivativeKind::mp) rank0 = numerical_rank(svd(a0).sigma, tol);
  auto inverse = [&](double t) { return family.inverse_at(t, tol, rank0); };
  rep.inverse_at_t0 = inverse(t0);
  const Matrix& x0 = rep.inverse_at_t0;

  const double hd = std::min(1e-3, max_step / 2.0);
  auto derivative = [&](const std::function<Matrix(double)>& f) {
    return central_difference4(f, t0, hd);
  };
  const Matrix aprime = derivative(family.a.evaluator);

  switch (family.kind) {
    case DerivativeKind::bc: {
      const MatrixCurve& b = need(family.b, "b");
      const MatrixCurve& c = need(family.c, "c");
      auto bg = [&](double t) {
        const Matrix bt = b(t);
        return Matrix(bt * (family.g ? (*family.g)(t) : pinv(bt, tol)));
      };
      auto hc = [&](double t) {
        const Matrix ct = c(t);
        return Matrix((family.h ? (*family.h)(t) : pinv(ct, tol)) * ct);
      };
      const Matrix hc_prime = derivative(hc);
      const Matrix bg_prime = derivative(bg);
      rep.formula_derivative = bc_derivative(x0, a0, aprime, hc_prime, bg_prime);
      rep.projector_form_derivative =
          bc_derivative_projector_form(x0, a0, aprime, hc_prime, bg_prime);
      break;
    }
    case DerivativeKind::oip:
      rep.formula_derivative =
          oip_derivative(x0, a0, aprime, derivative(need(family.p, "p").evaluator),
                         derivative(need(family.q, "q").evaluator));
      rep.projector_form_derivative = rep.formula_derivative;
      break;
    case DerivativeKind::mp: {
      auto aadag = [&](double t) {
        const Matrix at = family.a(t);
        return Matrix(at * pinv(at, tol));
      };
      auto adaga = [&](double t) {
        const Matrix at = family.a(t);
        return Matrix(pinv(at, tol) * at);
      };
      const Matrix aadag_prime = derivative(aadag);
      const Matrix adaga_prime = derivative(adaga);
      rep.formula_derivative = mp_derivative(a0, x0, aprime, aadag_prime, adaga_prime);
      rep.projector_form_derivative =
          mp_derivative_projector_form(a0, x0, aprime, aadag_prime, adaga_prime);
      break;
    }
  }

  rep.scale = std::max({1.0, spectral_norm(x0), spectral_norm(rep.formula_derivative)});
  rep.exact = true;
  rep.projector_form_exact = true;
  for (double h : tol.fd_step_sweep) {
    const Matrix fd = central_difference(inverse, t0, h);
    const double err = spectral_norm(rep.formula_derivative - fd);
    const double err_pf = spectral_norm(rep.projector_form_derivative - fd);
    rep.fd_errors.emplace_back(h, err);
    rep.projector_form_fd_errors.emplace_back(h, err_pf);
    if (err > tol.residual_tol * rep.scale) rep.exact = false;
    if (err_pf > tol.residual_tol * rep.scale) rep.projector_form_exact = false;
  }
  const double nan = std::numeric_limits<double>::quiet_NaN();
  rep.observed_order = rep.exact ? nan : fitted_order(rep.fd_errors);
  rep.projector_form_order =
      rep.projector_form_exact ? nan : fitted_order(rep.projector_form_fd_errors);
  return rep;
}

double difference_identity_residual(const Matrix& a, const Matrix& b, const Matrix& ainv,
                                    const Matrix& binv, const ObliqueProjector& pt,
                                    const ObliqueProjector& pv, const ObliqueProjector& ps,
                                    const ObliqueProjector& pu) {
  const Eigen::Index m = a.rows();
  const Eigen::Index n = a.cols();
  require_shape(b, m, n, "B");
  require_shape(ainv, n, m, "A^(2)");
  require_shape(binv, n, m, "B^(2)");
  require_shape(pt.matrix, n, n, "P_T");
  require_shape(pv.matrix, n, n, "P_V");
  require_shape(ps.matrix, m, m, "P_S");
  require_shape(pu.matrix, m, m, "P_U");
  const Matrix rhs = binv * (ps.matrix - pu.matrix) * (identity(m) - a * ainv) +
                     (identity(n) - binv * b) * (pv.matrix - pt.matrix) * ainv -
                     binv * (b - a) * ainv;
  return spectral_norm((binv - ainv) - rhs);
}

}  // namespace geninv
