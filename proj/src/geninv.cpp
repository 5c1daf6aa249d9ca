#include "geninv/geninv.hpp"

#include <algorithm>

namespace geninv {

namespace {

const char* const kInjectiveClause = "A|_T injective";
const char* const kComplementClause = "R(A·T) ⊕ S ≠ Y";

void require_square(const Matrix& m, Eigen::Index n, const char* what) {
  if (m.rows() != n || m.cols() != n)
    throw input_error(std::string(what) + " must be square of the same size as A");
}

// Rejects a certificate whose residuals exceed residual_tol * scale.
void accept_or_throw(const InverseCertificate& cert, const ToleranceConfig& tol) {
  for (const auto& [name, value] : cert.residuals) {
    if (!(value <= tol.residual_tol * cert.scale)) {
      throw Error(ErrorKind::existence,
                  "certificate rejected: residual " + name + " too large",
                  name, value);
    }
  }
}

void record_subspace_gaps(InverseCertificate& cert, const ToleranceConfig& tol) {
  cert.range_gap = gap(column_space(cert.inverse, tol), cert.range).gap;
  cert.nullspace_gap = gap(null_space(cert.inverse, tol), cert.nullspace).gap;
}

Error relabel(const Error& e, const std::string& prefix) {
  return Error(e.kind(), prefix + ": " + e.what(), e.clause(), e.margin());
}

}  // namespace

const char* to_string(InverseKind kind) {
  switch (kind) {
    case InverseKind::moore_penrose: return "moore_penrose";
    case InverseKind::outer_prescribed: return "outer_prescribed";
    case InverseKind::bc: return "bc";
    case InverseKind::bott_duffin: return "bott_duffin";
    case InverseKind::along: return "along";
  }
  return "unknown";
}

double InverseCertificate::max_residual() const {
  double worst = 0.0;
  for (const auto& [name, value] : residuals) worst = std::max(worst, value);
  return worst;
}

InverseCertificate moore_penrose(const Matrix& a, const ToleranceConfig& tol) {
  const SvdResult dec = svd(a, /*full=*/true);
  const int r = numerical_rank(dec.sigma, tol);

  InverseCertificate cert;
  cert.kind = InverseKind::moore_penrose;
  cert.operand = a;
  cert.inverse = Matrix::Zero(a.cols(), a.rows());
  if (r > 0) {
    const RealVector inv = dec.sigma.head(r).cwiseInverse();
    cert.inverse = dec.v.leftCols(r) * inv.asDiagonal() * dec.u.leftCols(r).adjoint();
    cert.restricted_condition = dec.sigma(0) / dec.sigma(r - 1);
  }
  cert.range = {a.cols(), dec.v.leftCols(r), tol};
  cert.nullspace = {a.rows(), dec.u.rightCols(a.rows() - r), tol};
  cert.direct_sum_margin = 1.0;

  const Matrix& x = cert.inverse;
  const Matrix ax = a * x;
  const Matrix xa = x * a;
  cert.residuals["AXA-A"] = spectral_norm(ax * a - a);
  cert.residuals["XAX-X"] = spectral_norm(xa * x - x);
  cert.residuals["(AX)*-AX"] = spectral_norm(ax.adjoint() - ax);
  cert.residuals["(XA)*-XA"] = spectral_norm(xa.adjoint() - xa);
  cert.scale = std::max(1.0, (r > 0 ? dec.sigma(0) : 0.0) * spectral_norm(x));
  record_subspace_gaps(cert, tol);
  return cert;
}

Matrix pinv(const Matrix& a, const ToleranceConfig& tol) {
  return moore_penrose(a, tol).inverse;
}

InverseCertificate outer_prescribed(const Matrix& a, const Subspace& t,
                                    const Subspace& s, const ToleranceConfig& tol) {
  require_finite(a, "A");
  const Eigen::Index m = a.rows();
  const Eigen::Index n = a.cols();
  if (t.ambient_dim != n)
    throw input_error("outer_prescribed: T must live in the domain of A");
  if (s.ambient_dim != m)
    throw input_error("outer_prescribed: S must live in the codomain of A");

  InverseCertificate cert;
  cert.kind = InverseKind::outer_prescribed;
  cert.operand = a;
  cert.range = t;
  cert.nullspace = s;

  if (t.dim() == 0) {
    // A(T) = 0, so S has to be all of the codomain.
    if (s.dim() != m) {
      throw Error(ErrorKind::existence, "complement fails", kComplementClause, 0.0);
    }
    cert.inverse = Matrix::Zero(n, m);
    cert.direct_sum_margin = 1.0;
  } else {
    const double a_norm = spectral_norm(a);
    const SvdResult image = svd(a * t.basis);
    const double smallest = image.sigma(t.dim() - 1);
    if (a_norm == 0.0 || !(smallest > tol.rank_rel_tol * a_norm)) {
      throw Error(ErrorKind::existence, "restriction not injective",
                  kInjectiveClause, a_norm > 0.0 ? smallest / a_norm : 0.0);
    }
    cert.restricted_condition = image.sigma(0) / smallest;

    const Subspace image_space{m, image.u, tol};
    const DirectSum ds = direct_sum_check(image_space, s, tol);
    cert.direct_sum_margin = ds.margin;
    if (!ds.holds) {
      throw Error(ErrorKind::existence, "complement fails", kComplementClause,
                  ds.margin);
    }
    const Matrix along_s = oblique_projector(image_space, s, tol).matrix;
    cert.inverse = t.basis * solve_on_subspace(a, t.basis, along_s, tol);
  }

  const Matrix& x = cert.inverse;
  cert.scale = std::max(1.0, spectral_norm(a) * spectral_norm(x));
  cert.residuals["XAX-X"] = spectral_norm(x * a * x - x);
  cert.residuals["X|S"] = s.dim() > 0 ? spectral_norm(x * s.basis) : 0.0;
  cert.residuals["XA|T-I"] =
      t.dim() > 0 ? spectral_norm(x * (a * t.basis) - t.basis) : 0.0;
  accept_or_throw(cert, tol);
  record_subspace_gaps(cert, tol);
  return cert;
}

InverseCertificate bc_inverse(const Matrix& a, const Matrix& b, const Matrix& c,
                              const ToleranceConfig& tol) {
  const Eigen::Index n = a.rows();
  require_square(a, n, "A");
  require_square(b, n, "B");
  require_square(c, n, "C");
  require_finite(b, "B");
  require_finite(c, "C");

  InverseCertificate cert;
  try {
    cert = outer_prescribed(a, column_space(b, tol), null_space(c, tol), tol);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::existence) throw;
    throw relabel(e, "(B,C)-inverse does not exist");
  }
  cert.kind = InverseKind::bc;
  const Matrix& x = cert.inverse;
  cert.residuals["XAB-B"] = spectral_norm(x * a * b - b);
  cert.residuals["CAX-C"] = spectral_norm(c * a * x - c);
  return cert;
}

InverseCertificate bott_duffin(const Matrix& a, const ObliqueProjector& p,
                               const ObliqueProjector& q,
                               const ToleranceConfig& tol) {
  InverseCertificate cert = bc_inverse(a, p.matrix, q.matrix, tol);
  cert.kind = InverseKind::bott_duffin;
  const Matrix& y = cert.inverse;
  cert.residuals["Py-y"] = spectral_norm(p.matrix * y - y);
  cert.residuals["yQ-y"] = spectral_norm(y * q.matrix - y);
  cert.residuals["yAP-P"] = spectral_norm(y * a * p.matrix - p.matrix);
  cert.residuals["QAy-Q"] = spectral_norm(q.matrix * a * y - q.matrix);
  return cert;
}

InverseCertificate inverse_along(const Matrix& a, const Matrix& d,
                                 const ToleranceConfig& tol) {
  InverseCertificate cert;
  try {
    cert = bc_inverse(a, d, d, tol);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::existence) throw;
    throw relabel(e, "not invertible along D");
  }
  cert.kind = InverseKind::along;
  const Matrix& x = cert.inverse;
  cert.residuals["XAD-D"] = spectral_norm(x * a * d - d);
  cert.residuals["DAX-D"] = spectral_norm(d * a * x - d);
  return cert;
}

Matrix sf_inverse(const Matrix& f, const Subspace& n, const Subspace& m,
                  const ToleranceConfig& tol) {
  const DirectSum domain = direct_sum_check(null_space(f, tol), n, tol);
  if (!domain.holds) {
    throw Error(ErrorKind::existence, "complement fails: N(F) + N is not the domain",
                "N(F) ⊕ N = X", domain.margin);
  }
  const DirectSum codomain = direct_sum_check(column_space(f, tol), m, tol);
  if (!codomain.holds) {
    throw Error(ErrorKind::existence,
                "complement fails: R(F) + M is not the codomain", "R(F) ⊕ M = Y",
                codomain.margin);
  }
  return outer_prescribed(f, n, m, tol).inverse;
}

Matrix vec(const Matrix& x) {
  return Eigen::Map<const Matrix>(x.data(), x.size(), 1);
}

Matrix unvec(const Matrix& v, Eigen::Index rows, Eigen::Index cols) {
  if (v.size() != rows * cols) throw input_error("unvec: size mismatch");
  return Eigen::Map<const Matrix>(v.data(), rows, cols);
}

Matrix left_regular(const Matrix& a, Eigen::Index k) {
  require_square(a, k, "a");
  Matrix out(k * k, k * k);
  for (Eigen::Index j = 0; j < k; ++j) {
    for (Eigen::Index i = 0; i < k; ++i) {
      Matrix unit = Matrix::Zero(k, k);
      unit(i, j) = 1.0;
      out.col(i + j * k) = vec(a * unit);
    }
  }
  return out;
}

Matrix right_regular(const Matrix& a, Eigen::Index k) {
  require_square(a, k, "a");
  Matrix out(k * k, k * k);
  for (Eigen::Index j = 0; j < k; ++j) {
    for (Eigen::Index i = 0; i < k; ++i) {
      Matrix unit = Matrix::Zero(k, k);
      unit(i, j) = 1.0;
      out.col(i + j * k) = vec(unit * a);
    }
  }
  return out;
}

Matrix kronecker(const Matrix& lhs, const Matrix& rhs) {
  Matrix out(lhs.rows() * rhs.rows(), lhs.cols() * rhs.cols());
  for (Eigen::Index i = 0; i < lhs.rows(); ++i)
    for (Eigen::Index j = 0; j < lhs.cols(); ++j)
      out.block(i * rhs.rows(), j * rhs.cols(), rhs.rows(), rhs.cols()) =
          lhs(i, j) * rhs;
  return out;
}

}  // namespace geninv
