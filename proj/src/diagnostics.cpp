#include "geninv/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "geninv/perturb.hpp"

namespace geninv {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Accumulates per-index series and turns them into statements.
class ReportBuilder {
 public:
  explicit ReportBuilder(SequenceDiagnostics& out) : out_(out) {}

  void push(const std::string& name, double value) { out_.series[name].push_back(value); }

  void statement(std::string label, std::string group,
                 std::vector<std::string> quantities) {
    out_.statements.push_back({std::move(label), std::move(group),
                               std::move(quantities), false});
  }

  bool series_converges(const std::string& name) const {
    const auto& q = out_.series.at(name);
    return converges_to_zero(q, out_.indices, out_.threshold);
  }

  void finish() {
    for (Statement& s : out_.statements) {
      s.converged = !out_.indices.empty();
      for (const std::string& q : s.quantities)
        s.converged = s.converged && series_converges(q);
    }
    out_.unanimous = true;
    for (const Statement& s : out_.statements)
      if (s.converged != out_.statements.front().converged) out_.unanimous = false;
  }

 private:
  SequenceDiagnostics& out_;
};

double norm(const Matrix& m) { return spectral_norm(m); }

}  // namespace

const std::vector<double>& SequenceDiagnostics::at(const std::string& name) const {
  const auto it = series.find(name);
  if (it == series.end()) throw input_error("no series named " + name);
  return it->second;
}

bool SequenceDiagnostics::verdict(const std::string& label) const {
  for (const Statement& s : statements)
    if (s.label == label) return s.converged;
  throw input_error("no statement labelled " + label);
}

bool SequenceDiagnostics::unanimous_in(const std::string& group) const {
  std::optional<bool> first;
  for (const Statement& s : statements) {
    if (s.group != group) continue;
    if (!first) first = s.converged;
    if (s.converged != *first) return false;
  }
  return true;
}

bool converges_to_zero(std::span<const double> q, std::span<const int> indices,
                       double threshold) {
  if (q.empty() || q.size() != indices.size()) return false;
  if (q.back() <= threshold) return true;

  const std::size_t start = (2 * q.size()) / 3;
  if (q.size() - start < 3) return false;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int count = 0;
  for (std::size_t i = start; i < q.size(); ++i) {
    if (i > start && q[i] > q[i - 1] * (1.0 + 1e-9) + threshold) return false;
    if (!(q[i] > 0.0)) continue;
    const double x = std::log(static_cast<double>(indices[i]));
    const double y = std::log(q[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++count;
  }
  if (count < 3) return false;
  const double slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);
  return slope <= -0.5;
}

SequenceDiagnostics sequence_report(const BcProblem& limit,
                                    const std::vector<BcProblem>& sequence,
                                    const ToleranceConfig& tol) {
  const InverseCertificate cert = bc_inverse(limit.a, limit.b, limit.c, tol);
  const Matrix& x = cert.inverse;
  const double x_norm = norm(x);
  if (x_norm == 0.0)
    throw input_error("sequence_report: limit inverse is zero, use zero_limit_check");
  const Matrix& a = limit.a;
  const Eigen::Index n = a.rows();
  const Matrix xa = x * a;
  const Matrix ax = a * x;
  const Subspace range_b = cert.range;
  const Subspace null_c = cert.nullspace;
  const Subspace range_x = column_space(x, tol);
  const Subspace null_x = null_space(x, tol);
  const Matrix b_dag = pinv(limit.b, tol);
  const Matrix c_dag = pinv(limit.c, tol);
  const Matrix bb = limit.b * b_dag;
  const Matrix cc = c_dag * limit.c;
  const double kappa = norm(a) * x_norm;

  SequenceDiagnostics out;
  out.threshold = 10.0 * tol.residual_tol * cert.scale;
  ReportBuilder rb(out);

  for (std::size_t i = 0; i < sequence.size(); ++i) {
    const int index = static_cast<int>(i) + 1;
    const BcProblem& p = sequence[i];
    InverseCertificate cn;
    try {
      cn = bc_inverse(p.a, p.b, p.c, tol);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::existence) throw;
      out.failures.emplace_back(index, e.what());
      continue;
    }
    out.indices.push_back(index);
    const Matrix& xn = cn.inverse;
    const Matrix bn_dag = pinv(p.b, tol);
    const Matrix cn_dag = pinv(p.c, tol);
    const Matrix bbn = p.b * bn_dag;
    const Matrix ccn = cn_dag * p.c;
    const Matrix id = identity(n);

    const double a_error = norm(p.a - a);
    const double range_gap = gap(cn.range, range_b).gap;
    const double null_gap = gap(cn.nullspace, null_c).gap;
    rb.push("a_error", a_error);
    rb.push("inverse_error", norm(xn - x));
    rb.push("left_product_error", norm(xn * p.a - xa));
    rb.push("right_product_error", norm(p.a * xn - ax));
    rb.push("range_gap", range_gap);
    rb.push("nullspace_gap", null_gap);
    rb.push("inverse_range_gap", gap(column_space(xn, tol), range_x).gap);
    rb.push("inverse_null_gap", gap(null_space(xn, tol), null_x).gap);
    rb.push("mp_range_term_1", norm((id - bb) * bbn));
    rb.push("mp_range_term_2", norm((id - bbn) * bb));
    rb.push("mp_null_term_1", norm(cc * (id - ccn)));
    rb.push("mp_null_term_2", norm(ccn * (id - cc)));
    rb.push("range_projector_error", norm(bbn - bb));
    rb.push("null_projector_error", norm(ccn - cc));
    rb.push("b_error", norm(p.b - limit.b));
    rb.push("c_error", norm(p.c - limit.c));
    rb.push("b_pinv_error", norm(bn_dag - b_dag));
    rb.push("c_pinv_error", norm(cn_dag - c_dag));

    // In the Euclidean setting the null-space gap of c equals the gap of the
    // complementary projectors, so the algebraic terms must match it.
    const double algebraic_range = std::max(out.series["mp_range_term_1"].back(),
                                            out.series["mp_range_term_2"].back());
    const double algebraic_null = std::max(out.series["mp_null_term_1"].back(),
                                           out.series["mp_null_term_2"].back());
    out.identity_discrepancy =
        std::max({out.identity_discrepancy, std::abs(algebraic_range - range_gap),
                  std::abs(algebraic_null - null_gap)});

    const auto bound = perturbation_bound(kappa, null_gap, range_gap,
                                          x_norm * a_error, x_norm);
    rb.push("bound", bound ? *bound : kNaN);
  }

  rb.statement("inverse", "gap", {"inverse_error"});
  rb.statement("products", "gap", {"left_product_error", "right_product_error"});
  rb.statement("left_product_and_null_gap", "gap", {"left_product_error", "nullspace_gap"});
  rb.statement("right_product_and_range_gap", "gap", {"right_product_error", "range_gap"});
  rb.statement("range_and_null_gaps", "gap", {"range_gap", "nullspace_gap"});
  rb.statement("inverse_range_and_null_gaps", "gap",
               {"inverse_range_gap", "inverse_null_gap"});

  rb.statement("left_product_and_null_projector", "projector",
               {"left_product_error", "null_projector_error"});
  rb.statement("right_product_and_range_projector", "projector",
               {"right_product_error", "range_projector_error"});
  rb.statement("range_and_null_projectors", "projector",
               {"range_projector_error", "null_projector_error"});

  if (!out.indices.empty() && rb.series_converges("b_error") &&
      rb.series_converges("c_error")) {
    rb.statement("right_product_and_b_pinv", "pinv", {"right_product_error", "b_pinv_error"});
    rb.statement("left_product_and_c_pinv", "pinv", {"left_product_error", "c_pinv_error"});
    rb.statement("b_and_c_pinv", "pinv", {"b_pinv_error", "c_pinv_error"});
  }
  rb.finish();
  return out;
}

SequenceDiagnostics oip_sequence_report(const OipProblem& limit,
                                        const std::vector<OipProblem>& sequence,
                                        const ToleranceConfig& tol) {
  const InverseCertificate cert = outer_prescribed(limit.a, limit.t, limit.s, tol);
  const Matrix& x = cert.inverse;
  if (norm(x) == 0.0)
    throw input_error("oip_sequence_report: limit inverse is zero, use zero_limit_check");
  const Matrix xa = x * limit.a;
  const Matrix ax = limit.a * x;
  const Matrix pt = limit.t.orthogonal_projector();
  const Matrix ps = limit.s.orthogonal_projector();

  SequenceDiagnostics out;
  out.threshold = 10.0 * tol.residual_tol * cert.scale;
  ReportBuilder rb(out);

  for (std::size_t i = 0; i < sequence.size(); ++i) {
    const int index = static_cast<int>(i) + 1;
    const OipProblem& p = sequence[i];
    InverseCertificate cn;
    try {
      cn = outer_prescribed(p.a, p.t, p.s, tol);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::existence) throw;
      out.failures.emplace_back(index, e.what());
      continue;
    }
    out.indices.push_back(index);
    const Matrix& xn = cn.inverse;
    rb.push("a_error", norm(p.a - limit.a));
    rb.push("inverse_error", norm(xn - x));
    rb.push("left_product_error", norm(xn * p.a - xa));
    rb.push("right_product_error", norm(p.a * xn - ax));
    rb.push("range_gap", gap(p.t, limit.t).gap);
    rb.push("nullspace_gap", gap(p.s, limit.s).gap);
    // P_{S^perp} - P_{S_n^perp} = P_{S_n} - P_S.
    rb.push("range_projector_error", norm(p.t.orthogonal_projector() - pt));
    rb.push("null_projector_error", norm(p.s.orthogonal_projector() - ps));
  }

  rb.statement("inverse", "gap", {"inverse_error"});
  rb.statement("products", "gap", {"left_product_error", "right_product_error"});
  rb.statement("left_product_and_null_gap", "gap", {"left_product_error", "nullspace_gap"});
  rb.statement("right_product_and_range_gap", "gap", {"right_product_error", "range_gap"});
  rb.statement("range_and_null_gaps", "gap", {"range_gap", "nullspace_gap"});
  rb.statement("left_product_and_null_projector", "orthogonal",
               {"left_product_error", "null_projector_error"});
  rb.statement("right_product_and_range_projector", "orthogonal",
               {"right_product_error", "range_projector_error"});
  rb.statement("range_and_null_projectors", "orthogonal",
               {"range_projector_error", "null_projector_error"});
  rb.finish();
  return out;
}

SequenceDiagnostics mp_continuity_report(const Matrix& a,
                                         const std::vector<Matrix>& sequence,
                                         const ToleranceConfig& tol) {
  const InverseCertificate cert = moore_penrose(a, tol);
  const Matrix& x = cert.inverse;
  if (norm(a) == 0.0) throw input_error("mp_continuity_report: limit must be nonzero");
  const Eigen::Index m = a.rows();
  const Eigen::Index n = a.cols();
  const bool square = m == n;
  const Matrix idm = identity(m);
  const Matrix idn = identity(n);
  const Matrix left = x * a;   // a+ a
  const Matrix right = a * x;  // a a+
  const Subspace range_x = column_space(x, tol);
  const Subspace null_x = null_space(x, tol);
  Subspace right_null_x, right_range_x;
  if (square) {
    const Matrix rx = right_regular(x, n);
    right_null_x = null_space(rx, tol);
    right_range_x = column_space(rx, tol);
  }

  SequenceDiagnostics out;
  out.threshold = 10.0 * tol.residual_tol * cert.scale;
  ReportBuilder rb(out);

  for (std::size_t i = 0; i < sequence.size(); ++i) {
    const Matrix& an = sequence[i];
    if (an.rows() != m || an.cols() != n)
      throw input_error("mp_continuity_report: sequence shape differs from limit");
    out.indices.push_back(static_cast<int>(i) + 1);
    const Matrix xn = pinv(an, tol);
    const Matrix left_n = xn * an;
    const Matrix right_n = an * xn;
    const double t1 = norm((idn - left) * left_n);
    const double t2 = norm((idn - left_n) * left);
    const double t3 = norm(right * (idm - right_n));
    const double t4 = norm(right_n * (idm - right));
    const double t5 = norm(left * (idn - left_n));
    const double t6 = norm(left_n * (idn - left));
    const double t7 = norm((idm - right) * right_n);
    const double t8 = norm((idm - right_n) * right);
    rb.push("inverse_error", norm(xn - x));
    rb.push("left_projector_error", norm(left_n - left));
    rb.push("right_projector_error", norm(right_n - right));
    rb.push("term_1", t1);
    rb.push("term_2", t2);
    rb.push("term_3", t3);
    rb.push("term_4", t4);
    rb.push("term_5", t5);
    rb.push("term_6", t6);
    rb.push("term_7", t7);
    rb.push("term_8", t8);
    out.adjoint_discrepancy =
        std::max({out.adjoint_discrepancy, std::abs(t1 - t6), std::abs(t2 - t5),
                  std::abs(t3 - t8), std::abs(t4 - t7)});

    const double g_range = gap(column_space(xn, tol), range_x).gap;
    const double g_null = gap(null_space(xn, tol), null_x).gap;
    rb.push("inverse_range_gap", g_range);
    rb.push("inverse_null_gap", g_null);
    double worst = std::max(std::abs(std::max(t1, t2) - g_range),
                            std::abs(std::max(t3, t4) - g_null));
    if (square) {
      const Matrix rxn = right_regular(xn, n);
      const double g_right_null = gap(null_space(rxn, tol), right_null_x).gap;
      const double g_right_range = gap(column_space(rxn, tol), right_range_x).gap;
      rb.push("right_null_gap", g_right_null);
      rb.push("right_range_gap", g_right_range);
      worst = std::max({worst, std::abs(std::max(t5, t6) - g_right_null),
                        std::abs(std::max(t7, t8) - g_right_range)});
    }
    out.identity_discrepancy = std::max(out.identity_discrepancy, worst);
  }

  rb.statement("inverse", "mp", {"inverse_error"});
  rb.statement("left_projector_and_right_terms", "mp",
               {"left_projector_error", "term_3", "term_4"});
  rb.statement("right_projector_and_left_terms", "mp",
               {"right_projector_error", "term_1", "term_2"});
  rb.statement("terms_1_to_4", "mp", {"term_1", "term_2", "term_3", "term_4"});
  rb.statement("right_projector_and_left_adjoint_terms", "mp",
               {"right_projector_error", "term_5", "term_6"});
  rb.statement("left_projector_and_right_adjoint_terms", "mp",
               {"left_projector_error", "term_7", "term_8"});
  rb.statement("terms_5_to_8", "mp", {"term_5", "term_6", "term_7", "term_8"});
  rb.statement("projectors", "mp", {"left_projector_error", "right_projector_error"});
  rb.finish();
  return out;
}

MpGapTerms mp_gap_terms(const Matrix& b, const Matrix& bn, const ToleranceConfig& tol) {
  if (bn.rows() != b.rows() || bn.cols() != b.cols())
    throw input_error("mp_gap_terms: matrices of equal shape required");
  const Matrix id = identity(b.rows());
  const Matrix id_row = identity(b.cols());
  const Matrix b_dag = pinv(b, tol);
  const Matrix bn_dag = pinv(bn, tol);
  const Matrix range = b * b_dag;
  const Matrix range_n = bn * bn_dag;
  const Matrix row = b_dag * b;
  const Matrix row_n = bn_dag * bn;

  MpGapTerms t;
  t.range_terms = {norm((id - range) * range_n), norm((id - range_n) * range)};
  t.cokernel_terms = {norm((id_row - row) * row_n), norm((id_row - row_n) * row)};
  t.range_terms_adjoint = {norm(range_n * (id - range)), norm(range * (id - range_n))};
  t.range_gap_geometric = gap(column_space(bn, tol), column_space(b, tol)).gap;
  t.null_gap_geometric = gap(null_space(bn, tol), null_space(b, tol)).gap;
  return t;
}

ZeroLimit zero_limit_check(const std::vector<Matrix>& inverses, const ToleranceConfig& tol) {
  ZeroLimit z;
  std::optional<std::size_t> last_nonzero;
  for (std::size_t i = 0; i < inverses.size(); ++i) {
    const bool zero = norm(inverses[i]) <= tol.residual_tol;
    z.range_gaps.push_back(zero ? 0.0 : 1.0);
    if (!zero) last_nonzero = i;
  }
  const std::size_t first_zero = last_nonzero ? *last_nonzero + 1 : 0;
  if (first_zero < inverses.size()) {
    z.converges_to_zero = true;
    z.n0 = static_cast<int>(first_zero) + 1;
  }
  return z;
}

namespace families {

Matrix plane_rotation(Eigen::Index n, double theta) {
  Matrix g = identity(n);
  if (n < 2) return g;
  g(0, 0) = std::cos(theta);
  g(1, 1) = std::cos(theta);
  g(1, 0) = std::sin(theta);
  g(0, 1) = -std::sin(theta);
  return g;
}

std::vector<BcProblem> additive(const BcProblem& limit, const Matrix& direction,
                                int count) {
  std::vector<BcProblem> out;
  for (int k = 1; k <= count; ++k)
    out.push_back({limit.a + direction / static_cast<double>(k), limit.b, limit.c});
  return out;
}

std::vector<BcProblem> rotating(const BcProblem& limit, int count) {
  std::vector<BcProblem> out;
  for (int k = 1; k <= count; ++k) {
    const Matrix g = plane_rotation(limit.a.rows(), 1.0 / k);
    out.push_back({limit.a, g * limit.b, limit.c * g.adjoint()});
  }
  return out;
}

std::vector<BcProblem> rank_drop(const BcProblem& limit, int count) {
  const Eigen::Index n = limit.a.rows();
  const Matrix off_range = identity(n) - column_space(limit.b).orthogonal_projector();
  const Matrix on_null = null_space(limit.c).orthogonal_projector();
  std::vector<BcProblem> out;
  for (int k = 1; k <= count; ++k) {
    out.push_back({limit.a, limit.b + off_range / static_cast<double>(k),
                   limit.c + on_null / static_cast<double>(k)});
  }
  return out;
}

std::vector<Matrix> mp_additive(const Matrix& a, int count) {
  std::vector<Matrix> out;
  for (int k = 1; k <= count; ++k) out.push_back(a + a / static_cast<double>(k));
  return out;
}

std::vector<Matrix> mp_rotating(const Matrix& a, int count) {
  std::vector<Matrix> out;
  for (int k = 1; k <= count; ++k)
    out.push_back(plane_rotation(a.rows(), 1.0 / k) * a);
  return out;
}

std::vector<Matrix> mp_rank_drop(const Matrix& a, int count, const ToleranceConfig& tol) {
  const SvdResult dec = svd(a, /*full=*/true);
  const int r = numerical_rank(dec.sigma, tol);
  const Eigen::Index extra = std::min(a.rows(), a.cols()) - r;
  // Fills the missing singular directions: a_n has full rank, a has rank r.
  const Matrix jump =
      dec.u.middleCols(r, extra) * dec.v.middleCols(r, extra).adjoint();
  std::vector<Matrix> out;
  for (int k = 1; k <= count; ++k) out.push_back(a + jump / static_cast<double>(k));
  return out;
}

std::vector<OipProblem> oip_rotating(const OipProblem& limit, const Matrix& direction,
                                     int count) {
  std::vector<OipProblem> out;
  for (int k = 1; k <= count; ++k) {
    const double theta = 1.0 / k;
    const Matrix gt = plane_rotation(limit.t.ambient_dim, theta);
    const Matrix gs = plane_rotation(limit.s.ambient_dim, theta);
    Subspace t = limit.t;
    Subspace s = limit.s;
    t.basis = gt * t.basis;
    s.basis = gs * s.basis;
    out.push_back({limit.a + direction / static_cast<double>(k), t, s});
  }
  return out;
}

std::vector<OipProblem> oip_rank_drop(const OipProblem& limit, int count) {
  std::vector<OipProblem> out;
  for (int k = 1; k <= count; ++k) {
    out.push_back({limit.a, Subspace::full(limit.t.ambient_dim, limit.t.tol_used),
                   Subspace::trivial(limit.s.ambient_dim, limit.s.tol_used)});
  }
  return out;
}

}  // namespace families

}  // namespace geninv
