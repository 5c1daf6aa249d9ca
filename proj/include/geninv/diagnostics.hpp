#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "geninv/geninv.hpp"

namespace geninv {

/// A (B,C)-inverse problem: the inverse of `a` with range R(b), null space N(c).
struct BcProblem {
  Matrix a, b, c;
};

/// A prescribed outer-inverse problem: A^(2)_{T,S}.
struct OipProblem {
  Matrix a;
  Subspace t, s;
};

/// One convergence claim: every listed series tends to zero.
struct Statement {
  std::string label;
  std::string group;
  std::vector<std::string> quantities;
  bool converged = false;
};

/// Per-index measurements for a sequence of problems converging (in A) to
/// a limit problem, and the verdict on each equivalent convergence claim.
///
/// `series` maps a quantity name (inverse_error, range_gap, ...) to its value
/// at each evaluated index; `indices` holds the 1-based index of each entry.
/// Indices where the inverse does not exist are listed in `failures` and
/// excluded from everything else.
struct SequenceDiagnostics {
  std::vector<int> indices;
  std::vector<std::pair<int, std::string>> failures;
  std::map<std::string, std::vector<double>> series;
  std::vector<Statement> statements;
  double threshold = 0.0;
  bool unanimous = true;
  /// Largest |algebraic - geometric| over the gap identities checked, and
  /// largest |t - t*| over adjoint-paired projector terms.
  double identity_discrepancy = 0.0;
  double adjoint_discrepancy = 0.0;

  const std::vector<double>& at(const std::string& name) const;
  bool verdict(const std::string& label) const;
  /// True when every statement of `group` has the same verdict.
  bool unanimous_in(const std::string& group) const;
};

/// Finite proxy for "q_n -> 0": either the last value is at most
/// `threshold`, or the last third of the sequence is non-increasing and its
/// log-log slope against the index is at most -1/2.
bool converges_to_zero(std::span<const double> q, std::span<const int> indices,
                       double threshold);

/// Quantities of every equivalent continuity statement for (B,C)-inverses,
/// together with the C*-algebra projector forms and the quantitative error
/// bound (series "bound", NaN where inapplicable). Throws an input error if
/// the limit inverse is zero; use zero_limit_check for that case.
SequenceDiagnostics sequence_report(const BcProblem& limit,
                                    const std::vector<BcProblem>& sequence,
                                    const ToleranceConfig& tol = {});

/// Same for prescribed outer inverses, with gap statements and their
/// orthogonal-projector forms.
SequenceDiagnostics oip_sequence_report(const OipProblem& limit,
                                        const std::vector<OipProblem>& sequence,
                                        const ToleranceConfig& tol = {});

/// The eight equivalent statements on Moore-Penrose continuity plus a
/// cross-check of the projector-product gap formulas against geometric gaps
/// (right-sided ones through the right regular representation, square only).
SequenceDiagnostics mp_continuity_report(const Matrix& a,
                                         const std::vector<Matrix>& sequence,
                                         const ToleranceConfig& tol = {});

struct MpGapTerms {
  /// (||(1 - b b+) bn bn+||, ||(1 - bn bn+) b b+||): deviations between R(bn), R(b).
  std::pair<double, double> range_terms;
  /// (||(1 - b+ b) bn+ bn||, ||(1 - bn+ bn) b+ b||): deviations between the
  /// row spaces, equal to the gap of N(bn), N(b).
  std::pair<double, double> cokernel_terms;
  /// The adjoint-ordered range products ||bn bn+ (1 - b b+)||, ||b b+ (1 - bn bn+)||.
  std::pair<double, double> range_terms_adjoint;
  double range_gap_geometric = 0.0;
  double null_gap_geometric = 0.0;
};

MpGapTerms mp_gap_terms(const Matrix& b, const Matrix& bn,
                        const ToleranceConfig& tol = {});

struct ZeroLimit {
  bool converges_to_zero = false;
  std::optional<int> n0;           // 1-based
  std::vector<double> range_gaps;  // gap(R(X_n), 0): 0 or 1
};

/// For a limit inverse equal to zero: the sequence converges iff it is
/// exactly zero (within residual_tol) from some index on.
ZeroLimit zero_limit_check(const std::vector<Matrix>& inverses,
                           const ToleranceConfig& tol = {});

namespace families {

/// A_n = A + E / n with B, C fixed.
std::vector<BcProblem> additive(const BcProblem& limit, const Matrix& direction,
                                int count);

/// B_n = G_n B, C_n = C G_n^* with G_n the rotation by 1/n in the (0, 1)
/// coordinate plane; R(B_n) and N(C_n) rotate towards R(B), N(C).
std::vector<BcProblem> rotating(const BcProblem& limit, int count);

/// B_n = B + (I - P_R(B)) / n, C_n = C + P_N(C) / n: the range of B_n and
/// the null space of C_n jump for every n. Control family where convergence
/// fails.
std::vector<BcProblem> rank_drop(const BcProblem& limit, int count);

/// a_n = a + a / n (rank preserved).
std::vector<Matrix> mp_additive(const Matrix& a, int count);
/// a_n = G_n a with G_n the (0, 1)-plane rotation by 1/n.
std::vector<Matrix> mp_rotating(const Matrix& a, int count);
/// a_n = a + U0 V0^* / n with U0, V0 the singular vectors a lacks: a_n has
/// full rank for every n while a does not.
std::vector<Matrix> mp_rank_drop(const Matrix& a, int count,
                                 const ToleranceConfig& tol = {});

/// T_n, S_n rotated by 1/n and A_n = A + E / n.
std::vector<OipProblem> oip_rotating(const OipProblem& limit, const Matrix& direction,
                                     int count);
/// T_n = whole domain, S_n = 0 for every n (square A).
std::vector<OipProblem> oip_rank_drop(const OipProblem& limit, int count);

/// Unitary rotation by angle theta in the (0, 1) coordinate plane of C^n.
Matrix plane_rotation(Eigen::Index n, double theta);

}  // namespace families

}  // namespace geninv
