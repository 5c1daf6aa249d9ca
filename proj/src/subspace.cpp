#include "geninv/subspace.hpp"

#include <algorithm>
#include <random>

namespace geninv {

Matrix Subspace::orthogonal_projector() const {
  return basis * basis.adjoint();
}

Subspace Subspace::trivial(Eigen::Index ambient, const ToleranceConfig& tol) {
  return {ambient, Matrix(ambient, 0), tol};
}

Subspace Subspace::full(Eigen::Index ambient, const ToleranceConfig& tol) {
  return {ambient, identity(ambient), tol};
}

Subspace column_space(const Matrix& a, const ToleranceConfig& tol) {
  const SvdResult dec = svd(a);
  const int r = numerical_rank(dec.sigma, tol);
  return {a.rows(), dec.u.leftCols(r), tol};
}

Subspace null_space(const Matrix& a, const ToleranceConfig& tol) {
  const SvdResult dec = svd(a, /*full=*/true);
  const int r = numerical_rank(dec.sigma, tol);
  return {a.cols(), dec.v.rightCols(a.cols() - r), tol};
}

DirectSum direct_sum_check(const Subspace& t, const Subspace& s,
                           const ToleranceConfig& tol) {
  if (t.ambient_dim != s.ambient_dim)
    throw input_error("direct_sum_check: ambient dimensions differ");
  const Eigen::Index n = t.ambient_dim;
  if (t.dim() + s.dim() != n) return {false, 0.0};
  if (n == 0) return {true, 0.0};
  Matrix joined(n, n);
  joined << t.basis, s.basis;
  const RealVector sigma = svd(joined).sigma;
  const double margin = sigma(n - 1);
  return {margin > tol.rank_rel_tol, margin};
}

ObliqueProjector oblique_projector(const Subspace& t, const Subspace& s,
                                   const ToleranceConfig& tol) {
  const DirectSum ds = direct_sum_check(t, s, tol);
  if (!ds.holds) {
    throw Error(ErrorKind::existence, "not complementary", "T + S = X direct",
                ds.margin);
  }
  const Eigen::Index n = t.ambient_dim;
  Matrix joined(n, n);
  joined << t.basis, s.basis;
  const Matrix inv = joined.partialPivLu().inverse();
  ObliqueProjector p;
  p.matrix = t.basis * inv.topRows(t.dim());
  p.range = t;
  p.nullspace = s;
  return p;
}

ObliqueProjector projector_from_matrix(const Matrix& p,
                                       const ToleranceConfig& tol) {
  if (p.rows() != p.cols()) throw input_error("projector must be square");
  const double defect = spectral_norm(p * p - p);
  if (defect > tol.residual_tol * std::max(1.0, spectral_norm(p)))
    throw input_error("matrix is not idempotent");
  return {p, column_space(p, tol), null_space(p, tol)};
}

namespace {

double deviation(const Subspace& m, const Subspace& n) {
  if (m.dim() == 0) return 0.0;
  const Matrix residual = m.basis - n.basis * (n.basis.adjoint() * m.basis);
  return std::clamp(spectral_norm(residual), 0.0, 1.0);
}

}  // namespace

GapResult gap(const Subspace& m, const Subspace& n) {
  if (m.ambient_dim != n.ambient_dim)
    throw input_error("gap: ambient dimensions differ");
  GapResult g;
  g.delta_mn = deviation(m, n);
  g.delta_nm = deviation(n, m);
  g.gap = std::max(g.delta_mn, g.delta_nm);
  return g;
}

double gap_sampling_oracle(const Subspace& m, const Subspace& n, int trials,
                           std::uint64_t seed) {
  if (trials < 1) throw input_error("gap_sampling_oracle: trials must be >= 1");
  if (m.ambient_dim != n.ambient_dim)
    throw input_error("gap_sampling_oracle: ambient dimensions differ");
  if (m.dim() == 0) return 0.0;

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Vector coeff(m.dim());
  double best = 0.0;
  for (int trial = 0; trial < trials; ++trial) {
    for (Eigen::Index i = 0; i < coeff.size(); ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      coeff(i) = Scalar(re, im);
    }
    const double len = coeff.norm();
    if (len == 0.0) continue;
    const Vector x = m.basis * (coeff / len);
    const Vector away = x - n.basis * (n.basis.adjoint() * x);
    best = std::max(best, away.norm());
  }
  return best;
}

}  // namespace geninv
