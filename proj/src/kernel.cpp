#include "geninv/kernel.hpp"

#include <cmath>
#include <string>

namespace geninv {

void ToleranceConfig::validate() const {
  if (!(rank_rel_tol >= 0.0 && rank_rel_tol < 1.0))
    throw input_error("rank_rel_tol must lie in [0, 1)");
  if (!(residual_tol >= 0.0 && residual_tol < 1.0))
    throw input_error("residual_tol must lie in [0, 1)");
  if (fd_step_sweep.empty()) throw input_error("fd_step_sweep is empty");
  for (std::size_t i = 0; i < fd_step_sweep.size(); ++i) {
    if (!(fd_step_sweep[i] > 0.0))
      throw input_error("fd_step_sweep entries must be positive");
    if (i > 0 && !(fd_step_sweep[i] < fd_step_sweep[i - 1]))
      throw input_error("fd_step_sweep must be strictly decreasing");
  }
}

void require_finite(const Matrix& a, const char* what) {
  if (!a.allFinite())
    throw input_error(std::string(what) + " has a non-finite entry");
}

SvdResult svd(const Matrix& a, bool full) {
  require_finite(a);
  const Eigen::Index m = a.rows();
  const Eigen::Index n = a.cols();
  if (m == 0 || n == 0) {
    SvdResult r;
    r.sigma = RealVector(0);
    r.u = full ? identity(m) : Matrix(m, 0);
    r.v = full ? identity(n) : Matrix(n, 0);
    return r;
  }
  const unsigned opts = full ? (Eigen::ComputeFullU | Eigen::ComputeFullV)
                             : (Eigen::ComputeThinU | Eigen::ComputeThinV);
  Eigen::JacobiSVD<Matrix> dec(a, opts);
  if (dec.info() != Eigen::Success) {
    throw Error(ErrorKind::kernel,
                "SVD failed to converge for " + std::to_string(m) + "x" +
                    std::to_string(n) + " input");
  }
  return {dec.matrixU(), dec.singularValues(), dec.matrixV()};
}

int numerical_rank(const RealVector& sigma, const ToleranceConfig& tol) {
  if (sigma.size() == 0 || sigma(0) <= 0.0) return 0;
  const double cutoff = tol.rank_rel_tol * sigma(0);
  int r = 0;
  for (Eigen::Index i = 0; i < sigma.size(); ++i)
    if (sigma(i) > cutoff) ++r;
  return r;
}

double spectral_norm(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  require_finite(a);
  return Eigen::JacobiSVD<Matrix>(a).singularValues()(0);
}

Matrix solve_on_subspace(const Matrix& a, const Matrix& range_basis,
                         const Matrix& target, const ToleranceConfig& tol) {
  if (a.cols() != range_basis.rows())
    throw input_error("solve_on_subspace: basis rows must equal A cols");
  if (a.rows() != target.rows())
    throw input_error("solve_on_subspace: target rows must equal A rows");
  const Eigen::Index k = range_basis.cols();
  if (k == 0) return Matrix::Zero(0, target.cols());

  const Matrix image = a * range_basis;
  const SvdResult dec = svd(image);
  const double smallest = dec.sigma(k - 1);
  const double a_norm = spectral_norm(a);
  if (!(smallest > tol.rank_rel_tol * a_norm) || a_norm == 0.0) {
    throw Error(ErrorKind::existence, "restriction not injective",
                "A|_T injective", a_norm > 0.0 ? smallest / a_norm : 0.0);
  }
  const RealVector inv = dec.sigma.cwiseInverse();
  return dec.v * inv.asDiagonal() * (dec.u.adjoint() * target);
}

}  // namespace geninv
