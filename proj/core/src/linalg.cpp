#include "hphi/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

namespace hphi::linalg {

namespace {

constexpr double kTiny = 1e-300;

std::string label(std::string_view what) { return std::string(what); }

}  // namespace

void require_finite(const CMatrix& m, std::string_view what) {
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    const Complex z = m.data()[i];
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      throw InputError(label(what) + ": non-finite entry");
  }
}

void require_finite(const CVector& v, std::string_view what) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i].real()) || !std::isfinite(v[i].imag()))
      throw InputError(label(what) + ": non-finite entry");
  }
}

void require_square(const CMatrix& m, std::string_view what) {
  if (m.rows() != m.cols())
    throw InputError(label(what) + ": matrix is " + std::to_string(m.rows()) + "x" +
                     std::to_string(m.cols()) + ", expected square");
}

double norm2(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<CMatrix> svd(m);
  return svd.singularValues()(0);
}

double hermitian_defect(const CMatrix& m) {
  require_square(m, "hermitian_defect");
  return norm2(m - m.adjoint()) / std::max(norm2(m), kTiny);
}

double symmetric_defect(const CMatrix& m) {
  require_square(m, "symmetric_defect");
  return norm2(m - m.transpose()) / std::max(norm2(m), kTiny);
}

GeneralEigen eig_general(const CMatrix& m) {
  require_square(m, "eig_general");
  require_finite(m, "eig_general");
  if (m.rows() > 32) throw InputError("eig_general: dimension above 32");

  GeneralEigen out;
  const auto n = m.rows();
  if (n == 0) return out;

  Eigen::ComplexEigenSolver<CMatrix> solver(m, /*computeEigenvectors=*/true);
  if (solver.info() != Eigen::Success)
    throw NumericalError("eig_general: QR iteration did not converge");

  const double scale = std::max(norm2(m), kTiny);
  CMatrix vectors = solver.eigenvectors();
  const CVector values = solver.eigenvalues();
  out.pairs.reserve(static_cast<std::size_t>(n));

  for (Eigen::Index k = 0; k < n; ++k) {
    const Complex lambda = values[k];
    CVector v = vectors.col(k);
    v.normalize();
    double residual = (m * v - lambda * v).norm() / scale;

    // Inverse iteration cleans up eigenvectors of clustered eigenvalues.
    for (int sweep = 0; sweep < 3 && residual > 1e-12; ++sweep) {
      const Complex shift = lambda + Complex(1e-13 * scale, 1e-13 * scale);
      const CMatrix shifted = m - shift * CMatrix::Identity(n, n);
      CVector w = shifted.fullPivLu().solve(v);
      if (!w.allFinite() || w.norm() == 0.0) break;
      w.normalize();
      const double r = (m * w - lambda * w).norm() / scale;
      if (r >= residual) break;
      v = w;
      residual = r;
    }
    if (residual > 1e-10)
      throw NumericalError("eig_general: eigenpair residual " + std::to_string(residual) +
                           " exceeds 1e-10 relative");
    out.max_residual = std::max(out.max_residual, residual);
    vectors.col(k) = v;
    out.pairs.push_back({lambda, std::move(v)});
  }

  Eigen::JacobiSVD<CMatrix> svd(vectors);
  const auto& sv = svd.singularValues();
  const double smin = sv(sv.size() - 1);
  out.eigenvector_condition =
      smin > 0.0 ? sv(0) / smin : std::numeric_limits<double>::infinity();
  return out;
}

HermitianEigen eig_hermitian(const CMatrix& h, double herm_tol) {
  require_square(h, "eig_hermitian");
  require_finite(h, "eig_hermitian");
  const double defect = hermitian_defect(h);
  if (defect > herm_tol)
    throw InputError("eig_hermitian: matrix is not Hermitian (relative defect " +
                     std::to_string(defect) + ")");
  HermitianEigen out;
  if (h.rows() == 0) return out;
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(hermitian_part(h));
  if (solver.info() != Eigen::Success)
    throw NumericalError("eig_hermitian: iteration did not converge");
  out.values = solver.eigenvalues();
  out.vectors = solver.eigenvectors();
  return out;
}

namespace {

CMatrix hermitian_function(const CMatrix& h, double (*f)(double), std::string_view what) {
  const HermitianEigen e = eig_hermitian(h);
  if (e.values.size() == 0) return CMatrix(0, 0);
  const double top = std::max(std::abs(e.values.maxCoeff()), kTiny);
  if (e.values.minCoeff() <= 1e-14 * top)
    throw InputError(label(what) + ": matrix is not positive definite (min eigenvalue " +
                     std::to_string(e.values.minCoeff()) + ")");
  RVector fv = e.values.unaryExpr(f);
  CMatrix r = e.vectors * fv.cast<Complex>().asDiagonal() * e.vectors.adjoint();
  return hermitian_part(r);
}

}  // namespace

CMatrix hermitian_sqrt_pd(const CMatrix& h) {
  return hermitian_function(h, [](double x) { return std::sqrt(x); }, "hermitian_sqrt_pd");
}

CMatrix hermitian_inv_sqrt_pd(const CMatrix& h) {
  return hermitian_function(h, [](double x) { return 1.0 / std::sqrt(x); },
                            "hermitian_inv_sqrt_pd");
}

double condition_estimate(const CMatrix& m) {
  require_square(m, "condition_estimate");
  require_finite(m, "condition_estimate");
  if (m.rows() == 0) return 1.0;
  Eigen::FullPivLU<CMatrix> lu(m);
  if (!lu.isInvertible()) return std::numeric_limits<double>::infinity();
  const CMatrix inv = lu.inverse();
  auto one_norm = [](const CMatrix& a) { return a.cwiseAbs().colwise().sum().maxCoeff(); };
  return one_norm(m) * one_norm(inv);
}

Complex determinant(const CMatrix& m) {
  require_square(m, "determinant");
  require_finite(m, "determinant");
  if (m.rows() == 0) return {1.0, 0.0};
  // LU with partial pivoting: product of U's diagonal times the permutation sign.
  Eigen::PartialPivLU<CMatrix> lu(m);
  return lu.determinant();
}

CMatrix inverse(const CMatrix& m) {
  const double cond = condition_estimate(m);
  if (!(cond < kMaxCondition))
    throw NumericalError("inverse: matrix is singular to tolerance (condition " +
                         std::to_string(cond) + ")");
  return m.fullPivLu().inverse();
}

CVector solve(const CMatrix& m, const CVector& b) {
  if (b.size() != m.rows()) throw InputError("solve: right-hand side has wrong length");
  require_finite(b, "solve");
  const double cond = condition_estimate(m);
  if (!(cond < kMaxCondition))
    throw NumericalError("solve: matrix is singular to tolerance (condition " +
                         std::to_string(cond) + ")");
  Eigen::FullPivLU<CMatrix> lu(m);
  CVector x = lu.solve(b);
  // One step of iterative refinement.
  x += lu.solve(b - m * x);
  return x;
}

double operator_norm(const CMatrix& m) {
  require_finite(m, "operator_norm");
  return norm2(m);
}

}  // namespace hphi::linalg
