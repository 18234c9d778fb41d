#include "hphi/gaussian_integral.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "hphi/linalg.hpp"

namespace hphi {

GaussianIntegral gaussian_integral(const CMatrix& a_in, const CVector& b, Complex c) {
  linalg::require_square(a_in, "gaussian_integral");
  linalg::require_finite(a_in, "gaussian_integral");
  linalg::require_finite(b, "gaussian_integral");
  if (b.size() != a_in.rows()) throw InputError("gaussian_integral: dimension mismatch");

  const CMatrix a = linalg::symmetric_part(a_in);
  const RMatrix re = a.real();
  const RMatrix im = a.imag();

  GaussianIntegral out;
  Eigen::SelfAdjointEigenSolver<RMatrix> es(re, Eigen::EigenvaluesOnly);
  out.min_eigenvalue = es.eigenvalues()(0);
  out.scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
  out.integrable = out.min_eigenvalue > 1e-10 * out.scale;
  if (!out.integrable) return out;

  // Re A = C C^T, A = C (1 + i S) C^T with S = C^{-1} Im A C^{-T} real symmetric.
  Eigen::LLT<RMatrix> llt(re);
  if (llt.info() != Eigen::Success) throw NumericalError("gaussian_integral: Cholesky failed");
  const RMatrix cl = llt.matrixL();
  RMatrix s = llt.matrixL().solve(im);
  s = llt.matrixL().solve(s.transpose()).transpose();
  s = 0.5 * (s + s.transpose());
  Eigen::SelfAdjointEigenSolver<RMatrix> ss(s, Eigen::EigenvaluesOnly);

  Complex log_det_inv_sqrt = -cl.diagonal().array().log().sum();  // det(Re A)^{-1/2}
  for (Eigen::Index k = 0; k < ss.eigenvalues().size(); ++k)
    log_det_inv_sqrt -= 0.5 * std::log(Complex(1.0, ss.eigenvalues()(k)));

  const CVector x = linalg::solve(a, b);
  const Complex quad = (b.transpose() * x)(0, 0);
  out.log_value = log_det_inv_sqrt + kPi * quad + c;
  out.value = std::exp(out.log_value);
  return out;
}

}  // namespace hphi
