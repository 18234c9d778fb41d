#include "hphi/weights.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "hphi/linalg.hpp"

namespace hphi::weights {

namespace {

constexpr double kStructTol = 1e-10;

void require_dim(const CVector& x, int n, const char* what) {
  if (x.size() != n)
    throw InputError(std::string(what) + ": vector has dimension " + std::to_string(x.size()) +
                     ", weight has dimension " + std::to_string(n));
}

// Drops the imaginary part of a value that must be real, after checking it.
double real_checked(Complex z, double magnitude, const char* what) {
  if (std::abs(z.imag()) > 1e-13 * std::max(magnitude, 1e-300) && std::abs(z.imag()) > 1e-300)
    throw NumericalError(std::string(what) + ": imaginary residue " + std::to_string(z.imag()));
  return z.real();
}

}  // namespace

QuadraticWeight QuadraticWeight::make(const CMatrix& levi, const CMatrix& pluriharmonic) {
  linalg::require_square(levi, "QuadraticWeight: L");
  linalg::require_square(pluriharmonic, "QuadraticWeight: P");
  linalg::require_finite(levi, "QuadraticWeight: L");
  linalg::require_finite(pluriharmonic, "QuadraticWeight: P");
  if (levi.rows() == 0) throw InputError("QuadraticWeight: dimension must be positive");
  if (levi.rows() != pluriharmonic.rows())
    throw InputError("QuadraticWeight: L and P have different dimensions");
  if (linalg::hermitian_defect(levi) > kStructTol)
    throw InputError("QuadraticWeight: L is not Hermitian");
  if (pluriharmonic.norm() > 0.0 && linalg::symmetric_defect(pluriharmonic) > kStructTol)
    throw InputError("QuadraticWeight: P is not symmetric");

  CMatrix l = linalg::hermitian_part(levi);
  CMatrix p = linalg::symmetric_part(pluriharmonic);
  const auto e = linalg::eig_hermitian(l);
  if (!(e.values.minCoeff() > 0.0))
    throw InputError("QuadraticWeight: L is not positive definite (min eigenvalue " +
                     std::to_string(e.values.minCoeff()) + ")");
  return QuadraticWeight(std::move(l), std::move(p));
}

QuadraticWeight QuadraticWeight::standard(int n) {
  if (n <= 0) throw InputError("QuadraticWeight::standard: dimension must be positive");
  return QuadraticWeight(CMatrix::Identity(n, n), CMatrix::Zero(n, n));
}

QuadraticWeight QuadraticWeight::one_dimensional(double a, Complex b) {
  CMatrix l(1, 1), p(1, 1);
  l(0, 0) = a;
  p(0, 0) = b;
  return make(l, p);
}

AffineWeight::AffineWeight(QuadraticWeight q)
    : quad(std::move(q)),
      linear_x(CVector::Zero(quad.dim())),
      linear_xbar(CVector::Zero(quad.dim())) {}

AffineWeight::AffineWeight(QuadraticWeight q, CVector lx, CVector lxbar, double c)
    : quad(std::move(q)), linear_x(std::move(lx)), linear_xbar(std::move(lxbar)), constant(c) {
  require_dim(linear_x, quad.dim(), "AffineWeight");
  require_dim(linear_xbar, quad.dim(), "AffineWeight");
  const double scale = std::max(1.0, linear_x.cwiseAbs().maxCoeff());
  if ((linear_xbar - linear_x.conjugate()).cwiseAbs().maxCoeff() > kStructTol * scale)
    throw InputError("AffineWeight: conj(x) coefficient is not the conjugate of the x coefficient");
}

double AffineWeight::affine_magnitude() const {
  double m = std::abs(constant);
  if (linear_x.size() > 0) m = std::max(m, linear_x.cwiseAbs().maxCoeff());
  return m;
}

double evaluate(const QuadraticWeight& phi, const CVector& x) {
  require_dim(x, phi.dim(), "evaluate");
  const Complex herm = x.dot(phi.levi() * x);  // x* L x
  const Complex pluri = (x.transpose() * phi.pluriharmonic() * x)(0, 0);
  const double mag = phi.levi().cwiseAbs().maxCoeff() * x.squaredNorm() * phi.dim();
  return 0.5 * real_checked(herm, mag, "evaluate") + 0.5 * pluri.real();
}

double evaluate(const AffineWeight& phi, const CVector& x) {
  const double base = evaluate(phi.quad, x);
  const Complex lin = (phi.linear_x.transpose() * x)(0, 0) +
                      (phi.linear_xbar.transpose() * x.conjugate())(0, 0);
  const double mag = phi.linear_x.cwiseAbs().sum() * x.cwiseAbs().maxCoeff() + 1.0;
  return base + real_checked(lin, mag, "evaluate") + phi.constant;
}

RealForm real_form(const QuadraticWeight& phi) {
  const int n = phi.dim();
  const RMatrix lr = phi.levi().real();
  const RMatrix li = phi.levi().imag();
  const RMatrix pr = phi.pluriharmonic().real();
  const RMatrix pi = phi.pluriharmonic().imag();
  RMatrix q(2 * n, 2 * n);
  q.topLeftCorner(n, n) = lr + pr;
  q.topRightCorner(n, n) = -li - pi;
  q.bottomLeftCorner(n, n) = li - pi;
  q.bottomRightCorner(n, n) = lr - pr;
  RealForm out{0.5 * (q + q.transpose())};
  return out;
}

QuadraticWeight from_real_form(const RMatrix& q_in) {
  if (q_in.rows() != q_in.cols() || q_in.rows() % 2 != 0 || q_in.rows() == 0)
    throw InputError("from_real_form: expected a square matrix of even size");
  const RMatrix q = 0.5 * (q_in + q_in.transpose());
  const auto n = q.rows() / 2;
  const RMatrix q11 = q.topLeftCorner(n, n), q12 = q.topRightCorner(n, n);
  const RMatrix q21 = q.bottomLeftCorner(n, n), q22 = q.bottomRightCorner(n, n);
  CMatrix l(n, n), p(n, n);
  l.real() = 0.5 * (q11 + q22);
  l.imag() = 0.5 * (q21 - q12);
  p.real() = 0.5 * (q11 - q22);
  p.imag() = -0.5 * (q12 + q21);
  return QuadraticWeight::make(l, p);
}

const char* to_string(Ordering o) {
  switch (o) {
    case Ordering::Strict:
      return "STRICT";
    case Ordering::NonStrict:
      return "NONSTRICT";
    case Ordering::Incomparable:
      return "INCOMPARABLE";
  }
  return "?";
}

Comparison compare(const QuadraticWeight& phi1, const QuadraticWeight& phi2,
                   const CompareOptions& opts) {
  if (phi1.dim() != phi2.dim()) throw InputError("compare: weights have different dimensions");
  const RMatrix q1 = real_form(phi1).q;
  const RMatrix q2 = real_form(phi2).q;
  const RMatrix dq = q2 - q1;

  Eigen::SelfAdjointEigenSolver<RMatrix> es(dq);
  if (es.info() != Eigen::Success) throw NumericalError("compare: eigensolver failed");

  Comparison out;
  out.margin = es.eigenvalues()(0);
  out.direction = es.eigenvectors().col(0);
  out.tolerance = opts.rel_tol * (1.0 + linalg::norm2(q1.cast<Complex>()) +
                                  linalg::norm2(q2.cast<Complex>()));
  if (out.margin > out.tolerance)
    out.ordering = Ordering::Strict;
  else if (out.margin < -out.tolerance)
    out.ordering = Ordering::Incomparable;
  else
    out.ordering = Ordering::NonStrict;

  // Cross-check: reduce to (Phi0, Phi) and test ||P~|| < 1 with
  // P~ = (conj(L) - 1)^{-1/2} P (L - 1)^{-1/2}.
  const CMatrix dl = phi2.levi() - phi1.levi();
  const auto dle = linalg::eig_hermitian(linalg::hermitian_part(dl));
  const double dl_scale = std::max(1.0, dle.values.cwiseAbs().maxCoeff());
  if (dle.values.cwiseAbs().minCoeff() <= 1e-8 * dl_scale) return out;

  const Reduction red = reduce_to_standard(phi1, phi2);
  const int n = phi1.dim();
  const CMatrix gap = red.reduced.levi() - CMatrix::Identity(n, n);
  const auto ge = linalg::eig_hermitian(linalg::hermitian_part(gap));
  const double gap_scale = std::max(1.0, ge.values.cwiseAbs().maxCoeff());
  const bool gap_pd = ge.values.minCoeff() > 1e-8 * gap_scale;
  out.reduced_levi_gap_pd = gap_pd;

  bool predicted_strict = false;
  bool predicted_incomparable = !gap_pd && ge.values.minCoeff() < -1e-8 * gap_scale;
  if (gap_pd) {
    const CMatrix left = linalg::hermitian_inv_sqrt_pd(linalg::hermitian_part(gap.conjugate()));
    const CMatrix right = linalg::hermitian_inv_sqrt_pd(linalg::hermitian_part(gap));
    const double nu = linalg::operator_norm(left * red.reduced.pluriharmonic() * right);
    out.tilde_p_norm = nu;
    predicted_strict = nu < 1.0 - 1e-6;
    predicted_incomparable = nu > 1.0 + 1e-6;
  }

  const bool disagree =
      (out.ordering == Ordering::Strict && predicted_incomparable) ||
      (out.ordering == Ordering::Incomparable && predicted_strict);
  if (disagree)
    throw CrossCheckError(std::string("compare: real-form verdict ") + to_string(out.ordering) +
                          " disagrees with the reduced P~ criterion");
  return out;
}

Reduction reduce_to_standard(const QuadraticWeight& phi1, const QuadraticWeight& phi2) {
  if (phi1.dim() != phi2.dim())
    throw InputError("reduce_to_standard: weights have different dimensions");
  const CMatrix g = linalg::hermitian_inv_sqrt_pd(phi1.levi());
  const CMatrix gbar = g.conjugate();
  CMatrix l = linalg::hermitian_part(g * phi2.levi() * g);
  CMatrix p = linalg::symmetric_part(gbar * (phi2.pluriharmonic() - phi1.pluriharmonic()) * g);
  return Reduction{QuadraticWeight::make(l, p), g, kI * phi1.pluriharmonic()};
}

QuadraticWeight transform_T(const QuadraticWeight& phi, const CMatrix& t) {
  if (t.rows() != phi.dim() || t.cols() != phi.dim())
    throw InputError("transform_T: T has the wrong shape");
  linalg::require_finite(t, "transform_T");
  if (t.norm() > 0.0 && linalg::symmetric_defect(t) > kStructTol)
    throw InputError("transform_T: T is not symmetric");
  return QuadraticWeight::make(phi.levi(), phi.pluriharmonic() + kI * linalg::symmetric_part(t));
}

QuadraticWeight transform_G(const QuadraticWeight& phi, const CMatrix& g) {
  if (g.rows() != phi.dim() || g.cols() != phi.dim())
    throw InputError("transform_G: G has the wrong shape");
  linalg::require_finite(g, "transform_G");
  if (!(linalg::condition_estimate(g) < linalg::kMaxCondition))
    throw InputError("transform_G: G is singular");
  return QuadraticWeight::make(g.adjoint() * phi.levi() * g,
                               g.transpose() * phi.pluriharmonic() * g);
}

AffineWeight transform_Y(const QuadraticWeight& phi, const PhasePoint& y) {
  if (y.dim() != phi.dim()) throw InputError("transform_Y: shift has the wrong dimension");
  linalg::require_finite(y.stacked(), "transform_Y");
  const CMatrix& l = phi.levi();
  const CMatrix& p = phi.pluriharmonic();
  // Phi(x - y) contributes -1/2 (conj(L y) + P y) . x + c.c. + Phi(y);
  // Im(1/2 y.eta - eta.x) contributes (i/2) eta . x + c.c. + Im(1/2 y.eta).
  const CVector lin = -0.5 * ((l * y.x).conjugate() + p * y.x) + 0.5 * kI * y.xi;
  const Complex y_eta = (y.x.transpose() * y.xi)(0, 0);
  const double c = evaluate(phi, y.x) + 0.5 * y_eta.imag();
  return AffineWeight(phi, lin, lin.conjugate(), c);
}

PhasePoint lambda_point(const QuadraticWeight& phi, const CVector& y) {
  require_dim(y, phi.dim(), "lambda_point");
  linalg::require_finite(y, "lambda_point");
  const CVector eta = -kI * (phi.pluriharmonic() * y + (phi.levi() * y).conjugate());
  return {y, eta};
}

}  // namespace hphi::weights
