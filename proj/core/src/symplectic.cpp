#include "hphi/symplectic.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hphi/linalg.hpp"

namespace hphi::symplectic {

namespace {

constexpr double kCanonicalTol = 1e-9;

void require_canonical(const CanonicalMap& m, const char* what) {
  const double scale = std::max(1.0, std::pow(linalg::norm2(m.matrix()), 2));
  const auto check = is_canonical(m);
  if (check.defect > 1e-10 * scale)
    throw CrossCheckError(std::string(what) + ": result is not canonical (defect " +
                          std::to_string(check.defect) + ")");
}

}  // namespace

CanonicalMap::CanonicalMap(CMatrix m) : m_(std::move(m)) {
  linalg::require_square(m_, "CanonicalMap");
  linalg::require_finite(m_, "CanonicalMap");
  if (m_.rows() == 0 || m_.rows() % 2 != 0)
    throw InputError("CanonicalMap: matrix size must be even and positive");
  n_ = static_cast<int>(m_.rows() / 2);
}

CanonicalMap CanonicalMap::identity(int n) { return CanonicalMap(CMatrix::Identity(2 * n, 2 * n)); }

PhasePoint CanonicalMap::apply(const PhasePoint& x) const {
  if (x.dim() != n_) throw InputError("CanonicalMap::apply: dimension mismatch");
  return PhasePoint::from_stacked(m_ * x.stacked());
}

CanonicalMap CanonicalMap::operator*(const CanonicalMap& o) const {
  if (o.n_ != n_) throw InputError("CanonicalMap: composing maps of different dimension");
  return CanonicalMap(m_ * o.m_);
}

CanonicalMap CanonicalMap::inverse() const { return CanonicalMap(linalg::inverse(m_)); }

CanonicalMap CanonicalMap::conjugate() const { return CanonicalMap(m_.conjugate()); }

Complex symplectic_form(const PhasePoint& x, const PhasePoint& y) {
  if (x.dim() != y.dim()) throw InputError("symplectic_form: dimension mismatch");
  return (x.xi.transpose() * y.x)(0, 0) - (y.xi.transpose() * x.x)(0, 0);
}

CMatrix symplectic_matrix(int n) {
  CMatrix j = CMatrix::Zero(2 * n, 2 * n);
  j.topRightCorner(n, n) = -CMatrix::Identity(n, n);
  j.bottomLeftCorner(n, n) = CMatrix::Identity(n, n);
  return j;
}

CanonicalCheck is_canonical(const CanonicalMap& m) {
  const CMatrix j = symplectic_matrix(m.dim());
  const CMatrix residual = m.matrix().transpose() * j * m.matrix() - j;
  CanonicalCheck out;
  out.defect = residual.cwiseAbs().maxCoeff();
  out.canonical = out.defect <= kCanonicalTol;
  return out;
}

double positivity_defect(const CanonicalMap& m) {
  const int dim = 2 * m.dim();
  const CMatrix j = symplectic_matrix(m.dim());
  const CMatrix& mm = m.matrix();
  auto form = [&](const CVector& x) -> Complex {
    const CVector mx = mm * x;
    const Complex s1 = (mx.transpose() * j * mx.conjugate())(0, 0);
    const Complex s0 = (x.transpose() * j * x.conjugate())(0, 0);
    return -kI * (s1 - s0);
  };

  const double scale = std::max(1.0, std::pow(linalg::norm2(mm), 2));
  auto real_value = [&](const CVector& x) {
    const Complex v = form(x);
    if (std::abs(v.imag()) > 1e-11 * scale * std::max(1.0, x.squaredNorm()))
      throw CrossCheckError("positivity_defect: form is not Hermitian (imaginary residue " +
                            std::to_string(v.imag()) + ")");
    return v.real();
  };

  // Polarization: H_jj = F(e_j), Re H_jk and Im H_jk from F(e_j + e_k), F(e_j + i e_k).
  RVector diag(dim);
  for (int k = 0; k < dim; ++k) diag(k) = real_value(CVector::Unit(dim, k));
  CMatrix h(dim, dim);
  for (int a = 0; a < dim; ++a) {
    h(a, a) = diag(a);
    for (int b = a + 1; b < dim; ++b) {
      const CVector ea = CVector::Unit(dim, a);
      const CVector eb = CVector::Unit(dim, b);
      const double re = 0.5 * (real_value(ea + eb) - diag(a) - diag(b));
      const double im = -0.5 * (real_value(ea + kI * eb) - diag(a) - diag(b));
      h(a, b) = Complex(re, im);
      h(b, a) = Complex(re, -im);
    }
  }

  // Closed form i conj(M^T J conj(M) - J) must agree with the polarized matrix.
  const CMatrix closed = kI * (mm.transpose() * j * mm.conjugate() - j).conjugate();
  if ((closed - h).cwiseAbs().maxCoeff() > 1e-11 * scale)
    throw CrossCheckError("positivity_defect: polarized form disagrees with closed form");

  return linalg::eig_hermitian(h).values(0);
}

CMatrix a_phi_expanded(const weights::QuadraticWeight& phi) {
  const int n = phi.dim();
  const CMatrix& l = phi.levi();
  const CMatrix& p = phi.pluriharmonic();
  const CMatrix linv_bar = linalg::inverse(l).conjugate();
  const CMatrix pl_bar = (p * linalg::inverse(l)).conjugate();
  CMatrix out(2 * n, 2 * n);
  out.topLeftCorner(n, n) = -linv_bar * p;
  out.topRightCorner(n, n) = kI * linv_bar;
  out.bottomLeftCorner(n, n) = kI * (l - pl_bar * p);
  out.bottomRightCorner(n, n) = -pl_bar;
  return out;
}

CanonicalMap a_phi(const weights::QuadraticWeight& phi) {
  const int n = phi.dim();
  CMatrix factor = CMatrix::Zero(2 * n, 2 * n);
  factor.topLeftCorner(n, n) = kI * phi.levi();
  factor.bottomLeftCorner(n, n) = kI * phi.pluriharmonic();
  factor.bottomRightCorner(n, n) = CMatrix::Identity(n, n);
  CMatrix swap = CMatrix::Zero(2 * n, 2 * n);
  swap.topRightCorner(n, n) = CMatrix::Identity(n, n);
  swap.bottomLeftCorner(n, n) = CMatrix::Identity(n, n);

  CanonicalMap out(linalg::inverse(factor).conjugate() * swap * factor);
  const CMatrix expanded = a_phi_expanded(phi);
  const double scale = std::max(1.0, linalg::norm2(expanded));
  if ((out.matrix() - expanded).cwiseAbs().maxCoeff() > 1e-11 * scale)
    throw CrossCheckError("a_phi: factored and expanded constructions disagree");
  require_canonical(out, "a_phi");
  return out;
}

CanonicalMap skew_map(const CMatrix& t) {
  linalg::require_square(t, "skew_map");
  linalg::require_finite(t, "skew_map");
  const auto n = t.rows();
  if (t.norm() > 0.0 && linalg::symmetric_defect(t) > 1e-10)
    throw InputError("skew_map: T is not symmetric");
  CMatrix m = CMatrix::Identity(2 * n, 2 * n);
  m.bottomLeftCorner(n, n) = linalg::symmetric_part(t);
  CanonicalMap out(std::move(m));
  require_canonical(out, "skew_map");
  return out;
}

CanonicalMap scale_map(const CMatrix& g) {
  linalg::require_square(g, "scale_map");
  const auto n = g.rows();
  if (!(linalg::condition_estimate(g) < linalg::kMaxCondition))
    throw InputError("scale_map: G is singular");
  CMatrix m = CMatrix::Zero(2 * n, 2 * n);
  m.topLeftCorner(n, n) = linalg::inverse(g);
  m.bottomRightCorner(n, n) = g.transpose();
  CanonicalMap out(std::move(m));
  require_canonical(out, "scale_map");
  return out;
}

CanonicalMap bargmann0_map(int n) {
  if (n <= 0) throw InputError("bargmann0_map: dimension must be positive");
  const double s = 1.0 / std::sqrt(2.0);
  CMatrix m(2 * n, 2 * n);
  const CMatrix id = CMatrix::Identity(n, n);
  m.topLeftCorner(n, n) = s * id;
  m.topRightCorner(n, n) = -kI * s * id;
  m.bottomLeftCorner(n, n) = -kI * s * id;
  m.bottomRightCorner(n, n) = s * id;
  return CanonicalMap(std::move(m));
}

CanonicalMap bargmann_map(const weights::QuadraticWeight& phi) {
  const int n = phi.dim();
  const CanonicalMap out = skew_map(-kI * phi.pluriharmonic()) *
                           scale_map(linalg::hermitian_sqrt_pd(phi.levi())) * bargmann0_map(n);
  require_canonical(out, "bargmann_map");

  // conj(B) B^{-1} must reproduce A_Phi.
  const CMatrix a = a_phi(phi).matrix();
  const CMatrix via_b = out.matrix().conjugate() * linalg::inverse(out.matrix());
  if ((a - via_b).cwiseAbs().maxCoeff() > 1e-10 * std::max(1.0, linalg::norm2(a)))
    throw CrossCheckError("bargmann_map: conj(B) B^{-1} differs from A_Phi");
  return out;
}

PhasePoint adjoint_shift_vector(const weights::QuadraticWeight& phi, const PhasePoint& y) {
  if (y.dim() != phi.dim()) throw InputError("adjoint_shift_vector: dimension mismatch");
  const CVector ay = a_phi(phi).matrix() * y.stacked();
  return PhasePoint::from_stacked(-ay.conjugate());
}

}  // namespace hphi::symplectic
