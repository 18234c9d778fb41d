#include "hphi/metaplectic.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hphi/linalg.hpp"

namespace hphi::metaplectic {

namespace {

constexpr double kSymTol = 1e-10;

CMatrix checked_symmetric(const CMatrix& t, const char* what) {
  linalg::require_square(t, what);
  linalg::require_finite(t, what);
  if (t.norm() > 0.0 && linalg::symmetric_defect(t) > kSymTol)
    throw InputError(std::string(what) + ": T is not symmetric");
  return linalg::symmetric_part(t);
}

CMatrix j_real(int n) {  // x = J v for v = (Re x, Im x)
  CMatrix j(n, 2 * n);
  j << CMatrix::Identity(n, n), kI * CMatrix::Identity(n, n);
  return j;
}

InnerProduct to_inner(const GaussianIntegral& gi, Complex prefactor) {
  InnerProduct out;
  out.in_space = gi.integrable;
  out.min_eigenvalue = gi.min_eigenvalue;
  if (!gi.integrable) return out;
  out.log_value = gi.log_value + (prefactor == 0.0 ? Complex(-INFINITY, 0.0) : std::log(prefactor));
  out.value = prefactor * gi.value;
  return out;
}

}  // namespace

GaussianPacket::GaussianPacket(Complex amplitude, PhasePoint center, CMatrix t)
    : amplitude_(amplitude), center_(std::move(center)), t_(checked_symmetric(t, "GaussianPacket")) {
  if (t_.rows() != center_.dim()) throw InputError("GaussianPacket: T and center dimensions differ");
  if (!std::isfinite(amplitude_.real()) || !std::isfinite(amplitude_.imag()))
    throw InputError("GaussianPacket: amplitude is not finite");
  linalg::require_finite(center_.stacked(), "GaussianPacket");
}

GaussianPacket GaussianPacket::centered(const CMatrix& t, Complex amplitude) {
  return {amplitude, PhasePoint::zero(static_cast<int>(t.rows())), t};
}

GaussianPacket GaussianPacket::constant(int n, Complex amplitude) {
  return {amplitude, PhasePoint::zero(n), CMatrix::Zero(n, n)};
}

Complex GaussianPacket::evaluate(const CVector& x) const {
  if (x.size() != dim()) throw InputError("GaussianPacket::evaluate: dimension mismatch");
  const CVector& y = center_.x;
  const CVector& eta = center_.xi;
  const Complex phase = -0.5 * (y.transpose() * eta)(0, 0) + (eta.transpose() * x)(0, 0);
  const CVector d = x - y;
  const Complex gauss = 0.5 * (d.transpose() * t_ * d)(0, 0);
  return amplitude_ * unit_phase(phase) * unit_phase(gauss);
}

double GaussianPacket::log_abs(const CVector& x) const {
  if (x.size() != dim()) throw InputError("GaussianPacket::log_abs: dimension mismatch");
  const CVector& y = center_.x;
  const CVector& eta = center_.xi;
  const Complex phase = -0.5 * (y.transpose() * eta)(0, 0) + (eta.transpose() * x)(0, 0);
  const CVector d = x - y;
  const Complex gauss = 0.5 * (d.transpose() * t_ * d)(0, 0);
  return std::log(std::abs(amplitude_)) - 2.0 * kPi * (phase + gauss).imag();
}

CVector GaussianPacket::beta() const { return center_.xi - t_ * center_.x; }

Complex GaussianPacket::offset() const {
  const CVector& y = center_.x;
  const Complex yty = (y.transpose() * t_ * y)(0, 0);
  const Complex yeta = (y.transpose() * center_.xi)(0, 0);
  return 2.0 * kPi * kI * (0.5 * yty - 0.5 * yeta);
}

Complex GaussianPacket::log_evaluate(const CVector& x) const {
  if (x.size() != dim()) throw InputError("GaussianPacket::log_evaluate: dimension mismatch");
  const Complex quad = (x.transpose() * t_ * x)(0, 0);
  const Complex lin = (beta().transpose() * x)(0, 0);
  return std::log(amplitude_) + kPi * kI * quad + 2.0 * kPi * kI * lin + offset();
}

ShiftComposition shift_compose(const PhasePoint& x, const PhasePoint& y) {
  if (x.dim() != y.dim()) throw InputError("shift_compose: dimension mismatch");
  return {unit_phase(0.5 * symplectic::symplectic_form(x, y)), x + y};
}

GaussianPacket apply_shift(const PhasePoint& y, const GaussianPacket& f) {
  const auto comp = shift_compose(y, f.center());
  return {f.amplitude() * comp.phase, comp.sum, f.t()};
}

MetaplecticWord::MetaplecticWord(int n) : n_(n), map_(symplectic::CanonicalMap::identity(n)) {
  if (n <= 0) throw InputError("MetaplecticWord: dimension must be positive");
}

symplectic::CanonicalMap MetaplecticWord::atom_map(const Atom& a, int n) {
  switch (a.kind) {
    case AtomKind::Skew:
      return symplectic::skew_map(a.matrix);
    case AtomKind::Scale:
      return symplectic::scale_map(a.matrix);
    case AtomKind::Barg0:
      return symplectic::bargmann0_map(n);
    case AtomKind::Barg0Inv:
      return symplectic::bargmann0_map(n).conjugate();  // B0^{-1} = conj(B0)
    case AtomKind::Scalar:
      return symplectic::CanonicalMap::identity(n);
  }
  throw InputError("MetaplecticWord: unknown atom");
}

void MetaplecticWord::push(Atom a) {
  if (a.kind == AtomKind::Skew || a.kind == AtomKind::Scale) {
    if (a.matrix.rows() != n_ || a.matrix.cols() != n_)
      throw InputError("MetaplecticWord: atom matrix has the wrong shape");
  }
  map_ = atom_map(a, n_) * map_;
  atoms_.push_back(std::move(a));
}

MetaplecticWord& MetaplecticWord::skew(const CMatrix& t) {
  push({AtomKind::Skew, t, 1.0});
  return *this;
}
MetaplecticWord& MetaplecticWord::scale(const CMatrix& g) {
  push({AtomKind::Scale, g, 1.0});
  return *this;
}
MetaplecticWord& MetaplecticWord::barg0() {
  push({AtomKind::Barg0, CMatrix(), 1.0});
  return *this;
}
MetaplecticWord& MetaplecticWord::barg0_inv() {
  push({AtomKind::Barg0Inv, CMatrix(), 1.0});
  return *this;
}
MetaplecticWord& MetaplecticWord::scalar(Complex c) {
  if (!std::isfinite(c.real()) || !std::isfinite(c.imag()) || c == 0.0)
    throw InputError("MetaplecticWord: scalar must be finite and nonzero");
  push({AtomKind::Scalar, CMatrix(), c});
  return *this;
}

MetaplecticWord MetaplecticWord::then(const MetaplecticWord& next) const {
  if (next.n_ != n_) throw InputError("MetaplecticWord: concatenating words of different dimension");
  MetaplecticWord out = *this;
  for (const auto& a : next.atoms_) out.push(a);
  return out;
}

WordAction apply_word(const MetaplecticWord& w, const GaussianPacket& f) {
  if (f.dim() != w.dim()) throw InputError("apply_word: dimension mismatch");
  const int n = w.dim();
  Complex amp = f.amplitude();
  CMatrix t = f.t();
  CVector center = f.center().stacked();
  std::vector<int> signs;
  signs.reserve(w.atoms().size());

  for (std::size_t k = 0; k < w.atoms().size(); ++k) {
    const Atom& atom = w.atoms()[k];
    if (atom.kind == AtomKind::Scalar) {
      amp *= atom.scalar;
      signs.push_back(1);
      continue;
    }
    const auto m = MetaplecticWord::atom_map(atom, n);
    const CMatrix apbt = m.a() + m.b() * t;
    if (!(linalg::condition_estimate(apbt) < linalg::kMaxCondition))
      throw SingularAtomError(k, "apply_word: A + BT is singular at atom " + std::to_string(k));
    const CMatrix inv = linalg::inverse(apbt);

    Complex root{1.0, 0.0};
    for (const auto& p : linalg::eig_general(apbt).pairs) root *= std::sqrt(p.value);
    const Complex principal = std::sqrt(linalg::determinant(apbt));
    const int sign = std::abs(root - principal) <= std::abs(root + principal) ? 1 : -1;
    signs.push_back(sign);

    amp /= root;
    const CMatrix t_new = (m.c() + m.d() * t) * inv;
    const double scale = std::max(1.0, t_new.cwiseAbs().maxCoeff());
    if ((t_new - t_new.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale)
      throw CrossCheckError("apply_word: T' lost symmetry at atom " + std::to_string(k));
    t = linalg::symmetric_part(t_new);
    center = m.matrix() * center;
  }
  return {GaussianPacket(amp, PhasePoint::from_stacked(center), t), std::move(signs)};
}

MetaplecticWord bargmann_word(const weights::QuadraticWeight& phi, bool unitary_normalization) {
  const int n = phi.dim();
  MetaplecticWord w(n);
  w.barg0().scale(linalg::hermitian_sqrt_pd(phi.levi())).skew(-kI * phi.pluriharmonic());
  if (unitary_normalization) {
    const double det_l = linalg::determinant(phi.levi()).real();
    w.scalar(std::pow(2.0, 0.5 * n) * std::pow(det_l, 0.25));
  }
  return w;
}

WordAction bargmann_transform_gaussian(const weights::QuadraticWeight& phi, const GaussianPacket& f,
                                       bool unitary_normalization) {
  if (f.dim() != phi.dim()) throw InputError("bargmann_transform_gaussian: dimension mismatch");
  const RMatrix im_t = f.t().imag();
  if (Eigen::SelfAdjointEigenSolver<RMatrix>(0.5 * (im_t + im_t.transpose()), Eigen::EigenvaluesOnly)
          .eigenvalues()(0) <= 0.0)
    throw InputError("bargmann_transform_gaussian: Im T is not positive definite");

  const MetaplecticWord w = bargmann_word(phi, unitary_normalization);
  const CMatrix b = symplectic::bargmann_map(phi).matrix();
  if ((w.map().matrix() - b).cwiseAbs().maxCoeff() > 1e-10 * std::max(1.0, linalg::norm2(b)))
    throw CrossCheckError("bargmann_transform_gaussian: word map differs from the Bargmann map");
  return apply_word(w, f);
}

ExponentForm hphi_exponent(const GaussianPacket& f, const GaussianPacket& g,
                           const weights::AffineWeight& phi) {
  const int n = phi.dim();
  if (f.dim() != n || g.dim() != n) throw InputError("hphi_inner_product: dimension mismatch");
  const CMatrix j = j_real(n);
  const CMatrix jb = j.conjugate();
  const RMatrix q = weights::real_form(phi.quad).q;

  ExponentForm e;
  e.a = 2.0 * q.cast<Complex>() - kI * j.transpose() * f.t() * j +
        kI * jb.transpose() * g.t().conjugate() * jb;
  e.b = kI * j.transpose() * f.beta() - kI * jb.transpose() * g.beta().conjugate() -
        2.0 * (j.transpose() * phi.linear_x + jb.transpose() * phi.linear_xbar);
  e.c = f.offset() + std::conj(g.offset()) - 4.0 * kPi * phi.constant;
  return e;
}

InnerProduct hphi_inner_product(const GaussianPacket& f, const GaussianPacket& g,
                                const weights::AffineWeight& phi) {
  const ExponentForm e = hphi_exponent(f, g, phi);
  return to_inner(gaussian_integral(e.a, e.b, e.c), f.amplitude() * std::conj(g.amplitude()));
}

std::optional<double> hphi_norm(const GaussianPacket& f, const weights::AffineWeight& phi) {
  const InnerProduct ip = hphi_inner_product(f, f, phi);
  if (!ip.in_space) return std::nullopt;
  return std::exp(0.5 * ip.log_value.real());
}

bool in_space(const GaussianPacket& f, const weights::AffineWeight& phi, double* margin) {
  const ExponentForm e = hphi_exponent(f, f, phi);
  const auto gi = gaussian_integral(e.a, CVector::Zero(e.b.size()), 0.0);
  if (margin) *margin = gi.min_eigenvalue;
  return gi.integrable;
}

InnerProduct l2_inner_product(const GaussianPacket& f, const GaussianPacket& g) {
  if (f.dim() != g.dim()) throw InputError("l2_inner_product: dimension mismatch");
  const CMatrix a = -kI * (f.t() - g.t().conjugate());
  const CVector b = kI * (f.beta() - g.beta().conjugate());
  const Complex c = f.offset() + std::conj(g.offset());
  return to_inner(gaussian_integral(a, b, c), f.amplitude() * std::conj(g.amplitude()));
}

std::optional<double> l2_norm(const GaussianPacket& f) {
  const InnerProduct ip = l2_inner_product(f, f);
  if (!ip.in_space) return std::nullopt;
  return std::exp(0.5 * ip.log_value.real());
}

}  // namespace hphi::metaplectic
