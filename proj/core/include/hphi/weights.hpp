#pragma once

// Real-quadratic weights Phi(x) = 1/2 L x.conj(x) + 1/2 Re(P x.x) on C^n,
// their real-variable form, ordering, and the weight changes induced by
// multiplication by Gaussians, linear changes of variables and phase-space
// shifts.

#include <optional>

#include "hphi/types.hpp"

namespace hphi::weights {

/// Immutable strictly plurisubharmonic quadratic weight.
class QuadraticWeight {
 public:
  /// Validates L Hermitian positive definite and P symmetric (both within
  /// 1e-10 relative) and stores their symmetrized parts.
  static QuadraticWeight make(const CMatrix& levi, const CMatrix& pluriharmonic);
  /// Phi_0(x) = |x|^2 / 2.
  static QuadraticWeight standard(int n);
  /// 1/2 a |x|^2 + 1/2 Re(b x^2) in dimension one.
  static QuadraticWeight one_dimensional(double a, Complex b);

  int dim() const { return static_cast<int>(levi_.rows()); }
  const CMatrix& levi() const { return levi_; }
  const CMatrix& pluriharmonic() const { return pluri_; }

 private:
  QuadraticWeight(CMatrix l, CMatrix p) : levi_(std::move(l)), pluri_(std::move(p)) {}
  CMatrix levi_;
  CMatrix pluri_;
};

/// Phi(x) + linear_x . x + linear_xbar . conj(x) + constant, real-valued
/// (linear_xbar == conj(linear_x)).
struct AffineWeight {
  QuadraticWeight quad;
  CVector linear_x;
  CVector linear_xbar;
  double constant = 0.0;

  AffineWeight(QuadraticWeight q);  // NOLINT(google-explicit-constructor): a quadratic weight is affine
  AffineWeight(QuadraticWeight q, CVector lx, CVector lxbar, double c);

  int dim() const { return quad.dim(); }
  /// Largest |coefficient| of the affine part.
  double affine_magnitude() const;
};

/// Phi(x) = 1/2 v.Qv with x = x1 + i x2 and v = (x1, x2).
struct RealForm {
  RMatrix q;
};

double evaluate(const QuadraticWeight& phi, const CVector& x);
double evaluate(const AffineWeight& phi, const CVector& x);

RealForm real_form(const QuadraticWeight& phi);
/// Inverse of real_form. Throws InputError when the Levi part is not positive definite.
QuadraticWeight from_real_form(const RMatrix& q);

enum class Ordering { Strict, NonStrict, Incomparable };

const char* to_string(Ordering o);

struct CompareOptions {
  /// pd_tol = rel_tol * (1 + ||Q1|| + ||Q2||).
  double rel_tol = 1e-9;
};

struct Comparison {
  Ordering ordering = Ordering::NonStrict;
  double margin = 0.0;     // min eigenvalue of Q2 - Q1
  double tolerance = 0.0;  // pd_tol used for the classification
  RVector direction;       // unit eigenvector for `margin`, in real coordinates
  /// ||P~|| of the reduced pair when L2 - L1 is invertible (cross-check route).
  std::optional<double> tilde_p_norm;
  /// Whether L - 1 of the reduced pair is positive definite (cross-check route).
  std::optional<bool> reduced_levi_gap_pd;
};

/// Decides Phi2 >= Phi1 on the real form; cross-checks against the P~
/// criterion where it is defined and throws CrossCheckError on disagreement.
Comparison compare(const QuadraticWeight& phi1, const QuadraticWeight& phi2,
                   const CompareOptions& opts = {});

/// Reduction of the pair (Phi1, Phi2) to (Phi0, Phi) by the unitary
/// U = V~_G W_{i P1}, G = L1^{-1/2}.
struct Reduction {
  QuadraticWeight reduced;
  CMatrix scale;  // G = L1^{-1/2}
  CMatrix skew;   // i P1
};

Reduction reduce_to_standard(const QuadraticWeight& phi1, const QuadraticWeight& phi2);

/// Phi_T(x) = Phi(x) + 1/2 Re(x.(iT)x).
QuadraticWeight transform_T(const QuadraticWeight& phi, const CMatrix& t);
/// Phi_G(x) = Phi(Gx).
QuadraticWeight transform_G(const QuadraticWeight& phi, const CMatrix& g);
/// Phi_Y(x) = Phi(x - y) + Im(1/2 y.eta - eta.x).
AffineWeight transform_Y(const QuadraticWeight& phi, const PhasePoint& y);

/// The point (y, -2i Phi'_x(y)) of Lambda_Phi above y.
PhasePoint lambda_point(const QuadraticWeight& phi, const CVector& y);

}  // namespace hphi::weights
