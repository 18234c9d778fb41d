#pragma once

// Linear phase-space machinery on C^{2n}: the symplectic form, canonical
// maps and their positivity, the shift-adjoint matrix A_Phi, and the
// generator maps W_T, V_G, B_0 with the full Bargmann map of a weight.

#include "hphi/types.hpp"
#include "hphi/weights.hpp"

namespace hphi::symplectic {

/// A 2n x 2n complex matrix with blocks [[A, B], [C, D]]. Construction checks
/// shape only; use is_canonical for the symplectic property.
class CanonicalMap {
 public:
  explicit CanonicalMap(CMatrix m);
  static CanonicalMap identity(int n);

  int dim() const { return n_; }
  const CMatrix& matrix() const { return m_; }
  CMatrix a() const { return m_.topLeftCorner(n_, n_); }
  CMatrix b() const { return m_.topRightCorner(n_, n_); }
  CMatrix c() const { return m_.bottomLeftCorner(n_, n_); }
  CMatrix d() const { return m_.bottomRightCorner(n_, n_); }

  PhasePoint apply(const PhasePoint& x) const;
  CanonicalMap operator*(const CanonicalMap& o) const;
  CanonicalMap inverse() const;
  CanonicalMap conjugate() const;

 private:
  int n_ = 0;
  CMatrix m_;
};

/// sigma((x, xi), (y, eta)) = xi.y - eta.x (bilinear, no conjugation).
Complex symplectic_form(const PhasePoint& x, const PhasePoint& y);

/// The matrix J with sigma(X, Y) = X^T J Y.
CMatrix symplectic_matrix(int n);

struct CanonicalCheck {
  bool canonical = false;
  double defect = 0.0;  // max |sigma(M e_i, M e_j) - sigma(e_i, e_j)|
};

CanonicalCheck is_canonical(const CanonicalMap& m);

/// Least eigenvalue of the Hermitian form
/// X -> -i (sigma(MX, conj(MX)) - sigma(X, conj(X))). M is positive iff it
/// is >= -tol.
double positivity_defect(const CanonicalMap& m);

/// A_Phi, computed from its factored definition and cross-checked against
/// the expanded block formula.
CanonicalMap a_phi(const weights::QuadraticWeight& phi);
/// Expanded block formula for A_Phi (the cross-check route, exposed for tests).
CMatrix a_phi_expanded(const weights::QuadraticWeight& phi);

/// W_T = [[1, 0], [T, 1]].
CanonicalMap skew_map(const CMatrix& t);
/// V_G = [[G^{-1}, 0], [0, G^T]].
CanonicalMap scale_map(const CMatrix& g);
/// B_0 = 2^{-1/2} [[1, -i], [-i, 1]].
CanonicalMap bargmann0_map(int n);
/// B = W_{-iP} V_{L^{1/2}} B_0.
CanonicalMap bargmann_map(const weights::QuadraticWeight& phi);

/// Phase-space vector Z with S_Y* = S_Z on H_Phi: Z = -conj(A_Phi Y).
PhasePoint adjoint_shift_vector(const weights::QuadraticWeight& phi, const PhasePoint& y);

}  // namespace hphi::symplectic
