#pragma once

// Random generators and small helpers shared by the test binaries.

#include <algorithm>
#include <cmath>
#include <random>
#include <utility>

#include <Eigen/Eigenvalues>

#include "hphi/metaplectic.hpp"
#include "hphi/types.hpp"
#include "hphi/weights.hpp"

namespace hphi::testing {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline Complex random_complex(Rng& rng, double scale = 1.0) {
  std::normal_distribution<double> n(0.0, scale);
  return {n(rng), n(rng)};
}

inline CMatrix random_matrix(int rows, int cols, Rng& rng, double scale = 1.0) {
  CMatrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = random_complex(rng, scale);
  return m;
}

inline CVector random_vector(int n, Rng& rng, double scale = 1.0) {
  return random_matrix(n, 1, rng, scale).col(0);
}

inline CMatrix random_unitary(int n, Rng& rng) {
  Eigen::HouseholderQR<CMatrix> qr(random_matrix(n, n, rng));
  return qr.householderQ() * CMatrix::Identity(n, n);
}

/// Hermitian with eigenvalues uniform in [lo, hi].
inline CMatrix random_hermitian(int n, Rng& rng, double lo, double hi) {
  const CMatrix u = random_unitary(n, rng);
  RVector ev(n);
  for (int i = 0; i < n; ++i) ev(i) = uniform(rng, lo, hi);
  const CMatrix h = u * ev.cast<Complex>().asDiagonal() * u.adjoint();
  return 0.5 * (h + h.adjoint());
}

inline CMatrix random_symmetric(int n, Rng& rng, double scale = 1.0) {
  const CMatrix a = random_matrix(n, n, rng, scale);
  return 0.5 * (a + a.transpose());
}

/// Real symmetric with eigenvalues uniform in [lo, hi].
inline RMatrix random_real_symmetric(int m, Rng& rng, double lo, double hi) {
  RMatrix a(m, m);
  std::normal_distribution<double> nd;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) a(i, j) = nd(rng);
  Eigen::HouseholderQR<RMatrix> qr(a);
  const RMatrix q = qr.householderQ() * RMatrix::Identity(m, m);
  RVector ev(m);
  for (int i = 0; i < m; ++i) ev(i) = uniform(rng, lo, hi);
  const RMatrix s = q * ev.asDiagonal() * q.transpose();
  return 0.5 * (s + s.transpose());
}

inline weights::QuadraticWeight random_weight(int n, Rng& rng, double p_scale = 0.7) {
  return weights::QuadraticWeight::make(random_hermitian(n, rng, 0.5, 3.0),
                                        random_symmetric(n, rng, p_scale));
}

using WeightPair = std::pair<weights::QuadraticWeight, weights::QuadraticWeight>;

/// Phi2 = Phi1 + a weight whose real form has eigenvalues in [gap_lo, gap_hi].
inline WeightPair random_strict_pair(int n, Rng& rng, double gap_lo = 0.1, double gap_hi = 2.0) {
  const auto phi1 = random_weight(n, rng);
  const RMatrix dq = random_real_symmetric(2 * n, rng, gap_lo, gap_hi);
  return {phi1, weights::from_real_form(weights::real_form(phi1).q + dq)};
}

/// Real-form gap with at least one eigenvalue <= -0.2, rejecting draws that
/// leave L2 indefinite.
inline WeightPair random_incomparable_pair(int n, Rng& rng) {
  while (true) {
    const auto phi1 = random_weight(n, rng);
    RMatrix dq = random_real_symmetric(2 * n, rng, -1.0, 1.5);
    Eigen::SelfAdjointEigenSolver<RMatrix> es(dq);
    if (es.eigenvalues()(0) > -0.2) dq -= (es.eigenvalues()(0) + 0.5) * RMatrix::Identity(2 * n, 2 * n);
    const RMatrix q2 = weights::real_form(phi1).q + dq;
    const RMatrix l2 = 0.5 * (q2.topLeftCorner(n, n) + q2.bottomRightCorner(n, n));
    const RMatrix li = 0.5 * (q2.bottomLeftCorner(n, n) - q2.topRightCorner(n, n));
    CMatrix l(n, n);
    l.real() = l2;
    l.imag() = li;
    Eigen::SelfAdjointEigenSolver<CMatrix> el(0.5 * (l + l.adjoint()));
    if (el.eigenvalues()(0) < 0.2) continue;
    return {phi1, weights::from_real_form(q2)};
  }
}

inline PhasePoint random_point(int n, Rng& rng, double scale = 0.5) {
  return {random_vector(n, rng, scale), random_vector(n, rng, scale)};
}

/// Packet amplitude * S_Y g_T in H_Phi with margin, T near -iP.
inline metaplectic::GaussianPacket random_packet(const weights::AffineWeight& phi, Rng& rng, bool shifted = true) {
  const int n = phi.dim();
  while (true) {
    const CMatrix t = -kI * phi.quad.pluriharmonic() + random_symmetric(n, rng, 0.25);
    const metaplectic::GaussianPacket g(random_complex(rng), shifted ? random_point(n, rng) : PhasePoint::zero(n), t);
    double margin = 0.0;
    if (metaplectic::in_space(g, phi, &margin) && margin > 0.05) return g;
  }
}

/// g_T in L^2(R^n): Im T positive definite.
inline CMatrix random_l2_t(int n, Rng& rng) {
  CMatrix t(n, n);
  t.real() = random_real_symmetric(n, rng, -1.0, 1.0);
  t.imag() = random_real_symmetric(n, rng, 0.3, 2.0);
  return t;
}

/// Closed forms for Phi1 = Phi0, Phi2 = 1/2 a|x|^2 + 1/2 Re(b x^2).
inline double family_norm(double a, double babs) {
  const double s = 1.0 + a * a - babs * babs;
  return std::pow((s - std::sqrt(s * s - 4.0 * a * a)) / (2.0 * a * a), 0.25);
}

inline Complex family_tau(double a, Complex b) {
  if (std::abs(b) == 0.0) return 0.0;
  const double s = 1.0 + a * a - std::norm(b);
  const double r = std::sqrt(std::max(0.0, s * s - 4.0 * a * a));
  return -Complex(0.0, 1.0) * (1.0 - a * a + std::norm(b) + r) / (2.0 * std::conj(b));
}

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

inline double max_abs(const CMatrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace hphi::testing
