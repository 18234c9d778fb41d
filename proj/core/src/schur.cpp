#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "hphi/linalg.hpp"

namespace hphi::linalg {

namespace {

// Swap the adjacent diagonal entries k, k+1 of the upper-triangular r by a
// Givens rotation, updating the Schur vectors u.
void swap_adjacent(CMatrix& r, CMatrix& u, Eigen::Index k) {
  const Complex a = r(k, k);
  const Complex b = r(k + 1, k + 1);
  const Complex c = r(k, k + 1);
  // Eigenvector of [[a, c], [0, b]] for eigenvalue b.
  Complex p = c;
  Complex q = b - a;
  const double len = std::hypot(std::abs(p), std::abs(q));
  if (len == 0.0) return;
  p /= len;
  q /= len;
  Eigen::Matrix2cd g;
  g << p, -std::conj(q), q, std::conj(p);

  r.middleRows(k, 2) = g.adjoint() * r.middleRows(k, 2);
  r.middleCols(k, 2) = r.middleCols(k, 2) * g;
  u.middleCols(k, 2) = u.middleCols(k, 2) * g;
  r(k + 1, k) = Complex(0.0, 0.0);
}

}  // namespace

OrderedSchur ordered_schur(const CMatrix& m, const std::function<bool(Complex)>& select) {
  require_square(m, "ordered_schur");
  require_finite(m, "ordered_schur");
  OrderedSchur out;
  const Eigen::Index n = m.rows();
  if (n == 0) return out;

  Eigen::ComplexSchur<CMatrix> schur(m, /*computeU=*/true);
  if (schur.info() != Eigen::Success) throw NumericalError("ordered_schur: QR iteration failed");
  CMatrix r = schur.matrixT();
  CMatrix u = schur.matrixU();

  Eigen::Index head = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!select(r(i, i))) continue;
    for (Eigen::Index k = i - 1; k >= head; --k) swap_adjacent(r, u, k);
    ++head;
  }

  out.selected = static_cast<int>(head);
  const CMatrix uk = u.leftCols(head);
  const double scale = std::max(norm2(m), 1e-300);
  out.invariance_residual =
      head > 0 ? norm2(m * uk - uk * r.topLeftCorner(head, head)) / scale : 0.0;
  out.unitary = std::move(u);
  out.triangular = std::move(r);
  return out;
}

}  // namespace hphi::linalg
