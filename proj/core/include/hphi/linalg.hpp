#pragma once

// Dense complex linear algebra for the small matrices (2n <= 16) that carry
// weights, canonical maps and Gaussian exponents.

#include <functional>
#include <string_view>
#include <vector>

#include "hphi/types.hpp"

namespace hphi::linalg {

/// Relative Hermitian tolerance applied to user-supplied matrices.
inline constexpr double kHermTol = 1e-10;
/// Condition-number ceiling for inverse/solve.
inline constexpr double kMaxCondition = 1e12;

/// Throws InputError naming `what` if any entry is NaN or infinite.
void require_finite(const CMatrix& m, std::string_view what);
void require_finite(const CVector& v, std::string_view what);
void require_square(const CMatrix& m, std::string_view what);

/// Spectral (2-) norm; zero for empty matrices.
double norm2(const CMatrix& m);
/// ||M - M*|| / max(||M||, tiny).
double hermitian_defect(const CMatrix& m);
/// ||M - M^T|| / max(||M||, tiny).
double symmetric_defect(const CMatrix& m);

inline CMatrix hermitian_part(const CMatrix& m) { return 0.5 * (m + m.adjoint()); }
inline CMatrix symmetric_part(const CMatrix& m) { return 0.5 * (m + m.transpose()); }

struct EigenPair {
  Complex value;
  CVector vector;  // unit Euclidean length
};

struct GeneralEigen {
  std::vector<EigenPair> pairs;
  double max_residual = 0.0;  // max ||Mv - lambda v|| / ||M||
  /// Condition number of the eigenvector matrix. Large values flag
  /// near-defective spectra (Jordan blocks); they are reported, not refused.
  double eigenvector_condition = 1.0;
};

/// All eigenpairs of a square matrix, with algebraic multiplicity.
GeneralEigen eig_general(const CMatrix& m);

struct HermitianEigen {
  RVector values;   // ascending
  CMatrix vectors;  // orthonormal columns
};

/// Eigendecomposition of a Hermitian matrix (within `herm_tol` relative).
HermitianEigen eig_hermitian(const CMatrix& h, double herm_tol = kHermTol);

/// Principal square root of a Hermitian positive definite matrix.
CMatrix hermitian_sqrt_pd(const CMatrix& h);
/// Inverse of the principal square root.
CMatrix hermitian_inv_sqrt_pd(const CMatrix& h);

/// 1-norm condition estimate ||M||_1 ||M^{-1}||_1, +inf when singular.
double condition_estimate(const CMatrix& m);
Complex determinant(const CMatrix& m);
CMatrix inverse(const CMatrix& m);
CVector solve(const CMatrix& m, const CVector& b);

/// Largest singular value.
double operator_norm(const CMatrix& m);

/// Ordered complex Schur form M = U R U* with the eigenvalues selected by the
/// predicate moved to the leading `selected` diagonal positions. The first
/// `selected` columns of U span the corresponding invariant subspace.
struct OrderedSchur {
  CMatrix unitary;
  CMatrix triangular;
  int selected = 0;
  double invariance_residual = 0.0;  // ||M U_k - U_k R_kk|| / ||M||
};

OrderedSchur ordered_schur(const CMatrix& m, const std::function<bool(Complex)>& select);

}  // namespace hphi::linalg
