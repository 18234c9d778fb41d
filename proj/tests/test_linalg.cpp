#include <gtest/gtest.h>

#include <algorithm>

#include "hphi/linalg.hpp"
#include "support.hpp"

using namespace hphi;
using namespace hphi::testing;

namespace {

// Characteristic polynomial coefficients c_0..c_n (monic, c_n = 1) by the
// Faddeev-LeVerrier recursion.
std::vector<Complex> char_poly(const CMatrix& a) {
  const auto n = a.rows();
  std::vector<Complex> c(n + 1);
  c[n] = 1.0;
  CMatrix m = CMatrix::Zero(n, n);
  for (Eigen::Index k = 1; k <= n; ++k) {
    m = a * m + c[n - k + 1] * CMatrix::Identity(n, n);
    c[n - k] = -(a * m).trace() / static_cast<double>(k);
  }
  return c;
}

// Durand-Kerner simultaneous root iteration, then Newton polish.
std::vector<Complex> poly_roots(const std::vector<Complex>& c) {
  const auto n = c.size() - 1;
  auto p = [&](Complex z) {
    Complex v = c[n];
    for (std::size_t k = n; k-- > 0;) v = v * z + c[k];
    return v;
  };
  auto dp = [&](Complex z) {
    Complex v = static_cast<double>(n) * c[n];
    for (std::size_t k = n - 1; k >= 1; --k) v = v * z + static_cast<double>(k) * c[k];
    return v;
  };
  std::vector<Complex> z(n);
  for (std::size_t i = 0; i < n; ++i) z[i] = std::pow(Complex(0.4, 0.9), static_cast<double>(i));
  for (int it = 0; it < 2000; ++it) {
    for (std::size_t i = 0; i < n; ++i) {
      Complex den = 1.0;
      for (std::size_t j = 0; j < n; ++j)
        if (j != i) den *= z[i] - z[j];
      z[i] -= p(z[i]) / den;
    }
  }
  for (auto& r : z)
    for (int it = 0; it < 3; ++it) {
      const Complex d = dp(r);
      if (std::abs(d) > 0) r -= p(r) / d;
    }
  return z;
}

bool by_re_im(Complex a, Complex b) {
  return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
}

// Max distance after greedy nearest matching.
double multiset_distance(std::vector<Complex> a, std::vector<Complex> b) {
  double worst = 0.0;
  for (const auto& x : a) {
    auto it = std::min_element(b.begin(), b.end(),
                               [&](Complex p, Complex q) { return std::abs(p - x) < std::abs(q - x); });
    worst = std::max(worst, std::abs(*it - x));
    b.erase(it);
  }
  return worst;
}

std::vector<Complex> values(const linalg::GeneralEigen& e) {
  std::vector<Complex> v;
  for (const auto& p : e.pairs) v.push_back(p.value);
  return v;
}

}  // namespace

TEST(EigGeneral, Identity) {
  const auto e = linalg::eig_general(CMatrix::Identity(2, 2));
  ASSERT_EQ(e.pairs.size(), 2u);
  for (const auto& p : e.pairs) EXPECT_LT(std::abs(p.value - 1.0), 1e-14);
}

TEST(EigGeneral, AntiDiagonalI) {
  CMatrix m(2, 2);
  m << 0.0, kI, kI, 0.0;
  auto v = values(linalg::eig_general(m));
  EXPECT_LT(multiset_distance(v, {kI, -kI}), 1e-13);
}

TEST(EigGeneral, RandomMatchesCharacteristicPolynomialRoots) {
  Rng rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    const CMatrix m = random_matrix(3, 3, rng);
    const auto e = linalg::eig_general(m);
    const auto roots = poly_roots(char_poly(m));
    EXPECT_LT(multiset_distance(values(e), roots), 1e-8) << "trial " << trial;
    EXPECT_LT(e.max_residual, 1e-10);
    for (const auto& p : e.pairs) EXPECT_NEAR(p.vector.norm(), 1.0, 1e-12);
  }
}

TEST(EigGeneral, KnownSpectrumWithMultiplicity) {
  Rng rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    const CMatrix s = random_matrix(4, 4, rng) + 2.0 * CMatrix::Identity(4, 4);
    std::vector<Complex> spec = {Complex(1, 1), Complex(1, 1), Complex(-2, 0.5), Complex(0.3, 0)};
    CVector d(4);
    for (int i = 0; i < 4; ++i) d(i) = spec[i];
    const CMatrix m = s * d.asDiagonal() * linalg::inverse(s);
    auto v = values(linalg::eig_general(m));
    std::sort(v.begin(), v.end(), by_re_im);
    std::sort(spec.begin(), spec.end(), by_re_im);
    EXPECT_LT(multiset_distance(v, spec), 1e-8);
  }
}

TEST(EigGeneral, JordanBlockIsReportedNotRefused) {
  CMatrix m(2, 2);
  m << 1.0, 1.0, 0.0, 1.0;
  const auto e = linalg::eig_general(m);
  ASSERT_EQ(e.pairs.size(), 2u);
  for (const auto& p : e.pairs) EXPECT_LT(std::abs(p.value - 1.0), 1e-7);
  EXPECT_GT(e.eigenvector_condition, 1e6);
}

TEST(EigHermitian, Diagonal) {
  CMatrix h = CMatrix::Zero(2, 2);
  h(0, 0) = 4.0;
  h(1, 1) = 9.0;
  const auto e = linalg::eig_hermitian(h);
  EXPECT_NEAR(e.values(0), 4.0, 1e-14);
  EXPECT_NEAR(e.values(1), 9.0, 1e-14);
}

TEST(EigHermitian, Identity) {
  const auto e = linalg::eig_hermitian(CMatrix::Identity(3, 3));
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(e.values(i), 1.0, 1e-14);
}

TEST(EigHermitian, ReconstructionAndUnitarity) {
  Rng rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    const CMatrix h = random_hermitian(4, rng, -3.0, 3.0);
    const auto e = linalg::eig_hermitian(h);
    const CMatrix rec = e.vectors * e.values.cast<Complex>().asDiagonal() * e.vectors.adjoint();
    EXPECT_LE(linalg::norm2(rec - h), 1e-11);
    EXPECT_LE(linalg::norm2(e.vectors.adjoint() * e.vectors - CMatrix::Identity(4, 4)), 1e-11);
    for (int i = 1; i < 4; ++i) EXPECT_LE(e.values(i - 1), e.values(i));
  }
}

TEST(EigHermitian, RejectsNonHermitian) {
  CMatrix m(2, 2);
  m << 1.0, 2.0, 0.0, 1.0;
  EXPECT_THROW(linalg::eig_hermitian(m), InputError);
}

TEST(HermitianSqrt, IdentityAndDiagonal) {
  EXPECT_LE(linalg::norm2(linalg::hermitian_sqrt_pd(CMatrix::Identity(2, 2)) - CMatrix::Identity(2, 2)),
            1e-14);
  CMatrix h = CMatrix::Zero(2, 2);
  h(0, 0) = 4.0;
  h(1, 1) = 9.0;
  const CMatrix r = linalg::hermitian_sqrt_pd(h);
  EXPECT_NEAR(std::abs(r(0, 0) - 2.0), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(r(1, 1) - 3.0), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(r(0, 1)), 0.0, 1e-14);
}

TEST(HermitianSqrt, SquaresBackAndCommutesWithUnitaryConjugation) {
  Rng rng(14);
  for (int trial = 0; trial < 20; ++trial) {
    const CMatrix h = random_hermitian(4, rng, 0.2, 5.0);
    const CMatrix r = linalg::hermitian_sqrt_pd(h);
    EXPECT_LE(linalg::norm2(r * r - h), 1e-11);
    EXPECT_LE(linalg::norm2(linalg::hermitian_inv_sqrt_pd(h) * r - CMatrix::Identity(4, 4)), 1e-11);
    const CMatrix u = random_unitary(4, rng);
    const CMatrix lhs = linalg::hermitian_sqrt_pd(u.adjoint() * h * u);
    EXPECT_LE(linalg::norm2(lhs - u.adjoint() * r * u), 1e-10);
  }
}

TEST(HermitianSqrt, RejectsIndefinite) {
  CMatrix h = CMatrix::Identity(2, 2);
  h(1, 1) = -1.0;
  EXPECT_THROW(linalg::hermitian_sqrt_pd(h), InputError);
}

TEST(Basic, IdentityAndInvolution) {
  EXPECT_LT(std::abs(linalg::determinant(CMatrix::Identity(3, 3)) - 1.0), 1e-15);
  EXPECT_LE(linalg::norm2(linalg::inverse(CMatrix::Identity(3, 3)) - CMatrix::Identity(3, 3)), 1e-15);
  CMatrix m(2, 2);
  m << 0.0, kI, kI, 0.0;
  EXPECT_LT(std::abs(linalg::determinant(m) - 1.0), 1e-15);
  CMatrix inv(2, 2);
  inv << 0.0, -kI, -kI, 0.0;
  EXPECT_LE(linalg::norm2(linalg::inverse(m) - inv), 1e-15);
}

TEST(Basic, SolveResidualAndDeterminantMultiplicative) {
  Rng rng(15);
  for (int trial = 0; trial < 20; ++trial) {
    const CMatrix m = random_matrix(4, 4, rng);
    const CVector b = random_vector(4, rng);
    const CVector x = linalg::solve(m, b);
    EXPECT_LE((m * x - b).norm(), 1e-10 * b.norm());
    const CMatrix a2 = random_matrix(4, 4, rng);
    const Complex lhs = linalg::determinant(m * a2);
    const Complex rhs = linalg::determinant(m) * linalg::determinant(a2);
    EXPECT_LE(std::abs(lhs - rhs), 1e-9 * std::abs(rhs));
  }
}

TEST(Basic, SingularInverseThrows) {
  CMatrix m(2, 2);
  m << 1.0, 2.0, 2.0, 4.0;
  EXPECT_THROW(linalg::inverse(m), NumericalError);
}

TEST(Basic, NonFiniteRejected) {
  CMatrix m = CMatrix::Identity(2, 2);
  m(0, 1) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(linalg::require_finite(m, "m"), InputError);
}

TEST(OperatorNorm, Examples) {
  EXPECT_EQ(linalg::operator_norm(CMatrix::Zero(3, 3)), 0.0);
  CMatrix d = CMatrix::Zero(2, 2);
  d(0, 0) = 3.0;
  d(1, 1) = -4.0;
  EXPECT_NEAR(linalg::operator_norm(d), 4.0, 1e-14);
}

TEST(OperatorNorm, MatchesHermitianRoute) {
  Rng rng(16);
  for (int trial = 0; trial < 20; ++trial) {
    const CMatrix m = random_matrix(3, 5, rng);
    const auto e = linalg::eig_hermitian(m.adjoint() * m);
    EXPECT_NEAR(linalg::operator_norm(m), std::sqrt(e.values(e.values.size() - 1)), 1e-9);
  }
}

TEST(OrderedSchur, SelectedEigenvaluesLeadAndSpanInvariantSubspace) {
  Rng rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const CMatrix m = random_matrix(6, 6, rng);
    const auto sel = [](Complex z) { return std::abs(z) < 1.0; };
    const auto s = linalg::ordered_schur(m, sel);
    int expected = 0;
    for (const auto& p : linalg::eig_general(m).pairs) expected += sel(p.value) ? 1 : 0;
    ASSERT_EQ(s.selected, expected);
    for (int i = 0; i < 6; ++i) EXPECT_EQ(sel(s.triangular(i, i)), i < s.selected);
    EXPECT_LE(linalg::norm2(s.unitary * s.triangular * s.unitary.adjoint() - m), 1e-12 * linalg::norm2(m) * 10);
    EXPECT_LE(s.invariance_residual, 1e-12);
  }
}
