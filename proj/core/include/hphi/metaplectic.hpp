#pragma once

// Shifted Gaussian wave packets c * S_Y g_T, the metaplectic generator
// action on them, Bargmann transforms of Gaussians, and exact H_Phi / L^2
// inner products.

#include <optional>
#include <vector>

#include "hphi/gaussian_integral.hpp"
#include "hphi/symplectic.hpp"
#include "hphi/types.hpp"
#include "hphi/weights.hpp"

namespace hphi::metaplectic {

/// amplitude * S_Y g_T, with g_T(x) = exp(pi i Tx.x) and
/// S_Y f(x) = e(-1/2 y.eta + eta.x) f(x - y).
class GaussianPacket {
 public:
  GaussianPacket(Complex amplitude, PhasePoint center, CMatrix t);
  /// Centered packet g_T.
  static GaussianPacket centered(const CMatrix& t, Complex amplitude = 1.0);
  /// The constant function `amplitude` in dimension n.
  static GaussianPacket constant(int n, Complex amplitude = 1.0);

  int dim() const { return center_.dim(); }
  Complex amplitude() const { return amplitude_; }
  const PhasePoint& center() const { return center_; }
  const CMatrix& t() const { return t_; }

  GaussianPacket scaled(Complex s) const { return {amplitude_ * s, center_, t_}; }

  /// Pointwise value from the defining formula.
  Complex evaluate(const CVector& x) const;
  /// log |f(x)| from the defining formula, without exponentiating.
  double log_abs(const CVector& x) const;
  /// log f(x) evaluated from the expanded exponent (any branch of log amplitude).
  Complex log_evaluate(const CVector& x) const;

  /// Expanded form f(x) = amplitude * exp(pi i x.Tx + 2 pi i beta.x + g).
  CVector beta() const;
  Complex offset() const;

 private:
  Complex amplitude_;
  PhasePoint center_;
  CMatrix t_;
};

struct ShiftComposition {
  Complex phase;
  PhasePoint sum;
};

/// S_X S_Y = e(1/2 sigma(X, Y)) S_{X+Y}.
ShiftComposition shift_compose(const PhasePoint& x, const PhasePoint& y);
GaussianPacket apply_shift(const PhasePoint& y, const GaussianPacket& f);

enum class AtomKind { Skew, Scale, Barg0, Barg0Inv, Scalar };

struct Atom {
  AtomKind kind;
  CMatrix matrix;          // T for Skew, G for Scale
  Complex scalar{1.0, 0.0};  // for Scalar
};

/// Ordered generator atoms; atom 0 acts first. The accumulated canonical map
/// is M_{k-1} ... M_0.
class MetaplecticWord {
 public:
  explicit MetaplecticWord(int n);

  MetaplecticWord& skew(const CMatrix& t);
  MetaplecticWord& scale(const CMatrix& g);
  MetaplecticWord& barg0();
  MetaplecticWord& barg0_inv();
  MetaplecticWord& scalar(Complex c);
  /// this followed by `next`.
  MetaplecticWord then(const MetaplecticWord& next) const;

  int dim() const { return n_; }
  const std::vector<Atom>& atoms() const { return atoms_; }
  const symplectic::CanonicalMap& map() const { return map_; }

  static symplectic::CanonicalMap atom_map(const Atom& a, int n);

 private:
  void push(Atom a);
  int n_;
  std::vector<Atom> atoms_;
  symplectic::CanonicalMap map_;
};

class SingularAtomError : public NumericalError {
 public:
  SingularAtomError(std::size_t index, const std::string& msg)
      : NumericalError(msg), atom_index(index) {}
  std::size_t atom_index;
};

struct WordAction {
  GaussianPacket packet;
  /// Per atom: +1 when det(A+BT)^{-1/2} taken as the product of principal
  /// roots of the eigenvalues agrees with the principal root of det, else -1.
  std::vector<int> branch_signs;
};

/// M g_T = det(A+BT)^{-1/2} g_{T'}, T' = (C+DT)(A+BT)^{-1}, and M S_Y = S_{MY} M.
WordAction apply_word(const MetaplecticWord& w, const GaussianPacket& f);

/// Word BARG0, SCALE(L^{1/2}), SKEW(-iP) in application order.
MetaplecticWord bargmann_word(const weights::QuadraticWeight& phi, bool unitary_normalization);

/// Transform of an L^2(R^n) packet (Im T positive definite) into H_Phi.
WordAction bargmann_transform_gaussian(const weights::QuadraticWeight& phi, const GaussianPacket& f,
                                       bool unitary_normalization);

struct InnerProduct {
  bool in_space = false;
  double min_eigenvalue = 0.0;  // of the real exponent form
  Complex value{0.0, 0.0};
  Complex log_value{0.0, 0.0};
};

/// <f, g>_{H_Phi} = int f conj(g) e^{-4 pi Phi} dL, in closed form.
InnerProduct hphi_inner_product(const GaussianPacket& f, const GaussianPacket& g,
                                const weights::AffineWeight& phi);
/// Empty when f is not in H_Phi.
std::optional<double> hphi_norm(const GaussianPacket& f, const weights::AffineWeight& phi);
/// Whether f is square-integrable against e^{-4 pi Phi}; min eigenvalue in `margin`.
bool in_space(const GaussianPacket& f, const weights::AffineWeight& phi, double* margin = nullptr);

/// Exponent data of |f|^2 e^{-4 pi Phi} as a Gaussian on R^{2n} (for quadrature).
struct ExponentForm {
  CMatrix a;
  CVector b;
  Complex c;
};
ExponentForm hphi_exponent(const GaussianPacket& f, const GaussianPacket& g,
                           const weights::AffineWeight& phi);

InnerProduct l2_inner_product(const GaussianPacket& f, const GaussianPacket& g);
std::optional<double> l2_norm(const GaussianPacket& f);

}  // namespace hphi::metaplectic
