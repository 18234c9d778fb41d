#pragma once

// Norm of the embedding H_Phi1 -> H_Phi2: spectrum pairing of
// A_Phi2^{-1} A_Phi1, the determinant formula, the witness Gaussian from the
// stable subspace, and the unboundedness witness for incomparable pairs.

#include <optional>
#include <vector>

#include "hphi/metaplectic.hpp"
#include "hphi/types.hpp"
#include "hphi/weights.hpp"

namespace hphi::embedding {

enum class Verdict { BoundedStrict, BoundedNonStrict, Unbounded };

const char* to_string(Verdict v);

struct EmbeddingOptions {
  /// Relative positive-definiteness tolerance for the ordering test.
  double rel_tol = 1e-9;
  /// Check the witness against the oracle ratio (rel 1e-8).
  bool check_witness_ratio = true;
};

inline constexpr double kPairTol = 1e-7;
inline constexpr double kImagTol = 1e-8;
inline constexpr double kWitnessSymTol = 1e-8;
inline constexpr double kLowConfidenceCondition = 1e8;

struct Spectrum {
  std::vector<double> mus;        // ascending, the <= 1 half of the pairs
  std::vector<Complex> full;      // all 2n eigenvalues of M
  CMatrix eigenvectors;           // columns, matching `full`
  CMatrix m;                      // A_Phi2^{-1} A_Phi1
  double eig_residual = 0.0;      // max ||Mv - lambda v|| / ||M||
  double imag_residual = 0.0;     // max |Im lambda| / max(1, |lambda|)
  double pairing_residual = 0.0;  // max |lambda lambda' - 1| over pairs
  double product_residual = 0.0;  // |prod lambda - 1|
  double eigenvector_condition = 1.0;
};

/// Requires compare(Phi1, Phi2) != INCOMPARABLE.
Spectrum embedding_spectrum(const weights::QuadraticWeight& phi1,
                            const weights::QuadraticWeight& phi2,
                            const EmbeddingOptions& opts = {});

struct Witness {
  CMatrix t;
  double graph_condition = 1.0;   // cond(X) of the stable basis (X; Xi)
  double symmetry_defect = 0.0;   // ||T - T^T|| / max(1, ||T||)
  double invariance_residual = 0.0;
  bool low_confidence = false;
};

/// T = Xi X^{-1} from the stable subspace of A_Phi2^{-1} A_Phi1. Requires STRICT.
Witness witness_gaussian(const weights::QuadraticWeight& phi1,
                         const weights::QuadraticWeight& phi2,
                         const EmbeddingOptions& opts = {});

struct Diagnostics {
  double margin = 0.0;     // min eig of Q2 - Q1
  double tolerance = 0.0;  // pd tolerance used
  double eig_residual = 0.0;
  double imag_residual = 0.0;
  double pairing_residual = 0.0;
  double product_residual = 0.0;
  double eigenvector_condition = 1.0;
  double det_ratio = 0.0;       // det L1 / det L2
  double det_ratio_imag = 0.0;  // |Im| of the computed ratio
  std::optional<double> stable_condition;
  std::optional<double> witness_symmetry;
  std::optional<double> witness_ratio;  // oracle ratio at the witness
};

struct EmbeddingResult {
  Verdict verdict = Verdict::Unbounded;
  weights::Ordering ordering = weights::Ordering::Incomparable;
  std::vector<double> mus;
  std::optional<double> norm;
  std::optional<CMatrix> witness_t;
  bool low_confidence = false;
  Diagnostics diagnostics;
};

EmbeddingResult embedding_norm(const weights::QuadraticWeight& phi1,
                               const weights::QuadraticWeight& phi2,
                               const EmbeddingOptions& opts = {});

struct UnboundednessWitness {
  metaplectic::GaussianPacket packet;  // centered g_T in the original frame
  double delta = 0.0;
  CVector x0;                 // unit direction in the reduced frame
  double reduced_margin = 0.0;  // most negative eigenvalue of the reduced real-form gap
  double margin_phi1 = 0.0;   // > 0: in H_Phi1
  double margin_phi2 = 0.0;   // <= 0: not in H_Phi2
};

/// Requires INCOMPARABLE. h_delta = e(-1/2 i delta (conj(x0).x)^2) in the
/// reduced frame, pulled back to Phi1, with delta = 1 - 10^{-k}.
UnboundednessWitness unboundedness_witness(const weights::QuadraticWeight& phi1,
                                           const weights::QuadraticWeight& phi2,
                                           const EmbeddingOptions& opts = {});

std::vector<double> default_eps_ladder();

struct EpsilonLimit {
  std::vector<double> eps;
  std::vector<double> norms;
};

/// Norms for Phi2 + 1/2 eps |x|^2 along the ladder; checks they do not
/// decrease as eps decreases (slack 1e-9).
EpsilonLimit epsilon_limit_norm(const weights::QuadraticWeight& phi1,
                                const weights::QuadraticWeight& phi2,
                                const std::vector<double>& ladder = default_eps_ladder(),
                                const EmbeddingOptions& opts = {});

}  // namespace hphi::embedding
