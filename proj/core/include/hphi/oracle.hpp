#pragma once

// Independent checks of the embedding results. Everything here is built from
// weight evaluation and Gaussian integration only: no A_Phi, no general
// eigensolver.

#include <cstdint>
#include <optional>
#include <vector>

#include "hphi/metaplectic.hpp"
#include "hphi/weights.hpp"

namespace hphi::oracle {

struct RatioSample {
  CMatrix t;
  bool in_phi1 = false;
  bool in_phi2 = false;
  std::optional<double> ratio;  // ||g_T||_{H_Phi2} / ||g_T||_{H_Phi1}, when both finite
};

RatioSample ratio(const CMatrix& t, const weights::QuadraticWeight& phi1,
                  const weights::QuadraticWeight& phi2);

struct QuadratureResult {
  double numeric = 0.0;
  double closed_form = 0.0;
  double rel_err = 0.0;
  int order = 0;
};

inline constexpr int kDefaultQuadratureOrder = 80;

/// Tensor Gauss-Hermite quadrature of |f|^2 e^{-4 pi Phi} over R^{2n}
/// against the closed-form squared norm. n <= 2; the packet must be in the
/// space with margin > 1e-3.
QuadratureResult quadrature_check(const metaplectic::GaussianPacket& f,
                                  const weights::AffineWeight& phi,
                                  int order = kDefaultQuadratureOrder);

/// Gauss-Hermite nodes and weights for the weight e^{-u^2}.
struct HermiteRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
HermiteRule gauss_hermite(int order);

/// Random symmetric T with g_T in H_Phi1: entries uniform in the disk of
/// radius 1.5, blended toward the anchor -i P1 until integrable.
CMatrix sample_integrable_t(const weights::QuadraticWeight& phi1, std::uint64_t seed);

struct SearchOptions {
  int threads = 1;
  int polish_rounds = 40;
};

struct SearchResult {
  double best_ratio = 0.0;
  CMatrix best_t;
  double best_sampled_ratio = 0.0;  // before polishing
  int trials = 0;
  std::uint64_t seed = 0;
};

/// Lower-bound estimate of the embedding norm. Per-trial seeds are seed + i,
/// so the result does not depend on the thread count.
SearchResult random_search_norm(const weights::QuadraticWeight& phi1,
                                const weights::QuadraticWeight& phi2, int trials,
                                std::uint64_t seed, const SearchOptions& opts = {});

}  // namespace hphi::oracle
