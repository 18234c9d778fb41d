#include "hphi/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <Eigen/Eigenvalues>

#include "hphi/linalg.hpp"
#include "hphi/oracle.hpp"
#include "hphi/symplectic.hpp"

namespace hphi::embedding {

namespace {

// Near-1 eigenvalues of a NONSTRICT pair may come from a Jordan block, which
// floating point splits by about sqrt(eps).
constexpr double kUnitSnap = 1e-6;

weights::Comparison checked_compare(const weights::QuadraticWeight& phi1,
                                    const weights::QuadraticWeight& phi2,
                                    const EmbeddingOptions& opts) {
  if (phi1.dim() != phi2.dim()) throw InputError("embedding: weights have different dimensions");
  return weights::compare(phi1, phi2, weights::CompareOptions{opts.rel_tol});
}

CMatrix transition_matrix(const weights::QuadraticWeight& phi1,
                          const weights::QuadraticWeight& phi2) {
  const CMatrix a1 = symplectic::a_phi(phi1).matrix();
  const CMatrix a2 = symplectic::a_phi(phi2).matrix();
  return linalg::inverse(a2) * a1;
}

}  // namespace

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::BoundedStrict:
      return "BOUNDED_STRICT";
    case Verdict::BoundedNonStrict:
      return "BOUNDED_NONSTRICT";
    case Verdict::Unbounded:
      return "UNBOUNDED";
  }
  return "UNKNOWN";
}

Spectrum embedding_spectrum(const weights::QuadraticWeight& phi1,
                            const weights::QuadraticWeight& phi2, const EmbeddingOptions& opts) {
  const auto cmp = checked_compare(phi1, phi2, opts);
  if (cmp.ordering == weights::Ordering::Incomparable)
    throw InputError("embedding_spectrum: weights are incomparable (Phi2 >= Phi1 fails)");
  const bool nonstrict = cmp.ordering == weights::Ordering::NonStrict;

  Spectrum out;
  out.m = transition_matrix(phi1, phi2);
  const auto eig = linalg::eig_general(out.m);
  const auto dim = static_cast<Eigen::Index>(eig.pairs.size());
  out.eig_residual = eig.max_residual;
  out.eigenvector_condition = eig.eigenvector_condition;
  out.eigenvectors.resize(dim, dim);
  Complex prod{1.0, 0.0};
  for (Eigen::Index k = 0; k < dim; ++k) {
    const Complex lam = eig.pairs[k].value;
    out.full.push_back(lam);
    out.eigenvectors.col(k) = eig.pairs[k].vector;
    prod *= lam;
    const double rel_imag = std::abs(lam.imag()) / std::max(1.0, std::abs(lam));
    const bool near_unit = nonstrict && std::abs(lam - 1.0) <= kUnitSnap;
    if (!near_unit) out.imag_residual = std::max(out.imag_residual, rel_imag);
    if (lam.real() <= 0.0 || (rel_imag > kImagTol && !near_unit))
      throw NumericalError("embedding_spectrum: eigenvalue " + std::to_string(lam.real()) + "+" +
                           std::to_string(lam.imag()) + "i is not real positive");
  }
  out.product_residual = std::abs(prod - 1.0);

  // Greedy reciprocal pairing, smallest first.
  std::vector<Eigen::Index> order(dim);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) {
    return out.full[a].real() < out.full[b].real() ||
           (out.full[a].real() == out.full[b].real() && a < b);
  });
  std::vector<bool> used(dim, false);
  for (Eigen::Index oi = 0; oi < dim; ++oi) {
    const auto i = order[oi];
    if (used[i]) continue;
    used[i] = true;
    Eigen::Index best = -1;
    double best_res = INFINITY;
    for (Eigen::Index oj = oi + 1; oj < dim; ++oj) {
      const auto j = order[oj];
      if (used[j]) continue;
      const double res = std::abs(out.full[i] * out.full[j] - 1.0);
      if (res < best_res) {
        best_res = res;
        best = j;
      }
    }
    if (best < 0 || best_res > kPairTol)
      throw NumericalError("embedding_spectrum: eigenvalue " + std::to_string(out.full[i].real()) +
                           " has no reciprocal partner (residual " + std::to_string(best_res) + ")");
    used[best] = true;
    out.pairing_residual = std::max(out.pairing_residual, best_res);
    const double lo = out.full[i].real();
    const double hi = out.full[best].real();
    double mu = std::sqrt(lo / hi);
    if (nonstrict && std::abs(out.full[i] - 1.0) <= kUnitSnap &&
        std::abs(out.full[best] - 1.0) <= kUnitSnap)
      mu = 1.0;
    out.mus.push_back(mu);
  }
  std::sort(out.mus.begin(), out.mus.end());
  return out;
}

Witness witness_gaussian(const weights::QuadraticWeight& phi1, const weights::QuadraticWeight& phi2,
                         const EmbeddingOptions& opts) {
  const auto cmp = checked_compare(phi1, phi2, opts);
  if (cmp.ordering != weights::Ordering::Strict)
    throw InputError(std::string("witness_gaussian: requires a strict ordering, got ") +
                     weights::to_string(cmp.ordering));
  const Eigen::Index n = phi1.dim();
  const CMatrix m = transition_matrix(phi1, phi2);
  const auto schur = linalg::ordered_schur(m, [](Complex z) { return std::abs(z) < 1.0; });
  if (schur.selected != n)
    throw NumericalError("witness_gaussian: stable subspace has dimension " +
                         std::to_string(schur.selected) + ", expected " + std::to_string(n));

  const CMatrix basis = schur.unitary.leftCols(n);
  const CMatrix x = basis.topRows(n);
  const CMatrix xi = basis.bottomRows(n);
  Witness out;
  out.invariance_residual = schur.invariance_residual;
  out.graph_condition = linalg::condition_estimate(x);
  if (!(out.graph_condition < linalg::kMaxCondition))
    throw NumericalError("witness_gaussian: stable subspace is not a graph over x (cond " +
                         std::to_string(out.graph_condition) + ")");
  out.low_confidence = out.graph_condition > kLowConfidenceCondition;

  // T = Xi X^{-1}: solve X^T T^T = Xi^T.
  const CMatrix t = x.transpose().fullPivLu().solve(xi.transpose()).transpose();
  out.symmetry_defect = (t - t.transpose()).norm() / std::max(1.0, t.norm());
  if (out.symmetry_defect > kWitnessSymTol)
    throw CrossCheckError("witness_gaussian: T is not symmetric (defect " +
                          std::to_string(out.symmetry_defect) + ")");
  out.t = linalg::symmetric_part(t);

  if (!metaplectic::in_space(metaplectic::GaussianPacket::centered(out.t), phi1))
    throw CrossCheckError("witness_gaussian: g_T is not in H_Phi1");
  return out;
}

EmbeddingResult embedding_norm(const weights::QuadraticWeight& phi1,
                               const weights::QuadraticWeight& phi2, const EmbeddingOptions& opts) {
  const auto cmp = checked_compare(phi1, phi2, opts);
  EmbeddingResult out;
  out.ordering = cmp.ordering;
  out.diagnostics.margin = cmp.margin;
  out.diagnostics.tolerance = cmp.tolerance;
  if (cmp.ordering == weights::Ordering::Incomparable) {
    out.verdict = Verdict::Unbounded;
    return out;
  }
  out.verdict = cmp.ordering == weights::Ordering::Strict ? Verdict::BoundedStrict
                                                          : Verdict::BoundedNonStrict;

  const Spectrum spec = embedding_spectrum(phi1, phi2, opts);
  auto& d = out.diagnostics;
  d.eig_residual = spec.eig_residual;
  d.imag_residual = spec.imag_residual;
  d.pairing_residual = spec.pairing_residual;
  d.product_residual = spec.product_residual;
  d.eigenvector_condition = spec.eigenvector_condition;
  out.mus = spec.mus;

  const Complex ratio = linalg::determinant(phi1.levi()) / linalg::determinant(phi2.levi());
  d.det_ratio = ratio.real();
  d.det_ratio_imag = std::abs(ratio.imag());
  if (ratio.real() <= 0.0 || d.det_ratio_imag > 1e-10 * std::abs(ratio))
    throw CrossCheckError("embedding_norm: det L1 / det L2 is not real positive");

  double prod = 1.0;
  for (double mu : spec.mus) prod *= mu;
  out.norm = std::pow(ratio.real() * prod, 0.25);

  if (out.verdict == Verdict::BoundedStrict) {
    const Witness w = witness_gaussian(phi1, phi2, opts);
    out.witness_t = w.t;
    out.low_confidence = w.low_confidence;
    d.stable_condition = w.graph_condition;
    d.witness_symmetry = w.symmetry_defect;
    if (opts.check_witness_ratio) {
      const auto r = oracle::ratio(w.t, phi1, phi2);
      if (!r.ratio) throw CrossCheckError("embedding_norm: witness is outside one of the spaces");
      d.witness_ratio = *r.ratio;
      if (!w.low_confidence && std::abs(*r.ratio - *out.norm) > 1e-8 * *out.norm)
        throw CrossCheckError("embedding_norm: oracle ratio at the witness (" +
                              std::to_string(*r.ratio) + ") differs from the norm (" +
                              std::to_string(*out.norm) + ")");
    }
  }
  return out;
}

UnboundednessWitness unboundedness_witness(const weights::QuadraticWeight& phi1,
                                           const weights::QuadraticWeight& phi2,
                                           const EmbeddingOptions& opts) {
  const auto cmp = checked_compare(phi1, phi2, opts);
  if (cmp.ordering != weights::Ordering::Incomparable)
    throw InputError("unboundedness_witness: weights are not incomparable");
  const int n = phi1.dim();

  const auto red = weights::reduce_to_standard(phi1, phi2);
  const RMatrix gap = weights::real_form(red.reduced).q - RMatrix::Identity(2 * n, 2 * n);
  Eigen::SelfAdjointEigenSolver<RMatrix> es(gap);
  const RVector v = es.eigenvectors().col(0);
  CVector x0(n);
  for (int k = 0; k < n; ++k) x0(k) = Complex(v(k), v(n + k));
  x0 /= x0.norm();

  const CMatrix root = linalg::hermitian_sqrt_pd(phi1.levi());
  const CMatrix dir = x0.conjugate() * x0.conjugate().transpose();
  const weights::AffineWeight w1(phi1), w2(phi2);
  for (int k = 1; k <= 15; ++k) {
    const double delta = 1.0 - std::pow(10.0, -k);
    const CMatrix t_red = -kI * delta * dir;
    const CMatrix t = root.conjugate() * t_red * root - kI * phi1.pluriharmonic();
    const auto packet = metaplectic::GaussianPacket::centered(linalg::symmetric_part(t));
    double m1 = 0.0, m2 = 0.0;
    const bool in1 = metaplectic::in_space(packet, w1, &m1);
    const bool in2 = metaplectic::in_space(packet, w2, &m2);
    if (in1 && !in2) return {packet, delta, x0, es.eigenvalues()(0), m1, m2};
  }
  throw NumericalError(
      "unboundedness_witness: no delta in the ladder separates the spaces (incomparability below "
      "tolerance)");
}

std::vector<double> default_eps_ladder() { return {1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6}; }

EpsilonLimit epsilon_limit_norm(const weights::QuadraticWeight& phi1,
                                const weights::QuadraticWeight& phi2,
                                const std::vector<double>& ladder, const EmbeddingOptions& opts) {
  const auto cmp = checked_compare(phi1, phi2, opts);
  if (cmp.ordering == weights::Ordering::Incomparable)
    throw InputError("epsilon_limit_norm: weights are incomparable");
  if (ladder.empty()) throw InputError("epsilon_limit_norm: empty ladder");
  const int n = phi1.dim();
  EpsilonLimit out;
  for (double eps : ladder) {
    if (!(eps > 0.0) || !std::isfinite(eps))
      throw InputError("epsilon_limit_norm: ladder entries must be positive");
    const auto phi2e = weights::QuadraticWeight::make(
        phi2.levi() + eps * CMatrix::Identity(n, n), phi2.pluriharmonic());
    const auto r = embedding_norm(phi1, phi2e, opts);
    if (!r.norm) throw CrossCheckError("epsilon_limit_norm: regularized pair is unbounded");
    out.eps.push_back(eps);
    out.norms.push_back(*r.norm);
  }
  // Larger eps means a larger weight and a smaller norm.
  std::vector<std::size_t> idx(out.eps.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return out.eps[a] > out.eps[b]; });
  for (std::size_t k = 1; k < idx.size(); ++k)
    if (out.norms[idx[k]] < out.norms[idx[k - 1]] - 1e-9)
      throw CrossCheckError("epsilon_limit_norm: norms are not monotone in eps");
  return out;
}

}  // namespace hphi::embedding
