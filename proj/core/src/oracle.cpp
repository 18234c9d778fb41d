#include "hphi/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <thread>

#include <Eigen/Cholesky>

namespace hphi::oracle {

namespace {

using metaplectic::GaussianPacket;

constexpr double kQuadratureMargin = 1e-3;
constexpr double kSampleRadius = 1.5;

double ratio_or_neg_inf(const CMatrix& t, const weights::QuadraticWeight& phi1,
                        const weights::QuadraticWeight& phi2) {
  const auto r = ratio(t, phi1, phi2);
  return r.ratio ? *r.ratio : -std::numeric_limits<double>::infinity();
}

// Real parameters of a symmetric T: (Re, Im) of the upper triangle.
std::vector<double> to_params(const CMatrix& t) {
  std::vector<double> p;
  for (Eigen::Index i = 0; i < t.rows(); ++i)
    for (Eigen::Index j = i; j < t.cols(); ++j) {
      p.push_back(t(i, j).real());
      p.push_back(t(i, j).imag());
    }
  return p;
}

CMatrix from_params(const std::vector<double>& p, Eigen::Index n) {
  CMatrix t(n, n);
  std::size_t k = 0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i; j < n; ++j) {
      t(i, j) = t(j, i) = Complex(p[k], p[k + 1]);
      k += 2;
    }
  return t;
}

}  // namespace

RatioSample ratio(const CMatrix& t, const weights::QuadraticWeight& phi1,
                  const weights::QuadraticWeight& phi2) {
  if (phi1.dim() != phi2.dim()) throw InputError("ratio: weights have different dimensions");
  const GaussianPacket g = GaussianPacket::centered(t);
  RatioSample out;
  out.t = g.t();
  const auto n1 = metaplectic::hphi_norm(g, phi1);
  const auto n2 = metaplectic::hphi_norm(g, phi2);
  out.in_phi1 = n1.has_value();
  out.in_phi2 = n2.has_value();
  if (n1 && n2) out.ratio = *n2 / *n1;
  return out;
}

HermiteRule gauss_hermite(int order) {
  if (order < 1 || order > 400) throw InputError("gauss_hermite: order out of range");
  // Newton iteration on the orthonormal Hermite recurrence; roots are symmetric.
  const double pim4 = std::pow(kPi, -0.25);
  const int m = (order + 1) / 2;
  HermiteRule rule;
  rule.nodes.assign(order, 0.0);
  rule.weights.assign(order, 0.0);
  double z = 0.0;
  for (int i = 0; i < m; ++i) {
    if (i == 0)
      z = std::sqrt(2.0 * order + 1.0) - 1.85575 * std::pow(2.0 * order + 1.0, -0.16667);
    else if (i == 1)
      z -= 1.14 * std::pow(static_cast<double>(order), 0.426) / z;
    else if (i == 2)
      z = 1.86 * z - 0.86 * rule.nodes[0];
    else if (i == 3)
      z = 1.91 * z - 0.91 * rule.nodes[1];
    else
      z = 2.0 * z - rule.nodes[i - 2];
    double pp = 0.0;
    bool converged = false;
    for (int it = 0; it < 100; ++it) {
      double p1 = pim4, p2 = 0.0;
      for (int j = 0; j < order; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = z * std::sqrt(2.0 / (j + 1)) * p2 - std::sqrt(static_cast<double>(j) / (j + 1)) * p3;
      }
      pp = std::sqrt(2.0 * order) * p2;
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) <= 1e-15 * std::max(1.0, std::abs(z))) {
        converged = true;
        break;
      }
    }
    if (!converged) throw NumericalError("gauss_hermite: Newton iteration did not converge");
    rule.nodes[i] = z;
    rule.nodes[order - 1 - i] = -z;
    rule.weights[i] = rule.weights[order - 1 - i] = 2.0 / (pp * pp);
  }
  return rule;
}

QuadratureResult quadrature_check(const GaussianPacket& f, const weights::AffineWeight& phi,
                                  int order) {
  const int n = phi.dim();
  if (f.dim() != n) throw InputError("quadrature_check: dimension mismatch");
  if (n > 2) throw InputError("quadrature_check: only n <= 2 is supported");
  double margin = 0.0;
  if (!metaplectic::in_space(f, phi, &margin) || margin <= kQuadratureMargin)
    throw InputError("quadrature_check: packet is not in the space with margin > 1e-3");

  const int dim = 2 * n;
  // log of the integrand |f|^2 e^{-4 pi Phi} at v = (Re x, Im x).
  auto log_integrand = [&](const RVector& v) {
    CVector x(n);
    for (int k = 0; k < n; ++k) x(k) = Complex(v(k), v(n + k));
    return 2.0 * f.log_abs(x) - 4.0 * kPi * weights::evaluate(phi, x);
  };

  // The log-integrand is quadratic, so unit-step differences give its exact
  // gradient and Hessian.
  const double l0 = log_integrand(RVector::Zero(dim));
  RVector grad(dim), lp(dim), lm(dim);
  RMatrix hess(dim, dim);
  for (int i = 0; i < dim; ++i) {
    lp(i) = log_integrand(RVector::Unit(dim, i));
    lm(i) = log_integrand(-RVector::Unit(dim, i));
    grad(i) = 0.5 * (lp(i) - lm(i));
    hess(i, i) = lp(i) + lm(i) - 2.0 * l0;
  }
  for (int i = 0; i < dim; ++i)
    for (int j = i + 1; j < dim; ++j)
      hess(i, j) = hess(j, i) =
          log_integrand(RVector::Unit(dim, i) + RVector::Unit(dim, j)) - lp(i) - lp(j) + l0;

  const RMatrix k = -hess;
  Eigen::LLT<RMatrix> llt(k);
  if (llt.info() != Eigen::Success) throw NumericalError("quadrature_check: integrand does not decay");
  const RVector center = llt.solve(grad);
  const double l_center = l0 + 0.5 * grad.dot(center);

  // v = center + sqrt(2 kappa) L^{-T} u leaves e^{-(kappa - 1)|u|^2} for the rule to integrate.
  constexpr double kappa = 1.5;
  const RMatrix lower = llt.matrixL();
  const RMatrix w = std::sqrt(2.0 * kappa) *
                    lower.transpose().triangularView<Eigen::Upper>().solve(RMatrix::Identity(dim, dim));
  const double log_det_w = 0.5 * dim * std::log(2.0 * kappa) - lower.diagonal().array().log().sum();

  const HermiteRule rule = gauss_hermite(order);
  std::vector<int> idx(dim, 0);
  long double sum = 0.0L;
  RVector u(dim);
  while (true) {
    double weight = 1.0;
    for (int a = 0; a < dim; ++a) {
      u(a) = rule.nodes[idx[a]];
      weight *= rule.weights[idx[a]];
    }
    const double usq = u.squaredNorm();
    const double term = std::exp(log_integrand(center + w * u) - l_center + usq);
    sum += static_cast<long double>(weight * term);
    int a = 0;
    while (a < dim && ++idx[a] == order) idx[a++] = 0;
    if (a == dim) break;
  }

  QuadratureResult out;
  out.order = order;
  out.numeric = static_cast<double>(sum) * std::exp(l_center + log_det_w);
  const auto ip = metaplectic::hphi_inner_product(f, f, phi);
  out.closed_form = std::exp(ip.log_value.real());
  out.rel_err = std::abs(out.numeric - out.closed_form) / out.closed_form;
  return out;
}

CMatrix sample_integrable_t(const weights::QuadraticWeight& phi1, std::uint64_t seed) {
  const Eigen::Index n = phi1.dim();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  CMatrix draw(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i; j < n; ++j) {
      const double r = kSampleRadius * std::sqrt(unit(rng));
      const double th = 2.0 * kPi * unit(rng);
      draw(i, j) = draw(j, i) = std::polar(r, th);
    }
  const CMatrix anchor = -kI * phi1.pluriharmonic();
  const weights::AffineWeight w1(phi1);
  double s = 1.0;
  for (int k = 0; k < 60; ++k, s *= 0.5) {
    const CMatrix t = (1.0 - s) * anchor + s * draw;
    if (metaplectic::in_space(GaussianPacket::centered(t), w1)) return t;
  }
  return anchor;
}

SearchResult random_search_norm(const weights::QuadraticWeight& phi1,
                                const weights::QuadraticWeight& phi2, int trials,
                                std::uint64_t seed, const SearchOptions& opts) {
  if (phi1.dim() != phi2.dim())
    throw InputError("random_search_norm: weights have different dimensions");
  if (trials < 1) throw InputError("random_search_norm: trials must be positive");

  struct Best {
    double ratio = -std::numeric_limits<double>::infinity();
    int trial = -1;
  };
  const int threads = std::max(1, std::min(opts.threads, trials));
  std::vector<Best> partial(threads);
  auto worker = [&](int tid) {
    Best b;
    for (int i = tid; i < trials; i += threads) {
      const CMatrix t = sample_integrable_t(phi1, seed + static_cast<std::uint64_t>(i));
      const double r = ratio_or_neg_inf(t, phi1, phi2);
      if (r > b.ratio) b = {r, i};  // strict: the first trial wins ties within a stride
    }
    partial[tid] = b;
  };
  if (threads == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    for (int tid = 0; tid < threads; ++tid) pool.emplace_back(worker, tid);
    for (auto& th : pool) th.join();
  }

  // Merge by (ratio, lowest trial index) so the winner is schedule independent.
  Best best;
  for (const auto& b : partial)
    if (b.trial >= 0 && (b.ratio > best.ratio || (b.ratio == best.ratio && b.trial < best.trial)))
      best = b;

  SearchResult out;
  out.trials = trials;
  out.seed = seed;
  const Eigen::Index n = phi1.dim();
  CMatrix best_t = best.trial >= 0
                       ? sample_integrable_t(phi1, seed + static_cast<std::uint64_t>(best.trial))
                       : CMatrix(-kI * phi1.pluriharmonic());
  double best_ratio = ratio_or_neg_inf(best_t, phi1, phi2);
  out.best_sampled_ratio = best_ratio;

  // Coordinate-wise golden-section polish with shrinking brackets.
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  std::vector<double> p = to_params(best_t);
  double h = 0.5;
  for (int round = 0; round < opts.polish_rounds; ++round, h *= 0.6) {
    for (std::size_t k = 0; k < p.size(); ++k) {
      auto eval = [&](double value) {
        std::vector<double> q = p;
        q[k] = value;
        return ratio_or_neg_inf(from_params(q, n), phi1, phi2);
      };
      double lo = p[k] - h, hi = p[k] + h;
      double x1 = hi - invphi * (hi - lo), x2 = lo + invphi * (hi - lo);
      double f1 = eval(x1), f2 = eval(x2);
      for (int it = 0; it < 40 && hi - lo > 1e-12; ++it) {
        if (f1 >= f2) {
          hi = x2;
          x2 = x1;
          f2 = f1;
          x1 = hi - invphi * (hi - lo);
          f1 = eval(x1);
        } else {
          lo = x1;
          x1 = x2;
          f1 = f2;
          x2 = lo + invphi * (hi - lo);
          f2 = eval(x2);
        }
      }
      const double xm = f1 >= f2 ? x1 : x2;
      const double fm = std::max(f1, f2);
      if (fm > best_ratio) {
        best_ratio = fm;
        p[k] = xm;
      }
    }
  }
  out.best_t = from_params(p, n);
  out.best_ratio = best_ratio;
  return out;
}

}  // namespace hphi::oracle
