// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include "hphi/embedding.hpp"
#include "hphi/linalg.hpp"
#include "hphi/oracle.hpp"
#include "hphi/symplectic.hpp"
#include "hphi_cli/commands.hpp"
#include "hphi_cli/problem.hpp"
#include "support.hpp"

using namespace hphi;
using namespace hphi::testing;
using metaplectic::GaussianPacket;
using metaplectic::MetaplecticWord;
using weights::QuadraticWeight;

namespace {

CMatrix scalar(Complex z) { return CMatrix::Constant(1, 1, z); }

struct Outcome {
  bool pass = true;
  std::string detail;
  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

// Runs body(i) for i in [0, count) on a few threads.
void parallel_for(int count, const std::function<void(int)>& body) {
  const int threads = std::max(1, std::min(hphi::cli::worker_count(), 8));
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (int i = next++; i < count; i = next++) body(i);
    });
  for (auto& th : pool) th.join();
}

Outcome levi_only_pairs() {
  Outcome o;
  Rng rng(101);
  double worst_norm = 0, worst_t = 0;
  for (int k = 0; k < 50; ++k) {
    const int n = 1 + k % 3;
    const CMatrix l1 = random_hermitian(n, rng, 0.3, 3.0);
    const CMatrix l2 = l1 + 0.1 * CMatrix::Identity(n, n) + random_hermitian(n, rng, 0.0, 2.0);
    const auto p1 = QuadraticWeight::make(l1, CMatrix::Zero(n, n));
    const auto p2 = QuadraticWeight::make(l2, CMatrix::Zero(n, n));
    const auto r = embedding::embedding_norm(p1, p2);
    if (!r.norm || !r.witness_t) {
      o.fail("pair " + std::to_string(k) + " has no norm or witness");
      continue;
    }
    const double expect =
        std::sqrt((linalg::determinant(l1) / linalg::determinant(l2)).real());
    worst_norm = std::max(worst_norm, rel_err(*r.norm, expect));
    worst_t = std::max(worst_t, max_abs(*r.witness_t));
  }
  if (worst_norm > 1e-9) o.fail("norm rel err " + fmt(worst_norm));
  if (worst_t > 1e-8) o.fail("|T| " + fmt(worst_t));
  if (o.pass) o.detail = "50 pairs, worst norm rel err " + fmt(worst_norm) + ", worst |T| " + fmt(worst_t);
  return o;
}

Outcome one_dimensional_family() {
  Outcome o;
  const auto phi0 = QuadraticWeight::standard(1);
  double worst_norm = 0, worst_tau = 0;
  int cases = 0;
  for (double a : {1.5, 2.0, 3.0, 5.0})
    for (double babs : {0.0, 0.2, a - 1.2})
      for (double th : {0.0, 2.0 * kPi / 3.0, 4.0 * kPi / 3.0 + 0.25}) {
        const Complex b = std::polar(babs, th);
        const auto r = embedding::embedding_norm(phi0, QuadraticWeight::one_dimensional(a, b));
        ++cases;
        if (!r.norm || !r.witness_t) {
          o.fail("a=" + fmt(a) + " |b|=" + fmt(babs) + ": no norm or witness");
          continue;
        }
        worst_norm = std::max(worst_norm, rel_err(*r.norm, family_norm(a, babs)));
        worst_tau = std::max(worst_tau, std::abs((*r.witness_t)(0, 0) - family_tau(a, b)));
      }
  if (worst_norm > 1e-9) o.fail("norm rel err " + fmt(worst_norm));
  if (worst_tau > 1e-8) o.fail("tau err " + fmt(worst_tau));
  if (o.pass)
    o.detail = std::to_string(cases) + " grid points, worst norm rel err " + fmt(worst_norm) + ", worst tau err " +
               fmt(worst_tau);
  return o;
}

Outcome boundary_case() {
  Outcome o;
  const double a = 2.0;
  const Complex b = 1.0;
  const auto phi0 = QuadraticWeight::standard(1);
  const auto phi2 = QuadraticWeight::one_dimensional(a, b);
  const double target = std::pow(2.0, -0.25);
  const auto r = embedding::embedding_norm(phi0, phi2);
  if (!r.norm || rel_err(*r.norm, target) > 1e-9)
    o.fail("direct norm " + (r.norm ? fmt(*r.norm) : std::string("absent")));

  // The regularized norms approach the boundary value like sqrt(eps); 1e-5
  // needs eps down to 1e-10.
  std::vector<double> ladder;
  for (int k = 1; k <= 10; ++k) ladder.push_back(std::pow(10.0, -k));
  const auto lim = embedding::epsilon_limit_norm(phi0, phi2, ladder);
  const double eps_gap = std::abs(lim.norms.back() - target);
  if (eps_gap > 1e-5) o.fail("eps-limit gap " + fmt(eps_gap));

  const Complex tau = family_tau(a, b);
  double worst_delta = 0.0, prev = 0.0;
  bool increasing = true;
  for (double delta : {0.5, 0.9, 0.99, 0.999999}) {
    const auto g = GaussianPacket::centered(scalar(delta * tau));
    const auto n1 = metaplectic::hphi_norm(g, phi0), n2 = metaplectic::hphi_norm(g, phi2);
    if (!n1 || !n2) {
      o.fail("g_{delta tau} outside a space at delta " + fmt(delta));
      continue;
    }
    const double ratio = *n2 / *n1;
    const double formula =
        std::pow(4.0 * (2 * a + delta - 1) * (1 - delta) / (4.0 * (1 - delta * delta)), -0.25);
    if (delta < 0.999) worst_delta = std::max(worst_delta, std::abs(ratio - formula));
    increasing = increasing && ratio > prev;
    prev = ratio;
  }
  if (worst_delta > 1e-6) o.fail("delta formula err " + fmt(worst_delta));
  if (!increasing || std::abs(prev - std::pow(a, -0.25)) > 1e-5) o.fail("delta sequence does not trend to a^{-1/4}");
  if (o.pass)
    o.detail = "direct rel err " + fmt(rel_err(*r.norm, target)) + ", eps gap " + fmt(eps_gap) +
               ", delta err " + fmt(worst_delta);
  return o;
}

Outcome oracle_equivalence() {
  Outcome o;
  struct Row {
    double witness_err = 0, over = -1, search_short = 0;
    std::string error;
  };
  std::vector<WeightPair> pairs;
  Rng rng(404);
  for (int k = 0; k < 100; ++k) pairs.push_back(random_strict_pair(1 + k % 3, rng));
  std::vector<Row> rows(pairs.size());
  parallel_for(static_cast<int>(pairs.size()), [&](int k) {
    Row& row = rows[k];
    try {
      const auto& [p1, p2] = pairs[k];
      const auto r = embedding::embedding_norm(p1, p2);
      if (!r.norm || !r.witness_t) throw Error("no norm or witness");
      const auto at = oracle::ratio(*r.witness_t, p1, p2);
      if (!at.ratio) throw Error("witness outside a space");
      row.witness_err = rel_err(*at.ratio, *r.norm);
      for (int s = 0; s < 500; ++s) {
        const auto sample =
            oracle::ratio(oracle::sample_integrable_t(p1, 1'000'000ULL * (k + 1) + s), p1, p2);
        if (sample.ratio) row.over = std::max(row.over, *sample.ratio / *r.norm - 1.0);
      }
      const auto search = oracle::random_search_norm(p1, p2, 2000, 7 + k);
      row.search_short = 1.0 - search.best_ratio / *r.norm;
    } catch (const std::exception& e) {
      row.error = e.what();
    }
  });
  double worst_w = 0, worst_over = -1, worst_short = -1;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (!rows[k].error.empty()) o.fail("pair " + std::to_string(k) + ": " + rows[k].error);
    worst_w = std::max(worst_w, rows[k].witness_err);
    worst_over = std::max(worst_over, rows[k].over);
    worst_short = std::max(worst_short, rows[k].search_short);
  }
  if (worst_w > 1e-8) o.fail("witness ratio rel err " + fmt(worst_w));
  if (worst_over > 1e-8) o.fail("a random ratio exceeds the norm by " + fmt(worst_over));
  if (worst_short > 1e-3) o.fail("random search falls short by " + fmt(worst_short));
  if (o.pass)
    o.detail = "100 pairs, witness rel err " + fmt(worst_w) + ", max sampled excess " + fmt(worst_over) +
               ", worst search shortfall " + fmt(worst_short);
  return o;
}

Outcome structural_identities() {
  Outcome o;
  Rng rng(505);
  double inv = 0, bb = 0, lam = 0, recip = 0, prod = 0;
  for (int k = 0; k < 100; ++k) {
    const int n = 1 + k % 3;
    const auto phi = random_weight(n, rng);
    const CMatrix a = symplectic::a_phi(phi).matrix();
    const auto b = symplectic::bargmann_map(phi);
    inv = std::max(inv, linalg::norm2(a.conjugate() * a - CMatrix::Identity(2 * n, 2 * n)));
    bb = std::max(bb, linalg::norm2(a - b.matrix().conjugate() * linalg::inverse(b.matrix())));
    for (int j = 0; j < 2 * n; ++j) {
      const auto img = b.apply(PhasePoint::from_stacked(CVector::Unit(2 * n, j)));
      lam = std::max(lam, (img.xi - weights::lambda_point(phi, img.x).xi).norm());
    }
    const auto [p1, p2] = k % 2 ? random_strict_pair(n, rng) : WeightPair{phi, phi};
    const auto s = embedding::embedding_spectrum(p1, p2);
    std::vector<Complex> rec;
    for (const auto& z : s.full) rec.push_back(1.0 / z);
    Complex pr = 1.0;
    for (const auto& z : s.full) {
      pr *= z;
      std::size_t best = 0;
      for (std::size_t i = 1; i < rec.size(); ++i)
        if (std::abs(rec[i] - z) < std::abs(rec[best] - z)) best = i;
      recip = std::max(recip, std::abs(rec[best] - z) / std::max(1.0, std::abs(z)));
      rec.erase(rec.begin() + static_cast<std::ptrdiff_t>(best));
    }
    prod = std::max(prod, std::abs(pr - 1.0));
  }
  if (inv > 1e-10) o.fail("conj(A)A - I = " + fmt(inv));
  if (bb > 1e-10) o.fail("A - conj(B)B^-1 = " + fmt(bb));
  if (lam > 1e-10) o.fail("B(R^2n) off Lambda by " + fmt(lam));
  if (recip > 1e-7) o.fail("reciprocal defect " + fmt(recip));
  if (prod > 1e-8) o.fail("product defect " + fmt(prod));
  if (o.pass)
    o.detail = "involution " + fmt(inv) + ", conj(B)B^-1 " + fmt(bb) + ", Lambda " + fmt(lam) + ", reciprocal " +
               fmt(recip) + ", product " + fmt(prod);
  return o;
}

Outcome adjoint_and_unitarity() {
  Outcome o;
  Rng rng(606);
  double adj = 0, uw = 0, uv = 0, us = 0;
  for (int k = 0; k < 100; ++k) {
    const int n = 1 + k % 3;
    const auto phi = random_weight(n, rng);
    const auto f = random_packet(phi, rng), g = random_packet(phi, rng);
    const auto y = random_point(n, rng);
    const auto z = symplectic::adjoint_shift_vector(phi, y);
    const auto lhs = metaplectic::hphi_inner_product(metaplectic::apply_shift(y, f), g, phi);
    const auto rhs = metaplectic::hphi_inner_product(f, metaplectic::apply_shift(z, g), phi);
    adj = std::max(adj, std::abs(lhs.value - rhs.value) / std::abs(rhs.value));

    const double base = *metaplectic::hphi_norm(f, phi);
    const CMatrix t1 = random_symmetric(n, rng);
    const auto wf = metaplectic::apply_word(MetaplecticWord(n).skew(t1), f).packet;
    uw = std::max(uw, rel_err(metaplectic::hphi_norm(wf, weights::transform_T(phi, t1)).value_or(0), base));
    const CMatrix gm = random_matrix(n, n, rng, 0.4) + CMatrix::Identity(n, n);
    const auto vf = metaplectic::apply_word(MetaplecticWord(n).scale(gm), f)
                        .packet.scaled(std::sqrt(std::conj(linalg::determinant(gm))));
    uv = std::max(uv, rel_err(metaplectic::hphi_norm(vf, weights::transform_G(phi, gm)).value_or(0), base));
    us = std::max(us, rel_err(metaplectic::hphi_norm(metaplectic::apply_shift(y, f), weights::transform_Y(phi, y))
                                  .value_or(0),
                              base));
  }
  // S_Y is unitary on H_Phi itself exactly on Lambda_Phi.
  int on_ok = 0, off_ok = 0;
  for (int k = 0; k < 20; ++k) {
    const int n = 1 + k % 3;
    const auto phi = random_weight(n, rng);
    const auto on = weights::lambda_point(phi, random_vector(n, rng, 0.5));
    PhasePoint off = on;
    off.xi += random_vector(n, rng, 0.3);
    const auto f = random_packet(phi, rng);
    const double base = *metaplectic::hphi_norm(f, phi);
    if (rel_err(*metaplectic::hphi_norm(metaplectic::apply_shift(on, f), phi), base) <= 1e-9) ++on_ok;
    if (rel_err(*metaplectic::hphi_norm(metaplectic::apply_shift(off, f), phi), base) > 1e-6) ++off_ok;
  }
  if (adj > 1e-9) o.fail("adjoint identity rel err " + fmt(adj));
  if (uw > 1e-9 || uv > 1e-9 || us > 1e-9) o.fail("unitarity rel err " + fmt(std::max({uw, uv, us})));
  if (on_ok != 20 || off_ok != 20)
    o.fail("Lambda test: " + std::to_string(on_ok) + "/20 on, " + std::to_string(off_ok) + "/20 off");
  if (o.pass)
    o.detail = "adjoint " + fmt(adj) + ", W " + fmt(uw) + ", V " + fmt(uv) + ", S " + fmt(us) +
               ", Lambda 20/20 on and 20/20 off";
  return o;
}

Outcome bargmann_unitarity() {
  Outcome o;
  Rng rng(707);
  const auto phi0 = QuadraticWeight::standard(1);
  double worst = 0;
  for (int k = 0; k < 50; ++k) {
    const int n = 1 + k % 3;
    const auto f = GaussianPacket::centered(random_l2_t(n, rng));
    const auto img = metaplectic::bargmann_transform_gaussian(QuadraticWeight::standard(n), f, true).packet;
    const auto l2 = metaplectic::l2_norm(f);
    const auto h = metaplectic::hphi_norm(img, QuadraticWeight::standard(n));
    if (!l2 || !h) {
      o.fail("norm missing at sample " + std::to_string(k));
      continue;
    }
    worst = std::max(worst, rel_err(*h, *l2));
  }
  const auto gi = metaplectic::bargmann_transform_gaussian(phi0, GaussianPacket::centered(scalar(kI)), true).packet;
  const double amp_err = std::abs(std::abs(gi.amplitude()) - std::pow(2.0, 0.25));
  const double t_err = std::abs(gi.t()(0, 0));
  if (worst > 1e-9) o.fail("norm rel err " + fmt(worst));
  if (amp_err > 1e-12 || t_err > 1e-12) o.fail("g_i transform: T' " + fmt(t_err) + ", |amp| err " + fmt(amp_err));
  if (o.pass) o.detail = "50 samples, worst rel err " + fmt(worst) + "; g_i -> constant, |amp| = 2^{1/4}";
  return o;
}

std::string problem_json(const QuadraticWeight& a, const QuadraticWeight& b) {
  cli::ProblemSpec spec;
  spec.n = a.dim();
  spec.phi1 = cli::WeightSpec{a.levi(), a.pluriharmonic()};
  spec.phi2 = cli::WeightSpec{b.levi(), b.pluriharmonic()};
  return cli::dump(cli::to_json(spec));
}

std::string scratch_file(const std::string& name, const std::string& text) {
  const auto dir = std::filesystem::temp_directory_path() / "hphi_acceptance";
  std::filesystem::create_directories(dir);
  const auto p = dir / name;
  std::ofstream(p) << text;
  return p.string();
}

Outcome unboundedness() {
  Outcome o;
  Rng rng(808);
  int good = 0, exit_ones = 0;
  for (int k = 0; k < 20; ++k) {
    const int n = 1 + k % 3;
    const auto [p1, p2] = random_incomparable_pair(n, rng);
    const auto w = embedding::unboundedness_witness(p1, p2);
    double m1 = 0, m2 = 0;
    const bool in1 = metaplectic::in_space(w.packet, p1, &m1);
    const bool in2 = metaplectic::in_space(w.packet, p2, &m2);
    if (in1 && !in2 && m1 > 0 && m2 <= 1e-10 * 10) ++good;
    std::ostringstream out, err;
    const auto path = scratch_file("inc" + std::to_string(k) + ".json", problem_json(p1, p2));
    if (cli::run({"norm", "--input", path, "--quiet"}, out, err) == cli::kUnbounded) ++exit_ones;
  }
  if (good != 20) o.fail(std::to_string(good) + "/20 witnesses separate the spaces");
  if (exit_ones != 20) o.fail(std::to_string(exit_ones) + "/20 norm runs exit 1");
  if (o.pass) o.detail = "20/20 witnesses in H_Phi1 and not in H_Phi2; norm exits 1 on all";
  return o;
}

Outcome quadrature() {
  Outcome o;
  Rng rng(909);
  double worst = 0;
  int done = 0;
  while (done < 50) {
    const auto phi = random_weight(1, rng);
    const PhasePoint c(random_vector(1, rng, 0.5), random_vector(1, rng, 0.5));
    const GaussianPacket f(random_complex(rng), c, -kI * phi.pluriharmonic() + random_symmetric(1, rng, 0.3));
    double margin = 0;
    if (!metaplectic::in_space(f, phi, &margin) || margin <= 2e-3) continue;
    worst = std::max(worst, oracle::quadrature_check(f, phi, 80).rel_err);
    ++done;
  }
  if (worst > 1e-6) o.fail("rel err " + fmt(worst));
  if (o.pass) o.detail = "50 packets, worst rel err " + fmt(worst);
  return o;
}

Outcome determinism() {
  Outcome o;
  Rng rng(1010);
  const auto [p1, p2] = random_strict_pair(2, rng);
  const auto in = scratch_file("det.json", problem_json(p1, p2));
  std::vector<std::string> texts;
  for (int k = 0; k < 2; ++k) {
    const auto out_path = scratch_file("det_out" + std::to_string(k) + ".json", "");
    std::ostringstream out, err;
    const int code = cli::run({"verify", "--input", in, "--seed", "17", "--output", out_path}, out, err);
    if (code != 0) o.fail("verify exit code " + std::to_string(code) + ": " + err.str());
    std::ifstream f(out_path);
    auto j = cli::json::parse(f);
    j.erase("timestamp");
    texts.push_back(cli::dump(j));
  }
  if (texts.size() != 2 || texts[0] != texts[1]) o.fail("reports differ");
  if (o.pass) o.detail = "two verify reports identical (" + std::to_string(texts[0].size()) + " bytes)";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"levi-only pairs", levi_only_pairs},
      {"one-dimensional family", one_dimensional_family},
      {"boundary case", boundary_case},
      {"oracle equivalence", oracle_equivalence},
      {"structural identities", structural_identities},
      {"adjoint and unitarity", adjoint_and_unitarity},
      {"bargmann unitarity", bargmann_unitarity},
      {"unboundedness", unboundedness},
      {"quadrature validation", quadrature},
      {"determinism", determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s %2zu %-24s %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                o.detail.c_str(), secs);
    std::fflush(stdout);
    failures += o.pass ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}
