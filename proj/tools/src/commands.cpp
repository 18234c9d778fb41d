#include "hphi_cli/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "hphi/embedding.hpp"
#include "hphi/linalg.hpp"
#include "hphi/metaplectic.hpp"
#include "hphi/oracle.hpp"
#include "hphi_cli/problem.hpp"
#include "hphi_cli/report.hpp"

namespace hphi::cli {

namespace {

constexpr int kDefaultTrials = 2000;
constexpr std::uint64_t kDefaultSeed = 0;

struct Settings {
  std::string command;
  std::string input;
  std::string output;
  std::string csv;
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
  std::optional<double> tol;
  std::string eps_ladder;
  bool quiet = false;
};

struct Effective {
  double tol = weights::CompareOptions{}.rel_tol;
  std::vector<double> ladder = embedding::default_eps_ladder();
  std::uint64_t seed = kDefaultSeed;
  int trials = kDefaultTrials;
};

std::vector<double> parse_ladder_csv(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw InputError("--eps-ladder: cannot parse '" + item + "'");
    }
    if (used != item.size() || !(v > 0.0) || !std::isfinite(v))
      throw InputError("--eps-ladder: entries must be positive numbers, got '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw InputError("--eps-ladder: empty list");
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open input file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Flags override the input document; the document overrides defaults. The
// resolved values are written back into the echo so the report is re-runnable.
Effective resolve(const Settings& s, ProblemSpec& spec) {
  if (s.tol) spec.options.tol = s.tol;
  if (!s.eps_ladder.empty()) spec.options.eps_ladder = parse_ladder_csv(s.eps_ladder);
  if (s.seed) spec.options.seed = s.seed;
  if (s.trials) spec.options.trials = s.trials;
  if (spec.options.tol && !(*spec.options.tol > 0.0)) throw InputError("--tol must be positive");
  if (spec.options.trials && *spec.options.trials < 1) throw InputError("--trials must be positive");
  Effective e;
  if (spec.options.tol) e.tol = *spec.options.tol;
  if (spec.options.eps_ladder) e.ladder = *spec.options.eps_ladder;
  if (spec.options.seed) e.seed = *spec.options.seed;
  if (spec.options.trials) e.trials = *spec.options.trials;
  spec.options.tol = e.tol;
  spec.options.eps_ladder = e.ladder;
  spec.options.seed = e.seed;
  spec.options.trials = e.trials;
  return e;
}

struct Pair {
  weights::QuadraticWeight phi1;
  weights::QuadraticWeight phi2;
};

Pair require_pair(const ProblemSpec& spec) {
  if (!spec.phi1 || !spec.phi2) throw InputError("/: this command needs phi1 and phi2");
  return {spec.phi1->build("/phi1"), spec.phi2->build("/phi2")};
}

json base_report(const std::string& command, const ProblemSpec& spec, const Effective& e) {
  json r = json::object();
  r["tool"] = kToolName;
  r["version"] = kToolVersion;
  r["command"] = command;
  r["seed"] = e.seed;
  r["timestamp"] = timestamp_now();
  r["input"] = to_json(spec);
  r["verdict"] = nullptr;
  r["mus"] = nullptr;
  r["norm"] = nullptr;
  r["witness_T"] = nullptr;
  r["oracle"] = {{"ratio_at_witness", nullptr},
                 {"best_random_ratio", nullptr},
                 {"quadrature_rel_err", nullptr}};
  r["diagnostics"] = json::object();
  return r;
}

void fill_embedding(json& r, const embedding::EmbeddingResult& res) {
  r["verdict"] = embedding::to_string(res.verdict);
  r["ordering"] = weights::to_string(res.ordering);
  r["norm"] = optional_json(res.norm);
  if (res.verdict != embedding::Verdict::Unbounded) r["mus"] = res.mus;
  r["witness_T"] = res.witness_t ? matrix_json(*res.witness_t) : json(nullptr);
  r["low_confidence"] = res.low_confidence;
  r["diagnostics"] = diagnostics_json(res.diagnostics);
  if (res.diagnostics.witness_ratio) r["oracle"]["ratio_at_witness"] = *res.diagnostics.witness_ratio;
}

json epsilon_json(const embedding::EpsilonLimit& lim) {
  return {{"eps", lim.eps}, {"norms", lim.norms}};
}

// ---- commands -------------------------------------------------------------

int cmd_check(const Pair& p, const Effective& e, json& r) {
  const auto c = weights::compare(p.phi1, p.phi2, {e.tol});
  r["verdict"] = weights::to_string(c.ordering);
  r["ordering"] = weights::to_string(c.ordering);
  r["diagnostics"] = comparison_json(c);
  return kOk;
}

int cmd_spectrum(const Pair& p, const Effective& e, json& r) {
  const auto c = weights::compare(p.phi1, p.phi2, {e.tol});
  r["ordering"] = weights::to_string(c.ordering);
  if (c.ordering == weights::Ordering::Incomparable) {
    r["verdict"] = embedding::to_string(embedding::Verdict::Unbounded);
    r["diagnostics"] = comparison_json(c);
    return kUnbounded;
  }
  const auto s = embedding::embedding_spectrum(p.phi1, p.phi2, {e.tol});
  r["verdict"] = c.ordering == weights::Ordering::Strict
                     ? embedding::to_string(embedding::Verdict::BoundedStrict)
                     : embedding::to_string(embedding::Verdict::BoundedNonStrict);
  r["mus"] = s.mus;
  r["spectrum"] = spectrum_json(s);
  r["diagnostics"] = comparison_json(c);
  return kOk;
}

int cmd_norm(const Pair& p, const Effective& e, json& r) {
  const auto res = embedding::embedding_norm(p.phi1, p.phi2, {e.tol});
  fill_embedding(r, res);
  if (res.verdict == embedding::Verdict::Unbounded) {
    r["unboundedness_witness"] = unbounded_json(embedding::unboundedness_witness(p.phi1, p.phi2, {e.tol}));
    return kUnbounded;
  }
  if (res.verdict == embedding::Verdict::BoundedNonStrict)
    r["epsilon_limit"] = epsilon_json(embedding::epsilon_limit_norm(p.phi1, p.phi2, e.ladder, {e.tol}));
  return kOk;
}

int cmd_witness(const Pair& p, const Effective& e, json& r) {
  const auto res = embedding::embedding_norm(p.phi1, p.phi2, {e.tol});
  fill_embedding(r, res);
  if (res.verdict == embedding::Verdict::Unbounded) {
    r["unboundedness_witness"] = unbounded_json(embedding::unboundedness_witness(p.phi1, p.phi2, {e.tol}));
    return kUnbounded;
  }
  if (res.verdict == embedding::Verdict::BoundedNonStrict)
    r["note"] = "no witness Gaussian: the ordering is not strict and the supremum is not attained";
  return kOk;
}

int quadrature_order(int n) { return n == 1 ? oracle::kDefaultQuadratureOrder : 24; }

int cmd_verify(const Pair& p, const Effective& e, json& r) {
  const auto res = embedding::embedding_norm(p.phi1, p.phi2, {e.tol});
  fill_embedding(r, res);
  json checks = json::array();
  bool ok = true;
  auto check = [&](const std::string& name, bool pass, double value, double reference, double tol) {
    checks.push_back(
        {{"name", name}, {"pass", pass}, {"value", value}, {"reference", reference}, {"tolerance", tol}});
    ok = ok && pass;
  };

  if (res.verdict == embedding::Verdict::Unbounded) {
    const auto w = embedding::unboundedness_witness(p.phi1, p.phi2, {e.tol});
    r["unboundedness_witness"] = unbounded_json(w);
    check("witness_in_phi1", w.margin_phi1 > 0.0, w.margin_phi1, 0.0, 0.0);
    check("witness_not_in_phi2", !metaplectic::in_space(w.packet, p.phi2), w.margin_phi2, 0.0, 0.0);
  } else {
    const double norm = *res.norm;
    const int threads = worker_count();
    const auto search = oracle::random_search_norm(p.phi1, p.phi2, e.trials, e.seed, {threads});
    r["oracle"]["best_random_ratio"] = search.best_ratio;
    r["oracle"]["best_random_T"] = matrix_json(search.best_t);
    r["oracle"]["best_sampled_ratio"] = search.best_sampled_ratio;
    r["oracle"]["trials"] = search.trials;
    check("random_search_upper_bound", search.best_ratio <= norm * (1.0 + 1e-8), search.best_ratio,
          norm, 1e-8);
    if (res.verdict == embedding::Verdict::BoundedStrict) {
      const double wr = *res.diagnostics.witness_ratio;
      check("ratio_at_witness", std::abs(wr - norm) <= 1e-8 * norm, wr, norm, 1e-8);
      if (e.trials >= 2000)
        check("random_search_reaches_norm", search.best_ratio >= norm * (1.0 - 1e-3),
              search.best_ratio, norm, 1e-3);
      if (p.phi1.dim() <= 2) {
        const auto packet = metaplectic::GaussianPacket::centered(*res.witness_t);
        double margin = 0.0;
        if (metaplectic::in_space(packet, p.phi1, &margin) && margin > 1e-3) {
          const auto q = oracle::quadrature_check(packet, p.phi1, quadrature_order(p.phi1.dim()));
          r["oracle"]["quadrature_rel_err"] = q.rel_err;
          r["oracle"]["quadrature_order"] = q.order;
          check("quadrature_closed_form", q.rel_err <= 1e-6, q.numeric, q.closed_form, 1e-6);
        } else {
          r["oracle"]["quadrature_note"] = "witness too close to the space boundary for quadrature";
        }
      }
    } else {
      const auto lim = embedding::epsilon_limit_norm(p.phi1, p.phi2, e.ladder, {e.tol});
      r["epsilon_limit"] = epsilon_json(lim);
      check("epsilon_limit_below_norm", lim.norms.back() <= norm * (1.0 + 1e-9), lim.norms.back(), norm,
            1e-9);
    }
  }
  r["oracle"]["checks"] = checks;
  r["oracle"]["pass"] = ok;
  return ok ? kOk : kCrossCheckFailure;
}

// ---- demo -----------------------------------------------------------------

double family_norm(double a, double babs) {
  const double s = 1.0 + a * a - babs * babs;
  return std::pow((s - std::sqrt(s * s - 4.0 * a * a)) / (2.0 * a * a), 0.25);
}

Complex family_tau(double a, Complex b) {
  if (std::abs(b) == 0.0) return 0.0;
  const double bb = std::norm(b);
  const double s = 1.0 + a * a - bb;
  return -(1.0 / (2.0 * std::conj(b))) * kI * (1.0 - a * a + bb + std::sqrt(s * s - 4.0 * a * a));
}

struct Claim {
  std::string name;
  bool pass;
  std::string detail;
};

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(12) << v;
  return os.str();
}

int cmd_demo(json& r, std::ostream& out, bool quiet) {
  std::vector<Claim> claims;
  auto rel = [](double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); };
  auto add = [&](std::string name, bool pass, std::string detail) {
    claims.push_back({std::move(name), pass, std::move(detail)});
  };
  auto run_claim = [&](const std::string& name, auto&& fn) {
    try {
      fn();
    } catch (const std::exception& ex) {
      add(name, false, std::string("error: ") + ex.what());
    }
  };
  const auto phi0 = weights::QuadraticWeight::standard(1);

  run_claim("levi_only_norm_L4", [&] {
    CMatrix l(1, 1);
    l(0, 0) = 4.0;
    const auto res = embedding::embedding_norm(phi0, weights::QuadraticWeight::make(l, CMatrix::Zero(1, 1)));
    add("levi_only_norm_L4", res.norm && rel(*res.norm, 0.5) <= 1e-9,
        "norm " + fmt(res.norm.value_or(NAN)) + " vs sqrt(det L1/det L2) = 0.5");
  });
  run_claim("levi_only_n2_constant_witness", [&] {
    CMatrix l1(2, 2), l2(2, 2);
    l1 << 2.0, Complex(0.5, 0.5), Complex(0.5, -0.5), 1.5;
    l2 << 3.0, Complex(0.2, 1.0), Complex(0.2, -1.0), 4.0;
    const auto p1 = weights::QuadraticWeight::make(l1, CMatrix::Zero(2, 2));
    const auto p2 = weights::QuadraticWeight::make(l2, CMatrix::Zero(2, 2));
    const auto res = embedding::embedding_norm(p1, p2);
    const double expect = std::sqrt(linalg::determinant(l1).real() / linalg::determinant(l2).real());
    const double tnorm = res.witness_t ? res.witness_t->cwiseAbs().maxCoeff() : NAN;
    add("levi_only_n2_constant_witness", res.norm && rel(*res.norm, expect) <= 1e-9 && tnorm <= 1e-8,
        "norm " + fmt(res.norm.value_or(NAN)) + " vs " + fmt(expect) + ", |T| " + fmt(tnorm));
  });
  run_claim("family_a3_b1", [&] {
    const auto res = embedding::embedding_norm(phi0, weights::QuadraticWeight::one_dimensional(3.0, 1.0));
    const double expect = family_norm(3.0, 1.0);
    const Complex tau = family_tau(3.0, 1.0);
    const Complex t = res.witness_t ? (*res.witness_t)(0, 0) : Complex(NAN, NAN);
    add("family_a3_b1", res.norm && rel(*res.norm, expect) <= 1e-9 && std::abs(t - tau) <= 1e-8,
        "norm " + fmt(res.norm.value_or(NAN)) + " vs " + fmt(expect) + ", tau " + fmt(t.imag()) +
            "i vs " + fmt(tau.imag()) + "i");
  });
  run_claim("family_grid", [&] {
    int total = 0, good = 0;
    double worst = 0.0;
    for (double a : {1.5, 2.0, 3.0, 5.0})
      for (double babs : {0.0, 0.2, a - 1.2})
        for (double ph : {0.0, 0.7, 2.0}) {
          const Complex b = std::polar(babs, ph);
          const auto res = embedding::embedding_norm(phi0, weights::QuadraticWeight::one_dimensional(a, b));
          const double err = res.norm ? rel(*res.norm, family_norm(a, babs)) : INFINITY;
          const double terr =
              res.witness_t ? std::abs((*res.witness_t)(0, 0) - family_tau(a, b)) : INFINITY;
          worst = std::max({worst, err, terr});
          ++total;
          if (err <= 1e-9 && terr <= 1e-8) ++good;
        }
    add("family_grid", good == total,
        std::to_string(good) + "/" + std::to_string(total) + " grid points, worst error " + fmt(worst));
  });
  run_claim("boundary_a2_b1", [&] {
    const auto phi2 = weights::QuadraticWeight::one_dimensional(2.0, 1.0);
    const auto res = embedding::embedding_norm(phi0, phi2);
    const double expect = std::pow(2.0, -0.25);
    add("boundary_a2_b1",
        res.verdict == embedding::Verdict::BoundedNonStrict && res.norm && rel(*res.norm, expect) <= 1e-9,
        std::string(embedding::to_string(res.verdict)) + ", norm " + fmt(res.norm.value_or(NAN)) +
            " vs 2^(-1/4)");
    std::vector<double> ladder;
    for (int k = 1; k <= 10; ++k) ladder.push_back(std::pow(10.0, -k));
    const auto lim = embedding::epsilon_limit_norm(phi0, phi2, ladder);
    add("boundary_epsilon_limit", std::abs(lim.norms.back() - expect) <= 1e-5,
        "norm at eps=1e-10 " + fmt(lim.norms.back()) + ", gap " + fmt(expect - lim.norms.back()));
  });
  run_claim("boundary_delta_sequence", [&] {
    const double a = 2.0;
    const Complex b = 1.0;
    const auto phi2 = weights::QuadraticWeight::one_dimensional(a, b);
    const Complex tau = family_tau(a, b);
    double worst = 0.0;
    for (double d : {0.5, 0.9, 0.99}) {
      CMatrix t(1, 1);
      t(0, 0) = d * tau;
      const auto s = oracle::ratio(t, phi0, phi2);
      const double display =
          std::pow(4.0 * (2.0 * a + d - 1.0) * (1.0 - d) / (4.0 * (1.0 - d * d)), -0.25);
      worst = std::max(worst, s.ratio ? std::abs(*s.ratio - display) : INFINITY);
    }
    CMatrix t(1, 1);
    t(0, 0) = (1.0 - 1e-9) * tau;
    const auto near = oracle::ratio(t, phi0, phi2);
    const double limit = std::pow(a, -0.25);
    const bool trend = near.ratio && std::abs(*near.ratio - limit) <= 1e-6;
    add("boundary_delta_sequence", worst <= 1e-6 && trend,
        "max deviation from the closed form " + fmt(worst) + ", ratio at delta=1-1e-9 " +
            fmt(near.ratio.value_or(NAN)) + " vs a^(-1/4) " + fmt(limit));
  });
  run_claim("incomparable_a1.5_b1", [&] {
    const auto phi2 = weights::QuadraticWeight::one_dimensional(1.5, 1.0);
    const auto res = embedding::embedding_norm(phi0, phi2);
    const auto w = embedding::unboundedness_witness(phi0, phi2);
    add("incomparable_a1.5_b1",
        res.verdict == embedding::Verdict::Unbounded && w.margin_phi1 > 0.0 &&
            !metaplectic::in_space(w.packet, phi2),
        "verdict " + std::string(embedding::to_string(res.verdict)) + ", witness delta " + fmt(w.delta));
  });

  bool all = true;
  json list = json::array();
  for (const auto& c : claims) {
    all = all && c.pass;
    list.push_back({{"claim", c.name}, {"pass", c.pass}, {"detail", c.detail}});
    if (!quiet) out << (c.pass ? "PASS " : "FAIL ") << c.name << ": " << c.detail << "\n";
  }
  r["claims"] = list;
  r["verdict"] = all ? "PASS" : "FAIL";
  return all ? kOk : kCrossCheckFailure;
}

// ---- sweep ----------------------------------------------------------------

struct SweepRow {
  double a = 0.0;
  Complex b;
  std::string verdict;
  std::optional<double> norm;
  std::optional<double> closed_form;
  std::optional<Complex> tau;
  std::string error;
};

int cmd_sweep(const ProblemSpec& spec, const Effective& e, json& r, std::ostream& out, bool quiet,
              const std::string& csv_path) {
  SweepSpec grid = spec.sweep.value_or(
      SweepSpec{{1.0, 1.5, 2.0, 3.0, 5.0}, {0.0, 0.5, 1.0, Complex(0.0, 1.0), 2.0, Complex(1.5, 1.5)}});
  std::vector<SweepRow> rows;
  for (double a : grid.a)
    for (const auto& b : grid.b) rows.push_back({a, b, "", {}, {}, {}, ""});

  const auto phi0 = weights::QuadraticWeight::standard(1);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < rows.size(); i = next++) {
      auto& row = rows[i];
      try {
        const auto res = embedding::embedding_norm(
            phi0, weights::QuadraticWeight::one_dimensional(row.a, row.b), {e.tol});
        row.verdict = embedding::to_string(res.verdict);
        row.norm = res.norm;
        if (res.witness_t) row.tau = (*res.witness_t)(0, 0);
        if (res.verdict != embedding::Verdict::Unbounded)
          row.closed_form = family_norm(row.a, std::abs(row.b));
      } catch (const InputError& ex) {
        row.verdict = "ERROR";
        row.error = ex.what();
      } catch (const Error& ex) {
        row.verdict = "ERROR";
        row.error = ex.what();
      }
    }
  };
  const int threads = std::max(1, std::min<int>(worker_count(), static_cast<int>(rows.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  json table = json::array();
  bool failed = false;
  for (const auto& row : rows) {
    json j = {{"a", row.a},
              {"b", complex_json(row.b)},
              {"verdict", row.verdict},
              {"norm", optional_json(row.norm)},
              {"closed_form", optional_json(row.closed_form)},
              {"tau", row.tau ? complex_json(*row.tau) : json(nullptr)}};
    if (!row.error.empty()) {
      j["error"] = row.error;
      failed = true;
    }
    table.push_back(j);
  }
  r["rows"] = table;
  r["verdict"] = failed ? "ERROR" : "OK";

  if (!quiet) {
    out << std::left << std::setw(8) << "a" << std::setw(22) << "b" << std::setw(20) << "verdict"
        << std::setw(22) << "norm" << "closed_form\n";
    for (const auto& row : rows) {
      std::ostringstream b;
      b << std::setprecision(6) << row.b.real() << (row.b.imag() < 0 ? "-" : "+") << std::abs(row.b.imag())
        << "i";
      out << std::left << std::setw(8) << fmt(row.a) << std::setw(22) << b.str() << std::setw(20)
          << row.verdict << std::setw(22) << (row.norm ? fmt(*row.norm) : "-")
          << (row.closed_form ? fmt(*row.closed_form) : "-") << "\n";
    }
  }
  if (!csv_path.empty()) {
    std::ofstream csv(csv_path);
    if (!csv) throw InputError("cannot open CSV file " + csv_path);
    csv << "a,b_re,b_im,verdict,norm\n";
    char buf[64];
    auto num = [&](double v) {
      std::snprintf(buf, sizeof buf, "%.17g", v);
      return std::string(buf);
    };
    for (const auto& row : rows)
      csv << num(row.a) << "," << num(row.b.real()) << "," << num(row.b.imag()) << "," << row.verdict
          << "," << (row.norm ? num(*row.norm) : "") << "\n";
  }
  return failed ? kCrossCheckFailure : kOk;
}

}  // namespace

int worker_count() {
  int n = static_cast<int>(std::thread::hardware_concurrency());
  if (n < 1) n = 1;
  if (const char* cap = std::getenv("HPHI_EMBED_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(cap, &end, 10);
    if (end != cap && *end == '\0' && v >= 1) n = std::min<long>(n, v);
  }
  return n;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Operator norm of embeddings between Gaussian-weighted spaces of holomorphic functions",
               kToolName};
  Settings s;
  app.add_option("command", s.command, "check | spectrum | norm | witness | verify | demo | sweep")
      ->required()
      ->check(CLI::IsMember({"check", "spectrum", "norm", "witness", "verify", "demo", "sweep"}));
  app.add_option("--input", s.input, "problem JSON file");
  app.add_option("--output", s.output, "write the JSON report here instead of stdout");
  app.add_option("--seed", s.seed, "random seed (default 0)");
  app.add_option("--trials", s.trials, "random-search trials (default 2000)");
  app.add_option("--eps-ladder", s.eps_ladder, "comma-separated eps values for the regularization ladder");
  app.add_option("--tol", s.tol, "relative positive-definiteness tolerance (default 1e-9)");
  app.add_option("--csv", s.csv, "sweep: also write a flat CSV table");
  app.add_flag("--quiet", s.quiet, "suppress stdout output");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& ex) {
    err << kToolName << ": " << ex.what() << "\n";
    return kInputError;
  }

  const bool text_command = s.command == "demo" || s.command == "sweep";
  json report;
  ProblemSpec spec;
  Effective eff;
  int code = kOk;
  try {
    if (!s.input.empty()) spec = parse_problem_text(read_file(s.input));
    eff = resolve(s, spec);
    report = base_report(s.command, spec, eff);
    if (s.command == "demo") {
      code = cmd_demo(report, out, s.quiet);
    } else if (s.command == "sweep") {
      code = cmd_sweep(spec, eff, report, out, s.quiet, s.csv);
    } else {
      if (s.input.empty()) throw InputError("--input is required for " + s.command);
      const Pair p = require_pair(spec);
      if (s.command == "check") code = cmd_check(p, eff, report);
      else if (s.command == "spectrum") code = cmd_spectrum(p, eff, report);
      else if (s.command == "norm") code = cmd_norm(p, eff, report);
      else if (s.command == "witness") code = cmd_witness(p, eff, report);
      else code = cmd_verify(p, eff, report);
    }
  } catch (const InputError& ex) {
    err << kToolName << ": input error: " << ex.what() << "\n";
    if (report.is_null()) return kInputError;
    report["error"] = ex.what();
    code = kInputError;
  } catch (const std::exception& ex) {
    err << kToolName << ": internal check failed: " << ex.what() << "\n";
    if (report.is_null()) return kCrossCheckFailure;
    report["error"] = ex.what();
    code = kCrossCheckFailure;
  }
  report["exit_code"] = code;

  const std::string text = dump(report) + "\n";
  if (!s.output.empty()) {
    std::ofstream f(s.output, std::ios::binary);
    if (!f) {
      err << kToolName << ": cannot write " << s.output << "\n";
      return kInputError;
    }
    f << text;
  } else if (!text_command && !s.quiet) {
    out << text;
  }
  return code;
}

}  // namespace hphi::cli
