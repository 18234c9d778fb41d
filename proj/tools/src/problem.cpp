#include "hphi_cli/problem.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace hphi::cli {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw InputError((path.empty() ? std::string("/") : path) + ": " + msg);
}

double parse_real(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(path, "number is not finite");
  return v;
}

Complex parse_complex(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2) fail(path, "expected a complex number [re, im]");
  return {parse_real(j[0], path + "/0"), parse_real(j[1], path + "/1")};
}

CMatrix parse_matrix(const json& j, int n, const std::string& path) {
  if (!j.is_array() || static_cast<int>(j.size()) != n)
    fail(path, "expected " + std::to_string(n) + " rows");
  CMatrix m(n, n);
  for (int r = 0; r < n; ++r) {
    const std::string rp = path + "/" + std::to_string(r);
    if (!j[r].is_array() || static_cast<int>(j[r].size()) != n)
      fail(rp, "expected " + std::to_string(n) + " entries");
    for (int c = 0; c < n; ++c) m(r, c) = parse_complex(j[r][c], rp + "/" + std::to_string(c));
  }
  return m;
}

WeightSpec parse_weight(const json& j, int n, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object with L and P");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (it.key() != "L" && it.key() != "P") fail(path + "/" + it.key(), "unknown field");
  if (!j.contains("L")) fail(path, "missing field L");
  WeightSpec w;
  w.l = parse_matrix(j.at("L"), n, path + "/L");
  w.p = j.contains("P") ? parse_matrix(j.at("P"), n, path + "/P") : CMatrix(CMatrix::Zero(n, n));
  w.build(path);  // validate now so errors carry the location
  return w;
}

std::uint64_t parse_uint(const json& j, const std::string& path) {
  if (!j.is_number_integer() || (j.is_number_integer() && !j.is_number_unsigned() && j.get<long long>() < 0))
    fail(path, "expected a non-negative integer");
  return j.get<std::uint64_t>();
}

void format_double(std::string& out, double v) {
  if (!std::isfinite(v)) {
    out += "null";
    return;
  }
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += buf;
  // Keep floats recognizable as floats on re-read.
  std::string_view s(buf);
  if (s.find_first_of(".eE") == std::string_view::npos) out += ".0";
}

void emit(std::string& out, const json& j, int indent, int depth) {
  const std::string pad = indent > 0 ? std::string(static_cast<std::size_t>(indent * (depth + 1)), ' ') : "";
  const std::string close_pad = indent > 0 ? std::string(static_cast<std::size_t>(indent * depth), ' ') : "";
  const char* nl = indent > 0 ? "\n" : "";
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{";
      out += nl;
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) {
          out += ",";
          out += nl;
        }
        first = false;
        out += pad;
        out += json(it.key()).dump();
        out += indent > 0 ? ": " : ":";
        emit(out, it.value(), indent, depth + 1);
      }
      out += nl;
      out += close_pad;
      out += "}";
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // Numeric arrays and rows of complex pairs stay on one line.
      auto scalar = [](const json& e) { return e.is_number() || e.is_null(); };
      bool flat = true;
      for (const auto& e : j) {
        if (scalar(e)) continue;
        if (!e.is_array()) flat = false;
        else
          for (const auto& x : e)
            if (!scalar(x)) flat = false;
      }
      out += "[";
      if (flat) {
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) out += ", ";
          emit(out, j[i], indent, depth + 1);
        }
        out += "]";
        return;
      }
      out += nl;
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) {
          out += ",";
          out += nl;
        }
        out += pad;
        emit(out, j[i], indent, depth + 1);
      }
      out += nl;
      out += close_pad;
      out += "]";
      return;
    }
    case json::value_t::number_float:
      format_double(out, j.get<double>());
      return;
    default:
      out += j.dump();
      return;
  }
}

}  // namespace

bool WeightSpec::operator==(const WeightSpec& o) const {
  return l.rows() == o.l.rows() && l.cols() == o.l.cols() && p.rows() == o.p.rows() &&
         p.cols() == o.p.cols() && (l.array() == o.l.array()).all() &&
         (p.array() == o.p.array()).all();
}

weights::QuadraticWeight WeightSpec::build(const std::string& path) const {
  try {
    return weights::QuadraticWeight::make(l, p);
  } catch (const InputError& e) {
    fail(path, e.what());
  }
}

ProblemSpec parse_problem(const json& doc) {
  if (!doc.is_object()) fail("", "expected a JSON object");
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    const auto& k = it.key();
    if (k != "n" && k != "phi1" && k != "phi2" && k != "options" && k != "sweep")
      fail("/" + k, "unknown field");
  }
  ProblemSpec spec;
  const bool has_pair = doc.contains("phi1") || doc.contains("phi2");
  if (has_pair) {
    if (!doc.contains("n")) fail("", "missing field n");
    const auto n = parse_uint(doc.at("n"), "/n");
    if (n < 1 || n > 8) fail("/n", "dimension must be between 1 and 8");
    spec.n = static_cast<int>(n);
    if (!doc.contains("phi1")) fail("", "missing field phi1");
    if (!doc.contains("phi2")) fail("", "missing field phi2");
    spec.phi1 = parse_weight(doc.at("phi1"), spec.n, "/phi1");
    spec.phi2 = parse_weight(doc.at("phi2"), spec.n, "/phi2");
  } else if (doc.contains("n")) {
    const auto n = parse_uint(doc.at("n"), "/n");
    spec.n = static_cast<int>(n);
  }

  if (doc.contains("options")) {
    const json& o = doc.at("options");
    if (!o.is_object()) fail("/options", "expected an object");
    for (auto it = o.begin(); it != o.end(); ++it) {
      const std::string p = "/options/" + it.key();
      if (it.key() == "tol") {
        spec.options.tol = parse_real(it.value(), p);
        if (!(*spec.options.tol > 0.0)) fail(p, "tolerance must be positive");
      } else if (it.key() == "eps_ladder") {
        if (!it.value().is_array() || it.value().empty()) fail(p, "expected a non-empty array");
        std::vector<double> lad;
        for (std::size_t i = 0; i < it.value().size(); ++i) {
          const double e = parse_real(it.value()[i], p + "/" + std::to_string(i));
          if (!(e > 0.0)) fail(p + "/" + std::to_string(i), "ladder entries must be positive");
          lad.push_back(e);
        }
        spec.options.eps_ladder = lad;
      } else if (it.key() == "seed") {
        spec.options.seed = parse_uint(it.value(), p);
      } else if (it.key() == "trials") {
        const auto t = parse_uint(it.value(), p);
        if (t < 1 || t > 100000000) fail(p, "trials must be between 1 and 1e8");
        spec.options.trials = static_cast<int>(t);
      } else {
        fail(p, "unknown option");
      }
    }
  }

  if (doc.contains("sweep")) {
    const json& s = doc.at("sweep");
    if (!s.is_object()) fail("/sweep", "expected an object with a and b");
    for (auto it = s.begin(); it != s.end(); ++it)
      if (it.key() != "a" && it.key() != "b") fail("/sweep/" + it.key(), "unknown field");
    if (!s.contains("a") || !s.at("a").is_array() || s.at("a").empty())
      fail("/sweep/a", "expected a non-empty array of numbers");
    if (!s.contains("b") || !s.at("b").is_array() || s.at("b").empty())
      fail("/sweep/b", "expected a non-empty array of complex numbers");
    SweepSpec sw;
    for (std::size_t i = 0; i < s.at("a").size(); ++i) {
      const double a = parse_real(s.at("a")[i], "/sweep/a/" + std::to_string(i));
      if (!(a > 0.0)) fail("/sweep/a/" + std::to_string(i), "a must be positive");
      sw.a.push_back(a);
    }
    for (std::size_t i = 0; i < s.at("b").size(); ++i)
      sw.b.push_back(parse_complex(s.at("b")[i], "/sweep/b/" + std::to_string(i)));
    spec.sweep = sw;
  }
  return spec;
}

ProblemSpec parse_problem_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("malformed JSON: ") + e.what());
  }
  return parse_problem(doc);
}

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

json matrix_json(const CMatrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_json(m(r, c)));
    rows.push_back(row);
  }
  return rows;
}

json vector_json(const CVector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(complex_json(v(i)));
  return out;
}

json to_json(const ProblemSpec& spec) {
  json doc = json::object();
  if (spec.phi1 || spec.n > 0) doc["n"] = spec.n;
  if (spec.phi1) doc["phi1"] = {{"L", matrix_json(spec.phi1->l)}, {"P", matrix_json(spec.phi1->p)}};
  if (spec.phi2) doc["phi2"] = {{"L", matrix_json(spec.phi2->l)}, {"P", matrix_json(spec.phi2->p)}};
  json opts = json::object();
  if (spec.options.tol) opts["tol"] = *spec.options.tol;
  if (spec.options.eps_ladder) opts["eps_ladder"] = *spec.options.eps_ladder;
  if (spec.options.seed) opts["seed"] = *spec.options.seed;
  if (spec.options.trials) opts["trials"] = *spec.options.trials;
  if (!opts.empty()) doc["options"] = opts;
  if (spec.sweep) {
    json b = json::array();
    for (const auto& z : spec.sweep->b) b.push_back(complex_json(z));
    doc["sweep"] = {{"a", spec.sweep->a}, {"b", b}};
  }
  return doc;
}

std::string dump(const json& j, int indent) {
  std::string out;
  emit(out, j, indent, 0);
  return out;
}

}  // namespace hphi::cli
