#pragma once

// Input documents for hphi-embed and the JSON conventions shared with the
// report: complex numbers are [re, im], matrices are row-major nested arrays,
// floats are written with 17 significant digits.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hphi/types.hpp"
#include "hphi/weights.hpp"

namespace hphi::cli {

using json = nlohmann::json;

struct WeightSpec {
  CMatrix l;
  CMatrix p;
  bool operator==(const WeightSpec& o) const;
  weights::QuadraticWeight build(const std::string& path) const;
};

struct Options {
  std::optional<double> tol;
  std::optional<std::vector<double>> eps_ladder;
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
  bool operator==(const Options& o) const = default;
};

struct SweepSpec {
  std::vector<double> a;
  std::vector<Complex> b;
  bool operator==(const SweepSpec& o) const = default;
};

struct ProblemSpec {
  int n = 0;
  std::optional<WeightSpec> phi1;
  std::optional<WeightSpec> phi2;
  Options options;
  std::optional<SweepSpec> sweep;
  bool operator==(const ProblemSpec& o) const = default;
};

/// Throws InputError with a JSON-pointer location on malformed input.
ProblemSpec parse_problem(const json& doc);
ProblemSpec parse_problem_text(const std::string& text);
json to_json(const ProblemSpec& spec);

json complex_json(Complex z);
json matrix_json(const CMatrix& m);
json vector_json(const CVector& v);

/// Serializes with every float at 17 significant digits (non-finite as null).
std::string dump(const json& j, int indent = 2);

}  // namespace hphi::cli
