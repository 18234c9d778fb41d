#pragma once

#include <string>

#include "hphi/embedding.hpp"
#include "hphi/weights.hpp"
#include "hphi_cli/problem.hpp"

namespace hphi::cli {

inline constexpr const char* kToolName = "hphi-embed";
inline constexpr const char* kToolVersion = "0.1.0";

json optional_json(const std::optional<double>& v);
json comparison_json(const weights::Comparison& c);
json spectrum_json(const embedding::Spectrum& s);
json diagnostics_json(const embedding::Diagnostics& d);
json unbounded_json(const embedding::UnboundednessWitness& w);

/// UTC time in ISO-8601; the only field excluded from determinism checks.
std::string timestamp_now();

}  // namespace hphi::cli
