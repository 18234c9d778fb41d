#include "hphi_cli/report.hpp"

#include <chrono>
#include <ctime>

namespace hphi::cli {

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json comparison_json(const weights::Comparison& c) {
  json j = {{"ordering", weights::to_string(c.ordering)},
            {"margin", c.margin},
            {"tolerance", c.tolerance},
            {"tilde_p_norm", optional_json(c.tilde_p_norm)}};
  j["reduced_levi_gap_pd"] = c.reduced_levi_gap_pd ? json(*c.reduced_levi_gap_pd) : json(nullptr);
  json dir = json::array();
  for (Eigen::Index i = 0; i < c.direction.size(); ++i) dir.push_back(c.direction(i));
  j["direction"] = dir;
  return j;
}

json spectrum_json(const embedding::Spectrum& s) {
  json full = json::array();
  for (const auto& z : s.full) full.push_back(complex_json(z));
  return {{"mus", s.mus},
          {"full", full},
          {"eig_residual", s.eig_residual},
          {"imag_residual", s.imag_residual},
          {"pairing_residual", s.pairing_residual},
          {"product_residual", s.product_residual},
          {"eigenvector_condition", s.eigenvector_condition}};
}

json diagnostics_json(const embedding::Diagnostics& d) {
  return {{"margin", d.margin},
          {"tolerance", d.tolerance},
          {"eig_residual", d.eig_residual},
          {"imag_residual", d.imag_residual},
          {"pairing_residual", d.pairing_residual},
          {"product_residual", d.product_residual},
          {"eigenvector_condition", d.eigenvector_condition},
          {"det_ratio", d.det_ratio},
          {"det_ratio_imag", d.det_ratio_imag},
          {"stable_condition", optional_json(d.stable_condition)},
          {"witness_symmetry", optional_json(d.witness_symmetry)},
          {"witness_ratio", optional_json(d.witness_ratio)}};
}

json unbounded_json(const embedding::UnboundednessWitness& w) {
  return {{"delta", w.delta},
          {"T", matrix_json(w.packet.t())},
          {"x0_reduced", vector_json(w.x0)},
          {"reduced_margin", w.reduced_margin},
          {"margin_phi1", w.margin_phi1},
          {"margin_phi2", w.margin_phi2}};
}

std::string timestamp_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace hphi::cli
