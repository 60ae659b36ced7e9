#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "psilab/chebyshev_psi.hpp"
#include "psilab/zero_table.hpp"

namespace psilab {

// End-to-end amplification experiment configuration.
struct PipelineConfig {
  double x_lo = 0.0;
  double x_hi = 0.0;          // scan range [x_lo, x_hi]
  double eps = 0.0;           // epsilon
  double delta = 0.0;         // delta in (0, 1/2); alpha = 1 - delta, beta = delta
  double c_const = 100.0;     // absolute constant C (rho = eps / C)
  double a_const = 1.0;       // constant A in the k choice
  int k_max = 8;              // cap for exact/sampled tuple work
  std::size_t witness_max = 8;
  bool witness_fallback = true;  // take top normalized errors if the strict
                                 // eps threshold yields no witnesses
  std::size_t holder_samples = 200;
  int avg_trials = 16;
  int avg_beta_grid = 4;
  std::uint64_t seed = 1;
  std::string table_id;
};

// Runs the staged amplification experiment and returns the structured
// report.  Stage precondition failures truncate the report (each remaining
// stage carries a "not_reached" marker); the function itself only throws on
// config validation errors.
nlohmann::json run_pipeline(const PipelineConfig& config, const ZeroTable& table,
                            const PsiSeries& series);

}  // namespace psilab
