#pragma once

#include <cstdint>
#include <vector>

namespace psilab {

// Inputs for the exponential-sum concentration step (rank-1 Bohr shift).
struct ConcentrationInstance {
  std::vector<double> points;  // x_j in [0, t]
  double t = 0.0;
  double freq = 0.0;   // alpha
  double delta = 0.0;  // exponential-sum density delta
  double eps = 0.0;    // Bohr radius epsilon
};

struct HypothesisFlags {
  bool alpha_cond = false;  // alpha t >= 2 / delta
  bool large_sum = false;   // |sum e(alpha x_j)| >= delta N
  bool eps_cond = false;    // eps < delta / C
  double sum_modulus = 0.0;

  bool all() const { return alpha_cond && large_sum && eps_cond; }
};

HypothesisFlags check_hypotheses(const ConcentrationInstance& inst,
                                 double c_const);

struct ConcentrateResult {
  double beta_star = 0.0;
  long long achieved = 0;
  double threshold = 0.0;  // 2 eps (1 + delta/16) N
  bool threshold_met = false;
  bool refined = false;     // second pass at spacing eps/64 was needed
  bool report_only = false; // hypotheses not met; result is exploratory
  HypothesisFlags flags;
};

// Maximizes |{j : ||alpha x_j + beta|| <= eps}| over a beta grid of spacing
// eps/8 plus the N critical phases; refines once to eps/64 when the
// concentration threshold is not met under valid hypotheses.
ConcentrateResult concentrate(const ConcentrationInstance& inst,
                              double c_const = 100.0);

struct HolderTuple {
  std::vector<std::size_t> indices;
  long long count = 0;
};

struct HolderResult {
  double lhs = 0.0;      // (2 rho)^k (1 + boost)^k |xs|^k |N1|
  double lhs_log = 0.0;  // natural log, safe for large k
  double rhs = 0.0;      // tuple sum (exact) or scaled sample mean
  double rhs_log = 0.0;
  bool sampled = false;
  double sample_stderr = 0.0;  // standard error of the scaled estimate
  std::vector<HolderTuple> per_tuple;
};

// RHS counts gamma in zeros_n1 meeting all k rank-1 constraints at the
// derived phases (a lower bound for the max over phases).  Exhaustive when
// |xs|^k <= max_exhaustive, else deterministic tuple sampling.
HolderResult holder_amplify(const std::vector<double>& xs,
                            const std::vector<double>& beta_of_x,
                            const std::vector<double>& zeros_n1, double rho,
                            int k, double density_boost,
                            std::uint64_t seed = 1,
                            std::size_t max_exhaustive = 1000000,
                            std::size_t sample_count = 2000);

}  // namespace psilab
