#include "psilab/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "psilab/amplifier.hpp"
#include "psilab/bohr.hpp"
#include "psilab/explicit_formula.hpp"
#include "psilab/kahan.hpp"
#include "psilab/majorant.hpp"

namespace psilab {

namespace {

using nlohmann::json;

constexpr double kTwoPi = 2.0 * std::numbers::pi;

json to_json(const ErrorSample& e) {
  return json{{"x", e.x},
              {"psi_x", e.psi_x},
              {"err", e.err},
              {"normalized", e.normalized},
              {"schoenfeld_ratio", e.schoenfeld_ratio}};
}

// Top normalized-error points when the strict eps threshold has no
// witnesses: candidates at both sides of every jump, greedy separated pick.
std::vector<ErrorSample> fallback_witnesses(const PsiSeries& series,
                                            double x_lo, double x_hi,
                                            double gap, std::size_t max_n) {
  std::vector<ErrorSample> cand;
  for (std::size_t j = 0; j < series.jump_points.size(); ++j) {
    const auto p = static_cast<double>(series.jump_points[j]);
    if (p < x_lo || p > x_hi) continue;
    cand.push_back(error_term(series, p));                       // after jump
    const double before = std::nextafter(p, x_lo);
    if (before >= x_lo) cand.push_back(error_term(series, before));
  }
  std::sort(cand.begin(), cand.end(), [](const auto& a, const auto& b) {
    return std::abs(a.normalized) > std::abs(b.normalized);
  });
  std::vector<ErrorSample> picked;
  for (const auto& c : cand) {
    if (picked.size() >= max_n) break;
    bool ok = true;
    for (const auto& p : picked)
      if (std::abs(p.x - c.x) < gap) ok = false;
    if (ok) picked.push_back(c);
  }
  std::sort(picked.begin(), picked.end(),
            [](const auto& a, const auto& b) { return a.x < b.x; });
  return picked;
}

}  // namespace

json run_pipeline(const PipelineConfig& cfg, const ZeroTable& table,
                  const PsiSeries& series) {
  if (!(cfg.eps > 0.0)) throw std::domain_error("pipeline: eps > 0 required");
  if (!(cfg.delta > 0.0 && cfg.delta < 0.5))
    throw std::domain_error("pipeline: delta in (0, 1/2) required");
  if (!(2.0 <= cfg.x_lo && cfg.x_lo < cfg.x_hi &&
        cfg.x_hi <= static_cast<double>(series.limit_x)))
    throw std::domain_error("pipeline: x range outside the psi series");
  if (cfg.c_const <= 0.0 || cfg.a_const <= 0.0 || cfg.k_max < 1)
    throw std::domain_error("pipeline: constants C, A, k_max must be positive");

  const double eps = cfg.eps, delta = cfg.delta;
  const double alpha = 1.0 - delta;
  const double beta = delta;
  const double rho = eps / cfg.c_const;
  const double eta = eps * delta / 10000.0;
  const double boost = eps * delta / 1000.0;
  const double ed = eps * delta;
  const double k_uncapped = cfg.a_const * std::log(1.0 / ed) / ed;
  const int k = std::min<int>(cfg.k_max, static_cast<int>(std::ceil(k_uncapped)));
  const double k_big = std::ceil(k_uncapped);
  const double sep_exponent =
      std::clamp(1.0 - (1.0 - 2.0 * delta) * std::sqrt(kTwoPi * eps), 0.0, 1.0);
  const auto cap_k = static_cast<double>(std::max<std::size_t>(1, std::ceil(1.0 / ed)));

  const double window_lo = std::pow(cfg.x_hi, alpha * std::sqrt(kTwoPi * eps));
  const double window_hi = std::log(cfg.x_hi) * std::sqrt(cfg.x_hi);
  if (!(window_lo < std::min(window_hi, table.t_max)))
    throw std::domain_error(
        "pipeline: zero table does not cover the pigeonhole t window");

  json report;
  report["report_version"] = 1;
  report["inputs"] = {{"x_lo", cfg.x_lo},       {"x_hi", cfg.x_hi},
                      {"eps", eps},             {"delta", delta},
                      {"c_const", cfg.c_const}, {"a_const", cfg.a_const},
                      {"k_max", cfg.k_max},     {"seed", cfg.seed},
                      {"table_id", cfg.table_id.empty() ? table.source_id
                                                        : cfg.table_id}};
  report["parameters"] = {{"alpha", alpha},
                          {"beta", beta},
                          {"rho", rho},
                          {"eta", eta},
                          {"density_boost", boost},
                          {"k", k},
                          {"k_uncapped", k_uncapped},
                          {"big_k", cap_k},
                          {"sep_exponent", sep_exponent},
                          {"window_lo", window_lo},
                          {"window_hi", window_hi}};
  report["metadata"] = {
      {"epsilon1_interpretation",
       "epsilon_1 in the final-inequality bookkeeping is read as delta"},
      {"reference_constants",
       {{"oscillation_c_prime", 0.53517}, {"moment_c", 2.0 / std::numbers::pi}}},
      {"pair_correlation_form_factor",
       "standard (sin pi u / pi u)^2 normalization"}};

  json stages;
  for (const char* name : {"large_value_scan", "pigeonhole", "partition",
                           "concentration", "holder", "bohr",
                           "final_inequality"})
    stages[name] = {{"status", "not_reached"}};

  auto finish = [&](const char* stage, const std::string& why) {
    stages[stage] = {{"status", "failed"}, {"error", why}};
    report["stages"] = stages;
    return report;
  };

  // --- stage 1: large-value scan -----------------------------------------
  std::vector<ErrorSample> witnesses;
  bool fallback_used = false;
  try {
    LargeValueScan scan =
        large_value_scan(series, cfg.x_lo, cfg.x_hi, eps, sep_exponent);
    const double gap = std::pow(cfg.x_hi, sep_exponent);
    for (const auto& w : scan.witnesses) {
      if (witnesses.size() >= cfg.witness_max) break;
      if (witnesses.empty() || w.x - witnesses.back().x >= gap)
        witnesses.push_back(w);
    }
    if (witnesses.empty() && cfg.witness_fallback) {
      witnesses =
          fallback_witnesses(series, cfg.x_lo, cfg.x_hi, gap, cfg.witness_max);
      fallback_used = true;
    }
    json jw = json::array();
    for (const auto& w : witnesses) jw.push_back(to_json(w));
    stages["large_value_scan"] = {
        {"status", "ok"},
        {"measure", scan.measure},
        {"strict_witness_count", scan.witnesses.size()},
        {"separated_count", scan.separated_subset.size()},
        {"fallback_used", fallback_used},
        {"witnesses", jw}};
  } catch (const std::exception& e) {
    return finish("large_value_scan", e.what());
  }
  if (witnesses.empty())
    return finish("pigeonhole", "no witnesses available from stage 1");

  // --- stage 2: pigeonhole over t -----------------------------------------
  std::vector<double> xs;
  for (const auto& w : witnesses) xs.push_back(w.x);
  double t_star = 0.0;
  std::vector<double> x0;
  try {
    PigeonholeResult pig = pigeonhole_T(table, xs, cfg.x_hi, eps, alpha, beta,
                                        default_threshold_coeff());
    t_star = pig.t_star;
    x0 = pig.x0;
    const bool empty_x0 = x0.empty();
    if (empty_x0) x0 = xs;  // exploratory continuation, flagged below
    stages["pigeonhole"] = {{"status", "ok"},
                            {"t_star", t_star},
                            {"x0_count", pig.x0.size()},
                            {"fraction", pig.fraction},
                            {"benchmark_fraction", pig.benchmark},
                            {"benchmark_fraction_div100", pig.benchmark / 100.0},
                            {"x0_empty_fallback", empty_x0},
                            {"grid_size", pig.grid_size}};
  } catch (const std::exception& e) {
    return finish("pigeonhole", e.what());
  }

  // --- stage 3: zero partition at t_star ----------------------------------
  std::vector<double> n1_zeros;
  try {
    ZeroPartition part = partition_zeros(table, t_star, cap_k, 2.0);
    n1_zeros.reserve(part.n1.size());
    for (std::size_t idx : part.n1) n1_zeros.push_back(table.ordinates[idx]);
    stages["partition"] = {{"status", "ok"},
                           {"k_param", cap_k},
                           {"c_param", 2.0},
                           {"n1_count", part.n1.size()},
                           {"n2_count", part.n2.size()},
                           {"n2_fraction", part.n2_fraction},
                           {"n2_bound_ok", part.n2_bound_ok},
                           {"interval_length", part.interval_length}};
  } catch (const std::exception& e) {
    return finish("partition", e.what());
  }

  // --- stage 4: concentration per witness ---------------------------------
  std::vector<double> beta_of_x(x0.size(), 0.0);
  json jconc = json::array();
  try {
    for (std::size_t i = 0; i < x0.size(); ++i) {
      ConcentrationInstance inst;
      inst.points = n1_zeros;
      inst.t = t_star;
      inst.freq = std::log(x0[i]) / kTwoPi;
      const auto n1n = static_cast<double>(n1_zeros.size());
      // measured exponential-sum density over N1
      KahanComplexSum s;
      for (double g : n1_zeros) {
        const long double y = static_cast<long double>(inst.freq) * g;
        const double a = kTwoPi * static_cast<double>(y - std::floor(y));
        s.add({std::cos(a), std::sin(a)});
      }
      inst.delta = n1n > 0.0 ? std::abs(s.value()) / n1n : 0.0;
      inst.eps = rho;
      ConcentrateResult r = concentrate(inst, cfg.c_const);
      beta_of_x[i] = r.beta_star;
      jconc.push_back({{"x", x0[i]},
                       {"freq", inst.freq},
                       {"measured_delta", inst.delta},
                       {"beta_star", r.beta_star},
                       {"achieved", r.achieved},
                       {"threshold", r.threshold},
                       {"threshold_met", r.threshold_met},
                       {"report_only", r.report_only},
                       {"flags",
                        {{"alpha_cond", r.flags.alpha_cond},
                         {"large_sum", r.flags.large_sum},
                         {"eps_cond", r.flags.eps_cond}}}});
    }
    stages["concentration"] = {{"status", "ok"}, {"per_witness", jconc}};
  } catch (const std::exception& e) {
    return finish("concentration", e.what());
  }

  // --- stage 5: Hoelder amplification --------------------------------------
  try {
    HolderResult h =
        holder_amplify(x0, beta_of_x, n1_zeros, rho, k, boost, cfg.seed,
                       1000000, cfg.holder_samples);
    stages["holder"] = {{"status", "ok"},
                        {"k", k},
                        {"lhs", h.lhs},
                        {"lhs_log", h.lhs_log},
                        {"rhs", h.rhs},
                        {"rhs_log", h.rhs_log},
                        {"sampled", h.sampled},
                        {"sample_stderr", h.sample_stderr},
                        {"rhs_is_lower_bound_at_derived_phases", true},
                        {"tuple_count", h.per_tuple.size()}};
  } catch (const std::exception& e) {
    return finish("holder", e.what());
  }

  // --- stage 6: Bohr-set geometry checks -----------------------------------
  try {
    const double log_t = std::log(t_star);
    const double a_eff = 2.0 * std::log(cfg.x_hi) / log_t;
    const std::size_t rank = std::min<std::size_t>(x0.size(), 2);
    BohrSpec spec;
    for (std::size_t i = 0; i < rank; ++i) {
      spec.freqs.push_back(std::log(x0[i]) / kTwoPi);
      spec.phases.push_back(beta_of_x[i]);
    }
    spec.radius = rho;
    spec.t_trunc = t_star;
    ExtensionReport ext = interval_extension_check(spec, n1_zeros, eta, a_eff);

    std::vector<double> pool;
    for (double x : x0) pool.push_back(std::log(x) / kTwoPi);
    std::sort(pool.begin(), pool.end());
    pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
    double min_gap = 1e300;
    for (std::size_t i = 1; i < pool.size(); ++i)
      min_gap = std::min(min_gap, pool[i] - pool[i - 1]);
    // the averaging bound needs pool spacing >= 1/T; raise T if necessary
    const double t_exp =
        std::min(table.t_max,
                 std::max(t_star, pool.size() > 1 ? 1.05 / min_gap : t_star));
    AverageMeasureReport avg = average_measure_experiment(
        pool, std::min(k, 2), rho, eta, t_exp, cfg.avg_trials,
        cfg.avg_beta_grid, cfg.seed);
    stages["bohr"] = {
        {"status", "ok"},
        {"extension",
         {{"lhs", ext.lhs},
          {"rhs", ext.rhs},
          {"ratio", ext.ratio},
          {"window_max", ext.window_max},
          {"window_length", ext.window_length},
          {"extended_measure", ext.extended_measure},
          {"a_eff", a_eff}}},
        {"average_measure",
         {{"t", t_exp},
          {"k", avg.k},
          {"exhaustive", avg.exhaustive},
          {"trial_count", avg.trials.size()},
          {"average_grid_max", avg.average_grid_max},
          {"average_majorant_bound", avg.average_majorant_bound},
          {"benchmark_main", avg.benchmark_main},
          {"fitted_c", avg.fitted_c},
          {"grid_max_is_lower_bound", true}}}};
  } catch (const std::exception& e) {
    return finish("bohr", e.what());
  }

  // --- stage 7: final inequality in log space ------------------------------
  {
    const double lhs_log_capped = k * std::log1p(ed / 5000.0);
    const double lhs_log_full = k_big * std::log1p(ed / 5000.0);
    const double rhs_log = -3.5 * std::log(eps) - 2.0 * std::log(delta);
    stages["final_inequality"] = {
        {"status", "ok"},
        {"lhs_log_at_capped_k", lhs_log_capped},
        {"lhs_log_at_full_k", lhs_log_full},
        {"rhs_log", rhs_log},
        {"full_k", k_big},
        {"lhs_dominates_at_full_k", lhs_log_full > rhs_log},
        {"lhs_dominates_at_capped_k", lhs_log_capped > rhs_log}};
  }

  report["stages"] = stages;
  return report;
}

}  // namespace psilab
