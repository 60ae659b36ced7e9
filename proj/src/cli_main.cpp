// psilab command-line surface.  Every analytical subcommand is offline and
// deterministic; network access happens only in `fetch`.
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "psilab/amplifier.hpp"
#include "psilab/bohr.hpp"
#include "psilab/chebyshev_psi.hpp"
#include "psilab/explicit_formula.hpp"
#include "psilab/fetch.hpp"
#include "psilab/majorant.hpp"
#include "psilab/pipeline.hpp"
#include "psilab/zero_table.hpp"

namespace {

using nlohmann::json;
using namespace psilab;

std::string cache_dir() {
  if (const char* env = std::getenv("PSILAB_CACHE_DIR")) return env;
  return "cache";
}

// CSV rendering: a top-level array of flat objects becomes header + rows;
// anything else becomes key,value lines with dotted paths.
void flatten(const json& j, const std::string& prefix, std::ostream& os) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items())
      flatten(v, prefix.empty() ? k : prefix + "." + k, os);
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i)
      flatten(j[i], prefix + "[" + std::to_string(i) + "]", os);
  } else {
    os << prefix << "," << j.dump() << "\n";
  }
}

void write_csv(const json& j, std::ostream& os) {
  if (j.is_array() && !j.empty() && j.front().is_object()) {
    std::vector<std::string> cols;
    for (const auto& [k, v] : j.front().items()) cols.push_back(k);
    for (std::size_t i = 0; i < cols.size(); ++i)
      os << cols[i] << (i + 1 < cols.size() ? "," : "\n");
    for (const auto& row : j) {
      for (std::size_t i = 0; i < cols.size(); ++i)
        os << row.value(cols[i], json()).dump()
           << (i + 1 < cols.size() ? "," : "\n");
    }
  } else {
    flatten(j, "", os);
  }
}

struct Emitter {
  std::string format = "json";  // json|csv
  std::string out_path;

  void operator()(const json& j) const {
    std::ostringstream body;
    if (format == "csv")
      write_csv(j, body);
    else
      body << j.dump(2) << "\n";
    if (out_path.empty()) {
      std::cout << body.str();
    } else {
      std::ofstream f(out_path, std::ios::binary);
      if (!f) throw std::runtime_error("cannot open output file " + out_path);
      f << body.str();
    }
  }
};

json to_json(const ErrorSample& e) {
  return {{"x", e.x},
          {"psi_x", e.psi_x},
          {"err", e.err},
          {"normalized", e.normalized},
          {"schoenfeld_ratio", e.schoenfeld_ratio}};
}

PsiSeries get_series(std::uint64_t limit, const std::string& cache_path) {
  PsiSeries s;
  if (!cache_path.empty() && load_psi_cache(cache_path, limit, s)) return s;
  s = build_psi_series(limit);
  if (!cache_path.empty()) save_psi_cache(s, cache_path);
  return s;
}

int dispatch(int argc, char** argv) {
  CLI::App app{"computational laboratory for Chebyshev psi error terms, "
               "zeta-zero statistics, Bohr sets, and amplification"};
  app.require_subcommand(1);

  Emitter emit;
  int threads = 1;
  app.add_option("--format", emit.format, "output format")
      ->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--out", emit.out_path, "write output to file");
  app.add_option("--threads", threads, "worker-thread bound (output-invariant)")
      ->check(CLI::PositiveNumber);

  std::string table_path, psi_cache;
  std::uint64_t limit = 1000000;
  std::uint64_t seed = 0x5eedULL;

  // ---- zeros ----
  auto* zeros = app.add_subcommand("zeros", "zero-table statistics");
  zeros->require_subcommand(1);
  double z_t = 100.0, z_a = 0.25, z_b = 0.75, z_K = 200.0, z_c = 2.0;
  auto add_table = [&](CLI::App* c) {
    c->add_option("--table", table_path, "zero-ordinate table")->required();
  };

  auto* zstats = zeros->add_subcommand("stats", "counting function vs RvM");
  add_table(zstats);
  zstats->add_option("--t", z_t, "height");
  zstats->callback([&] {
    ZeroTable tab = load_zero_table(table_path);
    const double t = std::min(z_t, tab.t_max);
    json j{{"t", t},
           {"count", count_zeros(tab, t)},
           {"rvm_refined", riemann_von_mangoldt(t, true)},
           {"rvm_asymptotic", riemann_von_mangoldt(t, false)},
           {"table_count", tab.ordinates.size()},
           {"table_t_max", tab.t_max}};
    emit(j);
  });

  auto* zpc = zeros->add_subcommand("paircorr", "pair-correlation window count");
  add_table(zpc);
  zpc->add_option("--t", z_t, "height (default: table t_max)")->default_val(0.0);
  zpc->add_option("--a", z_a, "window start");
  zpc->add_option("--b", z_b, "window end");
  zpc->callback([&] {
    ZeroTable tab = load_zero_table(table_path);
    const double t = z_t > 0.0 ? z_t : tab.t_max;
    PairCorrelation pc = pair_correlation(tab, t, z_a, z_b);
    emit(json{{"t", t},
              {"a", z_a},
              {"b", z_b},
              {"observed", pc.observed},
              {"predicted", pc.predicted},
              {"predicted_asymptotic", pc.predicted_asymptotic},
              {"predicted_two_sided", pc.predicted_two_sided},
              {"ratio", static_cast<double>(pc.observed) / pc.predicted},
              {"integral", pc.integral},
              {"window_lo", pc.window_lo},
              {"window_hi", pc.window_hi}});
  });

  auto* zpart = zeros->add_subcommand("partition", "crowded-window partition");
  add_table(zpart);
  zpart->add_option("--t", z_t, "height")->required();
  zpart->add_option("--K", z_K, "partition parameter K");
  zpart->add_option("--c", z_c, "window threshold multiplier");
  zpart->callback([&] {
    ZeroTable tab = load_zero_table(table_path);
    ZeroPartition p = partition_zeros(tab, z_t, z_K, z_c);
    emit(json{{"t", p.t},
              {"k_param", p.k_param},
              {"c_param", p.c_param},
              {"interval_length", p.interval_length},
              {"n1_count", p.n1.size()},
              {"n2_count", p.n2.size()},
              {"n2_fraction", p.n2_fraction},
              {"n2_bound_ok", p.n2_bound_ok}});
  });

  // ---- psi ----
  auto* psi = app.add_subcommand("psi", "Chebyshev psi series");
  psi->require_subcommand(1);
  double p_xlo = 2.0, p_xhi = 0.0, p_eps = 0.05, p_sep = 0.5, p_c = 1.0,
         p_umax = 10.0;
  int p_k = 2, p_bins = 100;
  auto add_limit = [&](CLI::App* c) {
    c->add_option("--limit", limit, "series limit X")->check(CLI::PositiveNumber);
    c->add_option("--psi-cache", psi_cache, "checkpoint cache path");
  };

  auto* pbuild = psi->add_subcommand("build", "build (and cache) the series");
  pbuild->add_option("--limit", limit, "series limit X")->required();
  pbuild->add_option("--out-cache,--out", psi_cache, "cache destination");
  pbuild->callback([&] {
    PsiSeries s = build_psi_series(limit);
    if (!psi_cache.empty()) save_psi_cache(s, psi_cache);
    emit(json{{"limit_x", s.limit_x},
              {"checkpoints", s.jump_points.size()},
              {"psi_at_limit", s.psi_at(s.limit_x)},
              {"cache", psi_cache}});
  });

  auto* pscan = psi->add_subcommand("scan", "large-value set scan");
  add_limit(pscan);
  pscan->add_option("--x-lo", p_xlo);
  pscan->add_option("--x-hi", p_xhi)->required();
  pscan->add_option("--eps", p_eps);
  pscan->add_option("--sep-exponent", p_sep);
  pscan->callback([&] {
    PsiSeries s = get_series(limit, psi_cache);
    LargeValueScan r = large_value_scan(s, p_xlo, p_xhi, p_eps, p_sep);
    json jw = json::array();
    for (const auto& w : r.witnesses) jw.push_back(to_json(w));
    emit(json{{"measure", r.measure},
              {"witnesses", jw},
              {"separated_subset", r.separated_subset}});
  });

  auto* pmom = psi->add_subcommand("moment", "even-moment value vs bound");
  add_limit(pmom);
  pmom->add_option("--k", p_k)->check(CLI::PositiveNumber);
  pmom->callback([&] {
    PsiSeries s = get_series(limit, psi_cache);
    WintnerMoment m = wintner_moment(s, static_cast<double>(limit), p_k);
    emit(json{{"k", p_k},
              {"limit_x", limit},
              {"moment", m.moment},
              {"bound", m.bound},
              {"ratio", m.ratio}});
  });

  auto* plog = psi->add_subcommand("logmeasure", "logarithmic measure of the "
                                                 "exceptional set");
  add_limit(plog);
  plog->add_option("--c", p_c, "threshold constant");
  plog->callback([&] {
    PsiSeries s = get_series(limit, psi_cache);
    emit(json{{"c", p_c},
              {"limit_x", limit},
              {"log_measure",
               log_measure_exceptional(s, static_cast<double>(limit), p_c)}});
  });

  auto* pdist = psi->add_subcommand("dist", "normalized error distribution");
  add_limit(pdist);
  pdist->add_option("--u-max", p_umax);
  pdist->add_option("--bins", p_bins)->check(CLI::PositiveNumber);
  pdist->callback([&] {
    PsiSeries s = get_series(limit, psi_cache);
    Histogram h = empirical_distribution(s, p_umax, p_bins);
    json rows = json::array();
    const double w = (h.hi - h.lo) / static_cast<double>(h.mass.size());
    for (std::size_t i = 0; i < h.mass.size(); ++i)
      rows.push_back(json{{"bin_lo", h.lo + w * static_cast<double>(i)},
                          {"bin_hi", h.lo + w * static_cast<double>(i + 1)},
                          {"mass", h.mass[i]}});
    emit(rows);
  });

  // ---- explicit ----
  auto* expc = app.add_subcommand("explicit", "explicit-formula experiments");
  expc->require_subcommand(1);
  double e_x = 100.5, e_t = 0.0, e_bigx = 1e6, e_eps = 0.05, e_alpha = 0.9,
         e_beta = 0.1, e_coeff = 0.0;
  std::vector<double> e_xs;

  auto* esum = expc->add_subcommand("sum", "exponential sum over ordinates");
  add_table(esum);
  esum->add_option("--x", e_x)->required();
  esum->add_option("--t", e_t, "height (default: table t_max)");
  esum->callback([&] {
    ZeroTable tab = load_zero_table(table_path);
    const double t = e_t > 0.0 ? e_t : tab.t_max;
    auto s = exp_sum(tab, e_x, t);
    emit(json{{"x", e_x},
              {"t", t},
              {"re", s.real()},
              {"im", s.imag()},
              {"abs", std::abs(s)},
              {"count", count_zeros(tab, t)}});
  });

  auto* ecmp = expc->add_subcommand("compare", "truncated formula vs psi");
  add_table(ecmp);
  add_limit(ecmp);
  ecmp->add_option("--x", e_x)->required();
  ecmp->add_option("--t-cut", e_t, "truncation height (default: table t_max)");
  ecmp->callback([&] {
    ZeroTable tab = load_zero_table(table_path);
    PsiSeries s = get_series(limit, psi_cache);
    const double t = e_t > 0.0 ? e_t : tab.t_max;
    TruncatedPsi tp = truncated_psi_error(tab, e_x, t);
    const double actual = s.psi(e_x) - e_x;
    emit(json{{"x", e_x},
              {"t_cut", t},
              {"approx", tp.value},
              {"actual", actual},
              {"abs_diff", std::abs(tp.value - actual)},
              {"truncation_bound", tp.truncation_bound},
              {"near_prime_power", tp.near_prime_power}});
  });

  auto* etx = expc->add_subcommand("tx", "detection set of a single x");
  add_table(etx);
  etx->add_option("--x", e_x)->required();
  etx->add_option("--big-x", e_bigx, "outer scale X");
  etx->add_option("--eps", e_eps);
  etx->add_option("--alpha", e_alpha);
  etx->add_option("--beta", e_beta);
  etx->add_option("--coeff", e_coeff, "threshold coefficient (default 8 pi)");
  etx->callback([&] {
    ZeroTable tab = load_zero_table(table_path);
    const double coeff = e_coeff > 0.0 ? e_coeff : default_threshold_coeff();
    TxReport r = detect_Tx(tab, e_x, e_bigx, e_eps, e_alpha, e_beta, coeff);
    emit(json{{"x", r.x},
              {"eps", r.eps},
              {"alpha", r.alpha},
              {"beta", r.beta},
              {"measure", r.t_set.total_measure()},
              {"components", r.t_set.intervals().size()},
              {"log_integral", r.log_integral},
              {"rhs", r.rhs},
              {"window_lo", r.window_lo},
              {"window_hi", r.window_hi}});
  });

  auto* epig = expc->add_subcommand("pigeonhole", "common detection height");
  add_table(epig);
  epig->add_option("--xs", e_xs, "witness points")->required()->expected(-1);
  epig->add_option("--big-x", e_bigx, "outer scale X");
  epig->add_option("--eps", e_eps);
  epig->add_option("--alpha", e_alpha);
  epig->add_option("--beta", e_beta);
  epig->add_option("--coeff", e_coeff, "threshold coefficient (default 8 pi)");
  epig->callback([&] {
    ZeroTable tab = load_zero_table(table_path);
    const double coeff = e_coeff > 0.0 ? e_coeff : default_threshold_coeff();
    PigeonholeResult r =
        pigeonhole_T(tab, e_xs, e_bigx, e_eps, e_alpha, e_beta, coeff);
    emit(json{{"t_star", r.t_star},
              {"x0", r.x0},
              {"fraction", r.fraction},
              {"benchmark", r.benchmark},
              {"grid_size", r.grid_size}});
  });

  // ---- bohr ----
  auto* bohr = app.add_subcommand("bohr", "Bohr-set geometry");
  bohr->require_subcommand(1);
  std::vector<double> b_freqs, b_phases, b_pool;
  double b_rho = 0.1, b_T = 10.0, b_eta = 0.01, b_A = 1.0;
  int b_k = 2, b_trials = 16, b_grid = 8;
  std::string points_file;
  auto add_spec = [&](CLI::App* c) {
    c->add_option("--freqs", b_freqs, "constraint frequencies")
        ->required()
        ->expected(-1);
    c->add_option("--phases", b_phases, "constraint phases")->expected(-1);
    c->add_option("--rho", b_rho, "radius");
    c->add_option("--T", b_T, "truncation");
  };
  auto make_spec = [&]() {
    if (b_phases.empty()) b_phases.assign(b_freqs.size(), 0.0);
    if (b_phases.size() != b_freqs.size())
      throw std::domain_error("--freqs and --phases must have equal length");
    BohrSpec spec;
    spec.freqs = b_freqs;
    spec.phases = b_phases;
    spec.radius = b_rho;
    spec.t_trunc = b_T;
    return spec;
  };
  auto load_points = [&]() {
    std::vector<double> pts;
    if (!points_file.empty()) {
      std::ifstream f(points_file);
      if (!f) throw std::domain_error("cannot open points file " + points_file);
      double v;
      while (f >> v) pts.push_back(v);
    } else {
      ZeroTable tab = load_zero_table(table_path);
      for (double g : tab.ordinates)
        if (g <= b_T) pts.push_back(g);
    }
    return pts;
  };

  auto* bmeas = bohr->add_subcommand("measure", "exact truncated measure");
  add_spec(bmeas);
  bmeas->callback([&] {
    BohrMeasure m = truncated_measure(make_spec());
    emit(json{{"measure", m.measure},
              {"components", m.decomposition.intervals().size()}});
  });

  auto* bcount = bohr->add_subcommand("count", "members among points");
  add_spec(bcount);
  bcount->add_option("--points-file", points_file, "one point per line");
  bcount->add_option("--table", table_path, "use ordinates <= T as points");
  bcount->callback([&] {
    std::vector<double> pts = load_points();
    emit(json{{"count", count_members(make_spec(), pts)},
              {"points", pts.size()}});
  });

  auto* bext = bohr->add_subcommand("extend", "short-interval counting bound");
  add_spec(bext);
  bext->add_option("--points-file", points_file, "one point per line");
  bext->add_option("--table", table_path, "use ordinates <= T as points");
  bext->add_option("--eta", b_eta);
  bext->add_option("--A", b_A, "frequency-size constant");
  bext->callback([&] {
    std::vector<double> pts = load_points();
    ExtensionReport r = interval_extension_check(make_spec(), pts, b_eta, b_A);
    emit(json{{"lhs", r.lhs},
              {"rhs", r.rhs},
              {"ratio", r.ratio},
              {"window_max", r.window_max},
              {"window_length", r.window_length},
              {"extended_measure", r.extended_measure}});
  });

  auto* bavg = bohr->add_subcommand("average", "average max-phase measure");
  bavg->add_option("--pool", b_pool, "frequency pool")->required()->expected(-1);
  bavg->add_option("--k", b_k)->check(CLI::PositiveNumber);
  bavg->add_option("--rho", b_rho);
  bavg->add_option("--eta", b_eta);
  bavg->add_option("--T", b_T);
  bavg->add_option("--trials", b_trials)->check(CLI::PositiveNumber);
  bavg->add_option("--beta-grid", b_grid)->check(CLI::PositiveNumber);
  bavg->add_option("--seed", seed);
  bavg->callback([&] {
    AverageMeasureReport r = average_measure_experiment(
        b_pool, b_k, b_rho, b_eta, b_T, b_trials, b_grid, seed);
    emit(json{{"k", r.k},
              {"trials", r.trials.size()},
              {"exhaustive", r.exhaustive},
              {"average_grid_max", r.average_grid_max},
              {"average_majorant_bound", r.average_majorant_bound},
              {"benchmark_main", r.benchmark_main},
              {"fitted_c", r.fitted_c}});
  });

  // ---- majorant ----
  auto* maj = app.add_subcommand("majorant", "smooth arc majorant");
  maj->require_subcommand(1);
  double m_a = -0.1, m_b = 0.1, m_delta = 0.02;
  int m_r = 2;
  long m_mmax = 100;
  auto add_params = [&](CLI::App* c) {
    c->add_option("--a", m_a, "arc start");
    c->add_option("--b", m_b, "arc end");
    c->add_option("--delta", m_delta, "smoothing width");
    c->add_option("--r", m_r, "smoothing order")->check(CLI::PositiveNumber);
    c->add_option("--m-max", m_mmax, "coefficient range")
        ->check(CLI::PositiveNumber);
  };

  auto* mcheck = maj->add_subcommand("check", "verify coefficient bounds");
  add_params(mcheck);
  mcheck->callback([&] {
    FourierMajorant f({m_a, m_b, m_delta, m_r});
    double worst = 0.0;
    long worst_m = 0;
    long violations = 0;
    for (long m = 1; m <= m_mmax; ++m) {
      const double ratio = std::abs(f.coefficient(m)) / f.coefficient_bound(m);
      if (ratio > 1.0 + 1e-12) ++violations;
      if (ratio > worst) worst = ratio, worst_m = m;
    }
    emit(json{{"m_max", m_mmax},
              {"violations", violations},
              {"worst_ratio", worst},
              {"worst_m", worst_m},
              {"a0", f.coefficient(0).real()},
              {"tail_bound", f.tail_bound(m_mmax)}});
  });

  auto* mdump = maj->add_subcommand("dump", "coefficient table");
  add_params(mdump);
  mdump->callback([&] {
    FourierMajorant f({m_a, m_b, m_delta, m_r});
    json rows = json::array();
    for (long m = 0; m <= m_mmax; ++m) {
      auto c = f.coefficient(m);
      rows.push_back(json{{"m", m},
                          {"re", c.real()},
                          {"im", c.imag()},
                          {"abs", std::abs(c)},
                          {"bound", m == 0 ? c.real() : f.coefficient_bound(m)}});
    }
    emit(rows);
  });

  // ---- experiment ----
  auto* exper = app.add_subcommand("experiment", "staged amplification run");
  exper->require_subcommand(1);
  PipelineConfig cfg;
  cfg.x_lo = 1000.0;
  cfg.x_hi = 1e6;
  cfg.eps = 0.05;
  cfg.delta = 0.1;
  auto* erun = exper->add_subcommand("run", "full pipeline");
  erun->add_option("--table", table_path, "zero-ordinate table")->required();
  erun->add_option("--limit", limit, "psi series limit");
  erun->add_option("--psi-cache", psi_cache, "checkpoint cache path");
  erun->add_option("--x-lo", cfg.x_lo);
  erun->add_option("--x-hi", cfg.x_hi);
  erun->add_option("--eps", cfg.eps);
  erun->add_option("--delta", cfg.delta);
  erun->add_option("--C", cfg.c_const, "radius constant (rho = eps/C)");
  erun->add_option("--A", cfg.a_const, "tuple-order constant");
  erun->add_option("--k-max", cfg.k_max)->check(CLI::PositiveNumber);
  erun->add_option("--witness-max", cfg.witness_max);
  erun->add_option("--holder-samples", cfg.holder_samples);
  erun->add_option("--avg-trials", cfg.avg_trials)->check(CLI::PositiveNumber);
  erun->add_option("--avg-beta-grid", cfg.avg_beta_grid)
      ->check(CLI::PositiveNumber);
  erun->add_option("--seed", cfg.seed);
  erun->callback([&] {
    if (limit < static_cast<std::uint64_t>(cfg.x_hi))
      limit = static_cast<std::uint64_t>(cfg.x_hi);
    ZeroTable tab = load_zero_table(table_path);
    PsiSeries s = get_series(limit, psi_cache);
    cfg.table_id = table_path;
    emit(run_pipeline(cfg, tab, s));
  });

  // ---- fetch ----
  auto* fetch = app.add_subcommand("fetch", "download reference data");
  std::string url, dest = "zeros.txt", digest;
  bool no_verify = false;
  auto* fzeros = fetch->add_subcommand("zeros", "fetch and install a table");
  fzeros->add_option("--url", url, "http(s) source")->required();
  fzeros->add_option("--dest", dest, "file name inside the cache directory");
  fzeros->add_option("--sha256", digest, "expected hex digest");
  fzeros->add_flag("--no-verify", no_verify, "waive digest verification");
  fzeros->callback([&] {
    if (digest.empty() && !no_verify)
      throw std::domain_error("supply --sha256 or waive with --no-verify");
    const int rc = fetch_zeros(url, cache_dir(), dest, digest);
    if (rc != 0) throw std::runtime_error("fetch failed");
    emit(json{{"installed", cache_dir() + "/" + dest}});
  });

  // accept the global --format/--out/--threads after any subcommand
  auto enable_fallthrough = [](auto&& self, CLI::App* a) -> void {
    for (CLI::App* sub : a->get_subcommands({})) {
      sub->fallthrough();
      self(self, sub);
    }
  };
  enable_fallthrough(enable_fallthrough, &app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return dispatch(argc, argv);
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
