#include "psilab/amplifier.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>
#include <stdexcept>

#include "psilab/kahan.hpp"
#include "psilab/numerics.hpp"

namespace psilab {

namespace {

// Count points with ||alpha x_j + beta|| <= eps given the sorted fractional
// parts of alpha x_j: a circular window of width 2 eps centered at -beta.
long long window_count(const std::vector<double>& sorted_frac, double beta,
                       double eps) {
  const double center = frac_part(-beta);
  double lo = center - eps, hi = center + eps;
  auto count_in = [&](double a, double b) {
    // points with frac in [a, b], 0 <= a <= b <= 1
    const auto first = std::lower_bound(sorted_frac.begin(), sorted_frac.end(), a);
    const auto last = std::upper_bound(sorted_frac.begin(), sorted_frac.end(), b);
    return static_cast<long long>(last - first);
  };
  if (2.0 * eps >= 1.0) return static_cast<long long>(sorted_frac.size());
  if (lo < 0.0)
    return count_in(0.0, hi) + count_in(lo + 1.0, 1.0);
  if (hi > 1.0)
    return count_in(lo, 1.0) + count_in(0.0, hi - 1.0);
  return count_in(lo, hi);
}

}  // namespace

HypothesisFlags check_hypotheses(const ConcentrationInstance& inst,
                                 double c_const) {
  HypothesisFlags f;
  f.alpha_cond = inst.delta > 0.0 && inst.freq * inst.t >= 2.0 / inst.delta;
  KahanComplexSum s;
  for (double x : inst.points) {
    const long double y = static_cast<long double>(inst.freq) * x;
    const double a = 2.0 * M_PI * static_cast<double>(y - std::floor(y));
    s.add({std::cos(a), std::sin(a)});
  }
  f.sum_modulus = std::abs(s.value());
  f.large_sum =
      f.sum_modulus >= inst.delta * static_cast<double>(inst.points.size());
  f.eps_cond = inst.eps < inst.delta / c_const;
  return f;
}

ConcentrateResult concentrate(const ConcentrationInstance& inst,
                              double c_const) {
  if (inst.points.empty()) throw std::domain_error("concentrate: empty instance");
  if (inst.eps <= 0.0) throw std::domain_error("concentrate: eps > 0 required");

  ConcentrateResult res;
  res.flags = check_hypotheses(inst, c_const);
  res.report_only = !res.flags.all();

  const auto n = static_cast<double>(inst.points.size());
  res.threshold = 2.0 * inst.eps * (1.0 + inst.delta / 16.0) * n;

  std::vector<double> fracs(inst.points.size());
  for (std::size_t j = 0; j < inst.points.size(); ++j)
    fracs[j] = frac_part(inst.freq * inst.points[j]);
  std::sort(fracs.begin(), fracs.end());

  auto search = [&](double spacing) {
    std::vector<double> betas;
    const auto grid_n = static_cast<std::size_t>(std::ceil(1.0 / spacing));
    betas.reserve(grid_n + fracs.size());
    for (std::size_t i = 0; i < grid_n; ++i)
      betas.push_back(static_cast<double>(i) * spacing);
    for (double f : fracs) betas.push_back(frac_part(-f));  // critical phases
    std::sort(betas.begin(), betas.end());
    double best_beta = betas.front();
    long long best = -1;
    for (double b : betas) {
      const long long c = window_count(fracs, b, inst.eps);
      if (c > best) {  // strict: ties keep the smallest beta
        best = c;
        best_beta = b;
      }
    }
    return std::pair{best_beta, best};
  };

  auto [beta, achieved] = search(inst.eps / 8.0);
  res.beta_star = beta;
  res.achieved = achieved;
  res.threshold_met = static_cast<double>(achieved) >= res.threshold;
  if (!res.report_only && !res.threshold_met) {
    auto [beta2, achieved2] = search(inst.eps / 64.0);
    res.refined = true;
    if (achieved2 > res.achieved) {
      res.beta_star = beta2;
      res.achieved = achieved2;
    }
    res.threshold_met = static_cast<double>(res.achieved) >= res.threshold;
  }
  return res;
}

HolderResult holder_amplify(const std::vector<double>& xs,
                            const std::vector<double>& beta_of_x,
                            const std::vector<double>& zeros_n1, double rho,
                            int k, double density_boost, std::uint64_t seed,
                            std::size_t max_exhaustive,
                            std::size_t sample_count) {
  if (k < 1) throw std::domain_error("holder_amplify: k >= 1 required");
  if (xs.empty() || xs.size() != beta_of_x.size())
    throw std::domain_error("holder_amplify: xs/beta size mismatch");

  HolderResult res;
  const double nx = static_cast<double>(xs.size());
  const double nz = static_cast<double>(zeros_n1.size());
  // (2 rho)^k can underflow for the large k; keep the log form exact
  res.lhs_log = k * (std::log(2.0 * rho) + std::log1p(density_boost) +
                     std::log(nx)) +
                std::log(std::max(nz, 1.0));
  res.lhs = std::exp(res.lhs_log);

  // membership bitset per x: which zeros satisfy its rank-1 constraint
  const std::size_t words = (zeros_n1.size() + 63) / 64;
  std::vector<std::vector<std::uint64_t>> bits(xs.size(),
                                               std::vector<std::uint64_t>(words, 0));
  for (std::size_t xi = 0; xi < xs.size(); ++xi) {
    const double alpha = std::log(xs[xi]) / (2.0 * M_PI);
    for (std::size_t g = 0; g < zeros_n1.size(); ++g) {
      if (dist_to_nearest_int(alpha * zeros_n1[g] + beta_of_x[xi]) <= rho)
        bits[xi][g / 64] |= 1ull << (g % 64);
    }
  }
  auto tuple_count = [&](const std::vector<std::size_t>& idx) {
    long long c = 0;
    for (std::size_t w = 0; w < words; ++w) {
      std::uint64_t v = bits[idx[0]][w];
      for (std::size_t j = 1; j < idx.size(); ++j) v &= bits[idx[j]][w];
      c += std::popcount(v);
    }
    return c;
  };

  const double tuple_space = std::pow(nx, k);
  if (tuple_space <= static_cast<double>(max_exhaustive)) {
    KahanSum total;
    std::vector<std::size_t> idx(k, 0);
    const auto n_tuples = static_cast<std::size_t>(tuple_space);
    for (std::size_t code = 0; code < n_tuples; ++code) {
      std::size_t c = code;
      for (int j = 0; j < k; ++j) {
        idx[j] = c % xs.size();
        c /= xs.size();
      }
      const long long cnt = tuple_count(idx);
      total.add(static_cast<double>(cnt));
      res.per_tuple.push_back({idx, cnt});
    }
    res.rhs = total.value();
  } else {
    res.sampled = true;
    KahanSum total, total_sq;
    for (std::size_t s = 0; s < sample_count; ++s) {
      std::mt19937_64 rng(seed + 0x9e3779b97f4a7c15ull * (s + 1));
      std::uniform_int_distribution<std::size_t> pick(0, xs.size() - 1);
      std::vector<std::size_t> idx(k);
      for (int j = 0; j < k; ++j) idx[j] = pick(rng);
      const long long cnt = tuple_count(idx);
      total.add(static_cast<double>(cnt));
      total_sq.add(static_cast<double>(cnt) * static_cast<double>(cnt));
      res.per_tuple.push_back({idx, cnt});
    }
    const double m = total.value() / static_cast<double>(sample_count);
    const double var =
        std::max(0.0, total_sq.value() / static_cast<double>(sample_count) - m * m);
    res.rhs = m * tuple_space;
    res.sample_stderr =
        std::sqrt(var / static_cast<double>(sample_count)) * tuple_space;
  }
  res.rhs_log = res.rhs > 0.0 ? std::log(res.rhs) : -INFINITY;
  return res;
}

}  // namespace psilab
