#include "psilab/zero_table.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <stdexcept>

#include "psilab/kahan.hpp"
#include "psilab/numerics.hpp"

namespace psilab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void validate_ordinates(const std::vector<double>& ords, bool require_zeta_range) {
  if (ords.empty()) throw std::runtime_error("zero table: no ordinates");
  if (ords.front() <= 0.0)
    throw std::runtime_error("zero table: ordinates must be positive");
  for (std::size_t i = 1; i < ords.size(); ++i) {
    if (ords[i] <= ords[i - 1])
      throw std::runtime_error("zero table: not ascending at entry " +
                               std::to_string(i + 1));
  }
  if (require_zeta_range &&
      (ords.front() <= 14.0 || ords.front() >= 14.3)) {
    throw std::runtime_error(
        "zero table: first ordinate outside (14.0, 14.3); not a zeta table");
  }
}

}  // namespace

ZeroTable load_zero_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("zero table: cannot open " + path.string());
  std::vector<double> ords;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    char* end = nullptr;
    const double v = std::strtod(line.c_str(), &end);
    if (end == line.c_str() || *end != '\0')
      throw std::runtime_error(path.filename().string() +
                               ": non-numeric line " + std::to_string(line_no));
    if (!ords.empty() && v <= ords.back())
      throw std::runtime_error(path.filename().string() +
                               ": not ascending at line " +
                               std::to_string(line_no));
    ords.push_back(v);
  }
  if (ords.empty())
    throw std::runtime_error(path.filename().string() + ": no ordinates");
  return make_zero_table(std::move(ords), path.filename().string(), true);
}

ZeroTable make_zero_table(std::vector<double> ordinates, std::string source_id,
                          bool require_zeta_range) {
  validate_ordinates(ordinates, require_zeta_range);
  ZeroTable t;
  t.t_max = ordinates.back();
  t.ordinates = std::move(ordinates);
  t.source_id = std::move(source_id);
  return t;
}

std::size_t count_zeros(const ZeroTable& table, double t) {
  if (t < 0.0) throw std::domain_error("count_zeros: t < 0");
  if (t > table.t_max)
    throw std::domain_error("count_zeros: t exceeds table t_max");
  return static_cast<std::size_t>(
      std::upper_bound(table.ordinates.begin(), table.ordinates.end(), t) -
      table.ordinates.begin());
}

double riemann_von_mangoldt(double t, bool refined) {
  if (refined) {
    if (t <= 0.0) throw std::domain_error("riemann_von_mangoldt: t <= 0");
    const double u = t / kTwoPi;
    return u * std::log(u) - u + 7.0 / 8.0;
  }
  if (t <= 1.0)
    throw std::domain_error("riemann_von_mangoldt: asymptotic mode needs t > 1");
  return t * std::log(t) / kTwoPi;
}

PairCorrelation pair_correlation(const ZeroTable& table, double t, double a,
                                 double b) {
  if (!(0.0 < a && a < b)) throw std::domain_error("pair_correlation: need 0 < a < b");
  if (t > table.t_max)
    throw std::domain_error("pair_correlation: t exceeds table t_max");
  const double log_t = std::log(t);
  PairCorrelation pc;
  pc.window_lo = kTwoPi * a / log_t;
  pc.window_hi = kTwoPi * b / log_t;

  const std::size_t n = count_zeros(table, t);
  const double* g = table.ordinates.data();
  // Two-pointer scan over sorted ordinates: for each gamma, count gamma' with
  // gamma - gamma' in [window_lo, window_hi].
  long long observed = 0;
  std::size_t lo = 0, hi = 0;
  for (std::size_t i = 0; i < n; ++i) {
    while (lo < i && g[i] - g[lo] > pc.window_hi) ++lo;
    while (hi < i && g[i] - g[hi] >= pc.window_lo) ++hi;
    // gamma' indices in [lo, hi) satisfy window_lo <= g[i]-g[j] <= window_hi
    observed += static_cast<long long>(hi - lo);
  }
  pc.observed = observed;

  auto form_factor = [](double u) {
    if (u == 0.0) return 0.0;
    const double s = std::sin(std::numbers::pi * u) / (std::numbers::pi * u);
    return 1.0 - s * s;
  };
  pc.integral = adaptive_quadrature(form_factor, a, b, 1e-8);
  // Asymptotic ordered-pair count at height ~t; the factor-2 variant counts
  // conjugate ordinates on both half-lines.
  pc.predicted_asymptotic = pc.integral * t * log_t / kTwoPi;
  pc.predicted_two_sided = 2.0 * pc.predicted_asymptotic;

  // Finite-height prediction: each ordinate sees local density
  // rho = log(gamma/2pi)/2pi, so its expected lower neighbors in the window
  // are int over [window_lo * rho, window_hi * rho] of the form factor.
  // Cumulative quadrature over the sorted breakpoints keeps this O(n log n).
  std::vector<double> pts;
  pts.reserve(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    const double rho = std::log(g[i] / kTwoPi) / kTwoPi;
    pts.push_back(pc.window_lo * rho);
    pts.push_back(pc.window_hi * rho);
  }
  std::vector<double> sorted = pts;
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> cum(sorted.size(), 0.0);
  KahanSum acc;
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i] > sorted[i - 1])
      acc.add(adaptive_quadrature(form_factor, sorted[i - 1], sorted[i], 1e-8));
    cum[i] = acc.value();
  }
  auto cum_at = [&](double v) {
    const auto it = std::lower_bound(sorted.begin(), sorted.end(), v);
    return cum[static_cast<std::size_t>(it - sorted.begin())];
  };
  KahanSum pred;
  for (std::size_t i = 0; i < n; ++i)
    pred.add(cum_at(pts[2 * i + 1]) - cum_at(pts[2 * i]));
  pc.predicted = pred.value();
  return pc;
}

long long close_pair_count(const ZeroTable& table, double t, double w) {
  if (w <= 0.0) throw std::domain_error("close_pair_count: w <= 0");
  const double window = w / std::log(t);
  const std::size_t n = count_zeros(table, t);
  const double* g = table.ordinates.data();
  long long pairs = 0;
  std::size_t lo = 0;
  for (std::size_t i = 0; i < n; ++i) {
    while (g[i] - g[lo] > window) ++lo;
    // ordered pairs with j in [lo, i]: count both orders plus the diagonal
    pairs += 2 * static_cast<long long>(i - lo) + 1;
  }
  return pairs;
}

ZeroPartition partition_zeros(const ZeroTable& table, double t, double k_param,
                              double c_param) {
  if (t < 10.0) throw std::domain_error("partition_zeros: t >= 10 required");
  if (k_param < 1.0 || c_param < 1.0)
    throw std::domain_error("partition_zeros: k_param, c_param >= 1 required");
  const std::size_t n = count_zeros(table, t);
  ZeroPartition part;
  part.interval_length = 1.0 / std::log(t);
  part.k_param = k_param;
  part.c_param = c_param;
  part.t = t;
  const double threshold = c_param * k_param;
  const double inv_len = std::log(t);
  std::size_t i = 0;
  while (i < n) {
    // window index of ordinate i: floor(gamma * log t)
    const auto win = std::floor(table.ordinates[i] * inv_len);
    std::size_t j = i;
    while (j < n && std::floor(table.ordinates[j] * inv_len) == win) ++j;
    auto& dest = (static_cast<double>(j - i) > threshold) ? part.n2 : part.n1;
    for (std::size_t k = i; k < j; ++k) dest.push_back(k);
    i = j;
  }
  part.n2_fraction = n ? static_cast<double>(part.n2.size()) / n : 0.0;
  part.n2_bound_ok =
      static_cast<double>(part.n2.size()) <= static_cast<double>(n) / (200.0 * k_param);
  return part;
}

}  // namespace psilab
