#include "psilab/chebyshev_psi.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <stdexcept>
#include <string>

#include "psilab/kahan.hpp"

namespace psilab {

namespace {

constexpr double kEightPi = 8.0 * std::numbers::pi;
// cumulative vector alone is 8 bytes/integer; cap the build at ~2 GiB.
constexpr std::uint64_t kMaxLimit = 1ull << 28;

std::vector<std::uint32_t> sieve_primes(std::uint32_t n) {
  std::vector<bool> comp(n + 1, false);
  std::vector<std::uint32_t> primes;
  for (std::uint32_t p = 2; p <= n; ++p) {
    if (comp[p]) continue;
    primes.push_back(p);
    for (std::uint64_t q = static_cast<std::uint64_t>(p) * p; q <= n; q += p)
      comp[q] = true;
  }
  return primes;
}

}  // namespace

double mangoldt(std::uint64_t n) {
  if (n == 0) throw std::domain_error("mangoldt: n >= 1 required");
  if (n == 1) return 0.0;
  // strip the smallest prime factor; n must be a pure power of it
  std::uint64_t p = 0;
  if (n % 2 == 0) {
    p = 2;
  } else {
    for (std::uint64_t d = 3; d * d <= n; d += 2) {
      if (n % d == 0) {
        p = d;
        break;
      }
    }
    if (p == 0) return std::log(static_cast<double>(n));  // n prime
  }
  while (n % p == 0) n /= p;
  return n == 1 ? std::log(static_cast<double>(p)) : 0.0;
}

double PsiSeries::psi(double x) const {
  if (x < 1.0 || x > static_cast<double>(limit_x))
    throw std::domain_error("psi: x out of series range");
  return cumulative[static_cast<std::uint64_t>(std::floor(x))];
}

PsiSeries build_psi_series(std::uint64_t limit_x) {
  if (limit_x < 1) throw std::domain_error("build_psi_series: limit_x >= 1");
  if (limit_x > kMaxLimit)
    throw std::runtime_error(
        "build_psi_series: limit_x exceeds the memory budget (" +
        std::to_string(kMaxLimit) + "); reduce the limit or use a checkpoint cache");

  PsiSeries s;
  s.limit_x = limit_x;

  const auto root = static_cast<std::uint32_t>(std::sqrt(static_cast<double>(limit_x)));
  const auto base = sieve_primes(std::max<std::uint32_t>(root, 2));

  std::vector<std::pair<std::uint64_t, double>> jumps;
  // prime powers p^k, k >= 2 (base primes only: p <= sqrt(limit_x))
  for (std::uint32_t p : base) {
    const double lp = std::log(static_cast<double>(p));
    for (std::uint64_t q = static_cast<std::uint64_t>(p) * p; q <= limit_x;) {
      jumps.emplace_back(q, lp);
      if (q > limit_x / p) break;
      q *= p;
    }
  }
  // primes themselves, by segmented sieve
  constexpr std::uint64_t kSegment = 1u << 20;
  std::vector<bool> mark;
  for (std::uint64_t lo = 2; lo <= limit_x; lo += kSegment) {
    const std::uint64_t hi = std::min(lo + kSegment - 1, limit_x);
    mark.assign(hi - lo + 1, true);
    for (std::uint32_t p : base) {
      const std::uint64_t p2 = static_cast<std::uint64_t>(p) * p;
      if (p2 > hi) break;
      std::uint64_t start = std::max(p2, (lo + p - 1) / p * p);
      for (std::uint64_t q = start; q <= hi; q += p) mark[q - lo] = false;
    }
    for (std::uint64_t n = lo; n <= hi; ++n)
      if (mark[n - lo])
        jumps.emplace_back(n, std::log(static_cast<double>(n)));
  }
  std::sort(jumps.begin(), jumps.end());

  s.jump_points.reserve(jumps.size());
  s.jump_values.reserve(jumps.size());
  for (const auto& [q, v] : jumps) {
    s.jump_points.push_back(q);
    s.jump_values.push_back(v);
  }

  s.cumulative.assign(limit_x + 1, 0.0);
  KahanSum acc;
  std::size_t j = 0;
  for (std::uint64_t n = 1; n <= limit_x; ++n) {
    while (j < s.jump_points.size() && s.jump_points[j] == n) {
      acc.add(s.jump_values[j]);
      ++j;
    }
    s.cumulative[n] = acc.value();
  }
  return s;
}

ErrorSample error_term(const PsiSeries& series, double x) {
  if (x < 2.0 || x > static_cast<double>(series.limit_x))
    throw std::domain_error("error_term: x out of range");
  ErrorSample e;
  e.x = x;
  e.psi_x = series.psi(x);
  e.err = e.psi_x - x;
  const double lg = std::log(x);
  const double scale = std::sqrt(x) * lg * lg;
  e.normalized = e.err / scale;
  e.schoenfeld_ratio = std::abs(e.err) * kEightPi / scale;
  return e;
}

namespace {

// Shared piecewise-exact scan: psi is constant between jumps, so on each
// piece the condition |c - x| >= threshold(x) reduces to threshold crossings
// located by bisection.
struct ScanPiece {
  double lo, hi;  // subinterval of the piece where the condition holds
};

template <typename ThresholdFn, typename EmitFn>
void scan_pieces(const PsiSeries& series, double x_lo, double x_hi,
                 const ThresholdFn& threshold, const EmitFn& emit) {
  auto g = [&](double c, double x) { return std::abs(c - x) - threshold(x); };

  auto first = std::upper_bound(series.jump_points.begin(),
                                series.jump_points.end(),
                                static_cast<std::uint64_t>(std::floor(x_lo)));
  double lo = x_lo;
  std::size_t j = static_cast<std::size_t>(first - series.jump_points.begin());
  while (lo < x_hi) {
    const double hi =
        (j < series.jump_points.size())
            ? std::min(static_cast<double>(series.jump_points[j]), x_hi)
            : x_hi;
    const double c = series.psi(lo);
    // split at x = c where |c - x| loses smoothness
    double splits[2] = {hi, hi};
    int nsplit = 1;
    if (c > lo && c < hi) {
      splits[0] = c;
      splits[1] = hi;
      nsplit = 2;
    }
    double a = lo;
    for (int si = 0; si < nsplit; ++si) {
      const double b = splits[si];
      if (b <= a) continue;
      // bracket sign changes on a small sample grid, bisect to 1e-9
      constexpr int kSamples = 8;
      double prev_x = a, prev_g = g(c, a);
      double seg_start = prev_g >= 0.0 ? a : -1.0;
      for (int k = 1; k <= kSamples; ++k) {
        const double x = a + (b - a) * k / kSamples;
        const double gx = g(c, x);
        if ((prev_g >= 0.0) != (gx >= 0.0)) {
          double u = prev_x, v = x, gu = prev_g;
          while (v - u > 1e-9) {
            const double m = 0.5 * (u + v);
            const double gm = g(c, m);
            if ((gu >= 0.0) == (gm >= 0.0)) {
              u = m;
              gu = gm;
            } else {
              v = m;
            }
          }
          const double cross = 0.5 * (u + v);
          if (prev_g >= 0.0) {
            emit(ScanPiece{seg_start, cross}, c);
            seg_start = -1.0;
          } else {
            seg_start = cross;
          }
        }
        prev_x = x;
        prev_g = gx;
      }
      if (seg_start >= 0.0) emit(ScanPiece{seg_start, b}, c);
      a = b;
    }
    lo = hi;
    if (j < series.jump_points.size() &&
        static_cast<double>(series.jump_points[j]) <= hi)
      ++j;
  }
}

}  // namespace

LargeValueScan large_value_scan(const PsiSeries& series, double x_lo,
                                double x_hi, double eps, double sep_exponent) {
  if (eps < 0.0) throw std::domain_error("large_value_scan: eps < 0");
  if (!(2.0 <= x_lo && x_lo < x_hi && x_hi <= static_cast<double>(series.limit_x)))
    throw std::domain_error("large_value_scan: bad x range");
  if (sep_exponent < 0.0 || sep_exponent > 1.0)
    throw std::domain_error("large_value_scan: sep_exponent in [0,1] required");

  auto threshold = [eps](double x) {
    const double lg = std::log(x);
    return eps * std::sqrt(x) * lg * lg;
  };

  LargeValueScan out;
  KahanSum measure;
  double open_end = -1.0;  // end of the still-open component, if any
  ErrorSample best{};      // best witness of the open component
  bool have_open = false;

  auto close_component = [&]() {
    if (have_open) out.witnesses.push_back(best);
    have_open = false;
  };

  scan_pieces(series, x_lo, x_hi, threshold,
              [&](const ScanPiece& p, double /*c*/) {
                measure.add(p.hi - p.lo);
                const bool continues = have_open && p.lo <= open_end + 1e-9;
                if (!continues) close_component();
                // candidate witnesses: both subinterval ends (|err| is
                // extremal at piece boundaries)
                for (double x : {p.lo, std::nextafter(p.hi, p.lo)}) {
                  if (x < x_lo || x > x_hi) continue;
                  ErrorSample e = error_term(series, x);
                  if (!have_open || std::abs(e.normalized) > std::abs(best.normalized)) {
                    best = e;
                    have_open = true;
                  }
                }
                if (!have_open) {  // degenerate sliver; keep the left end
                  best = error_term(series, p.lo);
                  have_open = true;
                }
                open_end = p.hi;
              });
  close_component();
  out.measure = measure.value();

  const double gap = std::pow(x_hi, sep_exponent);
  double last = -1e300;
  for (const ErrorSample& w : out.witnesses) {
    if (w.x - last >= gap) {
      out.separated_subset.push_back(w.x);
      last = w.x;
    }
  }
  return out;
}

WintnerMoment wintner_moment(const PsiSeries& series, double limit_x, int k) {
  if (k < 2 || k % 2 != 0)
    throw std::domain_error("wintner_moment: k must be even and >= 2");
  if (limit_x > static_cast<double>(series.limit_x) || limit_x < 2.0)
    throw std::domain_error("wintner_moment: limit_x out of range");

  KahanSum moment;
  auto first = std::upper_bound(series.jump_points.begin(),
                                series.jump_points.end(), std::uint64_t{2});
  double lo = 2.0;
  std::size_t j = static_cast<std::size_t>(first - series.jump_points.begin());
  while (lo < limit_x) {
    const double hi =
        (j < series.jump_points.size())
            ? std::min(static_cast<double>(series.jump_points[j]), limit_x)
            : limit_x;
    const double c = series.psi(lo);
    // k even: int_lo^hi (x-c)^k dx in closed form
    moment.add((std::pow(hi - c, k + 1) - std::pow(lo - c, k + 1)) / (k + 1));
    lo = hi;
    if (j < series.jump_points.size() &&
        static_cast<double>(series.jump_points[j]) <= hi)
      ++j;
  }
  WintnerMoment m;
  m.moment = moment.value();
  m.bound = std::pow(2.0 * k * k / std::numbers::pi, k) * std::pow(limit_x, k + 1);
  m.ratio = m.moment / m.bound;
  return m;
}

double log_measure_exceptional(const PsiSeries& series, double limit_x,
                               double c) {
  if (c < 0.0) throw std::domain_error("log_measure_exceptional: c < 0");
  if (limit_x < 16.0 || limit_x > static_cast<double>(series.limit_x))
    throw std::domain_error("log_measure_exceptional: limit_x out of range");

  auto threshold = [c](double x) {
    const double llg = std::log(std::log(x));
    return c * std::sqrt(x) * llg * llg;
  };
  KahanSum lm;
  scan_pieces(series, 16.0, limit_x, threshold,
              [&](const ScanPiece& p, double) {
                lm.add(std::log(p.hi) - std::log(p.lo));
              });
  return lm.value();
}

Histogram empirical_distribution(const PsiSeries& series, double u_max,
                                 int bins) {
  const double u_lo = std::log(2.0);
  if (u_max <= u_lo) throw std::domain_error("empirical_distribution: u_max <= log 2");
  if (std::exp(u_max) > static_cast<double>(series.limit_x))
    throw std::domain_error("empirical_distribution: e^u_max exceeds series limit");
  if (bins < 1) throw std::domain_error("empirical_distribution: bins >= 1");

  constexpr std::size_t kMinGrid = 10000;
  const std::size_t n = kMinGrid;
  std::vector<double> vals(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = u_lo + (u_max - u_lo) * i / static_cast<double>(n - 1);
    const double x = std::exp(u);
    vals[i] = (series.psi(x) - x) / std::exp(0.5 * u);
  }
  auto [mn, mx] = std::minmax_element(vals.begin(), vals.end());
  Histogram h;
  h.lo = *mn;
  h.hi = *mx;
  h.grid_points = n;
  h.mass.assign(bins, 0.0);
  const double width = (h.hi > h.lo) ? (h.hi - h.lo) : 1.0;
  const double w = 1.0 / static_cast<double>(n);
  for (double v : vals) {
    auto b = static_cast<std::size_t>((v - h.lo) / width * bins);
    if (b >= static_cast<std::size_t>(bins)) b = bins - 1;
    h.mass[b] += w;
  }
  return h;
}

void save_psi_cache(const PsiSeries& series, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("psi cache: cannot write " + path.string());
  out << "# limit_x=" << series.limit_x << "\n";
  out << "x,psi\n";
  char buf[64];
  for (std::size_t j = 0; j < series.jump_points.size(); ++j) {
    std::snprintf(buf, sizeof buf, "%llu,%.17g",
                  static_cast<unsigned long long>(series.jump_points[j]),
                  series.cumulative[series.jump_points[j]]);
    out << buf << "\n";
  }
}

bool load_psi_cache(const std::filesystem::path& path, std::uint64_t limit_x,
                    PsiSeries& series) {
  std::ifstream in(path);
  if (!in) return false;
  std::string line;
  if (!std::getline(in, line)) return false;
  const std::string key = "# limit_x=";
  if (line.rfind(key, 0) != 0 || std::stoull(line.substr(key.size())) != limit_x)
    return false;
  std::getline(in, line);  // header row

  PsiSeries s;
  s.limit_x = limit_x;
  std::vector<double> psi_at_jump;
  double prev = 0.0;
  while (std::getline(in, line)) {
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw std::runtime_error("psi cache: malformed row: " + line);
    const std::uint64_t x = std::stoull(line.substr(0, comma));
    const double psi = std::stod(line.substr(comma + 1));
    s.jump_points.push_back(x);
    s.jump_values.push_back(psi - prev);
    psi_at_jump.push_back(psi);
    prev = psi;
  }
  if (s.jump_points.empty()) return false;
  // cumulative[n] is the stored (round-tripped) psi at the last jump <= n, so
  // a reloaded cache reproduces the builder's values bit-exactly.
  s.cumulative.assign(limit_x + 1, 0.0);
  std::size_t j = 0;
  double acc = 0.0;
  for (std::uint64_t n = 1; n <= limit_x; ++n) {
    while (j < s.jump_points.size() && s.jump_points[j] == n) {
      acc = psi_at_jump[j];
      ++j;
    }
    s.cumulative[n] = acc;
  }
  series = std::move(s);
  return true;
}

}  // namespace psilab
