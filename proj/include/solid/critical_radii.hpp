#pragma once

/*
 * Critical radii r_m (global maximisers of r^m v(r)), block sequences m_n for
 * w(r) exp(-a/(1-r)^b) in closed form, greedy m_n search for other weights,
 * and the two-sided condition (b) check along a block sequence.
 */

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "solid/errors.hpp"
#include "solid/numerics.hpp"
#include "solid/weights.hpp"

namespace solid {

struct CriticalPoint {
  double m = 0.0;
  double r = 0.0;
  /// ln r_m; the plane solver works in this coordinate, so it stays exact even when r overflows.
  double log_r = 0.0;
  /// m ln r_m + ln v(r_m)
  double log_max = 0.0;
};

namespace detail {

inline bool is_builtin(const RadialWeight& w) { return !w.is_custom(); }

inline CriticalPoint disc_point(const RadialWeight& w, double m, double u) {
  const double log_r = std::log1p(-u);
  return {m, 1.0 - u, log_r, m * log_r + w.log_v_gap(u)};
}

inline CriticalPoint plane_point(const RadialWeight& w, double m, double t) {
  return {m, std::exp(t), t, m * t + w.log_v_log(t)};
}

// Stationary equation m + r (ln v)'(r) = 0 is monotone for built-in families,
// so plain bisection on it is guaranteed to bracket.
inline CriticalPoint critical_disc_builtin(const RadialWeight& w, double m) {
  auto phi = [&](double u) { return m + w.elasticity_gap(u); };
  double u_small = 0.5;
  while (phi(u_small) > 0.0) {
    u_small *= 0.5;
    if (u_small < 1e-300)
      throw numeric_error("critical radius for m = " + format_number(m) + " not bracketed on the disc for " +
                          w.describe() + "; r^m v(r) does not decay at r = 1");
  }
  // f(u) = -phi(u) is positive at u_small and negative at u = 1 (r = 0).
  const double u = bisect_decreasing([&](double x) { return -phi(x); }, u_small, 1.0);
  return disc_point(w, m, u);
}

inline CriticalPoint critical_plane_builtin(const RadialWeight& w, double m) {
  auto phi = [&](double t) { return m + w.elasticity_log(t); };
  double t_lo = 0.0, step = 1.0;
  while (!(phi(t_lo) > 0.0)) {
    t_lo -= step;
    step *= 2.0;
    if (t_lo < -1e4) throw numeric_error("critical radius not bracketed from below for " + w.describe());
  }
  double t_hi = std::max(1.0, t_lo + 1.0);
  while (phi(t_hi) > 0.0) {
    t_hi *= 2.0;
    if (t_hi > 1e15)
      throw numeric_error("critical radius for m = " + format_number(m) + " not bracketed for " + w.describe());
  }
  const double t = bisect_decreasing(phi, t_lo, t_hi);
  return plane_point(w, m, t);
}

// Generic weights: sample the objective, then golden-section around the best sample.
inline CriticalPoint critical_disc_generic(const RadialWeight& w, double m) {
  auto objective = [&](double log_u) {
    const double u = std::exp(log_u);
    return m * std::log1p(-u) + w.log_v_gap(u);
  };
  constexpr int kSamples = 120;  // u = 2^{-k/2}
  const double step = 0.5 * std::log(2.0);
  int best = 1;
  double best_val = neg_inf;
  for (int k = 1; k <= kSamples; ++k) {
    const double val = objective(-k * step);
    if (val > best_val) {
      best_val = val;
      best = k;
    }
  }
  if (best == kSamples || !std::isfinite(best_val))
    throw numeric_error("r^m v(r) for m = " + format_number(m) +
                        " keeps increasing towards r = 1 (sampled to 1-r = 2^-60); weight " + w.describe() +
                        " is not bracketable");
  const Maximum mx = golden_section_max(objective, -(best + 1) * step, -(best - 1) * step, 1e-14);
  return disc_point(w, m, std::exp(mx.x));
}

inline CriticalPoint critical_plane_generic(const RadialWeight& w, double m) {
  auto objective = [&](double t) { return m * t + w.log_v_log(t); };
  double best_t = -40.0, best_val = objective(best_t);
  double prev_t = best_t;
  double t = -39.0, step = 1.0;
  double left = best_t - 1.0, right = t;
  while (t < 1e6) {
    const double val = objective(t);
    if (val > best_val) {
      best_val = val;
      best_t = t;
      left = prev_t;
    } else if (val < best_val - 50.0 || !std::isfinite(val)) {
      right = t;
      break;
    }
    prev_t = t;
    if (t >= 40.0) step *= 2.0;
    t += step;
    right = t;
  }
  if (t >= 1e6) throw numeric_error("r^m v(r) does not decay on the plane for " + w.describe());
  const Maximum mx = golden_section_max(objective, left, right, 1e-13 * std::max(1.0, std::abs(best_t)));
  return plane_point(w, m, mx.x);
}

}  // namespace detail

/// Global maximiser of r^m v(r) on (0, R).
inline CriticalPoint critical_radius(const RadialWeight& weight, double m) {
  if (!(m > 0.0) || !std::isfinite(m)) throw domain_error("critical radius needs a finite exponent m > 0");
  const bool disc = weight.domain() == Domain::Disc;
  if (detail::is_builtin(weight))
    return disc ? detail::critical_disc_builtin(weight, m) : detail::critical_plane_builtin(weight, m);
  return disc ? detail::critical_disc_generic(weight, m) : detail::critical_plane_generic(weight, m);
}

/// ln sup_r r^m v(r).
inline double log_max_value(const RadialWeight& weight, double m) { return critical_radius(weight, m).log_max; }

// ---------------------------------------------------------------------------
// Block partitions

struct PartitionEntry {
  long long n = 0;
  double m = 0.0;
  double r = 0.0;
  double log_r = 0.0;
  double log_v = 0.0;
};

enum class PartitionSource { Theorem41ClosedForm, GreedySearch, UserSupplied };

struct BlockPartition {
  std::vector<PartitionEntry> entries;
  PartitionSource source = PartitionSource::UserSupplied;
  /// First n from which 1/e <= w(r_n)/w(r_{n+1}) <= e holds on the generated range.
  std::optional<long long> w_oscillation_onset;

  std::size_t size() const noexcept { return entries.size(); }
  bool empty() const noexcept { return entries.empty(); }
};

inline const char* to_string(PartitionSource s) {
  switch (s) {
    case PartitionSource::Theorem41ClosedForm: return "closed";
    case PartitionSource::GreedySearch: return "greedy";
    default: return "user";
  }
}

/// Throws validation_error unless m and r are strictly increasing.
inline void check_monotone(const BlockPartition& p) {
  for (std::size_t i = 1; i < p.entries.size(); ++i) {
    const auto& a = p.entries[i - 1];
    const auto& b = p.entries[i];
    if (!(b.m > a.m))
      throw validation_error("partition exponents not strictly increasing at n = " + std::to_string(b.n));
    if (!(b.log_r > a.log_r))
      throw validation_error("partition radii not strictly increasing at n = " + std::to_string(b.n));
  }
}

/// Fill in radius and ln v from the exponent.
inline PartitionEntry make_entry(const RadialWeight& weight, long long n, double m) {
  const CriticalPoint cp = critical_radius(weight, m);
  return {n, m, cp.r, cp.log_r, cp.log_max - m * cp.log_r};
}

/// Smallest n >= 1 with a/(b n^2) < 1, i.e. with 1 - (a/(b n^2))^{1/b} in (0, 1).
inline long long theorem41_n_min(double a, double b) {
  long long n = std::max<long long>(1, static_cast<long long>(std::floor(std::sqrt(a / b))));
  while (!(a / (b * static_cast<double>(n) * static_cast<double>(n)) < 1.0)) ++n;
  return n;
}

/// 1 - r_n = (a/(b n^2))^{1/b}
inline double theorem41_gap(double a, double b, long long n) {
  const double nn = static_cast<double>(n);
  return std::pow(a / (b * nn * nn), 1.0 / b);
}

inline double theorem41_radius(double a, double b, long long n) { return 1.0 - theorem41_gap(a, b, n); }

/// m_n = b (b/a)^{1/b} n^{2+2/b} - b n^2 - r_n w'(r_n)/w(r_n)
inline double theorem41_m(const family::ExpDisc& f, long long n) {
  const double nn = static_cast<double>(n);
  const double u = theorem41_gap(f.a, f.b, n);
  return f.b * std::pow(f.b / f.a, 1.0 / f.b) * std::pow(nn, 2.0 + 2.0 / f.b) - f.b * nn * nn -
         (1.0 - u) * dlog_w(f.w, u);
}

/// ln of the block prefactor w(r_n) e^{-b n^2} = ln v(1 - (a/(b n^2))^{1/b}).
inline double theorem41_log_prefactor(const family::ExpDisc& f, long long n) {
  const double nn = static_cast<double>(n);
  return log_w(f.w, theorem41_gap(f.a, f.b, n)) - f.b * nn * nn;
}

/// Closed-form block sequence for w(r) exp(-a/(1-r)^b) over n in [n_first, n_last].
/// Radii are the exact maximisers of r^{m_n} v(r).
inline BlockPartition theorem41_partition(const RadialWeight& weight, long long n_first, long long n_last) {
  const auto* f = weight.exp_disc();
  if (f == nullptr) throw domain_error("closed-form block sequence needs an expdisc weight, got " + weight.describe());
  const long long n_min = theorem41_n_min(f->a, f->b);
  if (n_first < n_min)
    throw domain_error("closed-form block sequence needs n >= " + std::to_string(n_min) + ", got " +
                       std::to_string(n_first));
  if (n_last < n_first) throw domain_error("empty n range");
  if (const auto violations = validate(weight); !violations.empty())
    throw validation_error("weight hypotheses fail: " + violations.front().message);

  BlockPartition p;
  p.source = PartitionSource::Theorem41ClosedForm;
  p.entries.reserve(static_cast<std::size_t>(n_last - n_first + 1));
  for (long long n = n_first; n <= n_last; ++n) {
    const double m = theorem41_m(*f, n);
    if (!(m > 0.0)) throw validation_error("m_n is not positive at n = " + std::to_string(n));
    p.entries.push_back(make_entry(weight, n, m));
  }
  check_monotone(p);

  std::optional<long long> onset;
  for (long long n = n_first; n < n_last; ++n) {
    const double ratio = log_w(f->w, theorem41_gap(f->a, f->b, n)) - log_w(f->w, theorem41_gap(f->a, f->b, n + 1));
    if (std::abs(ratio) <= 1.0) {
      if (!onset) onset = n;
    } else {
      onset.reset();
    }
  }
  p.w_oscillation_onset = onset;
  return p;
}

// ---------------------------------------------------------------------------
// Condition (b)

/// ln of the two condition-(b) quotients between consecutive exponents m < k:
/// lower = (r_m/r_k)^m v(r_m)/v(r_k), upper = (r_k/r_m)^k v(r_k)/v(r_m).
struct QuotientPair {
  double log_lower;
  double log_upper;
};

inline QuotientPair condition_b_quotients(const PartitionEntry& lo, const PartitionEntry& hi) {
  return {lo.m * (lo.log_r - hi.log_r) + lo.log_v - hi.log_v, hi.m * (hi.log_r - lo.log_r) + hi.log_v - lo.log_v};
}

struct GreedyOptions {
  double m_cap = 1e9;
  double m_tol = 1e-6;
};

/// Builds m_1 = m_start < m_2 < ... so that both condition-(b) quotients between
/// consecutive entries are >= b_target, each m_{n+1} the smallest such (to m_tol).
inline BlockPartition greedy_partition(const RadialWeight& weight, double b_target, double m_start, int count,
                                       GreedyOptions opt = {}) {
  if (!(b_target > 2.0)) throw domain_error("greedy search needs b_target > 2");
  if (count < 1) throw domain_error("greedy search needs count >= 1");
  const double log_target = std::log(b_target);
  BlockPartition p;
  p.source = PartitionSource::GreedySearch;
  p.entries.push_back(make_entry(weight, 1, m_start));

  for (int i = 1; i < count; ++i) {
    const PartitionEntry cur = p.entries.back();
    auto reaches = [&](double k, PartitionEntry& out) {
      out = make_entry(weight, cur.n + 1, k);
      const QuotientPair q = condition_b_quotients(cur, out);
      return std::min(q.log_lower, q.log_upper) >= log_target;
    };
    PartitionEntry probe;
    double lo = cur.m, hi = 2.0 * cur.m;
    while (!reaches(hi, probe)) {
      lo = hi;
      hi *= 2.0;
      if (hi > opt.m_cap)
        throw search_failure("no exponent below " + detail::format_number(opt.m_cap) + " reaches b = " +
                             detail::format_number(b_target) + " after m = " + detail::format_number(cur.m));
    }
    PartitionEntry best = probe;
    while (hi - lo > opt.m_tol * std::max(1.0, cur.m * 1e-9)) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      if (reaches(mid, probe)) {
        hi = mid;
        best = probe;
      } else {
        lo = mid;
      }
    }
    p.entries.push_back(best);
  }
  return p;
}

struct ConditionBRow {
  long long n = 0;
  double log_lower = 0.0;
  double log_upper = 0.0;
  double lower_q = 0.0;
  double upper_q = 0.0;
};

struct ConditionBReport {
  std::vector<ConditionBRow> rows;
  double inferred_b = not_a_number;
  double inferred_K = not_a_number;
  std::optional<long long> n0;

  /// Condition (b) on the tested range: b > 2 and K >= b from n0 onwards.
  bool holds() const noexcept { return n0.has_value() && inferred_b > 2.0 && inferred_K >= inferred_b; }
};

inline constexpr double kConditionBThreshold = 2.0 + 1e-6;

inline ConditionBReport condition_b_check(const RadialWeight& weight, BlockPartition partition) {
  if (partition.entries.size() < 2) throw validation_error("condition (b) check needs at least two entries");
  for (std::size_t i = 1; i < partition.entries.size(); ++i)
    if (!(partition.entries[i].m > partition.entries[i - 1].m))
      throw validation_error("partition exponents not strictly increasing at n = " +
                             std::to_string(partition.entries[i].n));
  if (partition.source == PartitionSource::UserSupplied)
    for (auto& e : partition.entries) e = make_entry(weight, e.n, e.m);
  check_monotone(partition);

  ConditionBReport rep;
  rep.rows.reserve(partition.entries.size() - 1);
  for (std::size_t i = 0; i + 1 < partition.entries.size(); ++i) {
    const QuotientPair q = condition_b_quotients(partition.entries[i], partition.entries[i + 1]);
    rep.rows.push_back({partition.entries[i].n, q.log_lower, q.log_upper, exp_or_saturate(q.log_lower),
                        exp_or_saturate(q.log_upper)});
  }
  const double log_threshold = std::log(kConditionBThreshold);
  std::optional<std::size_t> start;
  for (std::size_t i = 0; i < rep.rows.size(); ++i) {
    if (rep.rows[i].log_lower >= log_threshold) {
      if (!start) start = i;
    } else {
      start.reset();
    }
  }
  if (start) {
    rep.n0 = rep.rows[*start].n;
    double lb = pos_inf, lk = neg_inf;
    for (std::size_t i = *start; i < rep.rows.size(); ++i) {
      lb = std::min({lb, rep.rows[i].log_lower, rep.rows[i].log_upper});
      lk = std::max({lk, rep.rows[i].log_lower, rep.rows[i].log_upper});
    }
    rep.inferred_b = exp_or_saturate(lb);
    rep.inferred_K = exp_or_saturate(lk);
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Correction terms c_1..c_4 at k = j_{n+1}, m = j_n, j_n = (b/a) n^2

struct CorrectionTerms {
  double c1 = 0.0;
  double c2 = 0.0;
  double c3 = 0.0;
  double c4 = 0.0;
};

inline CorrectionTerms correction_terms(const RadialWeight& weight, long long n) {
  const auto* f = weight.exp_disc();
  if (f == nullptr) throw domain_error("correction terms need an expdisc weight");
  if (n < theorem41_n_min(f->a, f->b))
    throw domain_error("correction terms need n >= " + std::to_string(theorem41_n_min(f->a, f->b)));
  const double nn = static_cast<double>(n);
  const double m = f->b / f->a * nn * nn;
  const double k = f->b / f->a * (nn + 1.0) * (nn + 1.0);
  const double u_m = std::pow(m, -1.0 / f->b);
  const double u_k = std::pow(k, -1.0 / f->b);
  const double r_m = 1.0 - u_m, r_k = 1.0 - u_k;
  const double dw_m = dlog_w(f->w, u_m);
  const double dw_k = dlog_w(f->w, u_k);
  const double inv_b = 1.0 / f->b;
  CorrectionTerms c;
  c.c1 = -inv_b * (r_k / r_m) * dw_k * u_k * (k - m) / m;
  c.c2 = inv_b * u_m * dw_k * (k - m) / k;
  c.c3 = -inv_b * dw_m * ((k - m) / m) * u_k;
  c.c4 = inv_b * (r_m / r_k) * dw_m * (k - m) * u_m / k;
  return c;
}

}  // namespace solid
