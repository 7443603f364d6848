#pragma once

/*
 * Block norms characterising solid hulls (weighted l2 over blocks) and solid
 * cores (weighted l1 over blocks), the majorant norm sup_r v(r) sum |b_m| r^m,
 * and the standard-weight dyadic analogues.
 *
 * All block sums iterate over the finite support only.  A block value is
 *   ln K_n + (1/p) ln sum_{m in block n} |b_m|^p L_m
 * evaluated with log-sum-exp; the reported norm is the sup over blocks.
 */

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "solid/coeffs.hpp"
#include "solid/critical_radii.hpp"
#include "solid/errors.hpp"
#include "solid/numerics.hpp"
#include "solid/weights.hpp"

namespace solid {

struct BlockValue {
  long long n = 0;
  double log_value = neg_inf;
};

struct NormReport {
  std::vector<BlockValue> blocks;
  double log_sup = neg_inf;
  std::optional<long long> attained_n;

  const BlockValue* find(long long n) const {
    for (const auto& b : blocks)
      if (b.n == n) return &b;
    return nullptr;
  }
};

/// Where index m lands: block label, ln K_n, and ln L_m.
struct BlockSlot {
  long long n = 0;
  double log_prefactor = 0.0;
  double log_L = 0.0;
};

/// Generic block-norm engine. locate(m) returns the slot for index m or throws coverage_error.
template <class Locate>
NormReport weighted_block_norm(const CoeffSeq& coeffs, int p, Locate&& locate) {
  struct Acc {
    double log_prefactor;
    LogSumExp sum;
  };
  std::map<long long, Acc> acc;
  for (const auto& c : coeffs) {
    const BlockSlot slot = locate(c.m);
    auto [it, inserted] = acc.try_emplace(slot.n, Acc{slot.log_prefactor, {}});
    it->second.sum.add(p * c.log_mag + slot.log_L);
  }
  NormReport rep;
  rep.blocks.reserve(acc.size());
  for (const auto& [n, a] : acc) {
    const double v = a.log_prefactor + a.sum.value() / p;
    rep.blocks.push_back({n, v});
    // Strict comparison keeps the smallest n on ties.
    if (v > rep.log_sup) {
      rep.log_sup = v;
      rep.attained_n = n;
    }
  }
  return rep;
}

namespace detail {

/// Index of the partition block (m_i, m_{i+1}] containing integer m.
inline std::size_t locate_block(const BlockPartition& partition, long long m) {
  const auto& e = partition.entries;
  if (e.size() < 2) throw validation_error("block norms need a partition with at least two entries");
  const double x = static_cast<double>(m);
  auto it = std::lower_bound(e.begin(), e.end(), x, [](const PartitionEntry& pe, double v) { return pe.m < v; });
  if (it == e.begin() || it == e.end())
    throw coverage_error("index " + std::to_string(m) + " outside the partition range (" +
                             format_number(e.front().m) + ", " + format_number(e.back().m) + "]",
                         m);
  return static_cast<std::size_t>(it - e.begin()) - 1;
}

inline NormReport partition_norm(const BlockPartition& partition, const CoeffSeq& coeffs, int p) {
  return weighted_block_norm(coeffs, p, [&](long long m) {
    const PartitionEntry& e = partition.entries[locate_block(partition, m)];
    return BlockSlot{e.n, e.log_v, p * static_cast<double>(m) * e.log_r};
  });
}

}  // namespace detail

/// sup_n v(r_{m_n}) (sum_{m_n < m <= m_{n+1}} |b_m|^2 r_{m_n}^{2m})^{1/2}, in log form.
inline NormReport hull_block_norm(const BlockPartition& partition, const CoeffSeq& coeffs) {
  return detail::partition_norm(partition, coeffs, 2);
}

/// sup_n v(r_{m_n}) sum_{m_n < m <= m_{n+1}} |b_m| r_{m_n}^m, in log form.
inline NormReport core_block_norm(const BlockPartition& partition, const CoeffSeq& coeffs) {
  return detail::partition_norm(partition, coeffs, 1);
}

// ---------------------------------------------------------------------------
// Majorant norm ||h_f||_v = sup_r v(r) sum |b_m| r^m

namespace detail {

// Coordinates: disc x = ln(1 - r), plane x = ln r.
struct MajorantObjective {
  const RadialWeight& weight;
  const CoeffSeq& coeffs;
  bool disc;

  double log_r(double x) const { return disc ? std::log1p(-std::exp(x)) : x; }
  double log_v(double x) const { return disc ? weight.log_v_gap(std::exp(x)) : weight.log_v_log(x); }
  double operator()(double x) const {
    const double lr = log_r(x);
    LogSumExp s;
    for (const auto& c : coeffs) s.add(c.m == 0 ? c.log_mag : c.log_mag + static_cast<double>(c.m) * lr);
    return log_v(x) + s.value();
  }
};

inline constexpr int kMajorantGrid = 2048;
inline constexpr int kMajorantRefine = 8;

/// Maximises the objective over [x_lo, x_hi]: grid seeding, then golden-section
/// around the best local maxima of the grid.
template <class F>
Maximum seeded_max(F&& f, double x_lo, double x_hi, int grid = kMajorantGrid) {
  std::vector<double> xs(grid), fs(grid);
  for (int i = 0; i < grid; ++i) {
    xs[i] = x_lo + (x_hi - x_lo) * i / (grid - 1);
    fs[i] = f(xs[i]);
  }
  std::vector<int> peaks;
  for (int i = 0; i < grid; ++i) {
    const bool left = i == 0 || fs[i] >= fs[i - 1];
    const bool right = i == grid - 1 || fs[i] >= fs[i + 1];
    if (left && right) peaks.push_back(i);
  }
  std::sort(peaks.begin(), peaks.end(), [&](int a, int b) { return fs[a] > fs[b]; });
  if (peaks.size() > static_cast<std::size_t>(kMajorantRefine)) peaks.resize(kMajorantRefine);
  Maximum best{xs[0], fs[0]};
  for (int i = 0; i < grid; ++i)
    if (fs[i] > best.value) best = {xs[i], fs[i]};
  for (int i : peaks) {
    const double a = xs[std::max(0, i - 1)], b = xs[std::min(grid - 1, i + 1)];
    const Maximum m = golden_section_max(f, a, b, 1e-13 * std::max(1.0, std::abs(xs[i])));
    if (m.value > best.value) best = m;
  }
  return best;
}

}  // namespace detail

/// ln sup_{0<r<R} v(r) sum |b_m| r^m, plus the maximising radius.
struct MajorantResult {
  double log_norm = neg_inf;
  double r = 0.0;
};

inline MajorantResult majorant_norm_at(const RadialWeight& weight, const CoeffSeq& coeffs) {
  if (coeffs.empty()) return {neg_inf, 0.0};
  const bool has_constant = coeffs.min_degree() == 0;
  const double at_zero = has_constant ? coeffs.terms().front().log_mag + weight.log_v(0.0) : neg_inf;
  if (coeffs.max_degree() == 0) return {at_zero, 0.0};

  long long m_lo = coeffs.min_degree();
  if (m_lo == 0) m_lo = coeffs.terms()[1].m;
  const CriticalPoint lo = critical_radius(weight, static_cast<double>(m_lo));
  const CriticalPoint hi = critical_radius(weight, static_cast<double>(coeffs.max_degree()));
  const bool disc = weight.domain() == Domain::Disc;
  detail::MajorantObjective obj{weight, coeffs, disc};

  double x_lo, x_hi;
  if (disc) {
    x_lo = std::log(0.5 * (1.0 - hi.r));
    x_hi = has_constant ? std::log1p(-1e-9) : std::log1p(-0.5 * lo.r);
  } else {
    x_lo = has_constant ? lo.log_r - 40.0 : lo.log_r - std::log(2.0);
    x_hi = hi.log_r + std::log(2.0);
  }
  const Maximum mx = detail::seeded_max(obj, x_lo, x_hi);
  if (at_zero >= mx.value) return {at_zero, 0.0};
  return {mx.value, disc ? -std::expm1(mx.x) : std::exp(mx.x)};
}

inline double majorant_norm(const RadialWeight& weight, const CoeffSeq& coeffs) {
  return majorant_norm_at(weight, coeffs).log_norm;
}

struct SandwichResult {
  bool lower_ok = true;
  /// exp(majorant - core sup): empirical upper-sandwich constant.
  double ratio = 1.0;
  double log_core = neg_inf;
  double log_majorant = neg_inf;
};

inline constexpr double kSandwichSlack = 1e-9;

/// Core block norm against the majorant norm: core <= majorant always holds.
inline SandwichResult sandwich_check(const RadialWeight& weight, const BlockPartition& partition,
                                     const CoeffSeq& coeffs) {
  SandwichResult s;
  s.log_core = core_block_norm(partition, coeffs).log_sup;
  s.log_majorant = majorant_norm(weight, coeffs);
  if (coeffs.empty()) return s;
  s.lower_ok = s.log_core <= s.log_majorant + kSandwichSlack * std::max(1.0, std::abs(s.log_majorant));
  s.ratio = exp_or_saturate(s.log_majorant - s.log_core);
  return s;
}

// ---------------------------------------------------------------------------
// Standard weights (1-r^2)^alpha: dyadic blocks 2^n <= m < 2^{n+1} (index 0 joins block 0)

inline long long dyadic_block(long long m) {
  if (m <= 1) return 0;
  return static_cast<long long>(std::bit_width(static_cast<unsigned long long>(m))) - 1;
}

inline NormReport standard_hull_norm(double alpha, const CoeffSeq& coeffs) {
  if (!(alpha >= 0.0)) throw domain_error("standard norms need alpha >= 0");
  return weighted_block_norm(coeffs, 2, [alpha](long long m) {
    return BlockSlot{dyadic_block(m), 0.0, -2.0 * alpha * std::log1p(static_cast<double>(m))};
  });
}

inline NormReport standard_core_norm(double alpha, const CoeffSeq& coeffs) {
  if (!(alpha >= 0.0)) throw domain_error("standard norms need alpha >= 0");
  return weighted_block_norm(coeffs, 1, [alpha](long long m) {
    return BlockSlot{dyadic_block(m), 0.0, -alpha * std::log1p(static_cast<double>(m))};
  });
}

// ---------------------------------------------------------------------------
// Solidity

/// norm(b) <= norm(a) for b dominated by a. Throws domain_error if b is not dominated.
template <class NormFn>
bool solidity_monotone_check(NormFn&& norm, const CoeffSeq& a, const CoeffSeq& b) {
  if (!is_dominated_by(b, a)) throw domain_error("second sequence is not dominated by the first");
  const double na = norm(a);
  const double nb = norm(b);
  if (nb == neg_inf) return true;
  return nb <= na + 1e-12 * std::max(1.0, std::abs(na));
}

// ---------------------------------------------------------------------------
// Equivalence of two block representations

/// A block representation sup_n K_n (sum_{m_n < m <= m_{n+1}} |b_m|^p L_m)^{1/p}
/// with n = n_first, n_first + 1, ...; K and L given in log form.
struct BlockSystem {
  long long n_first = 0;
  std::vector<double> m;
  std::vector<double> log_K;
  std::function<double(long long)> log_L;

  long long n_last() const { return n_first + static_cast<long long>(m.size()) - 1; }
  double m_at(long long n) const { return m[static_cast<std::size_t>(n - n_first)]; }
  double log_K_at(long long n) const { return log_K[static_cast<std::size_t>(n - n_first)]; }

  /// Block n with m_n < idx <= m_{n+1}, or nullopt.
  std::optional<long long> block_of(long long idx) const {
    const double x = static_cast<double>(idx);
    auto it = std::lower_bound(m.begin(), m.end(), x);
    if (it == m.begin() || it == m.end()) return std::nullopt;
    return n_first + static_cast<long long>(it - m.begin()) - 1;
  }

  /// Log norm for exponent p; indices outside the block range raise coverage_error.
  NormReport norm(const CoeffSeq& coeffs, int p) const {
    return weighted_block_norm(coeffs, p, [&](long long idx) {
      const auto n = block_of(idx);
      if (!n) throw coverage_error("index " + std::to_string(idx) + " outside the block system", idx);
      return BlockSlot{*n, log_K_at(*n), log_L(idx)};
    });
  }
};

/// m_n < m~_n < m_{n+1} wherever both sides are defined.
inline bool is_interleaved(const BlockSystem& sys, const BlockSystem& tilde) {
  if (sys.n_first != tilde.n_first || sys.m.size() != tilde.m.size()) return false;
  for (long long n = sys.n_first; n <= sys.n_last(); ++n) {
    if (!(sys.m_at(n) < tilde.m_at(n))) return false;
    if (n < sys.n_last() && !(tilde.m_at(n) < sys.m_at(n + 1))) return false;
  }
  return true;
}

struct Lemma14Result {
  bool interleaved = false;
  /// Extremal ratios K~^p L~ / (K^p L) over the compared index ranges.
  double c = not_a_number;
  double C = not_a_number;
  int trials = 0;
  int forward_violations = 0;
  int reverse_violations = 0;
  /// Largest observed norm1 / ((2 c^{-1/p}) norm2) and norm2 / ((2 C^{1/p}) norm1).
  double worst_forward = 0.0;
  double worst_reverse = 0.0;
};

inline Lemma14Result lemma14_check(const BlockSystem& sys, const BlockSystem& tilde, int p, int trials = 100,
                                   std::uint64_t seed = 0) {
  if (p != 1 && p != 2) throw domain_error("block equivalence check supports p = 1 or p = 2");
  if (sys.m.size() != sys.log_K.size() || tilde.m.size() != tilde.log_K.size() || !sys.log_L || !tilde.log_L)
    throw validation_error("block system arrays are inconsistent");
  if (sys.m.size() < 4) throw validation_error("block equivalence check needs at least four blocks");
  if (!is_interleaved(sys, tilde)) throw validation_error("block sequences do not interleave");

  Lemma14Result res;
  res.interleaved = true;
  double lo = pos_inf, hi = neg_inf;
  auto visit = [&](long long j, double log_K_tilde, double log_K) {
    const double r = p * log_K_tilde + tilde.log_L(j) - p * log_K - sys.log_L(j);
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  };
  for (long long n = sys.n_first; n <= sys.n_last(); ++n) {
    if (n > sys.n_first) {
      for (long long j = floor_int(sys.m_at(n)) + 1; j <= floor_int(tilde.m_at(n)); ++j)
        visit(j, tilde.log_K_at(n - 1), sys.log_K_at(n));
    }
    if (n < sys.n_last()) {
      for (long long j = floor_int(tilde.m_at(n)) + 1; j <= floor_int(sys.m_at(n + 1)); ++j)
        visit(j, tilde.log_K_at(n), sys.log_K_at(n));
    }
  }
  res.c = std::exp(lo);
  res.C = std::exp(hi);

  // Cross-norm inequalities on random sequences supported where both systems
  // have every neighbouring block they need.
  const long long j_lo = floor_int(sys.m_at(sys.n_first + 1)) + 1;
  const long long j_hi = floor_int(tilde.m_at(tilde.n_last() - 1));
  if (j_hi < j_lo) return res;
  const double log_fwd = std::log(2.0) - lo / p;
  const double log_rev = std::log(2.0) + hi / p;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long long> idx(j_lo, j_hi);
  std::uniform_int_distribution<int> len(1, 40);
  std::uniform_real_distribution<double> jitter(-3.0, 3.0);
  for (int t = 0; t < trials; ++t) {
    std::map<long long, double> support;
    const int k = len(rng);
    for (int i = 0; i < k; ++i) {
      const long long j = idx(rng);
      const long long n = *sys.block_of(j);
      support[j] = -(sys.log_K_at(n) + sys.log_L(j) / p) + jitter(rng);
    }
    std::vector<Coefficient> terms;
    for (const auto& [j, lm] : support) terms.push_back({j, lm});
    const CoeffSeq b = CoeffSeq::from_log(std::move(terms));
    const double n1 = sys.norm(b, p).log_sup;
    const double n2 = tilde.norm(b, p).log_sup;
    const double fwd = n1 - (log_fwd + n2);
    const double rev = n2 - (log_rev + n1);
    const double slack = 1e-9 * std::max(1.0, std::abs(n1));
    if (fwd > slack) ++res.forward_violations;
    if (rev > slack) ++res.reverse_violations;
    res.worst_forward = std::max(res.worst_forward, std::exp(fwd));
    res.worst_reverse = std::max(res.worst_reverse, std::exp(rev));
    ++res.trials;
  }
  return res;
}

}  // namespace solid
