#pragma once

/*
 * Constructive tail estimates for H^inf_v:
 *   - radius r0 beyond which every polynomial of degree <= m has |f| v <= eps ||f||_v,
 *   - degree n beyond which every tail sum_{k>=n} has |g| v <= eps ||g||_v on |z| <= r1,
 *   - greedy selection of blocks f_{n_k} concentrated on disjoint annuli
 *     (leakage <= 3^{-k} off [r_k, r_{k+1}]), so sup_k ||f_{n_k}|| <= 2 ||sum_k f_{n_k}||,
 *   - the Dirichlet partial-sum probe and the exp(-log^2 r) coefficient equivalence.
 *
 * Blocks are magnitude sequences, so sup_{|z|=s} |f(z)| = sum |a_j| s^j exactly.
 */

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <vector>

#include "solid/block_norms.hpp"
#include "solid/coeffs.hpp"
#include "solid/critical_radii.hpp"
#include "solid/errors.hpp"
#include "solid/numerics.hpp"
#include "solid/weights.hpp"

namespace solid {

namespace detail {

/// ln [v(s) sum |a_j| s^j] in the solver coordinate (disc: ln(1-s), plane: ln s).
inline double log_modulus(const RadialWeight& w, const CoeffSeq& f, double x) {
  return MajorantObjective{w, f, w.domain() == Domain::Disc}(x);
}

inline double to_coord(const RadialWeight& w, double r) {
  return w.domain() == Domain::Disc ? std::log1p(-r) : std::log(r);
}

inline double from_coord(const RadialWeight& w, double x) {
  return w.domain() == Domain::Disc ? -std::expm1(x) : std::exp(x);
}

inline double log_modulus_at(const RadialWeight& w, const CoeffSeq& f, double r) {
  if (r == 0.0) {
    if (f.empty() || f.min_degree() != 0) return neg_inf;
    return f.terms().front().log_mag + w.log_v(0.0);
  }
  return log_modulus(w, f, to_coord(w, r));
}

/// sup_{r_a <= s <= r_b} ln [v(s) sum |a_j| s^j].
inline double restricted_log_sup(const RadialWeight& w, const CoeffSeq& f, double r_a, double r_b) {
  if (f.empty() || r_b < r_a) return neg_inf;
  double best = std::max(log_modulus_at(w, f, r_a), log_modulus_at(w, f, r_b));
  if (r_b == r_a) return best;
  const bool disc = w.domain() == Domain::Disc;
  double x_a, x_b;
  if (disc) {
    // Coordinate decreases as r grows.
    x_a = std::log1p(-r_b);
    x_b = r_a == 0.0 ? std::log1p(-1e-12) : std::log1p(-r_a);
  } else {
    x_b = std::log(r_b);
    x_a = r_a == 0.0 ? x_b - 40.0 : std::log(r_a);
  }
  if (!(x_b > x_a)) return best;
  auto g = [&](double x) { return log_modulus(w, f, x); };
  best = std::max(best, seeded_max(g, x_a, x_b, 512).value);
  return best;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Tail radius

struct TailRadius {
  double r0 = 0.0;
  /// Reference radius: the critical radius of m (0 when m = 0).
  double r_ref = 0.0;
};

/// ln sum_{k=0}^{m} (s/r)^k v(s)/v(r) for the reference radius r <= s.
inline double log_tail_radius_sum(const RadialWeight& weight, long long m, double r_ref, double s) {
  if (m == 0) return weight.log_v(s) - weight.log_v(r_ref);
  const double step = std::log(s) - std::log(r_ref);
  return log_geometric_sum(std::max(0.0, step), m) + weight.log_v(s) - weight.log_v(r_ref);
}

inline TailRadius tail_radius(const RadialWeight& weight, long long m, double eps) {
  if (!(eps > 0.0)) throw domain_error("tail radius needs eps > 0");
  if (m < 0) throw domain_error("tail radius needs a degree m >= 0");
  const bool disc = weight.domain() == Domain::Disc;
  double x_ref, log_v_ref;
  if (m == 0) {
    x_ref = disc ? 0.0 : neg_inf;
    log_v_ref = weight.log_v(0.0);
  } else {
    const CriticalPoint cp = critical_radius(weight, static_cast<double>(m));
    x_ref = disc ? std::log1p(-cp.r) : cp.log_r;
    log_v_ref = cp.log_max - static_cast<double>(m) * cp.log_r;
  }
  const double log_eps = std::log(eps);
  const double md = static_cast<double>(m);
  // excess(x) = ln S - ln eps, in solver coordinates.
  auto excess = [&](double x) {
    const double log_r = disc ? std::log1p(-std::exp(x)) : x;
    const double log_v = disc ? weight.log_v_gap(std::exp(x)) : weight.log_v_log(x);
    const double log_r_ref = disc ? std::log1p(-std::exp(x_ref)) : x_ref;
    const double sum = m == 0 ? 0.0 : log_geometric_sum(std::max(0.0, log_r - log_r_ref), m);
    return sum + log_v - log_v_ref - log_eps;
  };
  TailRadius out;
  out.r_ref = m == 0 ? 0.0 : critical_radius(weight, md).r;
  if (std::log(md + 1.0) <= log_eps) {
    out.r0 = out.r_ref;
    return out;
  }
  // safe: excess <= 0; unsafe: excess > 0.
  double safe, unsafe;
  if (disc) {
    unsafe = x_ref;
    safe = x_ref - 1.0;
    while (excess(safe) > 0.0) {
      unsafe = safe;
      safe -= 1.0;
      if (safe < -700.0) throw numeric_error("tail radius not found before r = 1");
    }
  } else {
    unsafe = m == 0 ? -40.0 : x_ref;
    safe = std::max(1.0, unsafe + 1.0);
    while (excess(safe) > 0.0) {
      unsafe = safe;
      safe = safe < 1.0 ? safe + 1.0 : 2.0 * safe;
      if (safe > 1e6) throw numeric_error("tail radius not found on the plane");
    }
  }
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (safe + unsafe);
    if (mid == safe || mid == unsafe) break;
    (excess(mid) > 0.0 ? unsafe : safe) = mid;
  }
  out.r0 = detail::from_coord(weight, safe);
  return out;
}

// ---------------------------------------------------------------------------
// Tail degree

struct TailDegree {
  long long n = 0;
  double r_ref = 0.0;
  /// ln of (r1/r)^n / (1 - r1/r) * v(0)/v(r) at the returned n.
  double log_bound = 0.0;
};

inline TailDegree tail_degree(const RadialWeight& weight, double r1, double eps) {
  if (!(eps > 0.0)) throw domain_error("tail degree needs eps > 0");
  if (!(r1 >= 0.0) || !(r1 < weight.radius())) throw domain_error("tail degree needs 0 <= r1 < R");
  const double r = weight.domain() == Domain::Disc ? 0.5 * (r1 + 1.0) : r1 + 1.0;
  const double log_q = r1 == 0.0 ? neg_inf : std::log(r1) - std::log(r);
  const double q = r1 / r;
  const double base = weight.log_v(0.0) - weight.log_v(r) - std::log1p(-q);
  const double log_eps = std::log(eps);
  auto bound = [&](long long n) { return n == 0 ? base : static_cast<double>(n) * log_q + base; };

  TailDegree out{0, r, base};
  if (base <= log_eps) return out;
  if (log_q == neg_inf) return {1, r, neg_inf};
  long long n = std::max<long long>(0, static_cast<long long>(std::ceil((log_eps - base) / log_q)));
  while (n > 0 && bound(n - 1) <= log_eps) --n;
  while (bound(n) > log_eps) ++n;
  return {n, r, bound(n)};
}

// ---------------------------------------------------------------------------
// Concentrated subsequences

struct AnnulusCertificate {
  int k = 0;
  double inner_r = 0.0;
  double outer_r = 0.0;
  /// sup of |f_k| v off [inner_r, outer_r] divided by ||f_k||_v.
  double leakage = 0.0;
};

struct ConcentratedSelection {
  std::vector<std::size_t> selected;
  /// r_1 < r_2 < ... ; certificate k uses [radii[k-1], radii[k]].
  std::vector<double> radii;
  std::vector<AnnulusCertificate> certificates;
  /// tail_degree hint for each inner radius used.
  std::vector<long long> degree_hints;
  bool truncated = false;
  /// Only disc weights are certified; plane results are experimental.
  bool certified_mode = true;
  double log_sup_blocks = neg_inf;
  double log_norm_of_sum = neg_inf;

  bool factor_two_ok() const noexcept {
    if (selected.empty()) return true;
    return log_sup_blocks <= std::log(2.0) + log_norm_of_sum + 1e-12 * std::max(1.0, std::abs(log_norm_of_sum));
  }
};

/// Coefficientwise sum of magnitude sequences.
inline CoeffSeq sum_sequences(const std::vector<const CoeffSeq*>& parts) {
  std::map<long long, LogSumExp> acc;
  for (const CoeffSeq* p : parts)
    for (const auto& c : *p) acc[c.m].add(c.log_mag);
  std::vector<Coefficient> terms;
  terms.reserve(acc.size());
  for (const auto& [m, s] : acc) terms.push_back({m, s.value()});
  return CoeffSeq::from_log(std::move(terms));
}

inline ConcentratedSelection select_concentrated(const RadialWeight& weight, const std::vector<CoeffSeq>& blocks,
                                                 std::optional<std::size_t> max_selections = std::nullopt) {
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    if (blocks[i].empty()) throw validation_error("block " + std::to_string(i) + " is empty");
    if (i > 0 && !(blocks[i].min_degree() > blocks[i - 1].min_degree()))
      throw validation_error("block minimal degrees must increase strictly (block " + std::to_string(i) + ")");
  }
  ConcentratedSelection sel;
  sel.certified_mode = weight.domain() == Domain::Disc;
  sel.radii.push_back(0.0);
  const double ln3 = std::log(3.0);
  int k = 1;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    if (max_selections && sel.selected.size() >= *max_selections) break;
    const CoeffSeq& f = blocks[i];
    const double r_in = sel.radii.back();
    const MajorantResult norm = majorant_norm_at(weight, f);
    const double target = norm.log_norm - k * ln3;
    if (norm.r <= r_in) continue;
    const double inner = detail::restricted_log_sup(weight, f, 0.0, r_in);
    if (inner > target) continue;

    // Outer radius: first crossing of the target beyond the maximiser.
    const bool disc = weight.domain() == Domain::Disc;
    const double x_peak = detail::to_coord(weight, norm.r);
    auto excess = [&](double x) { return detail::log_modulus(weight, f, x) - target; };
    double unsafe = x_peak, safe = x_peak;
    for (double step = 1.0;; step *= 2.0) {
      safe = disc ? x_peak - step : x_peak + step;
      if (excess(safe) <= 0.0) break;
      unsafe = safe;
      if (step > 1e4) throw numeric_error("block modulus does not decay towards the boundary");
    }
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (safe + unsafe);
      if (mid == safe || mid == unsafe) break;
      (excess(mid) > 0.0 ? unsafe : safe) = mid;
    }
    double r_out = detail::from_coord(weight, safe);
    const long long deg = f.max_degree();
    auto outer_sup = [&](double r) {
      const double r_far = deg > 0 ? std::max(r, disc ? 0.5 * (1.0 + critical_radius(weight, static_cast<double>(deg)).r)
                                                   : 2.0 * critical_radius(weight, static_cast<double>(deg)).r)
                                   : r;
      return detail::restricted_log_sup(weight, f, r, r_far);
    };
    double outer = outer_sup(r_out);
    if (outer > target) {
      r_out = std::max(r_out, tail_radius(weight, deg, std::exp(-k * ln3)).r0);
      outer = outer_sup(r_out);
    }
    const double leakage = std::exp(std::max(inner, outer) - norm.log_norm);
    if (!(leakage <= std::exp(-k * ln3) * (1.0 + 1e-9))) continue;

    sel.degree_hints.push_back(tail_degree(weight, r_in, std::exp(-k * ln3)).n);
    sel.selected.push_back(i);
    sel.certificates.push_back({k, r_in, r_out, leakage});
    sel.radii.push_back(r_out);
    sel.log_sup_blocks = std::max(sel.log_sup_blocks, norm.log_norm);
    ++k;
  }
  if (max_selections) sel.truncated = sel.selected.size() < *max_selections;
  std::vector<const CoeffSeq*> parts;
  for (std::size_t i : sel.selected) parts.push_back(&blocks[i]);
  if (!parts.empty()) sel.log_norm_of_sum = majorant_norm(weight, sum_sequences(parts));
  return sel;
}

/// Splits coeffs into Lemma-style blocks f_n = sum_{cuts[n] < j <= cuts[n+1]} a_j z^j; empty blocks are dropped.
inline std::vector<CoeffSeq> split_blocks(const CoeffSeq& coeffs, const std::vector<long long>& cuts) {
  std::vector<CoeffSeq> out;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    CoeffSeq b = coeffs.slice(cuts[i], cuts[i + 1]);
    if (!b.empty()) out.push_back(std::move(b));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Dirichlet partial sums

struct PartialSum {
  long long cut = 0;
  double log_norm = neg_inf;
  /// ||P_cut f|| / ||f||
  double ratio = 0.0;
};

inline std::vector<PartialSum> partial_sum_growth(const RadialWeight& weight, const CoeffSeq& coeffs,
                                                  const std::vector<long long>& cuts) {
  for (std::size_t i = 1; i < cuts.size(); ++i)
    if (!(cuts[i] > cuts[i - 1])) throw domain_error("partial-sum cuts must increase strictly");
  const double full = majorant_norm(weight, coeffs);
  std::vector<PartialSum> out;
  out.reserve(cuts.size());
  for (long long c : cuts) {
    const CoeffSeq t = coeffs.truncated(c);
    const double ln = t.size() == coeffs.size() ? full : majorant_norm(weight, t);
    const double ratio = full == neg_inf ? 1.0 : exp_or_saturate(ln - full);
    out.push_back({c, ln, ratio});
  }
  return out;
}

// ---------------------------------------------------------------------------
// exp(-log^2 r) on the plane: ||f|| is equivalent to sup_k |a_k| e^{k^2/4}

struct LogSqEquivalence {
  bool lower_ok = true;
  /// exp(majorant - sup term): empirical equivalence constant.
  double upper_ratio = 1.0;
  double log_sup_term = neg_inf;
  double log_majorant = neg_inf;
};

inline LogSqEquivalence logsq_equivalence_check(const CoeffSeq& coeffs) {
  LogSqEquivalence out;
  if (coeffs.empty()) return out;
  for (const auto& c : coeffs) {
    const double k = static_cast<double>(c.m);
    out.log_sup_term = std::max(out.log_sup_term, c.log_mag + k * k / 4.0);
  }
  out.log_majorant = majorant_norm(RadialWeight{family::LogSqPlane{}}, coeffs);
  out.lower_ok = out.log_sup_term <= out.log_majorant + 1e-9 * std::max(1.0, std::abs(out.log_majorant));
  out.upper_ratio = exp_or_saturate(out.log_majorant - out.log_sup_term);
  return out;
}

}  // namespace solid
