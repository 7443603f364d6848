#pragma once

/*
 * The weight v2(r) = exp(-a/(1-r^2)^b) through v1(r) = exp(-a/(1-r)^b):
 * T1 h(z) = h(z^2) and T2 h(z) = z h(z^2) lift v1-functions to the even and
 * odd parts of the v2-space, so the v2 hull/core block norms are the v1 ones
 * re-indexed with exponents [m/2].
 */

#include <algorithm>
#include <vector>

#include "solid/block_norms.hpp"
#include "solid/coeffs.hpp"
#include "solid/critical_radii.hpp"
#include "solid/errors.hpp"
#include "solid/weights.hpp"

namespace solid {

struct ParityDecomposition {
  CoeffSeq even;
  CoeffSeq odd;
};

/// T1: index k -> 2k.
inline CoeffSeq lift_even(const CoeffSeq& h) {
  std::vector<Coefficient> t;
  t.reserve(h.size());
  for (const auto& c : h) t.push_back({2 * c.m, c.log_mag});
  return CoeffSeq::from_log(std::move(t));
}

/// T2: index k -> 2k + 1.
inline CoeffSeq lift_odd(const CoeffSeq& h) {
  std::vector<Coefficient> t;
  t.reserve(h.size());
  for (const auto& c : h) t.push_back({2 * c.m + 1, c.log_mag});
  return CoeffSeq::from_log(std::move(t));
}

/// P f = (f(z) + f(-z))/2 and (id - P) f.
inline ParityDecomposition parity_project(const CoeffSeq& f) {
  std::vector<Coefficient> even, odd;
  for (const auto& c : f) (c.m % 2 == 0 ? even : odd).push_back(c);
  return {CoeffSeq::from_log(std::move(even)), CoeffSeq::from_log(std::move(odd))};
}

/// Inverse of lift_even on even sequences.
inline CoeffSeq unlift_even(const CoeffSeq& even) {
  std::vector<Coefficient> t;
  for (const auto& c : even) {
    if (c.m % 2 != 0) throw domain_error("odd index " + std::to_string(c.m) + " in an even sequence");
    t.push_back({c.m / 2, c.log_mag});
  }
  return CoeffSeq::from_log(std::move(t));
}

/// Inverse of lift_odd on odd sequences.
inline CoeffSeq unlift_odd(const CoeffSeq& odd) {
  std::vector<Coefficient> t;
  for (const auto& c : odd) {
    if (c.m % 2 != 1) throw domain_error("even index " + std::to_string(c.m) + " in an odd sequence");
    t.push_back({(c.m - 1) / 2, c.log_mag});
  }
  return CoeffSeq::from_log(std::move(t));
}

/// Pointwise union of disjoint supports.
inline CoeffSeq merge_disjoint(const CoeffSeq& x, const CoeffSeq& y) {
  std::vector<Coefficient> t(x.begin(), x.end());
  t.insert(t.end(), y.begin(), y.end());
  return CoeffSeq::from_log(std::move(t));
}

/// The w = 1 block sequence for v1 covering every index of a v2-sequence up to max_index.
inline BlockPartition squared_partition(double a, double b, long long max_index) {
  const RadialWeight v1{family::ExpDisc{a, b, wfactor::One{}}};
  const family::ExpDisc f{a, b, wfactor::One{}};
  const long long n_first = theorem41_n_min(a, b);
  long long n_last = n_first + 1;
  while (2 * floor_int(theorem41_m(f, n_last)) + 1 < max_index) ++n_last;
  return theorem41_partition(v1, n_first, n_last);
}

namespace detail {

inline NormReport squared_norm(double a, double b, const CoeffSeq& coeffs, int p) {
  if (coeffs.empty()) return {};
  const BlockPartition part = squared_partition(a, b, coeffs.max_degree());
  const auto& e = part.entries;
  std::vector<long long> lower(e.size());
  for (std::size_t i = 0; i < e.size(); ++i) lower[i] = 2 * floor_int(e[i].m) + 1;
  return weighted_block_norm(coeffs, p, [&](long long m) {
    // Block n: 2[m_n] + 1 < m <= 2[m_{n+1}] + 1.
    auto it = std::lower_bound(lower.begin(), lower.end(), m);
    if (it == lower.begin() || it == lower.end())
      throw coverage_error("index " + std::to_string(m) + " outside the squared-weight blocks (" +
                               std::to_string(lower.front()) + ", " + std::to_string(lower.back()) + "]",
                           m);
    const PartitionEntry& pe = e[static_cast<std::size_t>(it - lower.begin()) - 1];
    const double half = static_cast<double>(m / 2);
    return BlockSlot{pe.n, pe.log_v, p * half * pe.log_r};
  });
}

}  // namespace detail

/// Solid-hull block norm of H^inf_{v2}: sup_n v1(r_n) (sum |b_m|^2 r_n^{2[m/2]})^{1/2}.
inline NormReport squared_hull_norm(double a, double b, const CoeffSeq& coeffs) {
  return detail::squared_norm(a, b, coeffs, 2);
}

/// Solid-core block norm of H^inf_{v2}: sup_n v1(r_n) sum |b_m| r_n^{[m/2]}.
inline NormReport squared_core_norm(double a, double b, const CoeffSeq& coeffs) {
  return detail::squared_norm(a, b, coeffs, 1);
}

}  // namespace solid
