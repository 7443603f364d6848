#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "solid/errors.hpp"
#include "solid/numerics.hpp"

namespace solid {

struct Coefficient {
  long long m = 0;
  /// ln |b_m|
  double log_mag = 0.0;

  friend bool operator==(const Coefficient&, const Coefficient&) = default;
};

/// Finitely supported Taylor-coefficient magnitudes |b_m|, strictly increasing in m.
/// Zero magnitudes (log_mag = -inf) are not stored.
class CoeffSeq {
 public:
  CoeffSeq() = default;

  static CoeffSeq from_log(std::vector<Coefficient> terms) {
    std::erase_if(terms, [](const Coefficient& c) { return c.log_mag == neg_inf; });
    std::sort(terms.begin(), terms.end(), [](const Coefficient& x, const Coefficient& y) { return x.m < y.m; });
    for (std::size_t i = 0; i < terms.size(); ++i) {
      if (terms[i].m < 0) throw domain_error("negative Taylor index " + std::to_string(terms[i].m));
      if (std::isnan(terms[i].log_mag) || terms[i].log_mag == pos_inf)
        throw domain_error("magnitude at index " + std::to_string(terms[i].m) + " is not finite");
      if (i > 0 && terms[i].m == terms[i - 1].m)
        throw domain_error("duplicate Taylor index " + std::to_string(terms[i].m));
    }
    CoeffSeq s;
    s.terms_ = std::move(terms);
    return s;
  }

  /// From plain magnitudes; negative values are rejected.
  static CoeffSeq from_magnitudes(const std::vector<std::pair<long long, double>>& mags) {
    std::vector<Coefficient> terms;
    terms.reserve(mags.size());
    for (const auto& [m, mag] : mags) {
      if (!(mag >= 0.0)) throw domain_error("magnitude at index " + std::to_string(m) + " is negative or NaN");
      terms.push_back({m, mag == 0.0 ? neg_inf : std::log(mag)});
    }
    return from_log(std::move(terms));
  }

  const std::vector<Coefficient>& terms() const noexcept { return terms_; }
  auto begin() const noexcept { return terms_.begin(); }
  auto end() const noexcept { return terms_.end(); }
  bool empty() const noexcept { return terms_.empty(); }
  std::size_t size() const noexcept { return terms_.size(); }
  long long min_degree() const { return terms_.front().m; }
  long long max_degree() const { return terms_.back().m; }

  /// Every magnitude multiplied by e^{log_t}.
  CoeffSeq scaled(double log_t) const {
    CoeffSeq s = *this;
    for (auto& c : s.terms_) c.log_mag += log_t;
    return s;
  }

  /// Dirichlet projection: degrees <= max_degree.
  CoeffSeq truncated(long long max_degree) const {
    CoeffSeq s;
    for (const auto& c : terms_)
      if (c.m <= max_degree) s.terms_.push_back(c);
    return s;
  }

  /// Degrees in (lo, hi].
  CoeffSeq slice(long long lo, long long hi) const {
    CoeffSeq s;
    for (const auto& c : terms_)
      if (c.m > lo && c.m <= hi) s.terms_.push_back(c);
    return s;
  }

  friend bool operator==(const CoeffSeq&, const CoeffSeq&) = default;

 private:
  std::vector<Coefficient> terms_;
};

/// Pointwise |b_m| <= |a_m|: every index of b is in a with no larger magnitude.
inline bool is_dominated_by(const CoeffSeq& b, const CoeffSeq& a) {
  auto it = a.begin();
  for (const auto& c : b) {
    while (it != a.end() && it->m < c.m) ++it;
    if (it == a.end() || it->m != c.m || c.log_mag > it->log_mag) return false;
  }
  return true;
}

}  // namespace solid
