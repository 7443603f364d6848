#pragma once

/* Log-domain arithmetic and one-dimensional root / maximum finders. */

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <utility>

namespace solid {

inline constexpr double neg_inf = -std::numeric_limits<double>::infinity();
inline constexpr double pos_inf = std::numeric_limits<double>::infinity();
inline constexpr double not_a_number = std::numeric_limits<double>::quiet_NaN();

/// Streaming log-sum-exp with max extraction; -inf terms are the additive identity.
class LogSumExp {
 public:
  void add(double log_term) noexcept {
    if (log_term == neg_inf) return;
    if (log_term <= max_) {
      scaled_ += std::exp(log_term - max_);
    } else {
      scaled_ = scaled_ * std::exp(max_ - log_term) + 1.0;
      max_ = log_term;
    }
  }

  double value() const noexcept {
    if (max_ == neg_inf) return neg_inf;
    return max_ + std::log(scaled_);
  }

 private:
  double max_ = neg_inf;
  double scaled_ = 0.0;
};

inline double log_sum_exp(std::span<const double> terms) noexcept {
  double mx = neg_inf;
  for (double t : terms) mx = std::max(mx, t);
  if (mx == neg_inf) return neg_inf;
  double s = 0.0;
  for (double t : terms) s += std::exp(t - mx);
  return mx + std::log(s);
}

/// exp that saturates to 0 / +inf instead of producing denormal noise warnings.
inline double exp_or_saturate(double x) noexcept {
  if (x > 709.0) return pos_inf;
  if (x < -745.0) return 0.0;
  return std::exp(x);
}

/// ln(sum_{k=0}^{m} e^{k*step}) for step >= 0, in closed form.
inline double log_geometric_sum(double step, long long m) noexcept {
  if (m < 0) return neg_inf;
  const double terms = static_cast<double>(m) + 1.0;
  if (step <= 0.0) {
    if (step == 0.0) return std::log(terms);
    // Decreasing ratio: sum = (1 - e^{(m+1)step}) / (1 - e^{step}).
    return std::log(-std::expm1(terms * step)) - std::log(-std::expm1(step));
  }
  return terms * step + std::log1p(-std::exp(-terms * step)) - std::log(std::expm1(step));
}

/// Bisection for a sign change of f on [lo, hi] where f(lo) > 0 >= f(hi).
/// Stops when the midpoint no longer moves or after max_iter halvings.
template <class F>
double bisect_decreasing(F&& f, double lo, double hi, int max_iter = 200) {
  for (int i = 0; i < max_iter; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (f(mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

struct Maximum {
  double x;
  double value;
};

/// Golden-section search for a maximum of a unimodal g on [lo, hi].
template <class G>
Maximum golden_section_max(G&& g, double lo, double hi, double x_tol, int max_iter = 300) {
  constexpr double inv_phi = 0.6180339887498948482;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double g1 = g(x1);
  double g2 = g(x2);
  for (int i = 0; i < max_iter && (hi - lo) > x_tol; ++i) {
    if (g1 < g2) {
      lo = x1;
      x1 = x2;
      g1 = g2;
      x2 = lo + inv_phi * (hi - lo);
      g2 = g(x2);
    } else {
      hi = x2;
      x2 = x1;
      g2 = g1;
      x1 = hi - inv_phi * (hi - lo);
      g1 = g(x1);
    }
  }
  Maximum best{x1, g1};
  if (g2 > best.value) best = {x2, g2};
  for (double x : {lo, hi}) {
    const double gx = g(x);
    if (gx > best.value) best = {x, gx};
  }
  return best;
}

/// Largest integer <= s.
inline long long floor_int(double s) noexcept { return static_cast<long long>(std::floor(s)); }

}  // namespace solid
