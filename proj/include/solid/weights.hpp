#pragma once

/*
 * Radial weight families on the disc (R = 1) and on the plane (R = inf).
 *
 * Every evaluation happens in log domain: exp(-a/(1-r)^b) underflows long
 * before r reaches the region where high-degree Taylor coefficients live,
 * while ln v(r) stays an ordinary double.  Disc weights are internally
 * parametrised by the gap u = 1 - r and plane weights by t = ln r, which is
 * what the critical-radius solvers work in.
 */

#include <charconv>
#include <cmath>
#include <functional>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "solid/errors.hpp"
#include "solid/numerics.hpp"

namespace solid {

enum class Domain { Disc, Plane };

namespace detail {
inline std::string format_number(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}
}  // namespace detail

// ---------------------------------------------------------------------------
// Auxiliary factor w in v(r) = w(r) exp(-a/(1-r)^b)

namespace wfactor {
struct One {};
/// w(r) = 1 - r
struct OneMinusR {};
/// w(r) = (1 - log(1 - r))^{-1}
struct InvLog {};
/// w(r) = exp(-log^2(1 - r))
struct ExpLogSq {};
/// User-supplied ln w and (ln w)' as functions of r.
struct Custom {
  std::function<double(double)> log_w;
  std::function<double(double)> dlog_w;
};
}  // namespace wfactor

using WFactor =
    std::variant<wfactor::One, wfactor::OneMinusR, wfactor::InvLog, wfactor::ExpLogSq, wfactor::Custom>;

/// ln w at r = 1 - u.
inline double log_w(const WFactor& w, double u) {
  return std::visit(
      [u](const auto& f) -> double {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, wfactor::One>) {
          return 0.0;
        } else if constexpr (std::is_same_v<T, wfactor::OneMinusR>) {
          return std::log(u);
        } else if constexpr (std::is_same_v<T, wfactor::InvLog>) {
          return -std::log1p(-std::log(u));
        } else if constexpr (std::is_same_v<T, wfactor::ExpLogSq>) {
          const double l = std::log(u);
          return -l * l;
        } else {
          return f.log_w(1.0 - u);
        }
      },
      w);
}

/// w'(r)/w(r) at r = 1 - u.
inline double dlog_w(const WFactor& w, double u) {
  return std::visit(
      [u](const auto& f) -> double {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, wfactor::One>) {
          return 0.0;
        } else if constexpr (std::is_same_v<T, wfactor::OneMinusR>) {
          return -1.0 / u;
        } else if constexpr (std::is_same_v<T, wfactor::InvLog>) {
          return -1.0 / (u * (1.0 - std::log(u)));
        } else if constexpr (std::is_same_v<T, wfactor::ExpLogSq>) {
          return 2.0 * std::log(u) / u;
        } else {
          return f.dlog_w(1.0 - u);
        }
      },
      w);
}

inline bool is_trivial(const WFactor& w) { return std::holds_alternative<wfactor::One>(w); }

inline std::string wfactor_name(const WFactor& w) {
  switch (w.index()) {
    case 0: return "one";
    case 1: return "oneminusr";
    case 2: return "invlog";
    case 3: return "explogsq";
    default: return "custom";
  }
}

// ---------------------------------------------------------------------------
// Weight families

namespace family {
/// w(r) exp(-a/(1-r)^b) on the disc.
struct ExpDisc {
  double a = 1.0;
  double b = 1.0;
  WFactor w = wfactor::One{};
};
/// exp(-a/(1-r^2)^b) on the disc.
struct ExpDiscSquared {
  double a = 1.0;
  double b = 1.0;
};
enum class StandardForm { OneMinusR, OneMinusRSquared };
/// (1-r)^alpha, or (1-r^2)^alpha with OneMinusRSquared.
struct StandardDisc {
  double alpha = 1.0;
  StandardForm form = StandardForm::OneMinusR;
};
/// exp(-r^p) on the plane.
struct ExpPlane {
  double p = 1.0;
};
/// exp(-exp r) on the plane.
struct ExpExpPlane {};
/// exp(-log^2 r) on the plane for r >= 1, continued by 1 on [0, 1].
struct LogSqPlane {};
/// Arbitrary weight given by ln v and (ln v)' as functions of r.
struct Custom {
  Domain domain = Domain::Disc;
  std::function<double(double)> log_v;
  std::function<double(double)> dlog_v;
};
}  // namespace family

using WeightFamily = std::variant<family::ExpDisc, family::ExpDiscSquared, family::StandardDisc,
                                  family::ExpPlane, family::ExpExpPlane, family::LogSqPlane,
                                  family::Custom>;

class RadialWeight {
 public:
  RadialWeight(WeightFamily f) : family_(std::move(f)) { check_parameters(); }  // NOLINT

  const WeightFamily& family() const noexcept { return family_; }

  Domain domain() const noexcept {
    switch (family_.index()) {
      case 0:
      case 1:
      case 2: return Domain::Disc;
      case 3:
      case 4:
      case 5: return Domain::Plane;
      default: return std::get<family::Custom>(family_).domain;
    }
  }

  double radius() const noexcept { return domain() == Domain::Disc ? 1.0 : pos_inf; }

  bool is_custom() const noexcept { return std::holds_alternative<family::Custom>(family_); }

  const family::ExpDisc* exp_disc() const noexcept { return std::get_if<family::ExpDisc>(&family_); }

  /// ln v(r) for 0 <= r < R.
  double log_v(double r) const {
    check_radius(r);
    if (domain() == Domain::Disc) return log_v_gap(1.0 - r);
    if (r == 0.0) return log_v_plane_at_zero();
    return log_v_log(std::log(r));
  }

  /// d/dr ln v(r).
  double dlog_v(double r) const {
    check_radius(r);
    return std::visit(
        [r](const auto& f) -> double {
          using T = std::decay_t<decltype(f)>;
          if constexpr (std::is_same_v<T, family::ExpDisc>) {
            const double u = 1.0 - r;
            return -f.a * f.b * std::pow(u, -f.b - 1.0) + dlog_w(f.w, u);
          } else if constexpr (std::is_same_v<T, family::ExpDiscSquared>) {
            const double q = (1.0 - r) * (1.0 + r);
            return -2.0 * f.a * f.b * r * std::pow(q, -f.b - 1.0);
          } else if constexpr (std::is_same_v<T, family::StandardDisc>) {
            if (f.form == family::StandardForm::OneMinusR) return -f.alpha / (1.0 - r);
            return -2.0 * f.alpha * r / ((1.0 - r) * (1.0 + r));
          } else if constexpr (std::is_same_v<T, family::ExpPlane>) {
            if (r == 0.0) {
              if (f.p < 1.0) throw domain_error("exp(-r^p) with p < 1 is not differentiable at r = 0");
              return f.p == 1.0 ? -1.0 : 0.0;
            }
            return -f.p * std::pow(r, f.p - 1.0);
          } else if constexpr (std::is_same_v<T, family::ExpExpPlane>) {
            return -std::exp(r);
          } else if constexpr (std::is_same_v<T, family::LogSqPlane>) {
            return r <= 1.0 ? 0.0 : -2.0 * std::log(r) / r;
          } else {
            return f.dlog_v(r);
          }
        },
        family_);
  }

  /// Disc only: ln v(1 - u) for 0 < u <= 1.
  double log_v_gap(double u) const {
    return std::visit(
        [u](const auto& f) -> double {
          using T = std::decay_t<decltype(f)>;
          if constexpr (std::is_same_v<T, family::ExpDisc>) {
            return log_w(f.w, u) - f.a * std::pow(u, -f.b);
          } else if constexpr (std::is_same_v<T, family::ExpDiscSquared>) {
            return -f.a * std::pow(u * (2.0 - u), -f.b);
          } else if constexpr (std::is_same_v<T, family::StandardDisc>) {
            if (f.alpha == 0.0) return 0.0;
            if (f.form == family::StandardForm::OneMinusR) return f.alpha * std::log(u);
            return f.alpha * std::log(u * (2.0 - u));
          } else if constexpr (std::is_same_v<T, family::Custom>) {
            return f.log_v(1.0 - u);
          } else {
            return not_a_number;
          }
        },
        family_);
  }

  /// Disc only: r * (ln v)'(r) at r = 1 - u.
  double elasticity_gap(double u) const {
    const double r = 1.0 - u;
    return std::visit(
        [u, r](const auto& f) -> double {
          using T = std::decay_t<decltype(f)>;
          if constexpr (std::is_same_v<T, family::ExpDisc>) {
            return r * (-f.a * f.b * std::pow(u, -f.b - 1.0) + dlog_w(f.w, u));
          } else if constexpr (std::is_same_v<T, family::ExpDiscSquared>) {
            const double q = u * (2.0 - u);
            return -2.0 * f.a * f.b * r * r * std::pow(q, -f.b - 1.0);
          } else if constexpr (std::is_same_v<T, family::StandardDisc>) {
            if (f.form == family::StandardForm::OneMinusR) return -f.alpha * r / u;
            return -2.0 * f.alpha * r * r / (u * (2.0 - u));
          } else if constexpr (std::is_same_v<T, family::Custom>) {
            return r * f.dlog_v(r);
          } else {
            return not_a_number;
          }
        },
        family_);
  }

  /// Plane only: ln v(e^t).
  double log_v_log(double t) const {
    return std::visit(
        [t](const auto& f) -> double {
          using T = std::decay_t<decltype(f)>;
          if constexpr (std::is_same_v<T, family::ExpPlane>) {
            return -std::exp(f.p * t);
          } else if constexpr (std::is_same_v<T, family::ExpExpPlane>) {
            return -std::exp(std::exp(t));
          } else if constexpr (std::is_same_v<T, family::LogSqPlane>) {
            return t <= 0.0 ? 0.0 : -t * t;
          } else if constexpr (std::is_same_v<T, family::Custom>) {
            return f.log_v(std::exp(t));
          } else {
            return not_a_number;
          }
        },
        family_);
  }

  /// Plane only: r * (ln v)'(r) at r = e^t.
  double elasticity_log(double t) const {
    return std::visit(
        [t](const auto& f) -> double {
          using T = std::decay_t<decltype(f)>;
          if constexpr (std::is_same_v<T, family::ExpPlane>) {
            return -f.p * std::exp(f.p * t);
          } else if constexpr (std::is_same_v<T, family::ExpExpPlane>) {
            const double r = std::exp(t);
            return -r * std::exp(r);
          } else if constexpr (std::is_same_v<T, family::LogSqPlane>) {
            return t <= 0.0 ? 0.0 : -2.0 * t;
          } else if constexpr (std::is_same_v<T, family::Custom>) {
            const double r = std::exp(t);
            return r * f.dlog_v(r);
          } else {
            return not_a_number;
          }
        },
        family_);
  }

  /// Canonical specification string, parseable by parse_weight().
  std::string describe() const {
    using detail::format_number;
    return std::visit(
        [](const auto& f) -> std::string {
          using T = std::decay_t<decltype(f)>;
          if constexpr (std::is_same_v<T, family::ExpDisc>) {
            return "expdisc:a=" + format_number(f.a) + ",b=" + format_number(f.b) + ",w=" + wfactor_name(f.w);
          } else if constexpr (std::is_same_v<T, family::ExpDiscSquared>) {
            return "expdisc2:a=" + format_number(f.a) + ",b=" + format_number(f.b);
          } else if constexpr (std::is_same_v<T, family::StandardDisc>) {
            return "std:alpha=" + format_number(f.alpha) +
                   (f.form == family::StandardForm::OneMinusRSquared ? ",form=sq" : "");
          } else if constexpr (std::is_same_v<T, family::ExpPlane>) {
            return "expplane:p=" + format_number(f.p);
          } else if constexpr (std::is_same_v<T, family::ExpExpPlane>) {
            return "expexp";
          } else if constexpr (std::is_same_v<T, family::LogSqPlane>) {
            return "logsq";
          } else {
            return "custom";
          }
        },
        family_);
  }

 private:
  double log_v_plane_at_zero() const {
    if (const auto* c = std::get_if<family::Custom>(&family_)) return c->log_v(0.0);
    return std::holds_alternative<family::ExpExpPlane>(family_) ? -1.0 : 0.0;
  }

  void check_radius(double r) const {
    if (!(r >= 0.0) || !(r < radius()))
      throw domain_error("radius " + detail::format_number(r) + " outside [0, R) for weight " + describe());
  }

  void check_parameters() const {
    std::visit(
        [](const auto& f) {
          using T = std::decay_t<decltype(f)>;
          if constexpr (std::is_same_v<T, family::ExpDisc> || std::is_same_v<T, family::ExpDiscSquared>) {
            if (!(f.a > 0.0) || !(f.b > 0.0) || !std::isfinite(f.a) || !std::isfinite(f.b))
              throw domain_error("exponential disc weight needs finite a > 0 and b > 0");
            if constexpr (std::is_same_v<T, family::ExpDisc>) {
              if (const auto* c = std::get_if<wfactor::Custom>(&f.w); c && (!c->log_w || !c->dlog_w))
                throw domain_error("custom w factor needs both log_w and dlog_w");
            }
          } else if constexpr (std::is_same_v<T, family::StandardDisc>) {
            if (!(f.alpha >= 0.0) || !std::isfinite(f.alpha)) throw domain_error("standard weight needs alpha >= 0");
          } else if constexpr (std::is_same_v<T, family::ExpPlane>) {
            if (!(f.p > 0.0) || !std::isfinite(f.p)) throw domain_error("exp(-r^p) needs p > 0");
          } else if constexpr (std::is_same_v<T, family::Custom>) {
            if (!f.log_v || !f.dlog_v) throw domain_error("custom weight needs both log_v and dlog_v");
          }
        },
        family_);
  }

  WeightFamily family_;
};

// ---------------------------------------------------------------------------
// Grid validation

enum class ViolationKind {
  NonFinite,
  NotNonIncreasing,
  NoBoundaryDecay,
  WFactorNotDecreasing,
  WFactorGrowthTooFast,
};

struct Violation {
  ViolationKind kind;
  double r;
  std::string message;
};

struct WeightGrid {
  std::vector<double> r;
  std::vector<double> log_r;
  std::vector<double> log_v;
};

inline constexpr int kValidationGridSize = 512;

/// Validation grid: log-spaced in 1 - r on the disc (u from 1 down to 1e-12),
/// log-spaced in r on the plane from 1e-6 up to where ln v < -1e6.
inline WeightGrid validation_grid(const RadialWeight& weight) {
  WeightGrid g;
  const int n = kValidationGridSize;
  g.r.reserve(n);
  g.log_r.reserve(n);
  g.log_v.reserve(n);
  if (weight.domain() == Domain::Disc) {
    const double lu_hi = 0.0, lu_lo = std::log(1e-12);
    for (int i = 0; i < n; ++i) {
      const double u = std::exp(lu_hi + (lu_lo - lu_hi) * i / (n - 1));
      const double r = i == 0 ? 0.0 : 1.0 - u;
      g.r.push_back(r);
      g.log_r.push_back(i == 0 ? neg_inf : std::log1p(-u));
      g.log_v.push_back(weight.log_v_gap(i == 0 ? 1.0 : u));
    }
  } else {
    const double t_lo = std::log(1e-6);
    double t_hi = 1.0;
    while (weight.log_v_log(t_hi) >= -1e6 && t_hi < 1e6) t_hi *= 2.0;
    for (int i = 0; i < n; ++i) {
      const double t = t_lo + (t_hi - t_lo) * i / (n - 1);
      g.r.push_back(std::exp(t));
      g.log_r.push_back(t);
      g.log_v.push_back(weight.log_v_log(t));
    }
  }
  return g;
}

/// Grid checks of the weight axioms (positive, non-increasing, r^n v(r) -> 0) and,
/// for w(r) exp(-a/(1-r)^b), of the hypotheses on w'/w. Empty result means valid.
inline std::vector<Violation> validate(const RadialWeight& weight) {
  using detail::format_number;
  std::vector<Violation> out;
  const WeightGrid g = validation_grid(weight);
  const std::size_t n = g.r.size();

  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(g.log_v[i])) {
      out.push_back({ViolationKind::NonFinite, g.r[i], "ln v is not finite at r = " + format_number(g.r[i])});
      return out;
    }
  }
  for (std::size_t i = 1; i < n; ++i) {
    const double slack = 1e-12 * std::max(1.0, std::abs(g.log_v[i - 1]));
    if (g.log_v[i] > g.log_v[i - 1] + slack) {
      out.push_back({ViolationKind::NotNonIncreasing, g.r[i],
                     "v increases between r = " + format_number(g.r[i - 1]) + " and r = " + format_number(g.r[i])});
      break;
    }
  }
  for (double power : {1.0, 10.0, 100.0}) {
    double best = neg_inf;
    for (std::size_t i = 1; i < n; ++i) best = std::max(best, power * g.log_r[i] + g.log_v[i]);
    const double last = power * g.log_r[n - 1] + g.log_v[n - 1];
    const double prev = power * g.log_r[n - 2] + g.log_v[n - 2];
    if (!(last < prev) || !(last < best)) {
      out.push_back({ViolationKind::NoBoundaryDecay, g.r[n - 1],
                     "r^" + format_number(power) + " v(r) does not decay towards the boundary"});
      break;
    }
  }

  if (const auto* ed = weight.exp_disc(); ed != nullptr && !is_trivial(ed->w)) {
    double prev = pos_inf;
    for (std::size_t i = 1; i < n; ++i) {
      const double u = 1.0 - g.r[i];
      const double d = dlog_w(ed->w, u);
      if (d > prev + 1e-12 * std::max(1.0, std::abs(prev))) {
        out.push_back({ViolationKind::WFactorNotDecreasing, g.r[i],
                       "w'/w increases near r = " + format_number(g.r[i])});
        break;
      }
      prev = d;
    }
    // Growth exponent of |w'/w| against 1/(1-r) over the boundary tail.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int count = 0;
    for (std::size_t i = 1; i < n; ++i) {
      const double u = 1.0 - g.r[i];
      if (u > 1e-6) continue;
      const double d = std::abs(dlog_w(ed->w, u));
      if (!(d > 0.0) || !std::isfinite(d)) continue;
      const double x = -std::log(u), y = std::log(d);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
      ++count;
    }
    if (count >= 2) {
      const double slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);
      const double limit = 1.0 + ed->b / 2.0;
      if (slope >= limit) {
        out.push_back({ViolationKind::WFactorGrowthTooFast, 1.0,
                       "w'/w grows like (1-r)^-" + format_number(std::round(slope * 100) / 100) +
                           "; the exponent must stay below 1+b/2 = " + format_number(limit)});
      }
    }
  }
  return out;
}

}  // namespace solid
