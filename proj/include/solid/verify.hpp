#pragma once

/*
 * Verification suites run by `solidhull verify`.  Each suite returns cases with
 * status pass / fail / report-only and the measured quantities behind them.
 */

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "solid/block_norms.hpp"
#include "solid/coeffs.hpp"
#include "solid/critical_radii.hpp"
#include "solid/io.hpp"
#include "solid/squared_weight.hpp"
#include "solid/tail_bounds.hpp"
#include "solid/weights.hpp"

namespace solid::verify {

enum class Status { Pass, Fail, ReportOnly };

inline const char* to_string(Status s) {
  switch (s) {
    case Status::Pass: return "pass";
    case Status::Fail: return "fail";
    default: return "report-only";
  }
}

struct Case {
  std::string id;
  Status status = Status::ReportOnly;
  std::vector<std::pair<std::string, double>> measured;
};

struct SuiteResult {
  std::string name;
  std::vector<Case> cases;
  int passed = 0;
  int failed = 0;
  int report_only = 0;

  void add(Case c) {
    (c.status == Status::Pass ? passed : c.status == Status::Fail ? failed : report_only) += 1;
    cases.push_back(std::move(c));
  }
  bool ok() const noexcept { return failed == 0; }
};

inline io::Json to_json(const SuiteResult& s) {
  io::Json cases = io::Json::array();
  for (const auto& c : s.cases) {
    io::Json measured = io::Json::object();
    for (const auto& [k, v] : c.measured) measured[k] = v;
    cases.push_back(io::Json{{"id", c.id}, {"status", to_string(c.status)}, {"measured", measured}});
  }
  return io::Json{{"suite", s.name},
                  {"cases", cases},
                  {"summary", io::Json{{"pass", s.passed}, {"fail", s.failed}, {"report_only", s.report_only}}}};
}

struct Options {
  std::optional<RadialWeight> weight;
  std::optional<io::IntRange> n;
  int trials = 100;
  std::uint64_t seed = 0;
};

inline Status pass_if(bool ok) { return ok ? Status::Pass : Status::Fail; }

inline double rel_err(double x, double ref) { return std::abs(x - ref) / std::max(1.0, std::abs(ref)); }

/// The four closed-form example weights: (a, b, w) = (1,1,1), (1,2,1-r), (1,1,1/(1-log(1-r))), (1,1,exp(-log^2(1-r))).
inline std::vector<RadialWeight> example_weights() {
  return {RadialWeight{family::ExpDisc{1, 1, wfactor::One{}}}, RadialWeight{family::ExpDisc{1, 2, wfactor::OneMinusR{}}},
          RadialWeight{family::ExpDisc{1, 1, wfactor::InvLog{}}},
          RadialWeight{family::ExpDisc{1, 1, wfactor::ExpLogSq{}}}};
}

/// Closed-form partition for expdisc weights, greedy (target 2.2) otherwise.
inline BlockPartition default_partition(const RadialWeight& w, std::optional<io::IntRange> n, long long count = 30) {
  if (const auto* f = w.exp_disc()) {
    const long long n_min = theorem41_n_min(f->a, f->b);
    const long long first = n ? std::max(n->first, n_min) : n_min;
    const long long last = n ? n->last : first + count - 1;
    return theorem41_partition(w, first, std::max(last, first + 1));
  }
  const int size = n ? static_cast<int>(n->last - n->first + 1) : static_cast<int>(count);
  return greedy_partition(w, 2.2, 1.0, std::max(size, 2));
}

/// Random magnitudes on indices in (lo, hi], scaled so every term has weighted size near e^0.
template <class LogScale>
CoeffSeq random_coeffs(std::mt19937_64& rng, long long lo, long long hi, int max_terms, LogScale&& log_scale) {
  std::uniform_int_distribution<long long> idx(lo + 1, hi);
  std::uniform_int_distribution<int> len(1, max_terms);
  std::uniform_real_distribution<double> jitter(-4.0, 1.0);
  std::map<long long, double> support;
  const int k = len(rng);
  for (int i = 0; i < k; ++i) {
    const long long j = idx(rng);
    support[j] = -log_scale(j) + jitter(rng);
  }
  std::vector<Coefficient> terms;
  for (const auto& [j, lm] : support) terms.push_back({j, lm});
  return CoeffSeq::from_log(std::move(terms));
}

/// ln(r_n^m v(r_n)) for the block holding m.
inline auto block_scale(const BlockPartition& p) {
  return [&p](long long m) {
    const auto& e = p.entries[detail::locate_block(p, m)];
    return e.log_v + static_cast<double>(m) * e.log_r;
  };
}

// ---------------------------------------------------------------------------

inline SuiteResult condb(const Options& opt) {
  SuiteResult out{"condb", {}, 0, 0, 0};
  const std::vector<RadialWeight> weights = opt.weight ? std::vector<RadialWeight>{*opt.weight} : example_weights();
  for (const auto& w : weights) {
    std::optional<io::IntRange> range = opt.n;
    if (!range && w.exp_disc()) range = io::IntRange{theorem41_n_min(w.exp_disc()->a, w.exp_disc()->b), 200};
    const ConditionBReport rep = condition_b_check(w, default_partition(w, range));
    out.add({w.describe(),
             pass_if(rep.holds()),
             {{"n0", rep.n0 ? static_cast<double>(*rep.n0) : not_a_number},
              {"inferred_b", rep.inferred_b},
              {"inferred_K", rep.inferred_K}}});
  }
  return out;
}

inline SuiteResult sandwich(const Options& opt) {
  SuiteResult out{"sandwich", {}, 0, 0, 0};
  std::vector<RadialWeight> weights;
  if (opt.weight) weights.push_back(*opt.weight);
  else weights = {RadialWeight{family::ExpDisc{1, 1, wfactor::One{}}}, RadialWeight{family::ExpDisc{1, 2, wfactor::OneMinusR{}}},
                  RadialWeight{family::StandardDisc{1.0}}, RadialWeight{family::ExpPlane{1.0}}};
  std::mt19937_64 rng(opt.seed);
  for (const auto& w : weights) {
    const BlockPartition p = default_partition(w, opt.n, 12);
    const long long lo = floor_int(p.entries.front().m), hi = floor_int(p.entries.back().m);
    int violations = 0;
    double worst = 0.0, max_ratio = 0.0;
    for (int t = 0; t < opt.trials; ++t) {
      const CoeffSeq c = random_coeffs(rng, lo, hi, 30, block_scale(p));
      const SandwichResult s = sandwich_check(w, p, c);
      if (!s.lower_ok) ++violations;
      worst = std::max(worst, s.log_core - s.log_majorant);
      max_ratio = std::max(max_ratio, s.ratio);
    }
    out.add({w.describe(),
             pass_if(violations == 0),
             {{"trials", opt.trials}, {"violations", violations}, {"max_log_excess", worst}, {"max_ratio", max_ratio}}});
  }
  return out;
}

/// The two block representations of the first example: m_n = n^4 - n^2 against n^4,
/// with K_n = e^{-n^2} and L_m = (1 - n^{-2})^{pm} for the block n holding m.
inline std::pair<BlockSystem, BlockSystem> example_block_systems(long long n_first, long long n_last, int p) {
  BlockSystem sys, tilde;
  sys.n_first = tilde.n_first = n_first;
  for (long long n = n_first; n <= n_last; ++n) {
    const double nn = static_cast<double>(n);
    sys.m.push_back(nn * nn * nn * nn - nn * nn);
    tilde.m.push_back(nn * nn * nn * nn);
    sys.log_K.push_back(-nn * nn);
    tilde.log_K.push_back(-nn * nn);
  }
  auto make_L = [p](const BlockSystem& s) {
    return [m = s.m, first = s.n_first, p](long long j) {
      const auto it = std::lower_bound(m.begin(), m.end(), static_cast<double>(j));
      const double n = static_cast<double>(first + (it - m.begin()) - 1);
      return p * static_cast<double>(j) * std::log1p(-1.0 / (n * n));
    };
  };
  sys.log_L = make_L(sys);
  tilde.log_L = make_L(tilde);
  return {sys, tilde};
}

inline SuiteResult lemma14(const Options& opt) {
  SuiteResult out{"lemma14", {}, 0, 0, 0};
  const io::IntRange n = opt.n.value_or(io::IntRange{2, 30});
  for (int p : {2, 1}) {
    const auto [sys, tilde] = example_block_systems(std::max<long long>(2, n.first), n.last, p);
    const Lemma14Result r = lemma14_check(sys, tilde, p, opt.trials, opt.seed);
    const bool ok = r.interleaved && r.c > 0.0 && std::isfinite(r.C) && r.forward_violations == 0 &&
                    r.reverse_violations == 0;
    out.add({"p=" + std::to_string(p),
             pass_if(ok),
             {{"c", r.c},
              {"C", r.C},
              {"trials", r.trials},
              {"forward_violations", r.forward_violations},
              {"reverse_violations", r.reverse_violations},
              {"worst_forward", r.worst_forward},
              {"worst_reverse", r.worst_reverse}}});
  }
  return out;
}

struct ParityLawStats {
  double t1_max_diff = 0.0;
  double t2_max_excess = neg_inf;
  double p_max_excess = neg_inf;
  double hull_max_diff = 0.0;
  double core_max_diff = 0.0;
};

/// Operator laws for the squared weight on `trials` random v1-sequences.
inline ParityLawStats parity_laws(double a, double b, long long n_last, int trials, std::mt19937_64& rng) {
  const RadialWeight v1{family::ExpDisc{a, b, wfactor::One{}}};
  const RadialWeight v2{family::ExpDiscSquared{a, b}};
  const BlockPartition p1 = theorem41_partition(v1, theorem41_n_min(a, b), n_last);
  const long long lo = floor_int(p1.entries.front().m), hi = floor_int(p1.entries.back().m);
  ParityLawStats s;
  for (int t = 0; t < trials; ++t) {
    const CoeffSeq h = random_coeffs(rng, lo, hi, 20, block_scale(p1));
    const double nh = majorant_norm(v1, h);
    const CoeffSeq even = lift_even(h), odd = lift_odd(h);
    s.t1_max_diff = std::max(s.t1_max_diff, std::abs(majorant_norm(v2, even) - nh) / std::max(1.0, std::abs(nh)));
    s.t2_max_excess = std::max(s.t2_max_excess, majorant_norm(v2, odd) - nh);
    const CoeffSeq f = merge_disjoint(even, odd.scaled(-1.0));
    const double nf = majorant_norm(v2, f);
    const ParityDecomposition d = parity_project(f);
    s.p_max_excess = std::max({s.p_max_excess, majorant_norm(v2, d.even) - nf, majorant_norm(v2, d.odd) - nf});

    const BlockPartition part = squared_partition(a, b, odd.max_degree());
    const double h_hull = hull_block_norm(part, h).log_sup;
    const double h_core = core_block_norm(part, h).log_sup;
    for (const CoeffSeq* lifted : {&even, &odd}) {
      s.hull_max_diff = std::max(s.hull_max_diff, std::abs(squared_hull_norm(a, b, *lifted).log_sup - h_hull) /
                                                      std::max(1.0, std::abs(h_hull)));
      s.core_max_diff = std::max(s.core_max_diff, std::abs(squared_core_norm(a, b, *lifted).log_sup - h_core) /
                                                      std::max(1.0, std::abs(h_core)));
    }
  }
  return s;
}

inline SuiteResult squared(const Options& opt) {
  SuiteResult out{"squared", {}, 0, 0, 0};
  std::mt19937_64 rng(opt.seed);
  for (const auto& [a, b] : std::vector<std::pair<double, double>>{{1.0, 1.0}, {1.0, 2.0}}) {
    const ParityLawStats s = parity_laws(a, b, 12, opt.trials, rng);
    const std::string tag = "a=" + detail::format_number(a) + ",b=" + detail::format_number(b);
    out.add({tag + ":T1-isometry", pass_if(s.t1_max_diff <= 1e-9), {{"max_rel_diff", s.t1_max_diff}}});
    out.add({tag + ":T2-contraction", pass_if(s.t2_max_excess <= 1e-9), {{"max_log_excess", s.t2_max_excess}}});
    out.add({tag + ":P-contraction", pass_if(s.p_max_excess <= 1e-9), {{"max_log_excess", s.p_max_excess}}});
    out.add({tag + ":hull-lift", pass_if(s.hull_max_diff <= 1e-9), {{"max_rel_diff", s.hull_max_diff}}});
    out.add({tag + ":core-lift", pass_if(s.core_max_diff <= 1e-9), {{"max_rel_diff", s.core_max_diff}}});
  }
  return out;
}

/// sup over a dense grid of [r0, R) of the tail-radius sum, as ln.
inline double tail_radius_grid_sup(const RadialWeight& w, long long m, const TailRadius& t, int points = 10000) {
  double best = neg_inf;
  for (int i = 0; i < points; ++i) {
    const double x = static_cast<double>(i) / (points - 1);
    double s;
    if (w.domain() == Domain::Disc) {
      // Gap 1 - s log-spaced from 1 - r0 down to 1e-12.
      const double g0 = std::log1p(-t.r0), g1 = std::log(1e-12);
      s = -std::expm1(g0 + (g1 - g0) * x);
      if (g1 >= g0) s = t.r0;
    } else {
      s = t.r0 * std::exp(6.0 * x);
    }
    best = std::max(best, log_tail_radius_sum(w, m, t.r_ref, s));
  }
  return best;
}

inline std::vector<RadialWeight> builtin_weights() {
  return {RadialWeight{family::ExpDisc{1, 1, wfactor::One{}}},
          RadialWeight{family::ExpDisc{1, 2, wfactor::OneMinusR{}}},
          RadialWeight{family::ExpDiscSquared{1, 1}},
          RadialWeight{family::StandardDisc{1.0}},
          RadialWeight{family::StandardDisc{2.0, family::StandardForm::OneMinusRSquared}},
          RadialWeight{family::ExpPlane{1.0}},
          RadialWeight{family::ExpPlane{2.0}},
          RadialWeight{family::ExpExpPlane{}},
          RadialWeight{family::LogSqPlane{}}};
}

/// Direct summation of the tail-degree series over `terms` terms.
inline double tail_degree_direct(const RadialWeight& w, double r1, const TailDegree& d, long long terms = 100000) {
  const double log_q = std::log(r1) - std::log(d.r_ref);
  LogSumExp s;
  for (long long k = d.n; k < d.n + terms; ++k) s.add(static_cast<double>(k) * log_q);
  return s.value() + w.log_v(0.0) - w.log_v(d.r_ref);
}

inline SuiteResult tails(const Options& opt) {
  SuiteResult out{"tails", {}, 0, 0, 0};
  const std::vector<RadialWeight> weights = opt.weight ? std::vector<RadialWeight>{*opt.weight} : builtin_weights();
  const double eps = 1e-3;
  for (const auto& w : weights) {
    double worst = neg_inf;
    for (long long m : {0LL, 1LL, 3LL, 10LL, 100LL}) {
      const TailRadius t = tail_radius(w, m, eps);
      worst = std::max(worst, tail_radius_grid_sup(w, m, t) - std::log(eps));
    }
    out.add({"radius:" + w.describe(), pass_if(worst <= std::log(1.01)), {{"max_log_ratio_to_eps", worst}}});

    const double r1 = w.domain() == Domain::Disc ? 0.5 : 2.0;
    const TailDegree d = tail_degree(w, r1, 1e-6);
    const double direct = tail_degree_direct(w, r1, d);
    const double err = std::abs(std::expm1(direct - d.log_bound));
    // One term fewer must miss eps.
    const bool minimal = d.n == 0 || d.log_bound - (std::log(r1) - std::log(d.r_ref)) > std::log(1e-6);
    out.add({"degree:" + w.describe(), pass_if(err <= 1e-9 && minimal),
             {{"n", static_cast<double>(d.n)}, {"rel_err", err}}});
  }

  const RadialWeight v{family::ExpDisc{1, 1, wfactor::One{}}};
  std::vector<CoeffSeq> blocks;
  for (long long deg : {1LL, 10LL, 100LL, 1000LL}) blocks.push_back(CoeffSeq::from_log({{deg, 0.0}}));
  const ConcentratedSelection s = select_concentrated(v, blocks);
  bool certs = !s.selected.empty();
  double worst_leak = 0.0;
  for (const auto& c : s.certificates) {
    certs = certs && c.leakage <= std::pow(3.0, -c.k) * (1.0 + 1e-9);
    worst_leak = std::max(worst_leak, c.leakage * std::pow(3.0, c.k));
  }
  out.add({"select:monomials-1-10-100-1000",
           pass_if(certs && s.factor_two_ok()),
           {{"selected", static_cast<double>(s.selected.size())},
            {"max_leakage_over_bound", worst_leak},
            {"log_sup_blocks", s.log_sup_blocks},
            {"log_norm_of_sum", s.log_norm_of_sum}}});
  return out;
}

inline SuiteResult logsq(const Options& opt) {
  SuiteResult out{"logsq", {}, 0, 0, 0};
  std::mt19937_64 rng(opt.seed);
  std::uniform_int_distribution<int> degree(0, 30);
  std::uniform_real_distribution<double> jitter(-3.0, 3.0);
  int violations = 0;
  double max_ratio = 0.0;
  for (int t = 0; t < opt.trials; ++t) {
    std::vector<Coefficient> terms;
    const int top = degree(rng);
    for (int k = 0; k <= top; ++k) terms.push_back({k, -k * k / 4.0 + jitter(rng)});
    const LogSqEquivalence e = logsq_equivalence_check(CoeffSeq::from_log(std::move(terms)));
    if (!e.lower_ok) ++violations;
    max_ratio = std::max(max_ratio, e.upper_ratio);
  }
  out.add({"lower", pass_if(violations == 0), {{"trials", opt.trials}, {"violations", violations}}});
  out.add({"upper-ratio", Status::ReportOnly, {{"max_upper_ratio", max_ratio}}});
  return out;
}

/// Displayed exponents and prefactors of the four closed-form examples.
struct ExampleForm {
  std::string id;
  RadialWeight weight;
  double (*m)(double n);
  double (*log_prefactor)(double n);
  double (*radius)(double n);
};

inline std::vector<ExampleForm> example_forms() {
  return {
      {"i", RadialWeight{family::ExpDisc{1, 1, wfactor::One{}}}, [](double n) { return n * n * n * n - n * n; },
       [](double n) { return -n * n; }, [](double n) { return 1.0 - 1.0 / (n * n); }},
      {"ii", RadialWeight{family::ExpDisc{1, 2, wfactor::OneMinusR{}}},
       [](double n) { return std::pow(2.0, 1.5) * n * n * n - 2.0 * n * n + std::sqrt(2.0) * n - 1.0; },
       [](double n) { return -2.0 * n * n - std::log(std::sqrt(2.0) * n); },
       [](double n) { return 1.0 - 1.0 / (std::sqrt(2.0) * n); }},
      {"iii", RadialWeight{family::ExpDisc{1, 1, wfactor::InvLog{}}},
       [](double n) { return n * n * n * n - n * n + (n * n - 1.0) / (1.0 + std::log(n * n)); },
       [](double n) { return -n * n - std::log1p(std::log(n * n)); }, [](double n) { return 1.0 - 1.0 / (n * n); }},
      {"iv", RadialWeight{family::ExpDisc{1, 1, wfactor::ExpLogSq{}}},
       [](double n) { return n * n * n * n - n * n + 4.0 * (n * n - 1.0) * std::log(n); },
       [](double n) { return -4.0 * std::log(n) * std::log(n) - n * n; },
       [](double n) { return 1.0 - 1.0 / (n * n); }},
  };
}

struct ExampleErrors {
  double m = 0.0;
  double prefactor = 0.0;
  double radius = 0.0;
  /// Critical radius of m_n against the displayed radius; meaningful for b = 1, w = 1 only.
  double critical_radius = 0.0;
};

inline ExampleErrors example_errors(const ExampleForm& ex, long long n_first, long long n_last) {
  const family::ExpDisc& f = *ex.weight.exp_disc();
  ExampleErrors e;
  for (long long n = n_first; n <= n_last; ++n) {
    const double nn = static_cast<double>(n);
    e.m = std::max(e.m, std::abs(theorem41_m(f, n) - ex.m(nn)) / std::abs(ex.m(nn)));
    e.prefactor = std::max(e.prefactor, rel_err(theorem41_log_prefactor(f, n), ex.log_prefactor(nn)));
    e.radius = std::max(e.radius, std::abs(theorem41_radius(f.a, f.b, n) - ex.radius(nn)) / ex.radius(nn));
    e.critical_radius =
        std::max(e.critical_radius, std::abs(critical_radius(ex.weight, ex.m(nn)).r - ex.radius(nn)) / ex.radius(nn));
  }
  return e;
}

inline SuiteResult examples15(const Options& opt) {
  SuiteResult out{"examples15", {}, 0, 0, 0};
  const io::IntRange n = opt.n.value_or(io::IntRange{2, 50});
  for (const auto& ex : example_forms()) {
    const ExampleErrors e = example_errors(ex, std::max<long long>(2, n.first), n.last);
    const bool radius_ok = ex.id != "i" || e.critical_radius <= 1e-9;
    out.add({ex.id,
             pass_if(e.m <= 1e-9 && e.prefactor <= 1e-9 && e.radius <= 1e-9 && radius_ok),
             {{"max_rel_err_m", e.m},
              {"max_rel_err_prefactor", e.prefactor},
              {"max_rel_err_radius", e.radius},
              {"max_rel_err_critical_radius", e.critical_radius}}});
  }
  return out;
}

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"condb", "sandwich", "lemma14", "squared", "tails", "logsq", "examples15"};
  return names;
}

inline SuiteResult run(const std::string& name, const Options& opt) {
  if (name == "condb") return condb(opt);
  if (name == "sandwich") return sandwich(opt);
  if (name == "lemma14") return lemma14(opt);
  if (name == "squared") return squared(opt);
  if (name == "tails") return tails(opt);
  if (name == "logsq") return logsq(opt);
  if (name == "examples15") return examples15(opt);
  throw domain_error("unknown verification suite '" + name + "'");
}

}  // namespace solid::verify
