// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.
// Tolerances are pinned below; reference values are recomputed here from their closed forms.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "solid/verify.hpp"

using namespace solid;

namespace {

constexpr double kExactTol = 1e-9;       // closed forms, lifts, isometry
constexpr double kSandwichTol = 1e-9;    // core <= majorant slack, relative to max(1, |majorant|)
constexpr double kBTarget = 2.2;         // lower quotient floor for condition (b)
constexpr double kKStability = 0.10;     // relative drift of the upper quotient max
constexpr double kDecay = 0.10;          // correction terms at n = 1000 against n = 10
constexpr double kLogSqReport = 10.0;    // report-only bound on the upper ratio
constexpr int kSandwichTrials = 500;
constexpr int kSolidityPairs = 500;
constexpr int kLawTrials = 100;
constexpr int kLemmaTrials = 100;
constexpr int kLogSqTrials = 100;

int failures = 0;

void report(int id, bool ok, const std::string& what, const std::string& detail) {
  std::printf("[%s] AC%d %s: %s\n", ok ? "PASS" : "FAIL", id, what.c_str(), detail.c_str());
  if (!ok) ++failures;
}

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

double rel(double x, double ref) { return std::abs(x - ref) / std::max(1e-300, std::abs(ref)); }

const RadialWeight kW1{family::ExpDisc{1, 1, wfactor::One{}}};
const RadialWeight kW2{family::ExpDisc{1, 2, wfactor::OneMinusR{}}};
const RadialWeight kW3{family::ExpDisc{1, 1, wfactor::InvLog{}}};
const RadialWeight kW4{family::ExpDisc{1, 1, wfactor::ExpLogSq{}}};

// ---------------------------------------------------------------------------

void closed_form_examples() {
  std::vector<std::pair<const RadialWeight*, std::function<double(double)>>> forms{
      {&kW1, [](double n) { return n * n * n * n - n * n; }},
      {&kW2, [](double n) { return std::pow(2.0, 1.5) * n * n * n - 2 * n * n + std::sqrt(2.0) * n - 1; }},
      {&kW3, [](double n) { return n * n * n * n - n * n + (n * n - 1) / (1 + std::log(n * n)); }},
      {&kW4, [](double n) { return n * n * n * n - n * n + 4 * (n * n - 1) * std::log(n); }},
  };
  double worst_m = 0.0, worst_r = 0.0;
  for (const auto& [w, m] : forms) {
    for (long long n = 2; n <= 50; ++n) {
      const double nn = static_cast<double>(n);
      worst_m = std::max(worst_m, rel(theorem41_m(*w->exp_disc(), n), m(nn)));
    }
  }
  const BlockPartition p = theorem41_partition(kW1, 2, 50);
  for (const auto& e : p.entries) {
    const double nn = static_cast<double>(e.n);
    worst_m = std::max(worst_m, rel(e.m, nn * nn * nn * nn - nn * nn));
    worst_r = std::max(worst_r, rel(e.r, 1 - 1 / (nn * nn)));
  }
  report(1, worst_m <= kExactTol && worst_r <= kExactTol, "example exponents and radii, n=2..50",
         "max rel err m_n " + fmt("%.2e", worst_m) + ", r_mn " + fmt("%.2e", worst_r));
}

void closed_form_radii() {
  const RadialWeight std1{family::StandardDisc{1.0}}, std3{family::StandardDisc{3.0}};
  const RadialWeight plane1{family::ExpPlane{1.0}}, plane2{family::ExpPlane{2.0}};
  const RadialWeight logsq{family::LogSqPlane{}};
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const double m = std::pow(10.0, 6.0 * i / 49.0);
    worst = std::max(worst, rel(critical_radius(std1, m).r, m / (m + 1)));
    worst = std::max(worst, rel(critical_radius(std3, m).r, m / (m + 3)));
    worst = std::max(worst, rel(critical_radius(plane1, m).r, m));
    worst = std::max(worst, rel(critical_radius(plane2, m).r, std::sqrt(m / 2)));
    worst = std::max(worst, rel(critical_radius(logsq, m).log_max, m * m / 4));
  }
  report(2, worst <= kExactTol, "closed-form critical radii, 50 m in [1, 1e6]", "max rel err " + fmt("%.2e", worst));
}

void condition_b() {
  bool ok = true;
  std::string detail;
  for (const RadialWeight* w : {&kW1, &kW2, &kW3, &kW4}) {
    const family::ExpDisc& f = *w->exp_disc();
    const ConditionBReport rep = condition_b_check(*w, theorem41_partition(*w, theorem41_n_min(f.a, f.b), 200));
    double min_lower = pos_inf, max_upper = 0.0, k_mid = 0.0, k_late = 0.0;
    for (const auto& row : rep.rows) {
      if (!rep.n0 || row.n < *rep.n0) continue;
      min_lower = std::min(min_lower, row.lower_q);
      max_upper = std::max(max_upper, row.upper_q);
      if (row.n >= 50 && row.n <= 100) k_mid = std::max(k_mid, row.upper_q);
      if (row.n >= 100 && row.n <= 200) k_late = std::max(k_late, row.upper_q);
    }
    const double drift = std::abs(k_late - k_mid) / k_mid;
    const bool here = rep.n0 && *rep.n0 <= 50 && min_lower >= kBTarget && std::isfinite(rep.inferred_K) &&
                      max_upper <= rep.inferred_K && drift <= kKStability;
    ok = ok && here;
    detail += w->describe() + " n0=" + (rep.n0 ? std::to_string(*rep.n0) : "none") + " b=" +
              fmt("%.3g", min_lower) + " K=" + fmt("%.3g", rep.inferred_K) + " drift=" + fmt("%.3f", drift) + "; ";
  }
  report(3, ok, "condition (b) on four example weights, n up to 200", detail);
}

void correction_decay() {
  bool ok = true;
  double worst = 0.0;
  for (const RadialWeight* w : {&kW2, &kW3, &kW4}) {
    const CorrectionTerms a = correction_terms(*w, 10), b = correction_terms(*w, 1000);
    for (auto [x, y] : {std::pair{a.c1, b.c1}, {a.c2, b.c2}, {a.c3, b.c3}, {a.c4, b.c4}}) {
      const double q = std::abs(y) / std::abs(x);
      ok = ok && x != 0.0 && q < kDecay;
      worst = std::max(worst, q);
    }
  }
  report(4, ok, "correction terms decay, n=1000 vs n=10", "max |c(1000)|/|c(10)| " + fmt("%.3e", worst));
}

void sandwich() {
  std::mt19937_64 rng(5);
  const std::vector<RadialWeight> weights{kW1, kW2, RadialWeight{family::StandardDisc{1.0}},
                                          RadialWeight{family::ExpPlane{1.0}}};
  int violations = 0, total = 0;
  double worst = neg_inf;
  for (const auto& w : weights) {
    const BlockPartition p = verify::default_partition(w, std::nullopt, 12);
    const long long lo = floor_int(p.entries.front().m), hi = floor_int(p.entries.back().m);
    for (int t = 0; t < kSandwichTrials; ++t, ++total) {
      const CoeffSeq c = verify::random_coeffs(rng, lo, hi, 30, verify::block_scale(p));
      const double core = core_block_norm(p, c).log_sup, maj = majorant_norm(w, c);
      const double excess = (core - maj) / std::max(1.0, std::abs(maj));
      worst = std::max(worst, excess);
      if (excess > kSandwichTol) ++violations;
    }
  }
  report(5, violations == 0, "core block norm <= majorant norm",
         std::to_string(total) + " sequences, " + std::to_string(violations) + " violations, max rel excess " +
             fmt("%.2e", worst));
}

/// b <= a termwise: a random subset of a's support, each magnitude shrunk.
CoeffSeq dominated(std::mt19937_64& rng, const CoeffSeq& a) {
  std::bernoulli_distribution keep(0.6);
  std::exponential_distribution<double> shrink(1.0);
  std::vector<Coefficient> t;
  for (const auto& c : a)
    if (keep(rng)) t.push_back({c.m, c.log_mag - shrink(rng)});
  return CoeffSeq::from_log(std::move(t));
}

void solidity() {
  std::mt19937_64 rng(6);
  const BlockPartition p = theorem41_partition(kW1, 2, 12);
  const long long lo = floor_int(p.entries.front().m), hi = floor_int(p.entries.back().m);
  const auto v1_scale = verify::block_scale(p);
  struct Family {
    std::string name;
    std::function<double(const CoeffSeq&)> norm;
    std::function<CoeffSeq()> draw;
  };
  const std::vector<Family> fams{
      {"hull", [&](const CoeffSeq& c) { return hull_block_norm(p, c).log_sup; },
       [&] { return verify::random_coeffs(rng, lo, hi, 30, v1_scale); }},
      {"core", [&](const CoeffSeq& c) { return core_block_norm(p, c).log_sup; },
       [&] { return verify::random_coeffs(rng, lo, hi, 30, v1_scale); }},
      {"standard", [](const CoeffSeq& c) { return standard_hull_norm(1.0, c).log_sup; },
       [&] { return verify::random_coeffs(rng, -1, 5000, 30, [](long long m) { return -2 * std::log1p(double(m)); }); }},
      {"squared", [](const CoeffSeq& c) { return squared_hull_norm(1.0, 1.0, c).log_sup; },
       [&] { return verify::random_coeffs(rng, 25, 2 * hi + 1, 30, [](long long) { return 0.0; }); }},
  };
  bool ok = true;
  std::string detail;
  for (const auto& f : fams) {
    int bad = 0;
    for (int t = 0; t < kSolidityPairs; ++t) {
      const CoeffSeq a = f.draw();
      if (!solidity_monotone_check(f.norm, a, dominated(rng, a))) ++bad;
    }
    ok = ok && bad == 0;
    detail += f.name + " " + std::to_string(bad) + "/" + std::to_string(kSolidityPairs) + "; ";
  }
  report(6, ok, "solidity on dominated pairs", detail);
}

void operator_laws() {
  std::mt19937_64 rng(7);
  bool ok = true;
  std::string detail;
  for (auto [a, b] : {std::pair{1.0, 1.0}, std::pair{1.0, 2.0}}) {
    const verify::ParityLawStats s = verify::parity_laws(a, b, 12, kLawTrials, rng);
    ok = ok && s.t1_max_diff <= kExactTol && s.t2_max_excess <= kExactTol && s.p_max_excess <= kExactTol &&
         s.hull_max_diff <= kExactTol && s.core_max_diff <= kExactTol;
    detail += "b=" + fmt("%g", b) + " T1 " + fmt("%.1e", s.t1_max_diff) + " T2 " + fmt("%.1e", s.t2_max_excess) +
              " P " + fmt("%.1e", s.p_max_excess) + " lift " + fmt("%.1e", std::max(s.hull_max_diff, s.core_max_diff)) +
              "; ";
  }
  report(7, ok, "parity lift laws and lifted block norms", detail);
}

void block_equivalence() {
  bool ok = true;
  std::string detail;
  for (int p : {1, 2}) {
    const auto [sys, tilde] = verify::example_block_systems(2, 30, p);
    const Lemma14Result r = lemma14_check(sys, tilde, p, kLemmaTrials, 8);
    ok = ok && r.interleaved && r.c > 0 && std::isfinite(r.C) && r.trials == kLemmaTrials &&
         r.forward_violations == 0 && r.reverse_violations == 0;
    detail += "p=" + std::to_string(p) + " c=" + fmt("%.3g", r.c) + " C=" + fmt("%.3g", r.C) + " violations " +
              std::to_string(r.forward_violations + r.reverse_violations) + "; ";
  }
  report(8, ok, "equivalence of interleaved block norms, n=2..30", detail);
}

void concentrated_selection() {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> jitter(-1.0, 1.0);
  bool ok = true;
  std::size_t min_selected = 1000;
  double worst = 0.0;
  for (int size = 4; size <= 16; ++size) {
    std::vector<CoeffSeq> blocks;
    double deg = 2.0;
    for (int j = 0; j < size; ++j, deg *= 10.0) {
      const long long d = static_cast<long long>(deg);
      blocks.push_back(CoeffSeq::from_log({{d, -log_max_value(kW1, deg) + jitter(rng)}}));
    }
    const ConcentratedSelection s = select_concentrated(kW1, blocks);
    ok = ok && s.certified_mode && s.selected.size() >= 2 && s.factor_two_ok();
    for (const auto& c : s.certificates) {
      worst = std::max(worst, c.leakage * std::pow(3.0, c.k));
      ok = ok && c.leakage <= std::pow(3.0, -c.k) * (1 + kExactTol);
    }
    min_selected = std::min(min_selected, s.selected.size());
  }
  report(9, ok, "concentrated selection on monomial families of size 4..16",
         "min selected " + std::to_string(min_selected) + ", max leakage*3^k " + fmt("%.3g", worst));
}

void logsq_space() {
  std::mt19937_64 rng(10);
  std::uniform_int_distribution<int> degree(0, 30);
  std::uniform_real_distribution<double> jitter(-3.0, 3.0);
  int violations = 0;
  double max_ratio = 0.0;
  for (int t = 0; t < kLogSqTrials; ++t) {
    std::vector<Coefficient> terms;
    const int top = degree(rng);
    for (int k = 0; k <= top; ++k) terms.push_back({k, -k * k / 4.0 + jitter(rng)});
    const CoeffSeq c = CoeffSeq::from_log(terms);
    // Grid oracle for sup_t (ln sum |a_k| e^{kt} - t^2); t = k/2 lies on the grid, so the grid
    // value already dominates each term a_k e^{k^2/4}.
    double grid = neg_inf, terms_sup = neg_inf;
    for (int i = 0; i <= 24000; ++i) {
      const double x = -2.0 + i * 1e-3;
      LogSumExp s;
      for (const auto& a : c) s.add(a.log_mag + static_cast<double>(a.m) * x);
      grid = std::max(grid, s.value() - x * x);
    }
    for (const auto& a : c) terms_sup = std::max(terms_sup, a.log_mag + a.m * a.m / 4.0);
    const LogSqEquivalence e = logsq_equivalence_check(c);
    if (!e.lower_ok || terms_sup > grid + kExactTol * std::max(1.0, std::abs(grid))) ++violations;
    max_ratio = std::max(max_ratio, e.upper_ratio);
  }
  report(10, violations == 0 && max_ratio < kLogSqReport, "log-square weight: coefficient sup against majorant",
         std::to_string(violations) + " violations in " + std::to_string(kLogSqTrials) + ", upper ratio d " +
             fmt("%.3f", max_ratio) + " (report only)");
}

}  // namespace

int main() {
  closed_form_examples();
  closed_form_radii();
  condition_b();
  correction_decay();
  sandwich();
  solidity();
  operator_laws();
  block_equivalence();
  concentrated_selection();
  logsq_space();
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
