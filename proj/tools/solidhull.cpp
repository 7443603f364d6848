// solidhull: critical radii, block partitions, block norms and verification
// suites for weighted H^inf spaces of the disc and the plane.
//
// Exit codes: 0 success, 1 verification failure, 2 usage/parse/domain error,
// 3 numeric failure.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "solid/block_norms.hpp"
#include "solid/coeffs.hpp"
#include "solid/critical_radii.hpp"
#include "solid/errors.hpp"
#include "solid/io.hpp"
#include "solid/squared_weight.hpp"
#include "solid/tail_bounds.hpp"
#include "solid/verify.hpp"
#include "solid/weights.hpp"

using namespace solid;
using io::Json;

namespace {

enum Exit { kOk = 0, kVerifyFail = 1, kUsage = 2, kNumeric = 3 };

struct Args {
  std::string weight;
  std::string partition;
  std::string coeffs;
  std::string n;
  std::string m;
  std::string out = "json";
  std::uint64_t seed = 0;
  double eps = 1e-3;
  int trials = 100;
  double r1 = 0.5;
  std::string cuts;
  std::string kind = "hull";
  std::string mode = "closed";
  double target = 2.2;
  double m_start = 1.0;
  double a = 1.0;
  double b = 1.0;
  std::string norm = "hull";
  std::optional<std::size_t> max_selections;
  std::string suite;
};

RadialWeight require_weight(const Args& a) {
  if (a.weight.empty()) throw parse_error("--weight is required", 0);
  return io::parse_weight(a.weight);
}

CoeffSeq require_coeffs(const Args& a) {
  if (a.coeffs.empty()) throw parse_error("--coeffs is required", 0);
  return io::read_coeffs(a.coeffs);
}

void print_json(const Json& j) { std::cout << io::dump(j) << "\n"; }

/// Closed-form (expdisc) or greedy partition whose last exponent reaches max_degree.
BlockPartition covering_partition(const RadialWeight& w, long long max_degree) {
  const double top = static_cast<double>(std::max<long long>(max_degree, 1));
  if (const auto* f = w.exp_disc()) {
    const long long first = theorem41_n_min(f->a, f->b);
    long long last = first + 1;
    while (theorem41_m(*f, last) < top) ++last;
    return theorem41_partition(w, first, last);
  }
  for (int count = 8;; count *= 2) {
    BlockPartition p = greedy_partition(w, 2.2, 1.0, count);
    if (p.entries.back().m >= top) return p;
  }
}

BlockPartition partition_for(const Args& a, const RadialWeight& w, const CoeffSeq& c) {
  if (!a.partition.empty()) return io::read_partition(a.partition);
  return covering_partition(w, c.empty() ? 1 : c.max_degree());
}

void emit_norm(const NormReport& r, const std::string& out) {
  if (out == "csv") std::cout << io::norm_csv(r);
  else print_json(io::to_json(r));
}

int cmd_radii(const Args& a) {
  const RadialWeight w = require_weight(a);
  if (a.m.empty()) throw parse_error("--m is required", 0);
  std::vector<CriticalPoint> pts;
  for (double m : io::parse_real_list(a.m)) pts.push_back(critical_radius(w, m));
  if (a.out == "csv") {
    std::cout << "m,r,log_r,log_max\n";
    for (const auto& p : pts)
      std::cout << io::format_real(p.m) << "," << io::format_real(p.r) << "," << io::format_real(p.log_r) << ","
                << io::format_real(p.log_max) << "\n";
  } else {
    Json arr = Json::array();
    for (const auto& p : pts) arr.push_back(io::to_json(p));
    print_json(Json{{"weight", w.describe()}, {"points", arr}});
  }
  return kOk;
}

int cmd_partition(const Args& a) {
  const RadialWeight w = require_weight(a);
  if (a.n.empty()) throw parse_error("--n is required", 0);
  const io::IntRange n = io::parse_range(a.n);
  BlockPartition p;
  if (a.mode == "closed") p = theorem41_partition(w, n.first, n.last);
  else if (a.mode == "greedy") p = greedy_partition(w, a.target, a.m_start, static_cast<int>(n.last - n.first + 1));
  else throw parse_error("unknown partition mode '" + a.mode + "'", 0);
  if (a.out == "csv") std::cout << io::partition_csv(p);
  else print_json(io::to_json(p));
  return kOk;
}

double standard_alpha(const RadialWeight& w) {
  const auto* s = std::get_if<family::StandardDisc>(&w.family());
  if (s == nullptr) throw domain_error("standard norms need a std:alpha=... weight");
  return s->alpha;
}

int cmd_norm(const Args& a) {
  const CoeffSeq c = require_coeffs(a);
  const std::string& k = a.kind;
  if (k == "squared-hull" || k == "squared-core") {
    emit_norm(k == "squared-hull" ? squared_hull_norm(a.a, a.b, c) : squared_core_norm(a.a, a.b, c), a.out);
    return kOk;
  }
  const RadialWeight w = require_weight(a);
  if (k == "hull" || k == "core") {
    const BlockPartition p = partition_for(a, w, c);
    emit_norm(k == "hull" ? hull_block_norm(p, c) : core_block_norm(p, c), a.out);
  } else if (k == "std-hull" || k == "std-core") {
    const double alpha = standard_alpha(w);
    emit_norm(k == "std-hull" ? standard_hull_norm(alpha, c) : standard_core_norm(alpha, c), a.out);
  } else if (k == "majorant") {
    const MajorantResult m = majorant_norm_at(w, c);
    print_json(Json{{"log_norm", m.log_norm}, {"r", m.r}});
  } else {
    throw parse_error("unknown norm kind '" + k + "'", 0);
  }
  return kOk;
}

int cmd_squared(const Args& a) {
  const CoeffSeq c = require_coeffs(a);
  if (a.norm != "hull" && a.norm != "core") throw parse_error("--norm must be hull or core", 0);
  emit_norm(a.norm == "hull" ? squared_hull_norm(a.a, a.b, c) : squared_core_norm(a.a, a.b, c), a.out);
  return kOk;
}

std::vector<long long> probe_cuts(const Args& a, const RadialWeight& w, const CoeffSeq& c) {
  if (!a.cuts.empty()) return io::parse_int_list(a.cuts);
  std::vector<long long> cuts;
  if (c.empty()) return cuts;
  const BlockPartition p = covering_partition(w, c.max_degree());
  for (const auto& e : p.entries) cuts.push_back(floor_int(e.m));
  return cuts;
}

int cmd_tails(const std::string& which, const Args& a) {
  if (which == "radius") {
    const RadialWeight w = require_weight(a);
    const long long m = a.m.empty() ? 0 : io::parse_integer(a.m);
    const TailRadius t = tail_radius(w, m, a.eps);
    print_json(Json{{"m", m}, {"eps", a.eps}, {"r_ref", t.r_ref}, {"r0", t.r0}});
  } else if (which == "degree") {
    const RadialWeight w = require_weight(a);
    const TailDegree d = tail_degree(w, a.r1, a.eps);
    print_json(Json{{"r1", a.r1}, {"eps", a.eps}, {"r_ref", d.r_ref}, {"n", d.n}, {"log_bound", d.log_bound}});
  } else if (which == "select") {
    const RadialWeight w = require_weight(a);
    const CoeffSeq c = require_coeffs(a);
    if (a.cuts.empty()) throw parse_error("--cuts is required to split the coefficients into blocks", 0);
    const ConcentratedSelection s = select_concentrated(w, split_blocks(c, io::parse_int_list(a.cuts)), a.max_selections);
    print_json(io::to_json(s));
  } else if (which == "probe") {
    const RadialWeight w = require_weight(a);
    const CoeffSeq c = require_coeffs(a);
    Json rows = Json::array();
    for (const auto& p : partial_sum_growth(w, c, probe_cuts(a, w, c)))
      rows.push_back(Json{{"cut", p.cut}, {"log_norm", p.log_norm}, {"ratio", p.ratio}});
    print_json(Json{{"weight", w.describe()}, {"partial_sums", rows}});
  } else if (which == "logsq") {
    const LogSqEquivalence e = logsq_equivalence_check(require_coeffs(a));
    print_json(Json{{"lower_ok", e.lower_ok},
                    {"upper_ratio", e.upper_ratio},
                    {"log_sup_term", e.log_sup_term},
                    {"log_majorant", e.log_majorant}});
  } else {
    throw parse_error("unknown tails operation '" + which + "'", 0);
  }
  return kOk;
}

int cmd_verify(const Args& a) {
  verify::Options opt;
  if (!a.weight.empty()) opt.weight = io::parse_weight(a.weight);
  if (!a.n.empty()) opt.n = io::parse_range(a.n);
  opt.trials = a.trials;
  opt.seed = a.seed;
  const verify::SuiteResult r = verify::run(a.suite, opt);
  print_json(verify::to_json(r));
  return r.ok() ? kOk : kVerifyFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Solid hulls and cores of weighted H^inf spaces"};
  app.require_subcommand(1);
  Args a;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--weight", a.weight, "weight spec, e.g. expdisc:a=1,b=1,w=one");
    sub->add_option("--out", a.out, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  };

  auto* radii = app.add_subcommand("radii", "critical radii r_m");
  common(radii);
  radii->add_option("--m", a.m, "list or A..B");

  auto* part = app.add_subcommand("partition", "block partition m_n");
  common(part);
  part->add_option("--n", a.n, "A..B");
  part->add_option("--mode", a.mode, "closed or greedy")->check(CLI::IsMember({"closed", "greedy"}));
  part->add_option("--target", a.target, "greedy: condition (b) constant to reach");
  part->add_option("--m-start", a.m_start, "greedy: first exponent");

  auto* norm = app.add_subcommand("norm", "block or majorant norm of a coefficient file");
  common(norm);
  norm->add_option("--kind", a.kind, "hull|core|majorant|squared-hull|squared-core|std-hull|std-core");
  norm->add_option("--partition", a.partition, "partition file (JSON or CSV)");
  norm->add_option("--coeffs", a.coeffs, "coefficient file");
  norm->add_option("--a", a.a);
  norm->add_option("--b", a.b);

  auto* sq = app.add_subcommand("squared", "block norms for exp(-a/(1-r^2)^b)");
  sq->add_option("--a", a.a)->required();
  sq->add_option("--b", a.b)->required();
  sq->add_option("--coeffs", a.coeffs)->required();
  sq->add_option("--norm", a.norm, "hull or core");
  sq->add_option("--out", a.out)->check(CLI::IsMember({"json", "csv"}));

  auto* tails = app.add_subcommand("tails", "tail radius/degree, concentrated selection, partial sums");
  std::string tails_op;
  tails->add_option("op", tails_op, "radius|degree|select|probe|logsq")->required();
  common(tails);
  tails->add_option("--m", a.m, "degree cap");
  tails->add_option("--eps", a.eps);
  tails->add_option("--r1", a.r1);
  tails->add_option("--coeffs", a.coeffs);
  tails->add_option("--cuts", a.cuts, "comma list or A..B");
  tails->add_option("--max", a.max_selections, "maximum number of selections");

  auto* ver = app.add_subcommand("verify", "run a verification suite");
  ver->add_option("suite", a.suite, "condb|sandwich|lemma14|squared|tails|logsq|examples15")->required();
  ver->add_option("--weight", a.weight);
  ver->add_option("--n", a.n, "A..B");
  ver->add_option("--trials", a.trials);
  ver->add_option("--seed", a.seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Help requests exit 0; everything else is a usage error.
    return app.exit(e) == 0 ? kOk : kUsage;
  }

  try {
    if (radii->parsed()) return cmd_radii(a);
    if (part->parsed()) return cmd_partition(a);
    if (norm->parsed()) return cmd_norm(a);
    if (sq->parsed()) return cmd_squared(a);
    if (tails->parsed()) return cmd_tails(tails_op, a);
    if (ver->parsed()) return cmd_verify(a);
  } catch (const numeric_error& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return kNumeric;
  } catch (const coverage_error& e) {
    std::cerr << "coverage error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
