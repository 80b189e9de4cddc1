// Acceptance suite: one PASS/FAIL line per criterion.
//
//   acceptance            run every criterion
//   acceptance 3 7        run a subset
//
// Exit status is 0 only when every selected criterion passes.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <regex>
#include <set>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "hcec/benchgen.hpp"
#include "hcec/eps.hpp"
#include "hcec/report.hpp"
#include "hcec/sat.hpp"
#include "hcec/selector.hpp"
#include "hcec/sweeper.hpp"

using namespace hcec;
using Clock = std::chrono::steady_clock;

namespace {

// Pinned tolerances.
constexpr double kScoreTolerance = 1e-12;
// The reference is printed to 11 decimals, so it is only good to half a unit
// in its last place.
constexpr double kScoreReference = 0.21609640474;
constexpr double kScoreReferenceTolerance = 5e-12;
constexpr double kRho = 0.15;
constexpr double kCorpusBudgetSeconds = 600.0;
constexpr double kParallelEpsRatio = 0.6;
constexpr unsigned kParallelEpsMinCores = 4;
constexpr int kEpsTimingRepeats = 5;
constexpr unsigned kCorpusMaxWidth = 7;  // 14 PIs
constexpr unsigned kCorpusSeeds = 4;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Entry {
  std::string name;
  Aig miter;
};

// Adders and multipliers in two implementations, rewrites of each, and a
// corrupted counterpart of every equivalent pair.
const std::vector<Entry>& corpus() {
  static const std::vector<Entry> entries = [] {
    using namespace bench;
    std::vector<Entry> out;
    for (unsigned w = 1; w <= kCorpusMaxWidth; ++w) {
      for (uint64_t s = 1; s <= kCorpusSeeds; ++s) {
        const uint64_t seed = 100 * w + s;
        const std::pair<const char*, std::pair<Aig, Aig>> pairs[] = {
            {"ripple-cla", {adder_ripple(w), adder_cla(w)}},
            {"array-columnwise", {mult_array(w), mult_columnwise(w)}},
            {"ripple-rewrite", {adder_ripple(w), rewrite(adder_ripple(w), 4 * w, seed)}},
            {"array-rewrite", {mult_array(w), rewrite(mult_columnwise(w), 6 * w, seed)}},
        };
        for (const auto& [tag, ab] : pairs) {
          const std::string name = std::string(tag) + "-w" + std::to_string(w) + "-s" + std::to_string(s);
          out.push_back({name, build_miter(ab.first, ab.second)});
          out.push_back({name + "-corrupt", build_miter(ab.first, corrupt(ab.second, seed))});
        }
      }
    }
    return out;
  }();
  return entries;
}

Cone output_cone(const Aig& miter) {
  const Aig reduced = or_reduce_outputs(miter);
  return extract_cone(reduced, reduced.output(0));
}

Cone middle_output_cone(unsigned w, unsigned k) {
  const Aig a = bench::select_outputs(bench::mult_array(w), {k});
  const Aig b = bench::select_outputs(bench::mult_columnwise(w), {k});
  const Aig miter = build_miter(a, b);
  return extract_cone(miter, miter.output(0));
}

bool raises_output(const Aig& miter, const Assignment& a) {
  if (a.size() != miter.num_pis()) return false;
  const auto outs = evaluate(miter, a);
  return std::find(outs.begin(), outs.end(), true) != outs.end();
}

const char* mode_name(EngineMode m) {
  switch (m) {
    case EngineMode::kHybrid:
      return "hybrid";
    case EngineMode::kSatOnly:
      return "sat";
    case EngineMode::kEpsOnly:
      return "eps";
  }
  return "?";
}

constexpr EngineMode kModes[] = {EngineMode::kHybrid, EngineMode::kSatOnly, EngineMode::kEpsOnly};

SweepConfig corpus_config(EngineMode mode, unsigned threads) {
  SweepConfig cfg;
  cfg.engine = mode;
  cfg.threads = threads;
  // Few patterns so that engines, not simulation, settle most pairs.
  cfg.sim_patterns = 1 << 10;
  cfg.seed = 7;
  return cfg;
}

// 1. End-to-end agreement with the exhaustive oracle.
Outcome criterion_oracle_agreement() {
  const auto t0 = Clock::now();
  const auto& entries = corpus();
  std::size_t runs = 0, wrong = 0, equivalent = 0;
  std::string first_wrong;
  for (const auto& e : entries) {
    const bool expected = bench::oracle_check(e.miter).equivalent;
    equivalent += expected;
    for (EngineMode mode : kModes) {
      for (unsigned threads : {1u, 2u, 4u, 8u}) {
        const SweepResult r = sweep(e.miter, corpus_config(mode, threads));
        ++runs;
        const bool ok = expected ? r.verdict == SweepResult::Verdict::kEquivalent
                                 : r.verdict == SweepResult::Verdict::kNonEquivalent;
        if (!ok && wrong++ == 0) {
          first_wrong = e.name + " " + mode_name(mode) + " t" + std::to_string(threads) + " -> " +
                        verdict_name(r.verdict) + " " + r.reason;
        }
      }
    }
  }
  const double elapsed = seconds_since(t0);
  std::ostringstream d;
  d << entries.size() << " miters (" << equivalent << " equivalent), " << runs << " sweeps, " << wrong
    << " disagreements, " << elapsed << " s (limit " << kCorpusBudgetSeconds << " s)";
  if (wrong) d << "; first: " << first_wrong;
  return {entries.size() >= 200 && wrong == 0 && elapsed <= kCorpusBudgetSeconds, d.str()};
}

// 2. The theta sequence.
Outcome criterion_theta() {
  const auto five = eps::theta_sequence(5);
  const std::vector<eps::BigInt> expected = {3, 5, 17, 257, 65537};
  bool ok = five == expected;
  const auto ten = eps::theta_sequence(10);
  for (unsigned i = 1; i <= 10; ++i) {
    ok = ok && ten[i - 1] - 1 == eps::BigInt(1) << (std::size_t{1} << (i - 1));
  }
  std::ostringstream d;
  d << "theta(5) = [";
  for (std::size_t i = 0; i < five.size(); ++i) d << (i ? ", " : "") << five[i];
  d << "], theta_i - 1 = 2^(2^(i-1)) for i <= 10";
  return {ok, d.str()};
}

// 3. EPS verdicts do not depend on the block width and match the oracle;
// the rounds cover {0,1}^N exactly.
Outcome criterion_eps_exhaustive() {
  std::size_t mismatches = 0, equivalent = 0;
  constexpr unsigned kMiters = 100;
  for (uint64_t seed = 1; seed <= kMiters; ++seed) {
    const unsigned n = 8 + static_cast<unsigned>(seed % 9);
    const Aig base = bench::random_aig(n, 6 * n, 3, seed);
    const Aig other = seed % 2 ? bench::rewrite(base, 8, seed) : bench::random_aig(n, 6 * n, 3, seed + 5000);
    const Aig miter = build_miter(base, other);
    const bool expected = bench::oracle_check(miter).equivalent;
    equivalent += expected;
    const Cone cone = output_cone(miter);
    for (unsigned l : {4u, 8u, 12u, 16u}) {
      eps::EpsConfig cfg;
      cfg.bits_limit = l;
      const auto v = eps::eps_check(cone, cfg);
      const bool ok = expected ? v.kind == eps::EpsVerdict::Kind::kEquivalent
                               : v.kind == eps::EpsVerdict::Kind::kCounterexample &&
                                     evaluate(cone.aig, v.assignment)[0];
      mismatches += !ok;
    }
  }
  std::size_t coverage_failures = 0, coverage_checks = 0;
  for (unsigned n = 1; n <= 12; ++n) {
    for (unsigned l : {1u, 4u, 8u, 12u}) {
      if (l > n) continue;
      ++coverage_checks;
      std::vector<uint8_t> seen(std::size_t{1} << n, 0);
      bool dup = false;
      for (uint64_t r = 0; r < (uint64_t{1} << (n - l)); ++r) {
        std::vector<SimVector> v;
        for (unsigned j = 0; j < n; ++j) v.push_back(eps::construct_initial_value(j, r, l, n));
        for (std::size_t t = 0; t < (std::size_t{1} << l); ++t) {
          uint64_t p = 0;
          for (unsigned j = 0; j < n; ++j) p |= uint64_t{v[j].bit(t)} << j;
          dup = dup || seen[p];
          seen[p] = 1;
        }
      }
      coverage_failures += dup || std::count(seen.begin(), seen.end(), 1) != static_cast<long>(seen.size());
    }
  }
  std::ostringstream d;
  d << kMiters << " miters (" << equivalent << " equivalent) x bits_limit {4,8,12,16}: " << mismatches
    << " mismatches; pattern coverage " << coverage_checks - coverage_failures << "/" << coverage_checks
    << " (N <= 12) exact";
  return {mismatches == 0 && coverage_failures == 0 && equivalent > 0 && equivalent < kMiters, d.str()};
}

// 4. SAT/EPS complementarity on multiplier middle outputs.
Outcome criterion_complementarity() {
  std::vector<double> ratios;
  std::ostringstream d;
  bool verdicts_ok = true;
  double sat10 = 0, eps10 = 0;
  for (unsigned w : {6u, 8u, 10u}) {
    const Cone cone = middle_output_cone(w, w - 1);
    const sat::Cnf cnf = sat::tseitin_encode(cone);
    auto t0 = Clock::now();
    const auto sv = sat::solve(cnf, {~uint64_t{0}, 0.0});
    const double ts = seconds_since(t0);
    std::vector<double> times;
    eps::EpsConfig ec;
    ec.max_seconds = 0.0;
    bool eps_ok = true;
    for (int rep = 0; rep < kEpsTimingRepeats; ++rep) {
      t0 = Clock::now();
      const auto ev = eps::eps_check(cone, ec);
      times.push_back(seconds_since(t0));
      eps_ok = eps_ok && ev.kind == eps::EpsVerdict::Kind::kEquivalent;
    }
    std::sort(times.begin(), times.end());
    const double te = times[times.size() / 2];
    verdicts_ok = verdicts_ok && eps_ok && sv.kind == sat::SatVerdict::Kind::kUnsat;
    ratios.push_back(ts / te);
    if (w == 10) sat10 = ts, eps10 = te;
    d << "n=" << w << " (" << cone.num_pis() << " PIs, " << cone.aig.num_ands() << " ANDs): sat " << ts << " s, eps "
      << te << " s, ratio " << ts / te << "; ";
  }
  const bool monotone = ratios[0] < ratios[1] && ratios[1] < ratios[2];
  d << (monotone ? "ratio increasing" : "ratio NOT increasing");
  return {verdicts_ok && monotone && eps10 < sat10, d.str()};
}

// 5. Score separation between multiplier and XOR-free cones.
Outcome criterion_scores() {
  double min_mult = 1e9, max_random = 0;
  std::size_t mult_cones = 0, random_cones = 0;
  for (unsigned w = 4; w <= 10; ++w) {
    for (unsigned k : {w - 1, w}) {
      const auto c = select_engine(middle_output_cone(w, k), kRho, 36);
      min_mult = std::min(min_mult, c.score);
      ++mult_cones;
    }
  }
  for (uint64_t seed = 1; seed <= 50; ++seed) {
    const Aig r = bench::random_and_or(8 + seed % 9, 100, seed);
    for (const Lit o : r.outputs()) {
      const auto c = select_engine(extract_cone(r, o), kRho, 36);
      max_random = std::max(max_random, c.score);
      ++random_cones;
    }
  }
  const std::vector<std::size_t> blocks = {3, 3, 2};
  const double s = score_xor(blocks, 20);
  const bool ref = std::abs(s - kScoreReference) <= kScoreReferenceTolerance && std::abs(s - std::log2(20.0) / 20) <= kScoreTolerance;
  std::ostringstream d;
  d.precision(12);
  d << mult_cones << " multiplier middle cones (n=4..10) min score " << min_mult << "; " << random_cones
    << " AND/OR cones max score " << max_random << "; score_xor({3,3,2},20) = " << s;
  return {min_mult > kRho && max_random == 0 && ref, d.str()};
}

// 6. ISD saves at least one engine call per replica after the first.
Outcome criterion_isd() {
  constexpr unsigned kCopies = 4;
  const Aig block = bench::mult_array(3);
  const Aig a = bench::replicated(block, kCopies);
  const Aig b = bench::replicated(bench::rewrite(bench::mult_columnwise(3), 10, 3), kCopies);
  const Aig miter = build_miter(a, b);
  SweepConfig cfg;
  cfg.sim_patterns = 1 << 12;
  const SweepResult with = sweep(miter, cfg);
  cfg.isd_enabled = false;
  const SweepResult without = sweep(miter, cfg);
  std::ostringstream d;
  d << "m=" << kCopies << ": engine calls " << with.stats.engine_calls << " with ISD (" << with.stats.isd_hits
    << " hits), " << without.stats.engine_calls << " without; verdicts " << verdict_name(with.verdict) << " / "
    << verdict_name(without.verdict);
  return {with.verdict == without.verdict && with.verdict == SweepResult::Verdict::kEquivalent &&
              with.stats.engine_calls + (kCopies - 1) <= without.stats.engine_calls,
          d.str()};
}

// 7. Parallel EPS: same verdict for every worker count, speedup on 4+ cores.
Outcome criterion_parallel_eps() {
  const Cone cone = middle_output_cone(11, 10);
  std::map<unsigned, double> times;
  bool stable = true;
  for (unsigned workers : {1u, 2u, 4u, 8u}) {
    eps::EpsConfig cfg;
    cfg.workers = workers;
    cfg.max_seconds = 0.0;
    std::vector<double> t;
    for (int rep = 0; rep < 3; ++rep) {
      const auto start = Clock::now();
      const auto v = eps::eps_check_parallel(cone, cfg);
      t.push_back(seconds_since(start));
      stable = stable && v.kind == eps::EpsVerdict::Kind::kEquivalent;
    }
    std::sort(t.begin(), t.end());
    times[workers] = t[1];
  }
  const unsigned cores = std::thread::hardware_concurrency();
  const double ratio = times[8] / times[1];
  std::ostringstream d;
  d << cone.num_pis() << " PIs, " << cone.aig.num_ands() << " ANDs; wall 1/2/4/8 workers: " << times[1] << " / "
    << times[2] << " / " << times[4] << " / " << times[8] << " s; verdicts " << (stable ? "identical" : "DIFFER");
  bool ok = stable;
  if (cores >= kParallelEpsMinCores) {
    d << "; 8w/1w = " << ratio << " (limit " << kParallelEpsRatio << ")";
    ok = ok && ratio <= kParallelEpsRatio;
  } else {
    d << "; speedup not asserted on " << cores << " hardware thread(s)";
  }
  return {ok, d.str()};
}

std::vector<sat::Cnf> corpus_cnfs() {
  std::vector<sat::Cnf> out;
  for (const auto& e : corpus()) out.push_back(sat::tseitin_encode(output_cone(e.miter)));
  // Pair cones of multiplier middle outputs.
  for (unsigned w = 3; w <= 6; ++w) out.push_back(sat::tseitin_encode(middle_output_cone(w, w)));
  return out;
}

// 8. Cube-and-conquer returns the same verdict kind as the serial solver.
Outcome criterion_parallel_sat() {
  const sat::SatBudget budget{200000, 30.0};
  std::size_t compared = 0, budget_skips = 0, mismatches = 0, bad_models = 0, models = 0;
  for (const auto& cnf : corpus_cnfs()) {
    const auto serial = sat::solve(cnf, budget);
    if (serial.kind == sat::SatVerdict::Kind::kModel) {
      ++models;
      bad_models += !cnf.satisfied_by(serial.model);
    }
    for (unsigned workers : {2u, 4u, 8u}) {
      const auto par = sat::solve_parallel(cnf, workers, budget);
      if (par.kind == sat::SatVerdict::Kind::kModel) {
        ++models;
        bad_models += !cnf.satisfied_by(par.model);
      }
      if (serial.kind == sat::SatVerdict::Kind::kBudget || par.kind == sat::SatVerdict::Kind::kBudget) {
        ++budget_skips;
        continue;
      }
      ++compared;
      mismatches += serial.kind != par.kind;
    }
  }
  std::ostringstream d;
  d << compared << " comparisons over workers {2,4,8}, " << mismatches << " mismatches, " << budget_skips
    << " budget skips; " << models << " models, " << bad_models << " violate a clause";
  return {compared > 0 && mismatches == 0 && bad_models == 0, d.str()};
}

// Flips output `out` of g on the single input pattern `minterm`, a difference
// that random simulation almost never sees.
Aig with_rare_flip(const Aig& g, uint32_t out, uint64_t minterm) {
  AigBuilder bld(g);
  Lit hit = kTrue;
  for (uint32_t i = 0; i < g.num_pis(); ++i) hit = bld.and_(hit, bld.pi(i) ^ !((minterm >> i) & 1u));
  const Lit flipped = bld.xor_(g.output(out), hit);
  Aig r = bld.take();
  r.set_output(out, flipped);
  return r;
}

// 9. Every NonEquivalent result carries a raising assignment.
Outcome criterion_cex_validity() {
  std::map<std::string, std::size_t> by_path;
  std::size_t total = 0, invalid = 0;
  auto account = [&](const Aig& miter, const SweepResult& r, const std::string& path) {
    if (r.verdict != SweepResult::Verdict::kNonEquivalent) return;
    ++total;
    ++by_path[path];
    invalid += !raises_output(miter, r.counterexample);
  };
  for (const auto& e : corpus()) {
    for (EngineMode mode : kModes) {
      // Default simulation finds most counterexamples; a single word of
      // patterns leaves some to the engines.
      for (uint64_t patterns : {uint64_t{1} << 16, uint64_t{64}}) {
        SweepConfig cfg = corpus_config(mode, 1);
        cfg.sim_patterns = patterns;
        const SweepResult r = sweep(e.miter, cfg);
        account(e.miter, r, r.stats.engine_calls == 0 ? "simulation" : mode_name(mode));
      }
    }
  }
  // Differences on one pattern out of 2^(2w) are left to the engines.
  for (unsigned w = 4; w <= kCorpusMaxWidth; ++w) {
    for (uint64_t s = 1; s <= kCorpusSeeds; ++s) {
      const uint64_t minterm = (s * 0x9e3779b97f4a7c15ull) >> (64 - 2 * w);
      const Aig miter = build_miter(bench::mult_array(w), with_rare_flip(bench::mult_columnwise(w), w, minterm));
      for (EngineMode mode : kModes) {
        SweepConfig cfg = corpus_config(mode, 1);
        cfg.sim_patterns = 64;
        const SweepResult r = sweep(miter, cfg);
        account(miter, r, r.stats.engine_calls == 0 ? "simulation" : mode_name(mode));
      }
    }
  }
  // Direct engine calls on the corrupted output cones.
  for (const auto& e : corpus()) {
    const Cone cone = output_cone(e.miter);
    const auto ev = eps::eps_check(cone, {});
    if (ev.kind == eps::EpsVerdict::Kind::kCounterexample) {
      ++total;
      ++by_path["eps_check"];
      invalid += !evaluate(cone.aig, ev.assignment)[0];
    }
    const sat::Cnf cnf = sat::tseitin_encode(cone);
    const auto sv = sat::solve(cnf, {200000, 30.0});
    if (sv.kind == sat::SatVerdict::Kind::kModel) {
      ++total;
      ++by_path["solve"];
      invalid += !evaluate(cone.aig, sat::model_to_assignment(sv.model, cnf, cone))[0];
    }
  }
  std::ostringstream d;
  d << total << " counterexamples, " << invalid << " invalid (";
  bool first = true;
  for (const auto& [path, n] : by_path) {
    d << (first ? "" : ", ") << path << " " << n;
    first = false;
  }
  d << ")";
  const bool all_paths = by_path["simulation"] > 0 && by_path["sat"] > 0 && by_path["eps"] > 0;
  return {total > 0 && invalid == 0 && all_paths, d.str()};
}

// Binary AIGER stores fan-ins in descending order, so that form is compared
// with unordered fan-in pairs.
bool same_structure(const Aig& x, const Aig& y, bool ordered_fanins = true) {
  if (x.num_pis() != y.num_pis() || x.num_nodes() != y.num_nodes() || x.outputs() != y.outputs()) return false;
  for (uint32_t n = x.num_pis() + 1; n < x.num_nodes(); ++n) {
    const AndNode& a = x.node(n);
    const AndNode& b = y.node(n);
    const bool straight = a.fanin0 == b.fanin0 && a.fanin1 == b.fanin1;
    const bool swapped = a.fanin0 == b.fanin1 && a.fanin1 == b.fanin0;
    if (!straight && (ordered_fanins || !swapped)) return false;
  }
  return true;
}

// Independent strict reader for "p cnf V C" files: header first, comments
// only before it, exactly C zero-terminated clauses with literals in range.
bool strict_dimacs(const std::string& text, const sat::Cnf& cnf) {
  static const std::regex header(R"(p cnf ([1-9][0-9]*|0) ([1-9][0-9]*|0))");
  static const std::regex clause(R"((-?[1-9][0-9]* )*0)");
  std::istringstream in(text);
  std::string line;
  bool seen_header = false;
  long vars = 0, clauses = 0, count = 0;
  while (std::getline(in, line)) {
    if (!seen_header) {
      if (line.rfind("c", 0) == 0) continue;
      std::smatch m;
      if (!std::regex_match(line, m, header)) return false;
      vars = std::stol(m[1]);
      clauses = std::stol(m[2]);
      seen_header = true;
      continue;
    }
    if (!std::regex_match(line, clause)) return false;
    std::istringstream lits(line);
    long lit = 0;
    while (lits >> lit && lit != 0) {
      if (std::labs(lit) > vars) return false;
    }
    ++count;
  }
  return seen_header && count == clauses && vars == static_cast<long>(cnf.num_vars) &&
         clauses == static_cast<long>(cnf.clauses.size());
}

// 10. AIGER and DIMACS round trips, schema validity and deterministic stats.
Outcome criterion_formats() {
  std::size_t aiger_bad = 0, dimacs_bad = 0, schema_bad = 0, nondeterministic = 0, checked = 0;
  for (const auto& e : corpus()) {
    ++checked;
    aiger_bad += !same_structure(parse_aiger(write_aiger(e.miter)), e.miter);
    aiger_bad += !same_structure(parse_aiger(write_aiger_binary(e.miter)), e.miter, false);
    const sat::Cnf cnf = sat::tseitin_encode(output_cone(e.miter));
    const std::string text = sat::write_dimacs(cnf);
    const sat::Cnf back = sat::parse_dimacs(text);
    dimacs_bad += !strict_dimacs(text, cnf) || back.num_vars != cnf.num_vars || back.clauses != cnf.clauses;
  }
  std::ifstream sin(HCEC_SCHEMA_PATH);
  const Json schema = Json::parse(sin);
  std::size_t stats_runs = 0;
  const auto& entries = corpus();
  for (std::size_t i = 0; i < entries.size(); i += 7) {
    for (EngineMode mode : kModes) {
      for (unsigned threads : {1u, 4u}) {
        const SweepConfig cfg = corpus_config(mode, threads);
        const Json a = stats_to_json(sweep(entries[i].miter, cfg));
        const Json b = stats_to_json(sweep(entries[i].miter, cfg));
        ++stats_runs;
        schema_bad += !validate_json(a, schema).empty();
        nondeterministic += strip_wall_clock(a) != strip_wall_clock(b);
      }
    }
  }
  std::ostringstream d;
  d << checked << " netlists: " << aiger_bad << " AIGER round-trip failures, " << dimacs_bad << " DIMACS failures; "
    << stats_runs << " stats pairs: " << schema_bad << " schema violations, " << nondeterministic
    << " nondeterministic";
  return {aiger_bad == 0 && dimacs_bad == 0 && schema_bad == 0 && nondeterministic == 0, d.str()};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hybridcec acceptance suite"};
  std::vector<int> selected;
  app.add_option("criteria", selected, "Criteria to run (default: all)")->check(CLI::Range(1, 10));
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"oracle agreement", criterion_oracle_agreement},
      {"theta sequence", criterion_theta},
      {"EPS exhaustiveness", criterion_eps_exhaustive},
      {"SAT/EPS complementarity", criterion_complementarity},
      {"selection scores", criterion_scores},
      {"ISD effect", criterion_isd},
      {"parallel EPS", criterion_parallel_eps},
      {"parallel SAT", criterion_parallel_sat},
      {"counterexample validity", criterion_cex_validity},
      {"format fidelity", criterion_formats},
  };
  if (selected.empty()) {
    for (int i = 1; i <= static_cast<int>(criteria.size()); ++i) selected.push_back(i);
  }
  std::sort(selected.begin(), selected.end());
  selected.erase(std::unique(selected.begin(), selected.end()), selected.end());

  int failures = 0;
  for (int i : selected) {
    const auto& [name, run] = criteria[i - 1];
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::cout << "criterion " << i << " (" << name << "): " << (o.pass ? "PASS" : "FAIL") << "  [" << o.detail
              << "; " << seconds_since(t0) << " s]" << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
