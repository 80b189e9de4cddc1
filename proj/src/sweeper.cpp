#include "hcec/sweeper.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <thread>

namespace hcec {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

// Merges the caller's cancel flag and the global timeout into one flag that
// every engine call polls.
class RunGuard {
 public:
  explicit RunGuard(const SweepConfig& cfg) {
    if (cfg.timeout_seconds <= 0.0 && cfg.cancel == nullptr) return;
    const auto deadline = Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                             std::chrono::duration<double>(std::max(cfg.timeout_seconds, 0.0)));
    watchdog_ = std::jthread([this, &cfg, deadline](std::stop_token st) {
      while (!st.stop_requested()) {
        if (cfg.cancel && cfg.cancel->load()) {
          reason_ = "cancelled";
          flag_.store(true);
          return;
        }
        if (cfg.timeout_seconds > 0.0 && Clock::now() >= deadline) {
          reason_ = "timeout";
          flag_.store(true);
          return;
        }
        std::this_thread::sleep_for(std::chrono::milliseconds(2));
      }
    });
  }

  const std::atomic<bool>* flag() const { return &flag_; }
  bool tripped() const { return flag_.load(); }
  std::string reason() const { return tripped() ? reason_ : std::string(); }

 private:
  std::atomic<bool> flag_{false};
  std::string reason_;
  std::jthread watchdog_;
};

unsigned worker_count(unsigned threads) { return std::bit_floor(std::max(1u, threads)); }

Assignment lift(const Assignment& local, const Cone& cone, uint32_t num_pis) {
  Assignment full(num_pis, 0);
  for (std::size_t i = 0; i < local.size(); ++i) full[cone.pi_map[i] - 1] = local[i];
  return full;
}

bool raises_output(const Aig& aig, const Assignment& a) {
  const auto out = evaluate(aig, a);
  return std::any_of(out.begin(), out.end(), [](bool v) { return v; });
}

struct Prover {
  const SweepConfig& cfg;
  const std::atomic<bool>* cancel;
  SweepStats* stats;

  void account(Engine e, double dt, PairRecord& rec) {
    rec.seconds += dt;
    if (!stats) return;
    ++stats->engine_calls;
    (e == Engine::kSat ? stats->sat_time_seconds : stats->eps_time_seconds) += dt;
  }

  EngineVerdict run_sat(const Cone& cone, double factor, PairRecord& rec, uint32_t num_pis) {
    const sat::Cnf cnf = sat::tseitin_encode(cone);
    if (!cfg.dump_cnf_dir.empty()) {
      std::filesystem::create_directories(cfg.dump_cnf_dir);
      const std::string name = rec.id == UINT64_MAX ? "final.cnf" : "pair_" + std::to_string(rec.id) + ".cnf";
      std::ofstream(std::filesystem::path(cfg.dump_cnf_dir) / name) << sat::write_dimacs(cnf);
    }
    const sat::SatBudget budget = cfg.sat_budget.scaled(factor);
    const auto t0 = Clock::now();
    sat::SatVerdict v;
    if (!cfg.external_sat.empty()) {
      v = sat::solve_external(cnf, cfg.external_sat);
    } else if (cfg.threads >= 2) {
      v = sat::solve_parallel(cnf, worker_count(cfg.threads), budget, cancel);
    } else {
      v = sat::solve(cnf, budget, cancel);
    }
    account(Engine::kSat, seconds_since(t0), rec);

    EngineVerdict out;
    switch (v.kind) {
      case sat::SatVerdict::Kind::kUnsat:
        out.kind = EngineVerdict::Kind::kEquivalent;
        break;
      case sat::SatVerdict::Kind::kModel:
        out.kind = EngineVerdict::Kind::kCounterexample;
        out.assignment = lift(sat::model_to_assignment(v.model, cnf, cone), cone, num_pis);
        break;
      case sat::SatVerdict::Kind::kBudget:
        out.reason = "sat budget";
        break;
    }
    return out;
  }

  EngineVerdict run_eps(const Cone& cone, double factor, PairRecord& rec, uint32_t num_pis) {
    eps::EpsConfig ec = cfg.eps_config;
    ec.workers = worker_count(cfg.threads);
    ec.cancel = cancel;
    if (ec.max_seconds > 0.0) ec.max_seconds *= factor;
    const auto t0 = Clock::now();
    const eps::EpsVerdict v = eps::eps_check_parallel(cone, ec);
    account(Engine::kEps, seconds_since(t0), rec);

    EngineVerdict out;
    switch (v.kind) {
      case eps::EpsVerdict::Kind::kEquivalent:
        out.kind = EngineVerdict::Kind::kEquivalent;
        break;
      case eps::EpsVerdict::Kind::kCounterexample:
        out.kind = EngineVerdict::Kind::kCounterexample;
        out.assignment = lift(v.assignment, cone, num_pis);
        break;
      case eps::EpsVerdict::Kind::kResourceOut:
        out.reason = "eps: " + v.reason;
        break;
    }
    return out;
  }

  // Chosen engine, then (hybrid only) the other engine once, then SAT with a
  // 4x budget.  Override modes never switch engines.
  EngineVerdict decide(const Cone& cone, double factor, PairRecord& rec, uint32_t num_pis, bool attribute = true) {
    const EngineChoice choice = select_engine(cone, cfg.rho, cfg.eps_config.max_pis);
    rec.gates = cone.aig.num_ands();
    rec.pis = cone.num_pis();
    rec.score_xor = choice.score;

    std::vector<std::pair<Engine, double>> ladder;
    switch (cfg.engine) {
      case EngineMode::kHybrid:
        if (choice.kind == Engine::kEps) {
          ladder = {{Engine::kEps, factor}, {Engine::kSat, factor}, {Engine::kSat, 4 * factor}};
        } else {
          ladder = {{Engine::kSat, factor}, {Engine::kEps, factor}, {Engine::kSat, 4 * factor}};
        }
        break;
      case EngineMode::kSatOnly:
        ladder = {{Engine::kSat, factor}, {Engine::kSat, 4 * factor}};
        break;
      case EngineMode::kEpsOnly:
        ladder = {{Engine::kEps, factor}};
        break;
    }

    EngineVerdict last;
    last.reason = "no engine could take the cone";
    rec.engine = "none";
    for (const auto& [engine, f] : ladder) {
      if (cancel && cancel->load()) {
        last.reason = "cancelled";
        break;
      }
      // An EPS job above the PI ceiling is refused without counting a call,
      // except when EPS is forced so that the refusal is visible.
      if (engine == Engine::kEps && cone.num_pis() > cfg.eps_config.max_pis && cfg.engine != EngineMode::kEpsOnly) {
        continue;
      }
      last = engine == Engine::kSat ? run_sat(cone, f, rec, num_pis) : run_eps(cone, f, rec, num_pis);
      rec.engine = engine_name(engine);
      if (last.kind != EngineVerdict::Kind::kResourceOut) {
        if (stats && attribute) ++(engine == Engine::kSat ? stats->sat_calls : stats->eps_calls);
        break;
      }
    }
    return last;
  }

  EngineVerdict pair(const CandidatePair& p, const Aig& aig, PairRecord& rec) {
    rec.a = p.a.node();
    rec.b = p.b.node();
    rec.antivalent = p.antivalent;
    const Cone cone = miter_tfi_cones(aig, p.a, p.b ^ p.antivalent);
    EngineVerdict v;
    if (cone.root() == kFalse) {
      v.kind = EngineVerdict::Kind::kEquivalent;
      rec.engine = "none";
    } else if (cone.root() == kTrue) {
      v.kind = EngineVerdict::Kind::kCounterexample;
      v.assignment.assign(aig.num_pis(), 0);
      rec.engine = "none";
    } else {
      v = decide(cone, 1.0, rec, aig.num_pis());
    }
    rec.verdict = v.kind == EngineVerdict::Kind::kEquivalent        ? "equivalent"
                  : v.kind == EngineVerdict::Kind::kCounterexample ? "counterexample"
                                                                    : "skipped";
    if (stats) {
      ++stats->pairs;
      if (v.kind == EngineVerdict::Kind::kResourceOut) ++stats->skipped_pairs;
    }
    return v;
  }
};

// PO values under a fixed batch of random words, used by the debug checks.
std::vector<uint64_t> po_fingerprint(const Aig& aig, uint64_t seed) {
  std::vector<uint64_t> out;
  std::vector<uint64_t> pis(aig.num_pis());
  for (uint64_t r = 0; r < 8; ++r) {
    for (uint32_t i = 0; i < aig.num_pis(); ++i) pis[i] = pattern_word(seed ^ 0xdebc0ffeeull, i, r);
    const auto values = simulate_word(aig, pis);
    for (Lit o : aig.outputs()) out.push_back(values[o.node()] ^ (o.inverted() ? ~0ull : 0ull));
  }
  return out;
}

void add_stats(SweepStats& into, const SweepStats& from) {
  into.raw_pairs += from.raw_pairs;
  into.pairs += from.pairs;
  into.isd_hits += from.isd_hits;
  into.sat_calls += from.sat_calls;
  into.sat_time_seconds += from.sat_time_seconds;
  into.eps_calls += from.eps_calls;
  into.eps_time_seconds += from.eps_time_seconds;
  into.skipped_pairs += from.skipped_pairs;
  into.merges += from.merges;
  into.refinements += from.refinements;
  into.engine_calls += from.engine_calls;
  for (PairRecord r : from.per_pair) {
    r.id = into.per_pair.size();
    into.per_pair.push_back(std::move(r));
  }
}

}  // namespace

void SweepConfig::validate() const {
  if (!(rho >= 0.0 && rho <= 1.0)) throw std::invalid_argument("rho must lie in [0, 1]");
  if (threads == 0) throw std::invalid_argument("threads must be at least 1");
  if (sim_patterns == 0) throw std::invalid_argument("simulation pattern budget must be positive");
  if (sat_budget.max_conflicts == 0 || sat_budget.max_seconds <= 0.0) {
    throw std::invalid_argument("SAT budget must be positive");
  }
  eps_config.validate();
}

const char* verdict_name(SweepResult::Verdict v) {
  switch (v) {
    case SweepResult::Verdict::kEquivalent:
      return "EQUIVALENT";
    case SweepResult::Verdict::kNonEquivalent:
      return "NOT EQUIVALENT";
    case SweepResult::Verdict::kUnknown:
      break;
  }
  return "UNKNOWN";
}

EngineVerdict prove_pair(const CandidatePair& pair, const Aig& aig, const SweepConfig& cfg, SweepStats* stats) {
  cfg.validate();
  PairRecord rec;
  rec.id = stats ? stats->per_pair.size() : 0;
  Prover prover{cfg, cfg.cancel, stats};
  EngineVerdict v = prover.pair(pair, aig, rec);
  if (stats) stats->per_pair.push_back(std::move(rec));
  return v;
}

SweepResult sweep(const Aig& miter, const SweepConfig& cfg) {
  cfg.validate();
  const auto t0 = Clock::now();
  RunGuard guard(cfg);
  SweepResult res;
  SweepStats& stats = res.stats;
  Prover prover{cfg, guard.flag(), &stats};

  auto finish = [&](SweepResult::Verdict v) {
    res.verdict = v;
    res.wall_seconds = seconds_since(t0);
    return res;
  };
  auto refuted = [&](const Assignment& a) {
    if (!raises_output(miter, a)) throw std::logic_error("counterexample does not raise the miter output");
    res.counterexample = a;
    return finish(SweepResult::Verdict::kNonEquivalent);
  };
  auto unknown = [&](std::string reason) {
    res.reason = std::move(reason);
    return finish(SweepResult::Verdict::kUnknown);
  };

  // The watchdog polls, so a flag raised before the call is checked here.
  if (cfg.cancel && cfg.cancel->load()) return unknown("cancelled");
  if (miter.num_outputs() == 0) return finish(SweepResult::Verdict::kEquivalent);
  Aig work = miter.num_outputs() > 1 ? or_reduce_outputs(miter) : miter;
  if (cfg.strash) work = structural_hash(work);
  if (work.output(0) == kFalse) return finish(SweepResult::Verdict::kEquivalent);
  if (work.output(0) == kTrue) return refuted(Assignment(miter.num_pis(), 0));

  const uint64_t rounds = std::max<uint64_t>(1, (cfg.sim_patterns + kWordBits - 1) / kWordBits);
  Signatures sig = simulate_random(work, rounds, cfg.seed);
  if (auto cex = check_output_counterexample(sig, work)) return refuted(*cex);
  stats.raw_pairs = collect_candidate_pairs(sig, work).size();

  EquivDb db;
  const std::vector<uint64_t> fingerprint = cfg.debug_checks ? po_fingerprint(work, cfg.seed) : std::vector<uint64_t>{};
  std::vector<bool> live = work.live_mask();
  uint64_t live_revision = work.revision();

  for (uint32_t m = work.num_pis() + 1; m < work.num_nodes(); ++m) {
    std::optional<uint32_t> last_rep;
    while (true) {
      if (guard.tripped()) return unknown(guard.reason());
      if (work.is_merged(m)) break;
      if (live_revision != work.revision()) {
        live = work.live_mask();
        live_revision = work.revision();
      }
      if (!live[m]) break;

      std::optional<uint32_t> rep;
      for (uint32_t r : sig.members(sig.class_of(m))) {
        if (r >= m) break;
        if (!work.is_merged(r)) {
          rep = r;
          break;
        }
      }
      if (!rep) break;
      // A counterexample always separates the pair; seeing the same
      // representative again means the replay did not split the class.
      if (rep == last_rep) throw std::logic_error("counterexample replay failed to split a class");
      last_rep = rep;

      const CandidatePair pair{Lit(*rep, false), Lit(m, false), sig.phase(*rep) != sig.phase(m)};
      PairRecord rec;
      rec.id = stats.per_pair.size();

      if (cfg.isd_enabled && try_isd_merge(pair, work, db)) {
        rec.a = *rep;
        rec.b = m;
        rec.antivalent = pair.antivalent;
        rec.engine = "isd";
        rec.verdict = "equivalent";
        ++stats.pairs;
        ++stats.isd_hits;
      } else {
        const EngineVerdict v = prover.pair(pair, work, rec);
        stats.per_pair.push_back(rec);
        if (v.kind == EngineVerdict::Kind::kCounterexample) {
          refine_with_pattern(sig, work, v.assignment);
          ++stats.refinements;
          if (auto cex = check_output_counterexample(sig, work)) return refuted(*cex);
          continue;
        }
        if (v.kind == EngineVerdict::Kind::kResourceOut) {
          if (guard.tripped()) return unknown(guard.reason());
          break;
        }
      }
      if (rec.engine == "isd") stats.per_pair.push_back(rec);

      work.merge(pair.a ^ pair.antivalent, pair.b);
      db.record(pair.a, pair.b, pair.antivalent);
      ++stats.merges;
      if (cfg.debug_checks && po_fingerprint(work, cfg.seed) != fingerprint) {
        throw std::logic_error("merge of nodes " + std::to_string(*rep) + " and " + std::to_string(m) +
                               " changed the miter function");
      }
      break;
    }
  }

  // Final stage: the reduced output itself.
  const Lit po = work.output(0);
  if (po == kFalse) return finish(SweepResult::Verdict::kEquivalent);
  if (po == kTrue) return refuted(Assignment(miter.num_pis(), 0));
  const Cone cone = extract_cone(work, po);
  PairRecord rec;
  rec.id = UINT64_MAX;
  rec.b = po.node();
  // The final stage is reported on its own, not among the pair counters.
  const EngineVerdict v = prover.decide(cone, 4.0, rec, work.num_pis(), false);
  rec.verdict = v.kind == EngineVerdict::Kind::kEquivalent        ? "equivalent"
                : v.kind == EngineVerdict::Kind::kCounterexample ? "counterexample"
                                                                  : "unknown";
  rec.id = 0;
  stats.final_stage = rec;
  switch (v.kind) {
    case EngineVerdict::Kind::kEquivalent:
      return finish(SweepResult::Verdict::kEquivalent);
    case EngineVerdict::Kind::kCounterexample:
      return refuted(v.assignment);
    case EngineVerdict::Kind::kResourceOut:
      break;
  }
  return unknown(guard.tripped() ? guard.reason() : v.reason);
}

SweepResult sweep_per_output(const Aig& miter, const SweepConfig& cfg) {
  cfg.validate();
  const auto t0 = Clock::now();
  SweepResult res;
  res.verdict = SweepResult::Verdict::kEquivalent;
  for (uint32_t i = 0; i < miter.num_outputs(); ++i) {
    SweepConfig sub = cfg;
    if (cfg.timeout_seconds > 0.0) {
      sub.timeout_seconds = cfg.timeout_seconds - seconds_since(t0);
      if (sub.timeout_seconds <= 0.0) {
        res.verdict = SweepResult::Verdict::kUnknown;
        res.reason = "timeout";
        break;
      }
    }
    const Cone cone = extract_cone(miter, miter.output(i));
    SweepResult part = sweep(cone.aig, sub);
    add_stats(res.stats, part.stats);
    if (part.verdict == SweepResult::Verdict::kNonEquivalent) {
      res.verdict = part.verdict;
      res.counterexample = lift(part.counterexample, cone, miter.num_pis());
      res.failing_output = i;
      res.stats.final_stage = part.stats.final_stage;
      break;
    }
    if (part.verdict == SweepResult::Verdict::kUnknown) {
      res.verdict = SweepResult::Verdict::kUnknown;
      if (res.reason.empty()) res.reason = "output " + std::to_string(i) + ": " + part.reason;
      if (part.reason == "timeout" || part.reason == "cancelled") break;
    }
  }
  res.wall_seconds = seconds_since(t0);
  return res;
}

}  // namespace hcec
