#pragma once

#include <atomic>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hcec/eps.hpp"
#include "hcec/isd.hpp"
#include "hcec/logicsim.hpp"
#include "hcec/netlist.hpp"
#include "hcec/sat.hpp"
#include "hcec/selector.hpp"

namespace hcec {

enum class EngineMode { kHybrid, kSatOnly, kEpsOnly };

struct SweepConfig {
  double rho = 0.15;
  uint64_t sim_patterns = uint64_t{1} << 20;  // total, rounded up to whole words
  uint64_t seed = 1;
  sat::SatBudget sat_budget;
  eps::EpsConfig eps_config;
  unsigned threads = 1;
  bool isd_enabled = true;
  EngineMode engine = EngineMode::kHybrid;
  bool strash = true;
  double timeout_seconds = 0.0;  // <= 0: no global timeout
  std::string external_sat;      // shell command; empty selects the internal solver
  std::string dump_cnf_dir;      // writes pair_<id>.cnf for every SAT call when set
  bool debug_checks = false;     // re-simulate the PO after every merge
  const std::atomic<bool>* cancel = nullptr;

  void validate() const;
};

struct EngineVerdict {
  enum class Kind { kEquivalent, kCounterexample, kResourceOut };
  Kind kind = Kind::kResourceOut;
  Assignment assignment;  // over the PIs of the swept netlist
  std::string reason;
};

struct PairRecord {
  uint64_t id = 0;
  uint32_t a = 0;
  uint32_t b = 0;
  bool antivalent = false;
  uint32_t gates = 0;
  uint32_t pis = 0;
  double score_xor = 0.0;
  std::string engine;   // "sat", "eps", "isd" or "none"
  std::string verdict;  // "equivalent", "counterexample" or "skipped"
  double seconds = 0.0;
};

struct SweepStats {
  uint64_t raw_pairs = 0;  // candidate pairs after the first simulation
  uint64_t pairs = 0;      // pairs processed (retries after refinement count again)
  uint64_t isd_hits = 0;
  uint64_t sat_calls = 0;  // pairs decided by SAT
  double sat_time_seconds = 0.0;
  uint64_t eps_calls = 0;  // pairs decided by EPS
  double eps_time_seconds = 0.0;
  uint64_t skipped_pairs = 0;
  uint64_t merges = 0;
  uint64_t refinements = 0;
  uint64_t engine_calls = 0;  // every SAT/EPS invocation, fallbacks and final stage included
  std::vector<PairRecord> per_pair;
  std::optional<PairRecord> final_stage;
};

struct SweepResult {
  enum class Verdict { kEquivalent, kNonEquivalent, kUnknown };
  Verdict verdict = Verdict::kUnknown;
  Assignment counterexample;                 // PIs of the input miter
  std::optional<uint32_t> failing_output;    // per-output mode
  std::string reason;                        // why the run is unknown
  double wall_seconds = 0.0;
  SweepStats stats;
};

const char* verdict_name(SweepResult::Verdict v);

// Proves a miter output constant 0 by simulation, pairwise sweeping and a
// final proof of the reduced output.  Multi-output netlists are OR-reduced.
SweepResult sweep(const Aig& miter, const SweepConfig& cfg);

// Sweeps every PO separately and stops at the first that can be raised.
SweepResult sweep_per_output(const Aig& miter, const SweepConfig& cfg);

// Proves one candidate pair.  Stats receive the engine accounting when given.
EngineVerdict prove_pair(const CandidatePair& pair, const Aig& aig, const SweepConfig& cfg,
                         SweepStats* stats = nullptr);

}  // namespace hcec
