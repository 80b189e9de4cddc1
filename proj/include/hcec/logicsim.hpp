#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "hcec/netlist.hpp"

namespace hcec {

inline constexpr unsigned kWordBits = 64;

// Bit-parallel value block; bit t of words[t / 64] is pattern t.
struct SimVector {
  std::vector<uint64_t> words;
  std::size_t length_bits = 0;

  bool bit(std::size_t t) const { return (words[t / kWordBits] >> (t % kWordBits)) & 1u; }
};

// One word of simulation: values of every node given one word per PI.
std::vector<uint64_t> simulate_word(const Aig& aig, std::span<const uint64_t> pi_words);

struct CandidatePair {
  Lit a;
  Lit b;
  bool antivalent = false;
};

struct SimOptions {
  // Switch to exhaustive enumeration when rounds * 64 >= 2^num_pis.
  bool exhaustive_when_possible = true;
  // Full per-node signatures are retained only below this many stored words.
  std::size_t history_word_limit = std::size_t{1} << 22;
};

// Simulation state: an exact partition of nodes by value signature (up to
// complement), plus the first pattern that raises each PO.  Full signatures
// are kept when small enough; the partition is always exact.
class Signatures {
 public:
  std::size_t num_patterns() const { return patterns_; }
  std::size_t num_classes() const { return num_classes_; }
  bool exhaustive() const { return exhaustive_; }

  uint32_t class_of(uint32_t node) const { return class_of_[node]; }
  // Members of a class in ascending node order.
  const std::vector<uint32_t>& members(uint32_t cls) const { return classes_[cls]; }
  // Value of the node on the first simulated pattern; the class key is the
  // signature XOR this phase.
  bool phase(uint32_t node) const { return phase_[node]; }

  bool has_history() const { return keep_history_; }
  // Full signature of a node; requires has_history().
  SimVector signature(uint32_t node) const;

  const std::optional<Assignment>& output_hit(uint32_t po) const { return po_hits_[po]; }

  uint64_t seed() const { return seed_; }

 private:
  friend Signatures simulate_random(const Aig&, uint64_t, uint64_t, const SimOptions&);
  friend void refine_with_pattern(Signatures&, const Aig&, const Assignment&);
  void absorb(const Aig& aig, std::span<const uint64_t> pi_words, std::span<const uint64_t> values,
              uint64_t valid_mask);

  uint32_t num_pis_ = 0;
  std::size_t patterns_ = 0;
  std::size_t words_ = 0;
  std::size_t num_classes_ = 0;
  bool exhaustive_ = false;
  bool keep_history_ = false;
  uint64_t seed_ = 0;
  uint64_t refinements_ = 0;
  std::vector<uint32_t> class_of_;
  std::vector<std::vector<uint32_t>> classes_;
  std::vector<uint8_t> phase_;
  std::vector<std::optional<Assignment>> po_hits_;
  std::vector<uint64_t> history_;  // node-major: node * words_ + word
  std::vector<uint64_t> history_mask_;
};

// rounds is counted in 64-pattern words.
Signatures simulate_random(const Aig& aig, uint64_t rounds, uint64_t seed, const SimOptions& options = {});

// Adds the given pattern plus 63 single-bit-flip neighbours as one more
// round.  The aig may have been merged since simulation started as long as
// every node still computes the same function.
void refine_with_pattern(Signatures& sig, const Aig& aig, const Assignment& pattern);

// Pairs (class representative, member), ordered by member index.  Only
// live, unmerged AND/PI nodes take part; the constant can be a representative.
std::vector<CandidatePair> collect_candidate_pairs(const Signatures& sig, const Aig& aig);

std::optional<Assignment> check_output_counterexample(const Signatures& sig, const Aig& miter);

// Deterministic 64-bit mixer used for all pattern streams.
uint64_t mix64(uint64_t x);
uint64_t pattern_word(uint64_t seed, uint64_t pi_index, uint64_t round);

}  // namespace hcec
