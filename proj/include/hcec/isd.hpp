#pragma once

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "hcec/logicsim.hpp"
#include "hcec/netlist.hpp"

namespace hcec {

// Proven equivalences plus the caches used to find structurally identical
// candidates.  Caches are keyed on Aig::revision() and rebuilt lazily.
class EquivDb {
 public:
  struct Proven {
    Lit x;
    Lit y;
    bool antivalent;
  };

  explicit EquivDb(bool memoize = true) : memoize_(memoize) {}

  void record(Lit x, Lit y, bool antivalent);
  bool contains(Lit x, Lit y, bool antivalent) const;
  const std::vector<Proven>& proven() const { return proven_; }

  bool memoize() const { return memoize_; }
  std::size_t memo_size() const { return memo_.size(); }

 private:
  friend bool structurally_identical(const Aig&, Lit, Lit, EquivDb&);
  friend std::optional<std::size_t> try_isd_merge(const CandidatePair&, const Aig&, EquivDb&);
  void sync(const Aig& aig);
  uint64_t shape_of(Lit l) const { return shape_[l.node()] ^ (l.inverted() ? 0x9e3779b97f4a7c15ull : 0); }

  bool memoize_;
  std::vector<Proven> proven_;
  uint64_t synced_revision_ = ~0ull;
  uint32_t synced_nodes_ = 0;
  std::vector<uint64_t> shape_;
  std::unordered_multimap<uint64_t, std::size_t> by_shape_;
  std::unordered_map<uint64_t, bool> memo_;
};

// Worklist match from (x, y): polarities must agree edge by edge, AND fan-ins
// are compared position-wise, and PIs are matched through one consistent
// renaming from x's side to y's side.  Identity is the trivial renaming, so
// two copies over shared PIs match and so do replicas over disjoint PIs.
// Memoized in db.
bool structurally_identical(const Aig& aig, Lit x, Lit y, EquivDb& db);

// Looks for a proven pair (x, x') whose two sides match (a, b) under a single
// shared PI renaming, straight or crossed, with the same relative phase.
// Returns the index of the proven pair that justified the merge.
std::optional<std::size_t> try_isd_merge(const CandidatePair& pair, const Aig& aig, EquivDb& db);

}  // namespace hcec
