#include "hcec/isd.hpp"

#include <deque>
#include <unordered_set>

namespace hcec {

namespace {

constexpr std::size_t kMaxVisits = std::size_t{1} << 16;
constexpr std::size_t kMaxCandidates = 16;
constexpr uint64_t kPiShape = 0x5bd1e9955bd1e995ull;
constexpr uint64_t kConstShape = 0x27d4eb2f165667c5ull;

uint64_t pair_key(Lit a, Lit b) { return (uint64_t{a.raw()} << 32) | b.raw(); }

uint64_t combine(uint64_t a, uint64_t b) { return mix64(a * 0x100000001b3ull ^ mix64(b + 0x632be59bd9b4e019ull)); }

// Worklist matcher with one shared PI renaming across all queued pairs.
class Matcher {
 public:
  explicit Matcher(const Aig& aig) : aig_(aig) {}

  bool match(Lit from, Lit to) {
    queue_.clear();
    queue_.emplace_back(from, to);
    while (!queue_.empty()) {
      auto [a, b] = queue_.front();
      queue_.pop_front();
      if (a.inverted() != b.inverted()) return false;
      const uint32_t u = a.node();
      const uint32_t w = b.node();
      if (!visited_.insert(pair_key(Lit(u, false), Lit(w, false))).second) continue;
      if (visited_.size() > kMaxVisits) return false;
      if (aig_.is_const(u) || aig_.is_const(w)) {
        if (u != w) return false;
        continue;
      }
      if (aig_.is_pi(u) || aig_.is_pi(w)) {
        if (!aig_.is_pi(u) || !aig_.is_pi(w)) return false;
        // The renaming must be injective, otherwise the proven pair only
        // covers the inputs where the identified PIs agree.
        auto [it, fresh] = rename_.emplace(u, w);
        if (!fresh && it->second != w) return false;
        auto [rit, rfresh] = inverse_.emplace(w, u);
        if (!rfresh && rit->second != u) return false;
        continue;
      }
      const AndNode& ga = aig_.node(u);
      const AndNode& gb = aig_.node(w);
      queue_.emplace_back(ga.fanin0, gb.fanin0);
      queue_.emplace_back(ga.fanin1, gb.fanin1);
    }
    return true;
  }

 private:
  const Aig& aig_;
  std::deque<std::pair<Lit, Lit>> queue_;
  std::unordered_set<uint64_t> visited_;
  std::unordered_map<uint32_t, uint32_t> rename_;
  std::unordered_map<uint32_t, uint32_t> inverse_;
};

}  // namespace

void EquivDb::record(Lit x, Lit y, bool antivalent) {
  proven_.push_back({x, y, antivalent});
  synced_revision_ = ~0ull;
}

bool EquivDb::contains(Lit x, Lit y, bool antivalent) const {
  for (const auto& p : proven_) {
    if (p.antivalent != antivalent) continue;
    if ((p.x == x && p.y == y) || (p.x == y && p.y == x)) return true;
  }
  return false;
}

void EquivDb::sync(const Aig& aig) {
  if (synced_revision_ == aig.revision() && synced_nodes_ == aig.num_nodes()) return;
  shape_.assign(aig.num_nodes(), 0);
  shape_[0] = kConstShape;
  for (uint32_t n = 1; n <= aig.num_pis(); ++n) shape_[n] = kPiShape;
  for (uint32_t n = aig.num_pis() + 1; n < aig.num_nodes(); ++n) {
    const AndNode& g = aig.node(n);
    shape_[n] = combine(shape_of(g.fanin0), shape_of(g.fanin1));
  }
  by_shape_.clear();
  for (std::size_t i = 0; i < proven_.size(); ++i) {
    const auto& p = proven_[i];
    by_shape_.emplace(combine(shape_of(p.x), shape_of(p.y)), 2 * i);
    by_shape_.emplace(combine(shape_of(p.y), shape_of(p.x)), 2 * i + 1);
  }
  memo_.clear();
  synced_revision_ = aig.revision();
  synced_nodes_ = aig.num_nodes();
}

bool structurally_identical(const Aig& aig, Lit x, Lit y, EquivDb& db) {
  if (x == y) return true;
  db.sync(aig);
  const uint64_t key = pair_key(x, y);
  if (db.memoize_) {
    if (auto it = db.memo_.find(key); it != db.memo_.end()) return it->second;
  }
  const bool result = db.shape_of(x) == db.shape_of(y) && Matcher(aig).match(x, y);
  if (db.memoize_) db.memo_.emplace(key, result);
  return result;
}

std::optional<std::size_t> try_isd_merge(const CandidatePair& pair, const Aig& aig, EquivDb& db) {
  if (db.proven_.empty()) return std::nullopt;
  db.sync(aig);
  const auto [first, last] = db.by_shape_.equal_range(combine(db.shape_of(pair.a), db.shape_of(pair.b)));
  std::size_t tried = 0;
  for (auto it = first; it != last && tried < kMaxCandidates; ++it) {
    const std::size_t idx = it->second / 2;
    const bool crossed = it->second % 2 == 1;
    const auto& p = db.proven_[idx];
    if (p.antivalent != pair.antivalent) continue;
    ++tried;
    // Both sides must match under the same renaming, so one matcher.
    Matcher m(aig);
    const Lit x = crossed ? p.y : p.x;
    const Lit y = crossed ? p.x : p.y;
    if (m.match(pair.a, x) && m.match(pair.b, y)) return idx;
  }
  return std::nullopt;
}

}  // namespace hcec
