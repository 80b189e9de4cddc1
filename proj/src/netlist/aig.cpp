#include "hcec/netlist.hpp"

#include <algorithm>
#include <string>

namespace hcec {

Aig::Aig(uint32_t num_pis) : num_pis_(num_pis), nodes_(num_pis + 1), forward_(num_pis + 1) {
  for (uint32_t n = 0; n < forward_.size(); ++n) forward_[n] = Lit(n, false);
}

Lit Aig::add_and(Lit a, Lit b) {
  const uint32_t self = num_nodes();
  if (a.node() >= self || b.node() >= self) {
    throw NetlistError("add_and: fan-in references a node that does not exist yet");
  }
  nodes_.push_back(AndNode{a, b});
  ++revision_;
  forward_.push_back(Lit(self, false));
  return Lit(self, false);
}

void Aig::add_output(Lit lit) {
  if (lit.node() >= num_nodes()) throw NetlistError("add_output: literal out of range");
  outputs_.push_back(lit);
  ++revision_;
}

void Aig::set_output(uint32_t i, Lit lit) {
  if (i >= outputs_.size() || lit.node() >= num_nodes()) throw NetlistError("set_output: out of range");
  outputs_[i] = lit;
  ++revision_;
}

Lit Aig::resolve(Lit lit) const {
  while (is_merged(lit.node())) lit = forward_[lit.node()] ^ lit.inverted();
  return lit;
}

void Aig::merge(Lit keep, Lit drop) {
  if (keep.node() >= num_nodes() || drop.node() >= num_nodes()) {
    throw NetlistError("merge: literal out of range");
  }
  if (is_merged(drop.node())) throw NetlistError("merge: node " + std::to_string(drop.node()) + " was already merged");
  keep = resolve(keep);
  if (keep.node() == drop.node()) {
    if (keep == drop) return;
    throw NetlistError("merge: a node cannot be merged with its own complement");
  }
  if (keep.node() > drop.node()) {
    if (tfi_mask(keep.node())[drop.node()]) {
      throw NetlistError("merge: node " + std::to_string(keep.node()) + " is in the transitive fan-out of node " +
                         std::to_string(drop.node()) + " (would create a cycle)");
    }
    throw NetlistError("merge: kept node must precede the dropped node in index order");
  }

  // Value of drop's node expressed through keep.
  const Lit target = keep ^ drop.inverted();
  const uint32_t victim = drop.node();
  for (uint32_t n = victim + 1; n < num_nodes(); ++n) {
    AndNode& g = nodes_[n];
    if (g.fanin0.node() == victim) g.fanin0 = target ^ g.fanin0.inverted();
    if (g.fanin1.node() == victim) g.fanin1 = target ^ g.fanin1.inverted();
  }
  for (Lit& o : outputs_) {
    if (o.node() == victim) o = target ^ o.inverted();
  }
  forward_[victim] = target;
  ++revision_;
}

std::vector<bool> Aig::live_mask() const {
  std::vector<bool> live(num_nodes(), false);
  for (Lit o : outputs_) live[o.node()] = true;
  for (uint32_t n = num_nodes(); n-- > num_pis_ + 1;) {
    if (!live[n]) continue;
    live[nodes_[n].fanin0.node()] = true;
    live[nodes_[n].fanin1.node()] = true;
  }
  for (uint32_t n = 0; n <= num_pis_; ++n) live[n] = true;
  return live;
}

uint32_t Aig::num_live_ands() const {
  const auto live = live_mask();
  uint32_t count = 0;
  for (uint32_t n = num_pis_ + 1; n < num_nodes(); ++n) count += live[n] ? 1 : 0;
  return count;
}

std::vector<bool> Aig::tfi_mask(uint32_t root) const {
  std::vector<bool> in(num_nodes(), false);
  in[root] = true;
  for (uint32_t n = root + 1; n-- > num_pis_ + 1;) {
    if (!in[n]) continue;
    in[nodes_[n].fanin0.node()] = true;
    in[nodes_[n].fanin1.node()] = true;
  }
  return in;
}

AigBuilder::AigBuilder(uint32_t num_pis, bool hashing) : aig_(num_pis), hashing_(hashing) {}

AigBuilder::AigBuilder(Aig seed, bool hashing) : aig_(std::move(seed)), hashing_(hashing) {
  if (!hashing_) return;
  for (uint32_t n = aig_.num_pis() + 1; n < aig_.num_nodes(); ++n) {
    Lit a = aig_.node(n).fanin0, b = aig_.node(n).fanin1;
    if (b < a) std::swap(a, b);
    table_.emplace((uint64_t{a.raw()} << 32) | b.raw(), Lit(n, false));
  }
}

Lit AigBuilder::and_(Lit a, Lit b) {
  if (a == kFalse || b == kFalse || a == !b) return kFalse;
  if (a == kTrue || a == b) return b;
  if (b == kTrue) return a;
  if (b < a) std::swap(a, b);
  if (!hashing_) return aig_.add_and(a, b);
  const uint64_t key = (uint64_t{a.raw()} << 32) | b.raw();
  if (auto it = table_.find(key); it != table_.end()) return it->second;
  const Lit lit = aig_.add_and(a, b);
  table_.emplace(key, lit);
  return lit;
}

Lit AigBuilder::xor_(Lit a, Lit b) {
  const Lit both = and_(a, b);
  const Lit neither = and_(!a, !b);
  return and_(!both, !neither);
}

std::vector<uint32_t> topological_order(const Aig& aig) {
  const auto live = aig.live_mask();
  std::vector<uint32_t> order;
  order.reserve(aig.num_nodes());
  for (uint32_t n = 1; n < aig.num_nodes(); ++n) {
    if (live[n]) order.push_back(n);
  }
  return order;
}

namespace {

// Copies the AND nodes of src into dst (raw, no sharing).  map must already
// hold the images of src's constant and PIs.
void copy_ands(const Aig& src, Aig& dst, std::vector<Lit>& map) {
  for (uint32_t n = src.num_pis() + 1; n < src.num_nodes(); ++n) {
    const AndNode& g = src.node(n);
    map[n] = dst.add_and(map[g.fanin0.node()] ^ g.fanin0.inverted(), map[g.fanin1.node()] ^ g.fanin1.inverted());
  }
}

Lit or_all(AigBuilder& b, const std::vector<Lit>& lits) {
  Lit acc = kFalse;
  for (Lit l : lits) acc = b.or_(acc, l);
  return acc;
}

Cone build_cone(const Aig& aig, std::span<const Lit> roots, bool xor_roots) {
  std::vector<bool> in(aig.num_nodes(), false);
  for (Lit r : roots) {
    if (r.node() >= aig.num_nodes()) throw NetlistError("cone root out of range");
    in[r.node()] = true;
  }
  uint32_t top = 0;
  for (Lit r : roots) top = std::max(top, r.node());
  for (uint32_t n = top + 1; n-- > aig.num_pis() + 1;) {
    if (!in[n]) continue;
    in[aig.node(n).fanin0.node()] = true;
    in[aig.node(n).fanin1.node()] = true;
  }

  Cone cone;
  for (uint32_t n = 1; n <= aig.num_pis() && n <= top; ++n) {
    if (in[n]) cone.pi_map.push_back(n);
  }
  Aig sub(static_cast<uint32_t>(cone.pi_map.size()));
  std::vector<Lit> map(top + 1, kFalse);
  for (uint32_t i = 0; i < cone.pi_map.size(); ++i) map[cone.pi_map[i]] = sub.pi(i);
  for (uint32_t n = aig.num_pis() + 1; n <= top; ++n) {
    if (!in[n]) continue;
    const AndNode& g = aig.node(n);
    map[n] = sub.add_and(map[g.fanin0.node()] ^ g.fanin0.inverted(), map[g.fanin1.node()] ^ g.fanin1.inverted());
  }

  AigBuilder b(std::move(sub), false);
  Lit root = map[roots[0].node()] ^ roots[0].inverted();
  if (xor_roots) root = b.xor_(root, map[roots[1].node()] ^ roots[1].inverted());
  b.add_output(root);
  cone.aig = b.take();
  return cone;
}

}  // namespace

namespace {

// One XOR per PO pair over shared PIs.
std::pair<AigBuilder, std::vector<Lit>> xor_outputs(const Aig& a, const Aig& b, const char* who) {
  if (a.num_pis() != b.num_pis()) {
    throw NetlistError(std::string(who) + ": PI count mismatch (" + std::to_string(a.num_pis()) + " vs " +
                       std::to_string(b.num_pis()) + ")");
  }
  if (a.num_outputs() != b.num_outputs()) {
    throw NetlistError(std::string(who) + ": PO count mismatch (" + std::to_string(a.num_outputs()) + " vs " +
                       std::to_string(b.num_outputs()) + ")");
  }
  Aig m(a.num_pis());
  std::vector<Lit> map_a(a.num_nodes()), map_b(b.num_nodes());
  for (uint32_t n = 0; n <= a.num_pis(); ++n) map_a[n] = map_b[n] = Lit(n, false);
  copy_ands(a, m, map_a);
  copy_ands(b, m, map_b);

  AigBuilder builder(std::move(m), false);
  std::vector<Lit> diffs;
  for (uint32_t i = 0; i < a.num_outputs(); ++i) {
    const Lit oa = map_a[a.output(i).node()] ^ a.output(i).inverted();
    const Lit ob = map_b[b.output(i).node()] ^ b.output(i).inverted();
    diffs.push_back(builder.xor_(oa, ob));
  }
  return {std::move(builder), std::move(diffs)};
}

}  // namespace

Aig build_miter(const Aig& a, const Aig& b) {
  auto [builder, diffs] = xor_outputs(a, b, "build_miter");
  builder.add_output(or_all(builder, diffs));
  return builder.take();
}

Aig build_output_miter(const Aig& a, const Aig& b) {
  auto [builder, diffs] = xor_outputs(a, b, "build_output_miter");
  for (Lit d : diffs) builder.add_output(d);
  return builder.take();
}

Aig or_reduce_outputs(const Aig& aig) {
  Aig copy(aig.num_pis());
  std::vector<Lit> map(aig.num_nodes());
  for (uint32_t n = 0; n <= aig.num_pis(); ++n) map[n] = Lit(n, false);
  copy_ands(aig, copy, map);
  AigBuilder builder(std::move(copy), false);
  std::vector<Lit> outs;
  for (Lit o : aig.outputs()) outs.push_back(map[o.node()] ^ o.inverted());
  builder.add_output(or_all(builder, outs));
  return builder.take();
}

Cone miter_tfi_cones(const Aig& aig, Lit a, Lit b) {
  const Lit roots[2] = {a, b};
  return build_cone(aig, roots, true);
}

Cone extract_cone(const Aig& aig, Lit root) {
  const Lit roots[1] = {root};
  return build_cone(aig, roots, false);
}

Aig merge_nodes(const Aig& aig, Lit keep, Lit drop) {
  Aig copy = aig;
  copy.merge(keep, drop);
  return copy;
}

Aig structural_hash(const Aig& aig, std::vector<Lit>* old_to_new) {
  const auto live = aig.live_mask();
  AigBuilder builder(aig.num_pis(), true);
  std::vector<Lit> map(aig.num_nodes(), kFalse);
  for (uint32_t n = 1; n <= aig.num_pis(); ++n) map[n] = Lit(n, false);
  for (uint32_t n = aig.num_pis() + 1; n < aig.num_nodes(); ++n) {
    if (!live[n]) continue;
    const AndNode& g = aig.node(n);
    map[n] = builder.and_(map[g.fanin0.node()] ^ g.fanin0.inverted(), map[g.fanin1.node()] ^ g.fanin1.inverted());
  }
  for (Lit o : aig.outputs()) builder.add_output(map[o.node()] ^ o.inverted());
  if (old_to_new) *old_to_new = std::move(map);
  return builder.take();
}

std::vector<bool> evaluate_nodes(const Aig& aig, std::span<const uint8_t> assignment) {
  if (assignment.size() != aig.num_pis()) throw NetlistError("evaluate: assignment size does not match PI count");
  std::vector<bool> value(aig.num_nodes(), false);
  for (uint32_t i = 0; i < aig.num_pis(); ++i) value[i + 1] = assignment[i] != 0;
  for (uint32_t n = aig.num_pis() + 1; n < aig.num_nodes(); ++n) {
    const AndNode& g = aig.node(n);
    value[n] = aig.value_of(g.fanin0, value) && aig.value_of(g.fanin1, value);
  }
  return value;
}

std::vector<bool> evaluate(const Aig& aig, std::span<const uint8_t> assignment) {
  const auto value = evaluate_nodes(aig, assignment);
  std::vector<bool> out;
  out.reserve(aig.num_outputs());
  for (Lit o : aig.outputs()) out.push_back(aig.value_of(o, value));
  return out;
}

}  // namespace hcec
