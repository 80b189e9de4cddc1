#include "hcec/selector.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

namespace hcec {

namespace {

struct DisjointSets {
  std::vector<uint32_t> parent;
  explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0u); }
  uint32_t find(uint32_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(uint32_t a, uint32_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

}  // namespace

std::vector<XorGate> detect_xor_gates(const Aig& aig, Lit root) {
  std::vector<XorGate> found;
  if (!aig.is_and(root.node())) return found;
  const auto in_cone = aig.tfi_mask(root.node());
  std::vector<bool> claimed(aig.num_nodes(), false);

  for (uint32_t v = aig.num_nodes(); v-- > aig.num_pis() + 1;) {
    if (!in_cone[v] || claimed[v]) continue;
    const AndNode& g = aig.node(v);
    if (!g.fanin0.inverted() || !g.fanin1.inverted()) continue;
    const uint32_t p = g.fanin0.node();
    const uint32_t q = g.fanin1.node();
    if (p == q || !aig.is_and(p) || !aig.is_and(q) || claimed[p] || claimed[q]) continue;
    const AndNode& gp = aig.node(p);
    const AndNode& gq = aig.node(q);
    const bool straight = gq.fanin0 == !gp.fanin0 && gq.fanin1 == !gp.fanin1;
    const bool crossed = gq.fanin0 == !gp.fanin1 && gq.fanin1 == !gp.fanin0;
    if (!straight && !crossed) continue;
    if (gp.fanin0.node() == gp.fanin1.node()) continue;
    claimed[v] = claimed[p] = claimed[q] = true;
    found.push_back({v, gp.fanin0, gp.fanin1});
  }
  std::reverse(found.begin(), found.end());
  return found;
}

std::vector<XorBlock> group_xor_blocks(const std::vector<XorGate>& gates) {
  std::unordered_map<uint32_t, uint32_t> slot;
  for (uint32_t i = 0; i < gates.size(); ++i) slot.emplace(gates[i].root, i);
  DisjointSets sets(gates.size());
  for (uint32_t i = 0; i < gates.size(); ++i) {
    for (Lit op : {gates[i].op0, gates[i].op1}) {
      if (auto it = slot.find(op.node()); it != slot.end()) sets.unite(i, it->second);
    }
  }
  std::vector<XorBlock> blocks;
  std::unordered_map<uint32_t, std::size_t> block_of;
  std::vector<uint32_t> order(gates.size());
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(), [&](uint32_t a, uint32_t b) { return gates[a].root < gates[b].root; });
  for (uint32_t i : order) {
    const uint32_t leader = sets.find(i);
    auto [it, fresh] = block_of.emplace(leader, blocks.size());
    if (fresh) blocks.emplace_back();
    blocks[it->second].push_back(gates[i].root);
  }
  return blocks;
}

double score_xor(std::span<const std::size_t> block_sizes, uint32_t n_pis) {
  if (block_sizes.empty() || n_pis == 0) return 0.0;
  // log-sum-exp in base 2 so that large blocks do not overflow.
  const double top = static_cast<double>(*std::max_element(block_sizes.begin(), block_sizes.end()));
  double sum = 0.0;
  for (std::size_t s : block_sizes) sum += std::exp2(static_cast<double>(s) - top);
  return (top + std::log2(sum)) / static_cast<double>(n_pis);
}

EngineChoice select_engine(const Cone& cone, double rho, unsigned eps_max_pis) {
  EngineChoice choice;
  const auto gates = detect_xor_gates(cone);
  const auto blocks = group_xor_blocks(gates);
  std::vector<std::size_t> sizes;
  sizes.reserve(blocks.size());
  for (const auto& b : blocks) sizes.push_back(b.size());
  choice.num_xors = gates.size();
  choice.num_blocks = blocks.size();
  choice.score = score_xor(sizes, cone.num_pis());
  if (choice.score > rho) {
    if (cone.num_pis() > eps_max_pis) {
      choice.pi_override = true;
    } else {
      choice.kind = Engine::kEps;
    }
  }
  return choice;
}

const char* engine_name(Engine e) { return e == Engine::kEps ? "eps" : "sat"; }

}  // namespace hcec
