#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "hcec/netlist.hpp"

namespace hcec {

// v = AND(!p, !q) with p = AND(x, y), q = AND(!x, !y).  v computes
// XOR(op0, op1) where op0/op1 are the fan-ins of p.
struct XorGate {
  uint32_t root;
  Lit op0;
  Lit op1;
};

// Recognized XOR roots in the TFI of the cone root, ascending by root.  Each
// AND node belongs to at most one XOR; outer (higher-index) roots claim first.
std::vector<XorGate> detect_xor_gates(const Aig& aig, Lit root);
inline std::vector<XorGate> detect_xor_gates(const Cone& cone) { return detect_xor_gates(cone.aig, cone.root()); }

// Connected components of XOR roots, where r1 and r2 are adjacent when one is
// an operand of the other.  Each block lists its roots ascending; blocks are
// ordered by their smallest root.
using XorBlock = std::vector<uint32_t>;
std::vector<XorBlock> group_xor_blocks(const std::vector<XorGate>& gates);

// log2(sum over blocks of 2^|b|) / n_pis; 0 for no blocks.
double score_xor(std::span<const std::size_t> block_sizes, uint32_t n_pis);

enum class Engine { kSat, kEps };

struct EngineChoice {
  Engine kind = Engine::kSat;
  double score = 0.0;
  std::size_t num_xors = 0;
  std::size_t num_blocks = 0;
  bool pi_override = false;  // EPS would have won but the cone is too wide
};

EngineChoice select_engine(const Cone& cone, double rho, unsigned eps_max_pis);

const char* engine_name(Engine e);

}  // namespace hcec
