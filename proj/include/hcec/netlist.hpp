#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace hcec {

// An edge of the AIG: a node index plus an optional inverter.  Packed the
// AIGER way (2 * node + inverted) so that Lit{0,false} is FALSE and
// Lit{0,true} is TRUE.
class Lit {
 public:
  constexpr Lit() = default;
  constexpr Lit(uint32_t node, bool inverted) : raw_((node << 1) | (inverted ? 1u : 0u)) {}

  static constexpr Lit from_raw(uint32_t raw) {
    Lit l;
    l.raw_ = raw;
    return l;
  }

  constexpr uint32_t node() const { return raw_ >> 1; }
  constexpr bool inverted() const { return raw_ & 1u; }
  constexpr uint32_t raw() const { return raw_; }
  constexpr bool is_const() const { return node() == 0; }

  constexpr Lit operator!() const { return from_raw(raw_ ^ 1u); }
  constexpr Lit operator^(bool flip) const { return from_raw(raw_ ^ (flip ? 1u : 0u)); }
  constexpr Lit regular() const { return from_raw(raw_ & ~1u); }

  constexpr auto operator<=>(const Lit&) const = default;

 private:
  uint32_t raw_ = 0;
};

// One bit per PI, PI order.
using Assignment = std::vector<uint8_t>;

inline constexpr Lit kFalse = Lit(0, false);
inline constexpr Lit kTrue = Lit(0, true);

struct AndNode {
  Lit fanin0;
  Lit fanin1;
};

class NetlistError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Combinational And-Inverter Graph.
//
// Node 0 is the constant FALSE, nodes 1..num_pis are primary inputs, and every
// later node is a two-input AND whose fan-ins point to strictly smaller
// indices.  Node indices are stable: merging rewires fan-outs and leaves the
// dropped node in place (dead) rather than renumbering.
class Aig {
 public:
  explicit Aig(uint32_t num_pis = 0);

  uint32_t num_pis() const { return num_pis_; }
  uint32_t num_nodes() const { return static_cast<uint32_t>(nodes_.size()); }
  uint32_t num_ands() const { return num_nodes() - num_pis_ - 1; }
  uint32_t num_outputs() const { return static_cast<uint32_t>(outputs_.size()); }

  bool is_const(uint32_t n) const { return n == 0; }
  bool is_pi(uint32_t n) const { return n >= 1 && n <= num_pis_; }
  bool is_and(uint32_t n) const { return n > num_pis_ && n < num_nodes(); }

  Lit pi(uint32_t i) const { return Lit(i + 1, false); }
  // Position of a PI node among the inputs (node - 1).
  uint32_t pi_position(uint32_t n) const { return n - 1; }

  const AndNode& node(uint32_t n) const { return nodes_[n]; }

  Lit add_and(Lit a, Lit b);
  void add_output(Lit lit);
  void set_output(uint32_t i, Lit lit);
  const std::vector<Lit>& outputs() const { return outputs_; }
  Lit output(uint32_t i) const { return outputs_[i]; }

  // Rewire every fan-out of drop's node (including POs) onto keep, composing
  // phases.  Rejects merges that would break the index order, which includes
  // every merge of a node into its own transitive fan-out.
  void merge(Lit keep, Lit drop);

  // Follows merge forwarding; identity for nodes that were never dropped.
  Lit resolve(Lit lit) const;
  bool is_merged(uint32_t n) const { return forward_[n].raw() != (n << 1); }

  // Nodes in the transitive fan-in of some PO.  PIs and the constant are
  // always reported live.
  std::vector<bool> live_mask() const;
  uint32_t num_live_ands() const;

  // Nodes (including n itself) in the transitive fan-in of n.
  std::vector<bool> tfi_mask(uint32_t n) const;

  // Bumped by every structural mutation.
  uint64_t revision() const { return revision_; }

  bool value_of(Lit lit, const std::vector<bool>& node_values) const {
    return node_values[lit.node()] != lit.inverted();
  }

 private:
  uint32_t num_pis_;
  std::vector<AndNode> nodes_;
  std::vector<Lit> outputs_;
  std::vector<Lit> forward_;
  uint64_t revision_ = 0;
};

// Self-contained single-rooted sub-netlist.  pi_map[i] is the original node
// index behind cone PI i.
struct Cone {
  Aig aig;
  std::vector<uint32_t> pi_map;

  Lit root() const { return aig.output(0); }
  uint32_t num_pis() const { return aig.num_pis(); }
};

// AIG construction helper.  Always folds constants and trivial x&x / x&!x;
// optionally shares structurally identical AND nodes.
class AigBuilder {
 public:
  explicit AigBuilder(uint32_t num_pis, bool hashing = true);
  explicit AigBuilder(Aig seed, bool hashing = true);

  Lit pi(uint32_t i) const { return aig_.pi(i); }
  Lit and_(Lit a, Lit b);
  Lit or_(Lit a, Lit b) { return !and_(!a, !b); }
  Lit xor_(Lit a, Lit b);
  Lit xnor_(Lit a, Lit b) { return !xor_(a, b); }
  Lit mux_(Lit sel, Lit t, Lit e) { return or_(and_(sel, t), and_(!sel, e)); }
  // Raw AND with no folding or sharing.
  Lit raw_and(Lit a, Lit b) { return aig_.add_and(a, b); }

  void add_output(Lit lit) { aig_.add_output(lit); }
  const Aig& aig() const { return aig_; }
  Aig take() { return std::move(aig_); }

 private:
  Aig aig_;
  bool hashing_;
  std::unordered_map<uint64_t, Lit> table_;
};

// AIGER I/O.  Reads ASCII ("aag") and binary ("aig"); writes ASCII.
class AigerError : public std::runtime_error {
 public:
  AigerError(const std::string& what, std::size_t position, bool binary_offset);
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

Aig parse_aiger(std::string_view bytes);
Aig read_aiger_file(const std::string& path);
std::string write_aiger(const Aig& aig);
// Binary writer.  Only used to produce test inputs and for interchange with
// tools that insist on "aig".
std::string write_aiger_binary(const Aig& aig);
void write_aiger_file(const Aig& aig, const std::string& path);

std::vector<uint32_t> topological_order(const Aig& aig);

// Single-output miter: shared PIs, XOR per PO pair, OR over all XORs.
Aig build_miter(const Aig& a, const Aig& b);
// Miter with one XOR output per PO pair, for per-output checking.
Aig build_output_miter(const Aig& a, const Aig& b);
// Collapses a multi-output miter to the OR of its outputs.
Aig or_reduce_outputs(const Aig& aig);

// Cone over the union of the supports of a and b whose root is a XOR b.
Cone miter_tfi_cones(const Aig& aig, Lit a, Lit b);
// Cone of a single literal.
Cone extract_cone(const Aig& aig, Lit root);

Aig merge_nodes(const Aig& aig, Lit keep, Lit drop);

// old_to_new, when given, receives the literal each old node maps to.
Aig structural_hash(const Aig& aig, std::vector<Lit>* old_to_new = nullptr);

// Scalar evaluation; assignment[i] is the value of PI i.
std::vector<bool> evaluate_nodes(const Aig& aig, std::span<const uint8_t> assignment);
std::vector<bool> evaluate(const Aig& aig, std::span<const uint8_t> assignment);

}  // namespace hcec

template <>
struct std::hash<hcec::Lit> {
  std::size_t operator()(const hcec::Lit& l) const noexcept { return std::hash<uint32_t>{}(l.raw()); }
};
