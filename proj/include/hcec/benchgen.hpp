#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hcec/netlist.hpp"

namespace hcec::bench {

// Arithmetic families take PIs a[0..w) then b[0..w), LSB first.  Adders
// output w sum bits and the carry; multipliers output the 2w product bits.
enum class Family { kAdderRipple, kAdderCla, kMultArray, kMultColumnwise };

Family parse_family(const std::string& name);
const char* family_name(Family f);

Aig adder_ripple(unsigned width);
Aig adder_cla(unsigned width);  // Kogge-Stone prefix carries
Aig mult_array(unsigned width);
Aig mult_columnwise(unsigned width);  // Wallace column compression + ripple
Aig generate_base(Family f, unsigned width);

// m copies of block on disjoint PIs; outputs are concatenated copy by copy.
Aig replicated(const Aig& block, unsigned copies);

// Applies `steps` random function-preserving local rewrites: AND-tree
// reassociation, XOR-chain rebalancing, alternate XOR forms and double
// inverters.  Checked against the base by the oracle when it has at most
// max_oracle_pis inputs.
Aig rewrite(const Aig& base, unsigned steps, uint64_t seed, unsigned max_oracle_pis = 24);

class GenError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Flips one fan-in polarity of one AND gate so that the result differs from
// base, re-rolling until the oracle confirms it.  Refuses netlists above
// max_pis because inequivalence could not be confirmed.
Aig corrupt(const Aig& base, uint64_t seed, unsigned max_pis = 24);

struct GenSpec {
  Family family = Family::kAdderRipple;
  unsigned width = 4;
  unsigned copies = 1;          // replicated(block, copies) when > 1
  unsigned rewrite_steps = 0;   // rewrite(..., steps, seed) when > 0
  bool corrupt = false;
  uint64_t seed = 1;
};

Aig generate(const GenSpec& spec);

// Keeps only the listed outputs, in the given order.
Aig select_outputs(const Aig& aig, const std::vector<uint32_t>& outputs);

// Random AND/OR network over num_pis inputs with no recognizable XOR gate.
Aig random_and_or(unsigned num_pis, unsigned gates, uint64_t seed);
// Random AIG with random edge polarities and `outputs` POs.
Aig random_aig(unsigned num_pis, unsigned gates, unsigned outputs, uint64_t seed);
// XOR chains over fresh PIs, one output per chain; chain of length k uses
// k + 1 PIs and k XOR gates.
Aig xor_chains(const std::vector<unsigned>& lengths);

struct OracleResult {
  bool equivalent = true;
  uint64_t pattern_index = 0;  // counterexample pattern, PI i = bit i
  Assignment counterexample;
};

// Exhaustive evaluation of every output over all 2^N inputs in 64-pattern
// chunks.  Returns the lowest pattern index raising any output.
OracleResult oracle_check(const Aig& miter, unsigned max_pis = 24);

// True when every output of a and b agrees on all inputs.
bool oracle_equivalent(const Aig& a, const Aig& b, unsigned max_pis = 24);

}  // namespace hcec::bench
