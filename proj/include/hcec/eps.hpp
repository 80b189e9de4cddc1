#pragma once

#include <atomic>
#include <cstdint>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "hcec/logicsim.hpp"
#include "hcec/netlist.hpp"

namespace hcec::eps {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

struct EpsConfig {
  unsigned bits_limit = 20;  // l bound: PIs simulated inside one block
  unsigned max_pis = 36;     // larger jobs are refused up front
  unsigned workers = 1;      // power of two
  std::size_t memory_cap_bytes = std::size_t{256} << 20;
  double max_seconds = 60.0;  // <= 0 disables the wall-clock budget
  const std::atomic<bool>* cancel = nullptr;

  void validate() const;
};

struct EpsVerdict {
  enum class Kind { kEquivalent, kCounterexample, kResourceOut };
  Kind kind = Kind::kEquivalent;
  Assignment assignment;  // cone PIs, counterexample only
  std::string reason;     // resource-out only
  uint64_t rounds_completed = 0;
  uint64_t rounds_total = 0;
};

// theta_1 = 3, theta_{i+1} = (theta_i - 1)^2 + 1.
std::vector<BigInt> theta_sequence(unsigned n);

// Reference mode: every PI i gets probability 1/theta_i.  Over the common
// denominator D = prod(theta) = 2^(2^N) - 1 each PI numerator D / theta_i is
// a 2^N-bit integer, AND is bitwise AND of numerators and NOT is D - p, so the
// root probability is exact even with reconvergent fan-out.
struct RationalResult {
  BigRational probability;
  EpsVerdict verdict;
};
inline constexpr unsigned kRationalMaxPis = 8;
RationalResult eps_check_rational(const Cone& cone);

// Block value of PI j in round i with block width 2^l bits.
SimVector construct_initial_value(unsigned pi_index, uint64_t round, unsigned l, unsigned num_pis);

// Memory estimate nodes x 2^l bits (whole words), independent of workers.
// Propagation is tiled, so the buffers actually held are smaller; both are
// checked against memory_cap_bytes.
std::size_t predicted_memory(const Cone& cone, const EpsConfig& cfg);

EpsVerdict eps_check(const Cone& cone, const EpsConfig& cfg);

// Splits the rounds into cfg.workers contiguous slices (top bits of the round
// index, i.e. the highest PIs fixed per worker).
EpsVerdict eps_check_parallel(const Cone& cone, const EpsConfig& cfg);

}  // namespace hcec::eps
