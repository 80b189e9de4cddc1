#pragma once

#include <cstdint>
#include <vector>

#include "hcec/netlist.hpp"

namespace testing_helpers {

// Truth table of every output: table[o][pattern], PI i = bit i of pattern.
inline std::vector<std::vector<bool>> truth_tables(const hcec::Aig& aig) {
  const uint32_t n = aig.num_pis();
  std::vector<std::vector<bool>> table(aig.num_outputs(), std::vector<bool>(std::size_t{1} << n));
  hcec::Assignment a(n);
  for (uint64_t p = 0; p < (uint64_t{1} << n); ++p) {
    for (uint32_t i = 0; i < n; ++i) a[i] = (p >> i) & 1u;
    const auto out = hcec::evaluate(aig, a);
    for (uint32_t o = 0; o < aig.num_outputs(); ++o) table[o][p] = out[o];
  }
  return table;
}

inline hcec::Assignment pattern(uint64_t p, uint32_t n) {
  hcec::Assignment a(n);
  for (uint32_t i = 0; i < n; ++i) a[i] = (p >> i) & 1u;
  return a;
}

inline bool root_value(const hcec::Cone& cone, const hcec::Assignment& a) { return hcec::evaluate(cone.aig, a)[0]; }

}  // namespace testing_helpers
