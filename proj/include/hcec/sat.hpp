#pragma once

#include <atomic>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hcec/netlist.hpp"

namespace hcec::sat {

// DIMACS-style formula: variables 1..num_vars, literals are signed ints.
struct Cnf {
  uint32_t num_vars = 0;
  std::vector<std::vector<int>> clauses;
  // Cone node index -> variable (0 when the node is not encoded).
  std::vector<uint32_t> var_map;

  uint32_t new_var() { return ++num_vars; }
  void add_clause(std::vector<int> clause);
  bool satisfied_by(const std::vector<uint8_t>& model) const;
};

struct SatBudget {
  uint64_t max_conflicts = 100000;
  double max_seconds = 60.0;

  SatBudget scaled(double factor) const {
    return {static_cast<uint64_t>(static_cast<double>(max_conflicts) * factor), max_seconds * factor};
  }
};

struct SatVerdict {
  enum class Kind { kUnsat, kModel, kBudget };
  Kind kind = Kind::kBudget;
  // model[v] for v in 1..num_vars; index 0 unused.
  std::vector<uint8_t> model;
  uint64_t conflicts = 0;
};

// Tseitin encoding of a single-rooted cone with the root asserted true, so
// Unsat means the root is constant 0.
Cnf tseitin_encode(const Cone& cone);

// Complete CDCL search: two watched literals, first-UIP learning with clause
// minimization, VSIDS, phase saving, Luby restarts and LBD-based reduction.
SatVerdict solve(const Cnf& cnf, const SatBudget& budget, const std::atomic<bool>* cancel = nullptr);

// Cube-and-conquer over workers = 2^k sub-solves.  The k cube variables are
// the most frequently occurring ones (ties to the lowest index).
SatVerdict solve_parallel(const Cnf& cnf, unsigned workers, const SatBudget& budget,
                          const std::atomic<bool>* cancel = nullptr);
std::vector<uint32_t> select_cube_variables(const Cnf& cnf, unsigned k);

class ExternalSolverError : public std::runtime_error {
 public:
  enum class Kind { kSpawn, kMalformedOutput, kInvalidModel };
  ExternalSolverError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

// Runs `command <cnf-file>` and reads SAT-competition output.
SatVerdict solve_external(const Cnf& cnf, const std::string& command);

// Parses "s ..." / "v ..." solver output; throws ExternalSolverError.
SatVerdict parse_competition_output(std::string_view text, const Cnf& cnf);

// Assignment over the cone PIs taken from a model.
Assignment model_to_assignment(const std::vector<uint8_t>& model, const Cnf& cnf, const Cone& cone);

class DimacsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string write_dimacs(const Cnf& cnf);
Cnf parse_dimacs(std::string_view text);

}  // namespace hcec::sat
