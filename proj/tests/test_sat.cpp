#include <doctest.h>

#include <atomic>
#include <random>

#include "hcec/benchgen.hpp"
#include "hcec/sat.hpp"
#include "helpers.hpp"

using namespace hcec;
using namespace hcec::sat;
using Kind = SatVerdict::Kind;

namespace {

Cnf random_cnf(std::mt19937_64& rng, uint32_t n, int m, int max_len) {
  Cnf c;
  c.num_vars = n;
  for (int i = 0; i < m; ++i) {
    std::vector<int> cl;
    const int k = 1 + static_cast<int>(rng() % max_len);
    for (int j = 0; j < k; ++j) {
      const int v = 1 + static_cast<int>(rng() % n);
      cl.push_back(rng() & 1 ? v : -v);
    }
    c.add_clause(cl);
  }
  return c;
}

bool brute_force_sat(const Cnf& c) {
  std::vector<uint8_t> model(c.num_vars + 1);
  for (uint64_t p = 0; p < (uint64_t{1} << c.num_vars); ++p) {
    for (uint32_t v = 1; v <= c.num_vars; ++v) model[v] = (p >> (v - 1)) & 1u;
    if (c.satisfied_by(model)) return true;
  }
  return false;
}

// n + 1 pigeons into n holes.
Cnf pigeonhole(int n) {
  Cnf c;
  auto var = [n](int p, int h) { return p * n + h + 1; };
  c.num_vars = static_cast<uint32_t>((n + 1) * n);
  for (int p = 0; p <= n; ++p) {
    std::vector<int> cl;
    for (int h = 0; h < n; ++h) cl.push_back(var(p, h));
    c.add_clause(cl);
  }
  for (int h = 0; h < n; ++h)
    for (int p = 0; p <= n; ++p)
      for (int q = p + 1; q <= n; ++q) c.add_clause({-var(p, h), -var(q, h)});
  return c;
}

}  // namespace

TEST_CASE("add_clause rejects empty clauses and unknown variables") {
  Cnf c;
  c.num_vars = 2;
  CHECK_THROWS_AS(c.add_clause({}), std::invalid_argument);
  CHECK_THROWS_AS(c.add_clause({3}), std::invalid_argument);
  CHECK_THROWS_AS(c.add_clause({0, 1}), std::invalid_argument);
  c.add_clause({1, -2});
  CHECK(c.clauses.size() == 1);
}

TEST_CASE("CDCL agrees with brute force on small random formulas") {
  std::mt19937_64 rng(11);
  int sat = 0, unsat = 0;
  for (int t = 0; t < 3000; ++t) {
    const uint32_t n = 3 + rng() % 10;
    const Cnf c = random_cnf(rng, n, 1 + static_cast<int>(rng() % (5 * n)), 3);
    const auto r = solve(c, {1000000, 30});
    REQUIRE(r.kind != Kind::kBudget);
    REQUIRE((r.kind == Kind::kModel) == brute_force_sat(c));
    if (r.kind == Kind::kModel) {
      ++sat;
      CHECK(c.satisfied_by(r.model));
    } else {
      ++unsat;
    }
  }
  CHECK(sat > 100);
  CHECK(unsat > 100);
}

TEST_CASE("larger random 3-SAT near the threshold exercises learnt clause reduction") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 40; ++t) {
    const uint32_t n = 100;
    const Cnf c = random_cnf(rng, n, 426, 3);
    const auto r = solve(c, {2000000, 60});
    REQUIRE(r.kind != Kind::kBudget);
    if (r.kind == Kind::kModel) CHECK(c.satisfied_by(r.model));
    for (unsigned w : {2u, 4u}) {
      const auto p = solve_parallel(c, w, {2000000, 60});
      CHECK(p.kind == r.kind);
      if (p.kind == Kind::kModel) CHECK(c.satisfied_by(p.model));
    }
  }
}

TEST_CASE("pigeonhole is unsat and a tiny budget reports Budget") {
  CHECK(solve(pigeonhole(5), {1000000, 30}).kind == Kind::kUnsat);
  const auto r = solve(pigeonhole(9), {50, 30});
  CHECK(r.kind == Kind::kBudget);
  CHECK(r.conflicts >= 50);
}

TEST_CASE("a raised cancel flag stops the search") {
  std::atomic<bool> cancel{true};
  CHECK(solve(pigeonhole(10), {100000000, 30}, &cancel).kind == Kind::kBudget);
  CHECK(solve_parallel(pigeonhole(10), 4, {100000000, 30}, &cancel).kind == Kind::kBudget);
}

TEST_CASE("Tseitin encoding: a model is exactly an input raising the root") {
  // root = a XOR b over three inputs; c is in the cone support only via pi_map.
  AigBuilder bld(3);
  const Lit x = bld.xor_(bld.pi(0), bld.pi(1));
  bld.add_output(bld.and_(x, bld.pi(2)));
  const Cone cone = extract_cone(bld.aig(), bld.aig().output(0));
  const Cnf cnf = tseitin_encode(cone);
  CHECK(cnf.num_vars == 1 + 3 + 4);  // constant, PIs, ANDs
  CHECK(cnf.clauses.size() == 1 + 3 * 4 + 1);
  const auto r = solve(cnf, {1000, 10});
  REQUIRE(r.kind == Kind::kModel);
  const Assignment a = model_to_assignment(r.model, cnf, cone);
  CHECK(testing_helpers::root_value(cone, a));

  // Unsat for a constant-zero root.
  AigBuilder z(2, false);
  const Lit g = z.raw_and(z.pi(0), z.pi(1));
  z.add_output(z.raw_and(g, !z.pi(0)));
  const Cone zc = extract_cone(z.aig(), z.aig().output(0));
  CHECK(solve(tseitin_encode(zc), {1000, 10}).kind == Kind::kUnsat);
}

TEST_CASE("solve_parallel matches solve on multiplier miter cones") {
  const Aig m = build_miter(bench::mult_array(4), bench::mult_columnwise(4));
  const Aig bad = build_miter(bench::mult_array(4), bench::corrupt(bench::mult_columnwise(4), 3));
  for (const Aig* miter : {&m, &bad}) {
    const Aig reduced = or_reduce_outputs(*miter);
    const Cone cone = extract_cone(reduced, reduced.output(0));
    const Cnf cnf = tseitin_encode(cone);
    const auto base = solve(cnf, {1000000, 60});
    for (unsigned w : {2u, 4u, 8u}) {
      const auto p = solve_parallel(cnf, w, {1000000, 60});
      CHECK(p.kind == base.kind);
      if (p.kind == Kind::kModel) CHECK(cnf.satisfied_by(p.model));
    }
  }
}

TEST_CASE("solve_parallel requires a power of two of at least two workers") {
  const Cnf c = pigeonhole(3);
  CHECK_THROWS_AS(solve_parallel(c, 3, {}), std::invalid_argument);
  CHECK_THROWS_AS(solve_parallel(c, 1, {}), std::invalid_argument);
}

TEST_CASE("cube variables are the most frequent, ties to the lowest index") {
  Cnf c;
  c.num_vars = 5;
  c.add_clause({4, 2});
  c.add_clause({-4, 3});
  c.add_clause({2, 5});
  c.add_clause({-4, -2, 1});
  // occurrences: 4 -> 3, 2 -> 3, then 1, 3, 5 with one each.
  CHECK(select_cube_variables(c, 2) == std::vector<uint32_t>{2, 4});
  CHECK(select_cube_variables(c, 3) == std::vector<uint32_t>{2, 4, 1});
}

TEST_CASE("DIMACS round trip and strict parsing") {
  Cnf c;
  c.num_vars = 3;
  c.add_clause({1, -2});
  c.add_clause({3});
  const std::string text = write_dimacs(c);
  CHECK(text == "p cnf 3 2\n1 -2 0\n3 0\n");
  const Cnf back = parse_dimacs(text);
  CHECK(back.num_vars == 3);
  CHECK(back.clauses == c.clauses);

  CHECK(parse_dimacs("c comment\np cnf 2 1\n1 -2 0\n%\n0\n").clauses.size() == 1);
  CHECK(parse_dimacs("p cnf 2 2\n1 -2\n 0 2 0\n").clauses.size() == 2);
  CHECK_THROWS_AS(parse_dimacs("1 2 0\n"), DimacsError);
  CHECK_THROWS_AS(parse_dimacs("p cnf 2 1\np cnf 2 1\n1 0\n"), DimacsError);
  CHECK_THROWS_AS(parse_dimacs("p cnf 2 1\n3 0\n"), DimacsError);
  CHECK_THROWS_AS(parse_dimacs("p cnf 2 2\n1 0\n"), DimacsError);
  CHECK_THROWS_AS(parse_dimacs("p cnf 2 1\n0\n"), DimacsError);
  CHECK_THROWS_AS(parse_dimacs("p cnf 2 1\n1 x 0\n"), DimacsError);
  CHECK_THROWS_AS(parse_dimacs("p dnf 2 1\n1 0\n"), DimacsError);
}

TEST_CASE("competition output parsing") {
  Cnf c;
  c.num_vars = 3;
  c.add_clause({1, 2});
  c.add_clause({-1, 3});

  CHECK(parse_competition_output("c hi\ns UNSATISFIABLE\n", c).kind == Kind::kUnsat);
  CHECK(parse_competition_output("s UNKNOWN\n", c).kind == Kind::kBudget);
  const auto sat = parse_competition_output("s SATISFIABLE\nv 1 -2\nv 3 0\n", c);
  REQUIRE(sat.kind == Kind::kModel);
  CHECK(sat.model == std::vector<uint8_t>{0, 1, 0, 1});

  auto kind_of = [&](std::string_view text) {
    try {
      parse_competition_output(text, c);
    } catch (const ExternalSolverError& e) {
      return static_cast<int>(e.kind());
    }
    return -1;
  };
  const int malformed = static_cast<int>(ExternalSolverError::Kind::kMalformedOutput);
  const int invalid = static_cast<int>(ExternalSolverError::Kind::kInvalidModel);
  CHECK(kind_of("") == malformed);
  CHECK(kind_of("s MAYBE\n") == malformed);
  CHECK(kind_of("s SATISFIABLE\ns SATISFIABLE\nv 1 3 0\n") == malformed);
  CHECK(kind_of("s SATISFIABLE\nv 1 3\n") == malformed);
  CHECK(kind_of("s SATISFIABLE\nv 1 9 0\n") == malformed);
  CHECK(kind_of("garbage\n") == malformed);
  CHECK(kind_of("s SATISFIABLE\nv 1 -3 0\n") == invalid);
}

TEST_CASE("external solver adapter") {
  const std::string bin = HYBRIDCEC_BIN;
  const Cnf sat_cnf = parse_dimacs("p cnf 3 2\n1 2 0\n-1 3 0\n");
  const auto r = solve_external(sat_cnf, bin + " solve");
  REQUIRE(r.kind == Kind::kModel);
  CHECK(sat_cnf.satisfied_by(r.model));
  CHECK(solve_external(pigeonhole(4), bin + " solve").kind == Kind::kUnsat);

  try {
    solve_external(sat_cnf, "/nonexistent/solver-binary");
    FAIL("expected a spawn error");
  } catch (const ExternalSolverError& e) {
    CHECK(e.kind() == ExternalSolverError::Kind::kSpawn);
  }
  try {
    solve_external(sat_cnf, "echo");
    FAIL("expected malformed output");
  } catch (const ExternalSolverError& e) {
    CHECK(e.kind() == ExternalSolverError::Kind::kMalformedOutput);
  }
}
