#include <doctest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "hcec/benchgen.hpp"
#include "hcec/report.hpp"

namespace fs = std::filesystem;
using namespace hcec;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

// Runs the CLI with stderr discarded and returns exit code and stdout.
Run run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + (env.empty() ? "" : " ") + HYBRIDCEC_BIN + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  Run r;
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = fs::temp_directory_path() / ("hcec_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string operator/(const std::string& name) const { return (path_ / name).string(); }

 private:
  fs::path path_;
};

}  // namespace

TEST_CASE("usage errors exit with 3") {
  CHECK(run("").code == 3);
  CHECK(run("check").code == 3);
  CHECK(run("check /nonexistent.aig").code == 3);
  CHECK(run("frobnicate").code == 3);
  TempDir dir;
  write_aiger_file(bench::adder_ripple(2), dir / "a.aig");
  CHECK(run("check " + dir / "a.aig" + " --engine magic").code == 3);
  CHECK(run("check " + dir / "a.aig" + " --rho 2").code == 3);
  {
    std::ofstream bad(dir / "bad.aag");
    bad << "aag 1 1 0 1\n2\n";
  }
  CHECK(run("check " + dir / "bad.aag").code == 3);
  // Circuits with different interfaces.
  write_aiger_file(bench::adder_ripple(3), dir / "b.aig");
  CHECK(run("check " + dir / "a.aig " + dir / "b.aig").code == 3);
  CHECK(run("check " + dir / "a.aig", "HYBRIDCEC_SEED=abc").code == 3);
  CHECK(run("check " + dir / "a.aig " + dir / "a.aig --stats-json /nonexistent/dir/s.json").code == 3);
}

TEST_CASE("equivalent circuits exit with 0") {
  TempDir dir;
  write_aiger_file(bench::mult_array(4), dir / "a.aig");
  write_aiger_file(bench::rewrite(bench::mult_columnwise(4), 20, 2), dir / "b.aig");
  for (const char* engine : {"hybrid", "sat", "eps"}) {
    const Run r = run("check " + dir / "a.aig " + dir / "b.aig --engine " + engine);
    CHECK(r.code == 0);
    CHECK(r.out == "EQUIVALENT\n");
  }
  // The same check through an explicit miter file.
  REQUIRE(run("gen-miter --a " + dir / "a.aig --b " + dir / "b.aig -o " + dir / "m.aig").code == 0);
  CHECK(run("check " + dir / "m.aig --threads 2").code == 0);
  CHECK(run("oracle " + dir / "m.aig").code == 0);
}

TEST_CASE("counterexamples are printed and confirmed by the oracle") {
  TempDir dir;
  for (uint64_t seed = 1; seed <= 6; ++seed) {
    const Aig base = bench::mult_array(3);
    write_aiger_file(base, dir / "a.aig");
    write_aiger_file(bench::corrupt(base, seed), dir / "b.aig");
    REQUIRE(run("gen-miter --a " + dir / "a.aig --b " + dir / "b.aig -o " + dir / "m.aig").code == 0);
    const Run r = run("check " + dir / "m.aig --seed " + std::to_string(seed) + " --cex-out " + dir / "cex.txt");
    REQUIRE(r.code == 1);
    CHECK(first_line(r.out) == "NOT EQUIVALENT");
    // One i=bit line per PI after the verdict.
    std::istringstream lines(r.out.substr(r.out.find('\n') + 1));
    std::string line;
    int i = 0;
    while (std::getline(lines, line)) {
      REQUIRE(line.size() == std::to_string(i).size() + 2);
      CHECK(line.rfind(std::to_string(i) + "=", 0) == 0);
      CHECK((line.back() == '0' || line.back() == '1'));
      ++i;
    }
    CHECK(i == 6);
    CHECK(slurp(dir / "cex.txt") == r.out.substr(r.out.find('\n') + 1));
    const Run confirm = run("oracle " + dir / "m.aig --cex " + dir / "cex.txt");
    CHECK(confirm.code == 1);
    CHECK(confirm.out == "CONFIRMED\n");
  }
}

TEST_CASE("the oracle refutes a wrong counterexample") {
  TempDir dir;
  AigBuilder a(2), b(2);
  a.add_output(a.and_(a.pi(0), a.pi(1)));
  b.add_output(b.or_(b.pi(0), b.pi(1)));
  write_aiger_file(build_miter(a.aig(), b.aig()), dir / "m.aig");
  {
    std::ofstream cex(dir / "cex.txt");
    cex << "0=1\n1=1\n";
  }
  const Run r = run("oracle " + dir / "m.aig --cex " + dir / "cex.txt");
  CHECK(r.code == 0);
  CHECK(r.out == "REFUTED\n");
  const Run o = run("oracle " + dir / "m.aig");
  CHECK(o.code == 1);
  CHECK(o.out == "NOT EQUIVALENT\n0=1\n1=0\n");
}

TEST_CASE("unknown results exit with 2") {
  TempDir dir;
  // A 40-PI XOR chain is out of reach of EPS-only checking.
  const Aig chain = bench::xor_chains({39});
  AigBuilder rev(40);
  Lit acc = rev.pi(39);
  for (int i = 38; i >= 0; --i) acc = rev.xor_(acc, rev.pi(static_cast<uint32_t>(i)));
  rev.add_output(acc);
  write_aiger_file(chain, dir / "a.aig");
  write_aiger_file(rev.aig(), dir / "b.aig");
  const Run r = run("check " + dir / "a.aig " + dir / "b.aig --engine eps");
  CHECK(r.code == 2);
  CHECK(r.out == "UNKNOWN\n");
  CHECK(run("check " + dir / "a.aig " + dir / "b.aig").code == 0);
}

TEST_CASE("gen writes the requested circuit") {
  TempDir dir;
  REQUIRE(run("gen --family adder_cla --width 4 -o " + dir / "cla.aig").code == 0);
  const Aig cla = read_aiger_file(dir / "cla.aig");
  CHECK(cla.num_pis() == 8);
  CHECK(cla.num_outputs() == 5);
  CHECK(bench::oracle_equivalent(cla, bench::adder_ripple(4)));

  REQUIRE(run("gen --family mult_array --width 3 --replicate 2 --rewrite 10 --seed 4 -o " + dir / "r.aig").code == 0);
  const Aig rep = read_aiger_file(dir / "r.aig");
  CHECK(bench::oracle_equivalent(rep, bench::replicated(bench::mult_array(3), 2)));

  REQUIRE(run("gen --family mult_array --width 3 --corrupt --seed 4 -o " + dir / "c.aig").code == 0);
  CHECK_FALSE(bench::oracle_equivalent(read_aiger_file(dir / "c.aig"), bench::mult_array(3)));

  // Same seed, same bytes.
  REQUIRE(run("gen --family mult_array --width 3 --replicate 2 --rewrite 10 --seed 4 -o " + dir / "r2.aig").code == 0);
  CHECK(slurp(dir / "r.aig") == slurp(dir / "r2.aig"));

  CHECK(run("gen --family booth --width 3 -o " + dir / "x.aig").code == 3);
  CHECK(run("gen --family mult_array --width 0 -o " + dir / "x.aig").code == 3);
}

TEST_CASE("stats json validates and is reproducible") {
  TempDir dir;
  std::ifstream sin(HCEC_SCHEMA_PATH);
  const Json schema = Json::parse(sin);
  write_aiger_file(bench::replicated(bench::mult_array(3), 2), dir / "a.aig");
  write_aiger_file(bench::replicated(bench::mult_columnwise(3), 2), dir / "b.aig");
  const std::string args = "check " + dir / "a.aig " + dir / "b.aig --sim-rounds 256 --stats-json ";
  REQUIRE(run(args + dir / "s1.json").code == 0);
  REQUIRE(run(args + dir / "s2.json", "HYBRIDCEC_SEED=1").code == 0);
  const Json s1 = Json::parse(slurp(dir / "s1.json"));
  const Json s2 = Json::parse(slurp(dir / "s2.json"));
  CHECK(validate_json(s1, schema).empty());
  CHECK(s1["verdict"] == "EQUIVALENT");
  // The default seed is 1, so both runs are identical.
  CHECK(strip_wall_clock(s1) == strip_wall_clock(s2));
  REQUIRE(run(args + dir / "s3.json --seed 9", "HYBRIDCEC_SEED=1").code == 0);
  REQUIRE(run(args + dir / "s4.json", "HYBRIDCEC_SEED=9").code == 0);
  CHECK(strip_wall_clock(Json::parse(slurp(dir / "s3.json"))) ==
        strip_wall_clock(Json::parse(slurp(dir / "s4.json"))));
}

TEST_CASE("per-output mode names the failing output") {
  TempDir dir;
  const Aig base = bench::mult_array(3);
  AigBuilder bld(base.num_pis());
  std::vector<Lit> map(base.num_nodes());
  map[0] = kFalse;
  for (uint32_t i = 0; i < base.num_pis(); ++i) map[i + 1] = bld.pi(i);
  for (uint32_t n = base.num_pis() + 1; n < base.num_nodes(); ++n) {
    const auto& g = base.node(n);
    map[n] = bld.and_(map[g.fanin0.node()] ^ g.fanin0.inverted(), map[g.fanin1.node()] ^ g.fanin1.inverted());
  }
  for (uint32_t o = 0; o < base.num_outputs(); ++o) {
    const Lit l = map[base.output(o).node()] ^ base.output(o).inverted();
    bld.add_output(o == 4 ? !l : l);
  }
  write_aiger_file(base, dir / "a.aig");
  write_aiger_file(bld.aig(), dir / "b.aig");
  const Run r = run("check " + dir / "a.aig " + dir / "b.aig --per-output");
  CHECK(r.code == 1);
  CHECK(first_line(r.out) == "NOT EQUIVALENT");
  CHECK(r.out.find("# failing output 4\n") != std::string::npos);
}

TEST_CASE("solve prints competition output") {
  TempDir dir;
  {
    std::ofstream f(dir / "sat.cnf");
    f << "p cnf 2 2\n1 2 0\n-1 0\n";
    std::ofstream g(dir / "unsat.cnf");
    g << "p cnf 1 2\n1 0\n-1 0\n";
    std::ofstream h(dir / "bad.cnf");
    h << "p cnf 1 1\n2 0\n";
  }
  const Run s = run("solve " + dir / "sat.cnf");
  CHECK(s.code == 10);
  CHECK(s.out == "s SATISFIABLE\nv -1 2 0\n");
  const Run u = run("solve " + dir / "unsat.cnf");
  CHECK(u.code == 20);
  CHECK(u.out == "s UNSATISFIABLE\n");
  CHECK(run("solve " + dir / "bad.cnf").code == 3);
}
