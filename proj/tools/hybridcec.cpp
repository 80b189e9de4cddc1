// hybridcec command-line driver.
//
// Exit codes: 0 equivalent, 1 not equivalent, 2 unknown, 3 usage or I/O error.

#include <algorithm>
#include <atomic>
#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "hcec/benchgen.hpp"
#include "hcec/report.hpp"
#include "hcec/sat.hpp"
#include "hcec/sweeper.hpp"

namespace {

constexpr int kExitEquivalent = 0;
constexpr int kExitNotEquivalent = 1;
constexpr int kExitUnknown = 2;
constexpr int kExitUsage = 3;

std::atomic<bool> g_cancel{false};

extern "C" void on_sigint(int) { g_cancel.store(true); }

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw UsageError("cannot write " + path);
}

std::string format_assignment(const hcec::Assignment& a) {
  std::string out;
  for (std::size_t i = 0; i < a.size(); ++i) out += std::to_string(i) + "=" + (a[i] ? "1" : "0") + "\n";
  return out;
}

hcec::Assignment parse_assignment(const std::string& text, uint32_t num_pis) {
  hcec::Assignment a(num_pis, 0);
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;  // verdict line and blanks
    const unsigned long idx = std::stoul(line.substr(0, eq));
    const unsigned long bit = std::stoul(line.substr(eq + 1));
    if (idx >= num_pis || bit > 1) throw UsageError("bad counterexample line '" + line + "'");
    a[idx] = static_cast<uint8_t>(bit);
  }
  return a;
}

int exit_code(hcec::SweepResult::Verdict v) {
  switch (v) {
    case hcec::SweepResult::Verdict::kEquivalent:
      return kExitEquivalent;
    case hcec::SweepResult::Verdict::kNonEquivalent:
      return kExitNotEquivalent;
    case hcec::SweepResult::Verdict::kUnknown:
      break;
  }
  return kExitUnknown;
}

struct CheckOptions {
  std::vector<std::string> inputs;
  std::string engine = "hybrid";
  double rho = 0.15;
  unsigned bits_limit = 20;
  unsigned eps_max_pis = 36;
  unsigned threads = 1;
  std::optional<uint64_t> seed;
  uint64_t sim_rounds = uint64_t{1} << 20;
  double timeout = 0.0;
  std::string external_sat;
  std::string dump_cnf;
  std::string stats_json;
  std::string cex_out;
  bool per_output = false;
  bool no_isd = false;
  bool no_strash = false;
  bool debug_checks = false;
  uint64_t sat_conflicts = 100000;
};

uint64_t resolve_seed(const std::optional<uint64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("HYBRIDCEC_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw UsageError(std::string("HYBRIDCEC_SEED is not an integer: ") + env);
    }
  }
  return 1;
}

int run_check(const CheckOptions& o) {
  hcec::Aig miter;
  if (o.inputs.size() == 1) {
    miter = hcec::parse_aiger(read_file(o.inputs[0]));
  } else {
    const hcec::Aig a = hcec::parse_aiger(read_file(o.inputs[0]));
    const hcec::Aig b = hcec::parse_aiger(read_file(o.inputs[1]));
    miter = o.per_output ? hcec::build_output_miter(a, b) : hcec::build_miter(a, b);
  }

  hcec::SweepConfig cfg;
  cfg.rho = o.rho;
  cfg.sim_patterns = o.sim_rounds;
  cfg.seed = resolve_seed(o.seed);
  cfg.sat_budget.max_conflicts = o.sat_conflicts;
  cfg.eps_config.bits_limit = o.bits_limit;
  cfg.eps_config.max_pis = o.eps_max_pis;
  cfg.threads = o.threads;
  cfg.isd_enabled = !o.no_isd;
  cfg.strash = !o.no_strash;
  cfg.timeout_seconds = o.timeout;
  cfg.external_sat = o.external_sat;
  cfg.dump_cnf_dir = o.dump_cnf;
  cfg.debug_checks = o.debug_checks;
  cfg.cancel = &g_cancel;
  if (o.engine == "hybrid") {
    cfg.engine = hcec::EngineMode::kHybrid;
  } else if (o.engine == "sat") {
    cfg.engine = hcec::EngineMode::kSatOnly;
  } else {
    cfg.engine = hcec::EngineMode::kEpsOnly;
  }
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }

  const hcec::SweepResult res = o.per_output ? hcec::sweep_per_output(miter, cfg) : hcec::sweep(miter, cfg);

  std::cout << hcec::verdict_name(res.verdict) << '\n';
  if (res.verdict == hcec::SweepResult::Verdict::kNonEquivalent) {
    if (res.failing_output) std::cout << "# failing output " << *res.failing_output << '\n';
    std::cout << format_assignment(res.counterexample);
  } else if (res.verdict == hcec::SweepResult::Verdict::kUnknown && !res.reason.empty()) {
    std::cerr << "hybridcec: " << res.reason << '\n';
  }
  std::cout.flush();
  if (!o.cex_out.empty() && res.verdict == hcec::SweepResult::Verdict::kNonEquivalent) {
    write_file(o.cex_out, format_assignment(res.counterexample));
  }
  if (!o.stats_json.empty()) {
    try {
      hcec::write_stats_json(res, o.stats_json);
    } catch (const std::runtime_error& e) {
      throw UsageError(e.what());
    }
  }
  return exit_code(res.verdict);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hybridcec: hybrid SAT / exhaustive-simulation equivalence checker for AIGs"};
  app.require_subcommand(1);

  CheckOptions check;
  auto* cmd_check = app.add_subcommand("check", "Check a miter, or two circuits against each other");
  cmd_check->add_option("inputs", check.inputs, "One miter AIGER file, or two circuit AIGER files")
      ->required()
      ->expected(1, 2)
      ->check(CLI::ExistingFile);
  cmd_check->add_option("--engine", check.engine, "hybrid, sat or eps")
      ->check(CLI::IsMember({"hybrid", "sat", "eps"}));
  cmd_check->add_option("--rho", check.rho, "XOR-density threshold for choosing EPS")->check(CLI::Range(0.0, 1.0));
  cmd_check->add_option("--bits-limit", check.bits_limit, "PIs enumerated inside one EPS block")->check(CLI::Range(1, 30));
  cmd_check->add_option("--eps-max-pis", check.eps_max_pis, "Cones wider than this never go to EPS");
  cmd_check->add_option("--threads", check.threads, "Threads per engine call")->check(CLI::PositiveNumber);
  cmd_check->add_option("--seed", check.seed, "Simulation seed (falls back to HYBRIDCEC_SEED)");
  cmd_check->add_option("--sim-rounds", check.sim_rounds, "Total random simulation patterns")->check(CLI::PositiveNumber);
  cmd_check->add_option("--timeout", check.timeout, "Global timeout in seconds (0 = none)")->check(CLI::NonNegativeNumber);
  cmd_check->add_option("--sat-conflicts", check.sat_conflicts, "Per-pair conflict budget")->check(CLI::PositiveNumber);
  cmd_check->add_option("--external-sat", check.external_sat, "Solver command; receives a DIMACS file path");
  cmd_check->add_option("--dump-cnf", check.dump_cnf, "Directory for the CNF of every SAT call");
  cmd_check->add_option("--stats-json", check.stats_json, "Write run statistics as JSON");
  cmd_check->add_option("--cex-out", check.cex_out, "Write the counterexample to a file");
  cmd_check->add_flag("--per-output", check.per_output, "Prove each output separately");
  cmd_check->add_flag("--no-isd", check.no_isd, "Disable identical structure detection");
  cmd_check->add_flag("--no-strash", check.no_strash, "Skip structural hashing before sweeping");
  cmd_check->add_flag("--debug-checks", check.debug_checks, "Re-simulate the miter after every merge");

  std::string family;
  hcec::bench::GenSpec spec;
  std::string gen_out;
  auto* cmd_gen = app.add_subcommand("gen", "Generate a benchmark circuit");
  cmd_gen->add_option("--family", family, "adder_ripple, adder_cla, mult_array or mult_columnwise")
      ->required()
      ->check(CLI::IsMember({"adder_ripple", "adder_cla", "mult_array", "mult_columnwise"}));
  cmd_gen->add_option("--width", spec.width, "Operand width in bits")->required()->check(CLI::Range(1, 64));
  cmd_gen->add_option("--seed", spec.seed, "Seed for rewrite and corrupt");
  cmd_gen->add_option("--replicate", spec.copies, "Copies on disjoint inputs")->check(CLI::PositiveNumber);
  cmd_gen->add_option("--rewrite", spec.rewrite_steps, "Number of function-preserving rewrite steps");
  cmd_gen->add_flag("--corrupt", spec.corrupt, "Flip one fan-in polarity (oracle-checked)");
  cmd_gen->add_option("-o,--output", gen_out, "Output AIGER file")->required();

  std::string miter_a, miter_b, miter_out;
  auto* cmd_miter = app.add_subcommand("gen-miter", "Build the miter of two circuits");
  cmd_miter->add_option("--a", miter_a, "First circuit")->required()->check(CLI::ExistingFile);
  cmd_miter->add_option("--b", miter_b, "Second circuit")->required()->check(CLI::ExistingFile);
  cmd_miter->add_option("-o,--output", miter_out, "Output AIGER file")->required();

  std::string oracle_in, oracle_cex;
  unsigned oracle_max = 24;
  auto* cmd_oracle = app.add_subcommand("oracle", "Exhaustively check a miter, or confirm a counterexample");
  cmd_oracle->add_option("miter", oracle_in, "Miter AIGER file")->required()->check(CLI::ExistingFile);
  cmd_oracle->add_option("--max-pis", oracle_max, "Refuse miters with more inputs");
  cmd_oracle->add_option("--cex", oracle_cex, "Counterexample file (pi_index=bit lines) to evaluate")
      ->check(CLI::ExistingFile);

  std::string solve_in;
  uint64_t solve_conflicts = 1000000;
  auto* cmd_solve = app.add_subcommand("solve", "Solve a DIMACS CNF and print SAT-competition output");
  cmd_solve->add_option("cnf", solve_in, "DIMACS file")->required()->check(CLI::ExistingFile);
  cmd_solve->add_option("--conflicts", solve_conflicts, "Conflict budget");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  std::signal(SIGINT, on_sigint);
  try {
    if (*cmd_check) return run_check(check);
    if (*cmd_gen) {
      spec.family = hcec::bench::parse_family(family);
      hcec::write_aiger_file(hcec::bench::generate(spec), gen_out);
      return 0;
    }
    if (*cmd_miter) {
      const hcec::Aig a = hcec::parse_aiger(read_file(miter_a));
      const hcec::Aig b = hcec::parse_aiger(read_file(miter_b));
      write_file(miter_out, hcec::write_aiger(hcec::build_miter(a, b)));
      return 0;
    }
    if (*cmd_oracle) {
      const hcec::Aig miter = hcec::parse_aiger(read_file(oracle_in));
      if (!oracle_cex.empty()) {
        const auto outs = hcec::evaluate(miter, parse_assignment(read_file(oracle_cex), miter.num_pis()));
        const bool raised = std::find(outs.begin(), outs.end(), true) != outs.end();
        std::cout << (raised ? "CONFIRMED" : "REFUTED") << '\n';
        return raised ? kExitNotEquivalent : kExitEquivalent;
      }
      const auto r = hcec::bench::oracle_check(miter, oracle_max);
      std::cout << (r.equivalent ? "EQUIVALENT" : "NOT EQUIVALENT") << '\n';
      if (!r.equivalent) std::cout << format_assignment(r.counterexample);
      return r.equivalent ? kExitEquivalent : kExitNotEquivalent;
    }
    if (*cmd_solve) {
      const hcec::sat::Cnf cnf = hcec::sat::parse_dimacs(read_file(solve_in));
      const auto v = hcec::sat::solve(cnf, {solve_conflicts, 3600.0}, &g_cancel);
      switch (v.kind) {
        case hcec::sat::SatVerdict::Kind::kUnsat:
          std::cout << "s UNSATISFIABLE\n";
          return 20;
        case hcec::sat::SatVerdict::Kind::kModel: {
          std::cout << "s SATISFIABLE\nv";
          for (uint32_t x = 1; x <= cnf.num_vars; ++x) std::cout << ' ' << (v.model[x] ? "" : "-") << x;
          std::cout << " 0\n";
          return 10;
        }
        case hcec::sat::SatVerdict::Kind::kBudget:
          std::cout << "s UNKNOWN\n";
          return 0;
      }
    }
  } catch (const UsageError& e) {
    std::cerr << "hybridcec: " << e.what() << '\n';
    return kExitUsage;
  } catch (const hcec::AigerError& e) {
    std::cerr << "hybridcec: " << e.what() << '\n';
    return kExitUsage;
  } catch (const hcec::NetlistError& e) {
    std::cerr << "hybridcec: " << e.what() << '\n';
    return kExitUsage;
  } catch (const hcec::sat::DimacsError& e) {
    std::cerr << "hybridcec: " << e.what() << '\n';
    return kExitUsage;
  } catch (const hcec::sat::ExternalSolverError& e) {
    std::cerr << "hybridcec: external solver: " << e.what() << '\n';
    return kExitUsage;
  } catch (const hcec::bench::GenError& e) {
    std::cerr << "hybridcec: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "hybridcec: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
