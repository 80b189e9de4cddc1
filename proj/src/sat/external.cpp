#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include "hcec/sat.hpp"

namespace hcec::sat {

namespace {

class TempFile {
 public:
  TempFile() {
    std::string pattern = (std::filesystem::temp_directory_path() / "hcec-XXXXXX.cnf").string();
    const int fd = mkstemps(pattern.data(), 4);
    if (fd < 0) throw ExternalSolverError(ExternalSolverError::Kind::kSpawn, "cannot create temporary CNF file");
    ::close(fd);
    path_ = pattern;
  }
  ~TempFile() {
    std::error_code ec;
    std::filesystem::remove(path_, ec);
  }
  TempFile(const TempFile&) = delete;
  TempFile& operator=(const TempFile&) = delete;

  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') {
      out += "'\\''";
    } else {
      out += c;
    }
  }
  return out + "'";
}

}  // namespace

SatVerdict parse_competition_output(std::string_view text, const Cnf& cnf) {
  using Kind = ExternalSolverError::Kind;
  std::optional<SatVerdict::Kind> status;
  std::vector<uint8_t> model(std::size_t{cnf.num_vars} + 1, 0);
  bool terminated = false;

  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == 'c') continue;
    if (line.rfind("s ", 0) == 0) {
      if (status) throw ExternalSolverError(Kind::kMalformedOutput, "solver printed more than one status line");
      const std::string s = line.substr(2);
      if (s == "SATISFIABLE") {
        status = SatVerdict::Kind::kModel;
      } else if (s == "UNSATISFIABLE") {
        status = SatVerdict::Kind::kUnsat;
      } else if (s == "UNKNOWN") {
        status = SatVerdict::Kind::kBudget;
      } else {
        throw ExternalSolverError(Kind::kMalformedOutput, "unrecognized status line '" + line + "'");
      }
      continue;
    }
    if (line.rfind("v", 0) == 0) {
      std::istringstream vs(line.substr(1));
      long long x = 0;
      std::string tok;
      while (vs >> tok) {
        try {
          std::size_t used = 0;
          x = std::stoll(tok, &used);
          if (used != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
          throw ExternalSolverError(Kind::kMalformedOutput, "bad value token '" + tok + "'");
        }
        if (x == 0) {
          terminated = true;
          continue;
        }
        const auto v = static_cast<std::size_t>(std::llabs(x));
        if (v > cnf.num_vars) throw ExternalSolverError(Kind::kMalformedOutput, "value line names unknown variable " + tok);
        model[v] = x > 0 ? 1 : 0;
      }
      continue;
    }
    throw ExternalSolverError(Kind::kMalformedOutput, "unexpected output line '" + line + "'");
  }
  if (!status) throw ExternalSolverError(Kind::kMalformedOutput, "solver printed no status line");

  SatVerdict verdict;
  verdict.kind = *status;
  if (verdict.kind == SatVerdict::Kind::kModel) {
    if (!terminated) throw ExternalSolverError(Kind::kMalformedOutput, "model is not 0-terminated");
    if (!cnf.satisfied_by(model)) throw ExternalSolverError(Kind::kInvalidModel, "external model violates the formula");
    verdict.model = std::move(model);
  }
  return verdict;
}

SatVerdict solve_external(const Cnf& cnf, const std::string& command) {
  using Kind = ExternalSolverError::Kind;
  TempFile file;
  {
    std::ofstream out(file.path());
    out << write_dimacs(cnf);
    if (!out) throw ExternalSolverError(Kind::kSpawn, "cannot write CNF to " + file.path());
  }
  const std::string cmd = command + " " + shell_quote(file.path()) + " 2>/dev/null";
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (!pipe) throw ExternalSolverError(Kind::kSpawn, "failed to spawn '" + command + "'");
  std::string output;
  std::array<char, 4096> buf{};
  std::size_t got = 0;
  while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) output.append(buf.data(), got);
  const int status = ::pclose(pipe);
  if (status == -1) throw ExternalSolverError(Kind::kSpawn, "failed to wait for '" + command + "'");
  if (WIFEXITED(status) && (WEXITSTATUS(status) == 126 || WEXITSTATUS(status) == 127)) {
    throw ExternalSolverError(Kind::kSpawn, "could not execute '" + command + "'");
  }
  if (WIFSIGNALED(status)) throw ExternalSolverError(Kind::kSpawn, "'" + command + "' was killed by a signal");
  return parse_competition_output(output, cnf);
}

}  // namespace hcec::sat
