#include <charconv>
#include <cstdlib>
#include <sstream>

#include "hcec/sat.hpp"

namespace hcec::sat {

void Cnf::add_clause(std::vector<int> clause) {
  if (clause.empty()) throw std::invalid_argument("Cnf: empty clause");
  for (int x : clause) {
    if (x == 0 || static_cast<uint32_t>(std::abs(x)) > num_vars) throw std::invalid_argument("Cnf: literal out of range");
  }
  clauses.push_back(std::move(clause));
}

bool Cnf::satisfied_by(const std::vector<uint8_t>& model) const {
  if (model.size() < std::size_t{num_vars} + 1) return false;
  for (const auto& clause : clauses) {
    bool sat = false;
    for (int x : clause) {
      const bool v = model[static_cast<std::size_t>(std::abs(x))] != 0;
      if (v == (x > 0)) {
        sat = true;
        break;
      }
    }
    if (!sat) return false;
  }
  return true;
}

Cnf tseitin_encode(const Cone& cone) {
  const Aig& aig = cone.aig;
  Cnf cnf;
  cnf.var_map.assign(aig.num_nodes(), 0);
  auto lit = [&](Lit l) {
    const int v = static_cast<int>(cnf.var_map[l.node()]);
    return l.inverted() ? -v : v;
  };

  cnf.var_map[0] = cnf.new_var();
  cnf.add_clause({-static_cast<int>(cnf.var_map[0])});
  // Every cone PI gets a variable so that models always cover the support.
  for (uint32_t i = 0; i < aig.num_pis(); ++i) cnf.var_map[i + 1] = cnf.new_var();

  const auto in_cone = aig.tfi_mask(cone.root().node());
  for (uint32_t n = aig.num_pis() + 1; n < aig.num_nodes(); ++n) {
    if (!in_cone[n]) continue;
    cnf.var_map[n] = cnf.new_var();
    const int o = static_cast<int>(cnf.var_map[n]);
    const int a = lit(aig.node(n).fanin0);
    const int b = lit(aig.node(n).fanin1);
    cnf.add_clause({-o, a});
    cnf.add_clause({-o, b});
    cnf.add_clause({o, -a, -b});
  }
  cnf.add_clause({lit(cone.root())});
  return cnf;
}

Assignment model_to_assignment(const std::vector<uint8_t>& model, const Cnf& cnf, const Cone& cone) {
  Assignment out(cone.num_pis());
  for (uint32_t i = 0; i < cone.num_pis(); ++i) {
    const uint32_t node = i + 1;
    if (node >= cnf.var_map.size() || cnf.var_map[node] == 0) {
      throw std::invalid_argument("model_to_assignment: cone PI " + std::to_string(i) + " has no CNF variable");
    }
    const uint32_t v = cnf.var_map[node];
    if (v >= model.size()) throw std::invalid_argument("model_to_assignment: model does not cover variable " + std::to_string(v));
    out[i] = model[v];
  }
  return out;
}

std::string write_dimacs(const Cnf& cnf) {
  std::string out = "p cnf " + std::to_string(cnf.num_vars) + ' ' + std::to_string(cnf.clauses.size()) + '\n';
  for (const auto& clause : cnf.clauses) {
    for (int x : clause) {
      out += std::to_string(x);
      out += ' ';
    }
    out += "0\n";
  }
  return out;
}

Cnf parse_dimacs(std::string_view text) {
  Cnf cnf;
  bool have_header = false;
  std::size_t declared = 0;
  std::vector<int> current;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, (nl == std::string_view::npos ? text.size() : nl) - pos);
    pos = nl == std::string_view::npos ? text.size() : nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line[0] == 'c') continue;
    if (line[0] == 'p') {
      if (have_header) throw DimacsError("line " + std::to_string(line_no) + ": duplicate header");
      std::istringstream in{std::string(line)};
      std::string p, fmt;
      long long vars = -1, clauses = -1;
      if (!(in >> p >> fmt >> vars >> clauses) || p != "p" || fmt != "cnf" || vars < 0 || clauses < 0) {
        throw DimacsError("line " + std::to_string(line_no) + ": malformed 'p cnf' header");
      }
      cnf.num_vars = static_cast<uint32_t>(vars);
      declared = static_cast<std::size_t>(clauses);
      have_header = true;
      continue;
    }
    if (line[0] == '%') break;  // SATLIB trailer
    if (!have_header) throw DimacsError("line " + std::to_string(line_no) + ": clause before header");
    std::size_t i = 0;
    while (i < line.size()) {
      if (line[i] == ' ' || line[i] == '\t') {
        ++i;
        continue;
      }
      int x = 0;
      auto [ptr, ec] = std::from_chars(line.data() + i, line.data() + line.size(), x);
      if (ec != std::errc()) throw DimacsError("line " + std::to_string(line_no) + ": expected integer literal");
      i = static_cast<std::size_t>(ptr - line.data());
      if (x == 0) {
        if (current.empty()) throw DimacsError("line " + std::to_string(line_no) + ": empty clause");
        cnf.add_clause(std::move(current));
        current.clear();
        continue;
      }
      if (static_cast<uint32_t>(std::abs(x)) > cnf.num_vars) {
        throw DimacsError("line " + std::to_string(line_no) + ": variable exceeds header count");
      }
      current.push_back(x);
    }
  }
  if (!have_header) throw DimacsError("missing 'p cnf' header");
  if (!current.empty()) throw DimacsError("last clause is not 0-terminated");
  if (cnf.clauses.size() != declared) {
    throw DimacsError("header declares " + std::to_string(declared) + " clauses, found " + std::to_string(cnf.clauses.size()));
  }
  return cnf;
}

}  // namespace hcec::sat
