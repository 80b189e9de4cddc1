#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "hcec/netlist.hpp"

namespace hcec {

AigerError::AigerError(const std::string& what, std::size_t position, bool binary_offset)
    : std::runtime_error((binary_offset ? "byte " : "line ") + std::to_string(position) + ": " + what),
      position_(position) {}

namespace {

struct Header {
  bool binary = false;
  uint32_t max_var = 0, inputs = 0, latches = 0, outputs = 0, ands = 0;
};

class Cursor {
 public:
  explicit Cursor(std::string_view bytes) : bytes_(bytes) {}

  bool at_end() const { return pos_ >= bytes_.size(); }
  std::size_t offset() const { return pos_; }
  std::size_t line() const { return line_; }

  // Next line without the terminator; false at end of input.
  bool next_line(std::string_view& out) {
    if (at_end()) return false;
    const std::size_t nl = bytes_.find('\n', pos_);
    const std::size_t end = nl == std::string_view::npos ? bytes_.size() : nl;
    out = bytes_.substr(pos_, end - pos_);
    if (!out.empty() && out.back() == '\r') out.remove_suffix(1);
    pos_ = nl == std::string_view::npos ? bytes_.size() : nl + 1;
    ++line_;
    return true;
  }

  // AIGER 7-bit little-endian varint.
  uint32_t read_delta() {
    uint64_t value = 0;
    unsigned shift = 0;
    for (;;) {
      if (at_end()) throw AigerError("unexpected end of binary AND section", pos_, true);
      const auto byte = static_cast<unsigned char>(bytes_[pos_++]);
      value |= uint64_t{byte & 0x7fu} << shift;
      if (!(byte & 0x80u)) break;
      shift += 7;
      if (shift > 35) throw AigerError("delta encoding overflow", pos_, true);
    }
    if (value > 0xffffffffull) throw AigerError("delta encoding overflow", pos_, true);
    return static_cast<uint32_t>(value);
  }

 private:
  std::string_view bytes_;
  std::size_t pos_ = 0;
  std::size_t line_ = 0;
};

std::vector<uint32_t> parse_numbers(std::string_view text, std::size_t line) {
  std::vector<uint32_t> out;
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] == ' ' || text[i] == '\t') {
      ++i;
      continue;
    }
    uint32_t v = 0;
    auto [ptr, ec] = std::from_chars(text.data() + i, text.data() + text.size(), v);
    if (ec != std::errc() || (ptr != text.data() + text.size() && *ptr != ' ' && *ptr != '\t')) {
      throw AigerError("expected unsigned integer in '" + std::string(text) + "'", line, false);
    }
    out.push_back(v);
    i = static_cast<std::size_t>(ptr - text.data());
  }
  return out;
}

Header parse_header(Cursor& cur) {
  std::string_view line;
  if (!cur.next_line(line)) throw AigerError("empty input", 1, false);
  Header h;
  if (line.starts_with("aag ")) {
    h.binary = false;
  } else if (line.starts_with("aig ")) {
    h.binary = true;
  } else {
    throw AigerError("header must start with 'aag' or 'aig'", cur.line(), false);
  }
  const auto nums = parse_numbers(line.substr(4), cur.line());
  if (nums.size() < 5 || nums.size() > 9) throw AigerError("malformed header", cur.line(), false);
  h.max_var = nums[0];
  h.inputs = nums[1];
  h.latches = nums[2];
  h.outputs = nums[3];
  h.ands = nums[4];
  if (h.latches > 0) throw AigerError("sequential AIGER (latch count > 0) is not supported", cur.line(), false);
  for (std::size_t i = 5; i < nums.size(); ++i) {
    if (nums[i] != 0) throw AigerError("bad-state/constraint/justice/fairness sections are not supported", cur.line(), false);
  }
  if (uint64_t{h.inputs} + h.ands > h.max_var) throw AigerError("header: M < I + L + A", cur.line(), false);
  if (h.binary && h.max_var != h.inputs + h.ands) throw AigerError("binary header requires M = I + L + A", cur.line(), false);
  return h;
}

uint32_t single_number(Cursor& cur, const char* what) {
  std::string_view line;
  if (!cur.next_line(line)) throw AigerError(std::string("unexpected end of input while reading ") + what, cur.line() + 1, false);
  const auto nums = parse_numbers(line, cur.line());
  if (nums.size() != 1) throw AigerError(std::string("expected one literal for ") + what, cur.line(), false);
  return nums[0];
}

Aig parse_ascii(Cursor& cur, const Header& h) {
  enum class Kind : uint8_t { kNone, kInput, kAnd };
  struct Def {
    Kind kind = Kind::kNone;
    uint32_t index = 0;
    std::size_t line = 0;
  };
  std::vector<Def> defs(std::size_t{h.max_var} + 1);

  auto check_lit = [&](uint32_t lit, std::size_t line) {
    if (lit / 2 > h.max_var) throw AigerError("literal " + std::to_string(lit) + " exceeds maximum variable index", line, false);
  };

  for (uint32_t i = 0; i < h.inputs; ++i) {
    const uint32_t lit = single_number(cur, "input");
    check_lit(lit, cur.line());
    if (lit < 2 || (lit & 1u)) throw AigerError("input literal must be even and non-constant", cur.line(), false);
    Def& d = defs[lit / 2];
    if (d.kind != Kind::kNone) throw AigerError("variable defined twice", cur.line(), false);
    d = {Kind::kInput, i, cur.line()};
  }

  std::vector<std::pair<uint32_t, std::size_t>> outputs;
  for (uint32_t i = 0; i < h.outputs; ++i) {
    const uint32_t lit = single_number(cur, "output");
    check_lit(lit, cur.line());
    outputs.emplace_back(lit, cur.line());
  }

  struct RawAnd {
    uint32_t lhs, rhs0, rhs1;
  };
  std::vector<RawAnd> ands;
  for (uint32_t i = 0; i < h.ands; ++i) {
    std::string_view line;
    if (!cur.next_line(line)) throw AigerError("unexpected end of input while reading AND gates", cur.line() + 1, false);
    const auto nums = parse_numbers(line, cur.line());
    if (nums.size() != 3) throw AigerError("AND gate line needs three literals", cur.line(), false);
    for (uint32_t v : nums) check_lit(v, cur.line());
    if (nums[0] < 2 || (nums[0] & 1u)) throw AigerError("AND output literal must be even and non-constant", cur.line(), false);
    Def& d = defs[nums[0] / 2];
    if (d.kind != Kind::kNone) throw AigerError("variable defined twice", cur.line(), false);
    d = {Kind::kAnd, i, cur.line()};
    ands.push_back({nums[0], nums[1], nums[2]});
  }
  // Symbol table and comments are accepted but not interpreted.

  Aig aig(h.inputs);
  std::vector<Lit> image(std::size_t{h.max_var} + 1, kFalse);
  std::vector<uint8_t> state(std::size_t{h.max_var} + 1, 0);  // 0 new, 1 on stack, 2 done
  for (uint32_t v = 1; v <= h.max_var; ++v) {
    if (defs[v].kind == Kind::kInput) {
      image[v] = aig.pi(defs[v].index);
      state[v] = 2;
    }
  }
  state[0] = 2;

  auto require_defined = [&](uint32_t var, std::size_t line) {
    if (defs[var].kind == Kind::kNone && var != 0) {
      throw AigerError("dangling literal: variable " + std::to_string(var) + " is never defined", line, false);
    }
  };

  std::vector<uint32_t> stack;
  auto build = [&](uint32_t root) {
    if (state[root] == 2) return;
    stack.push_back(root);
    while (!stack.empty()) {
      const uint32_t v = stack.back();
      if (state[v] == 2) {
        stack.pop_back();
        continue;
      }
      const RawAnd& g = ands[defs[v].index];
      const std::size_t line = defs[v].line;
      require_defined(g.rhs0 / 2, line);
      require_defined(g.rhs1 / 2, line);
      state[v] = 1;
      bool ready = true;
      for (uint32_t child : {g.rhs0 / 2, g.rhs1 / 2}) {
        if (state[child] == 2) continue;
        if (state[child] == 1) throw AigerError("combinational cycle through variable " + std::to_string(child), line, false);
        ready = false;
        stack.push_back(child);
      }
      if (!ready) continue;
      stack.pop_back();
      const Lit a = image[g.rhs0 / 2] ^ (g.rhs0 & 1u);
      const Lit b = image[g.rhs1 / 2] ^ (g.rhs1 & 1u);
      image[v] = aig.add_and(a, b);
      state[v] = 2;
    }
  };
  for (const RawAnd& g : ands) build(g.lhs / 2);

  for (auto [lit, line] : outputs) {
    require_defined(lit / 2, line);
    aig.add_output(image[lit / 2] ^ (lit & 1u));
  }
  return aig;
}

Aig parse_binary(Cursor& cur, const Header& h) {
  std::vector<uint32_t> outputs;
  for (uint32_t i = 0; i < h.outputs; ++i) {
    const uint32_t lit = single_number(cur, "output");
    if (lit / 2 > h.max_var) throw AigerError("output literal exceeds maximum variable index", cur.line(), false);
    outputs.push_back(lit);
  }
  Aig aig(h.inputs);
  for (uint32_t i = 0; i < h.ands; ++i) {
    const std::size_t at = cur.offset();
    const uint32_t lhs = 2 * (h.inputs + i + 1);
    const uint32_t d0 = cur.read_delta();
    if (d0 == 0 || d0 > lhs) throw AigerError("invalid first delta for AND " + std::to_string(lhs), at, true);
    const uint32_t rhs0 = lhs - d0;
    const uint32_t d1 = cur.read_delta();
    if (d1 > rhs0) throw AigerError("invalid second delta for AND " + std::to_string(lhs), at, true);
    const uint32_t rhs1 = rhs0 - d1;
    aig.add_and(Lit::from_raw(rhs0), Lit::from_raw(rhs1));
  }
  for (uint32_t lit : outputs) aig.add_output(Lit::from_raw(lit));
  return aig;
}

void put_delta(std::string& out, uint32_t x) {
  while (x & ~0x7fu) {
    out.push_back(static_cast<char>((x & 0x7fu) | 0x80u));
    x >>= 7;
  }
  out.push_back(static_cast<char>(x));
}

}  // namespace

Aig parse_aiger(std::string_view bytes) {
  Cursor cur(bytes);
  const Header h = parse_header(cur);
  return h.binary ? parse_binary(cur, h) : parse_ascii(cur, h);
}

Aig read_aiger_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_aiger(buf.str());
}

std::string write_aiger(const Aig& aig) {
  std::ostringstream out;
  out << "aag " << aig.num_nodes() - 1 << ' ' << aig.num_pis() << " 0 " << aig.num_outputs() << ' ' << aig.num_ands()
      << '\n';
  for (uint32_t i = 0; i < aig.num_pis(); ++i) out << aig.pi(i).raw() << '\n';
  for (Lit o : aig.outputs()) out << o.raw() << '\n';
  for (uint32_t n = aig.num_pis() + 1; n < aig.num_nodes(); ++n) {
    out << 2 * n << ' ' << aig.node(n).fanin0.raw() << ' ' << aig.node(n).fanin1.raw() << '\n';
  }
  return out.str();
}

std::string write_aiger_binary(const Aig& aig) {
  std::string out = "aig " + std::to_string(aig.num_nodes() - 1) + ' ' + std::to_string(aig.num_pis()) + " 0 " +
                    std::to_string(aig.num_outputs()) + ' ' + std::to_string(aig.num_ands()) + '\n';
  for (Lit o : aig.outputs()) out += std::to_string(o.raw()) + '\n';
  for (uint32_t n = aig.num_pis() + 1; n < aig.num_nodes(); ++n) {
    uint32_t r0 = aig.node(n).fanin0.raw(), r1 = aig.node(n).fanin1.raw();
    if (r0 < r1) std::swap(r0, r1);
    put_delta(out, 2 * n - r0);
    put_delta(out, r0 - r1);
  }
  return out;
}

void write_aiger_file(const Aig& aig, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << write_aiger(aig);
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

}  // namespace hcec
