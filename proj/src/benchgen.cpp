#include "hcec/benchgen.hpp"

#include <algorithm>
#include <random>
#include <set>

namespace hcec::bench {

namespace {

struct Sum {
  Lit sum;
  Lit carry;
};

Sum full_adder(AigBuilder& b, Lit x, Lit y, Lit c) {
  const Lit t = b.xor_(x, y);
  return {b.xor_(t, c), b.or_(b.and_(x, y), b.and_(c, t))};
}

Sum half_adder(AigBuilder& b, Lit x, Lit y) { return {b.xor_(x, y), b.and_(x, y)}; }

void check_width(unsigned width) {
  if (width == 0) throw GenError("width must be at least 1");
  if (width > 64) throw GenError("width above 64 is not supported");
}

// Copy of the nodes reachable from `outputs`, keeping structure as is.
Aig copy_live(const Aig& aig, const std::vector<Lit>& outputs) {
  std::vector<bool> live(aig.num_nodes(), false);
  for (Lit o : outputs) live[o.node()] = true;
  for (uint32_t n = aig.num_nodes(); n-- > aig.num_pis() + 1;) {
    if (!live[n]) continue;
    live[aig.node(n).fanin0.node()] = true;
    live[aig.node(n).fanin1.node()] = true;
  }
  Aig out(aig.num_pis());
  std::vector<Lit> map(aig.num_nodes(), kFalse);
  for (uint32_t n = 1; n <= aig.num_pis(); ++n) map[n] = Lit(n, false);
  for (uint32_t n = aig.num_pis() + 1; n < aig.num_nodes(); ++n) {
    if (!live[n]) continue;
    const AndNode& g = aig.node(n);
    map[n] = out.add_and(map[g.fanin0.node()] ^ g.fanin0.inverted(), map[g.fanin1.node()] ^ g.fanin1.inverted());
  }
  for (Lit o : outputs) out.add_output(map[o.node()] ^ o.inverted());
  return out;
}

// n = XOR(op0, op1) in either 3-AND form.
std::optional<std::pair<Lit, Lit>> match_xor(const Aig& aig, uint32_t n) {
  if (!aig.is_and(n)) return std::nullopt;
  const AndNode& g = aig.node(n);
  if (!g.fanin0.inverted() || !g.fanin1.inverted()) return std::nullopt;
  const uint32_t p = g.fanin0.node();
  const uint32_t q = g.fanin1.node();
  if (p == q || !aig.is_and(p) || !aig.is_and(q)) return std::nullopt;
  const AndNode& gp = aig.node(p);
  const AndNode& gq = aig.node(q);
  const bool straight = gq.fanin0 == !gp.fanin0 && gq.fanin1 == !gp.fanin1;
  const bool crossed = gq.fanin0 == !gp.fanin1 && gq.fanin1 == !gp.fanin0;
  if (!straight && !crossed) return std::nullopt;
  return std::make_pair(gp.fanin0, gp.fanin1);
}

// XOR(x, y) as !AND(!AND(x, !y), !AND(!x, y)).
Lit xor_alternate(Aig& aig, Lit x, Lit y) { return !aig.add_and(!aig.add_and(x, !y), !aig.add_and(!x, y)); }

Lit xor_standard(Aig& aig, Lit x, Lit y) { return aig.add_and(!aig.add_and(x, y), !aig.add_and(!x, !y)); }

enum class Move { kReassociate, kRebalanceXor, kAlternateXor, kDoubleInverter };

struct Site {
  Move move;
  uint32_t node;
  unsigned detail;
};

std::vector<Site> collect_sites(const Aig& aig) {
  std::vector<Site> sites;
  const auto live = aig.live_mask();
  for (uint32_t n = aig.num_pis() + 1; n < aig.num_nodes(); ++n) {
    if (!live[n]) continue;
    const AndNode& g = aig.node(n);
    for (unsigned k = 0; k < 2; ++k) {
      const Lit f = k == 0 ? g.fanin0 : g.fanin1;
      if (!f.inverted() && aig.is_and(f.node())) sites.push_back({Move::kReassociate, n, k});
      sites.push_back({Move::kDoubleInverter, n, k});
    }
    if (auto ops = match_xor(aig, n)) {
      sites.push_back({Move::kAlternateXor, n, 0});
      for (unsigned k = 0; k < 2; ++k) {
        const Lit op = k == 0 ? ops->first : ops->second;
        if (match_xor(aig, op.node())) sites.push_back({Move::kRebalanceXor, n, k});
      }
    }
  }
  return sites;
}

Aig apply_site(const Aig& aig, const Site& site, std::mt19937_64& rng) {
  Aig out(aig.num_pis());
  std::vector<Lit> map(aig.num_nodes(), kFalse);
  for (uint32_t n = 1; n <= aig.num_pis(); ++n) map[n] = Lit(n, false);
  auto m = [&](Lit l) { return map[l.node()] ^ l.inverted(); };
  for (uint32_t n = aig.num_pis() + 1; n < aig.num_nodes(); ++n) {
    const AndNode& g = aig.node(n);
    if (n != site.node) {
      map[n] = out.add_and(m(g.fanin0), m(g.fanin1));
      continue;
    }
    switch (site.move) {
      case Move::kReassociate: {
        // AND(x, AND(y1, y2)) -> AND(AND(x, y_i), y_j)
        const Lit x = site.detail == 0 ? g.fanin1 : g.fanin0;
        const AndNode& inner = aig.node((site.detail == 0 ? g.fanin0 : g.fanin1).node());
        const bool swap = rng() & 1u;
        const Lit y1 = swap ? inner.fanin1 : inner.fanin0;
        const Lit y2 = swap ? inner.fanin0 : inner.fanin1;
        map[n] = out.add_and(out.add_and(m(x), m(y1)), m(y2));
        break;
      }
      case Move::kDoubleInverter: {
        Lit f0 = m(g.fanin0);
        Lit f1 = m(g.fanin1);
        Lit& f = site.detail == 0 ? f0 : f1;
        f = !out.add_and(!f, !f);
        map[n] = out.add_and(f0, f1);
        break;
      }
      case Move::kAlternateXor: {
        const auto ops = *match_xor(aig, n);
        map[n] = xor_alternate(out, m(ops.first), m(ops.second));
        break;
      }
      case Move::kRebalanceXor: {
        // x ^ (y ^ z) -> (x ^ y) ^ z, carrying the inner inverter outside.
        const auto ops = *match_xor(aig, n);
        const Lit x = site.detail == 0 ? ops.second : ops.first;
        const Lit inner = site.detail == 0 ? ops.first : ops.second;
        const auto yz = *match_xor(aig, inner.node());
        map[n] = xor_standard(out, xor_standard(out, m(x), m(yz.first)), m(yz.second)) ^ inner.inverted();
        break;
      }
    }
  }
  for (Lit o : aig.outputs()) out.add_output(m(o));
  return out;
}

uint64_t lowest_bit_index(uint64_t w) { return static_cast<uint64_t>(std::countr_zero(w)); }

constexpr uint64_t kLow[6] = {0xaaaaaaaaaaaaaaaaull, 0xccccccccccccccccull, 0xf0f0f0f0f0f0f0f0ull,
                              0xff00ff00ff00ff00ull, 0xffff0000ffff0000ull, 0xffffffff00000000ull};

}  // namespace

Family parse_family(const std::string& name) {
  if (name == "adder_ripple") return Family::kAdderRipple;
  if (name == "adder_cla") return Family::kAdderCla;
  if (name == "mult_array") return Family::kMultArray;
  if (name == "mult_columnwise") return Family::kMultColumnwise;
  throw GenError("unknown family '" + name + "'");
}

const char* family_name(Family f) {
  switch (f) {
    case Family::kAdderRipple:
      return "adder_ripple";
    case Family::kAdderCla:
      return "adder_cla";
    case Family::kMultArray:
      return "mult_array";
    case Family::kMultColumnwise:
      return "mult_columnwise";
  }
  return "?";
}

Aig adder_ripple(unsigned width) {
  check_width(width);
  AigBuilder b(2 * width);
  Lit carry = kFalse;
  std::vector<Lit> sums;
  for (unsigned i = 0; i < width; ++i) {
    const Sum s = full_adder(b, b.pi(i), b.pi(width + i), carry);
    sums.push_back(s.sum);
    carry = s.carry;
  }
  for (Lit s : sums) b.add_output(s);
  b.add_output(carry);
  return b.take();
}

Aig adder_cla(unsigned width) {
  check_width(width);
  AigBuilder b(2 * width);
  std::vector<Lit> p(width), g(width);
  for (unsigned i = 0; i < width; ++i) {
    p[i] = b.xor_(b.pi(i), b.pi(width + i));
    g[i] = b.and_(b.pi(i), b.pi(width + i));
  }
  // Kogge-Stone: after the loop G[i] is the carry out of bits 0..i.
  std::vector<Lit> G = g, P = p;
  for (unsigned d = 1; d < width; d *= 2) {
    std::vector<Lit> nG = G, nP = P;
    for (unsigned i = d; i < width; ++i) {
      nG[i] = b.or_(G[i], b.and_(P[i], G[i - d]));
      nP[i] = b.and_(P[i], P[i - d]);
    }
    G = std::move(nG);
    P = std::move(nP);
  }
  for (unsigned i = 0; i < width; ++i) b.add_output(i == 0 ? p[0] : b.xor_(p[i], G[i - 1]));
  b.add_output(G[width - 1]);
  return b.take();
}

Aig mult_array(unsigned width) {
  check_width(width);
  AigBuilder b(2 * width);
  std::vector<Lit> acc(2 * width, kFalse);
  for (unsigned i = 0; i < width; ++i) {
    Lit carry = kFalse;
    for (unsigned j = 0; j < width; ++j) {
      const Lit pp = b.and_(b.pi(j), b.pi(width + i));
      const Sum s = full_adder(b, acc[i + j], pp, carry);
      acc[i + j] = s.sum;
      carry = s.carry;
    }
    acc[i + width] = carry;
  }
  for (Lit l : acc) b.add_output(l);
  return b.take();
}

Aig mult_columnwise(unsigned width) {
  check_width(width);
  AigBuilder b(2 * width);
  std::vector<std::vector<Lit>> cols(2 * width + 1);
  for (unsigned i = 0; i < width; ++i) {
    for (unsigned j = 0; j < width; ++j) cols[i + j].push_back(b.and_(b.pi(j), b.pi(width + i)));
  }
  auto height = [&] {
    std::size_t h = 0;
    for (const auto& c : cols) h = std::max(h, c.size());
    return h;
  };
  while (height() > 2) {
    std::vector<std::vector<Lit>> next(cols.size() + 1);
    for (std::size_t k = 0; k < cols.size(); ++k) {
      const auto& c = cols[k];
      std::size_t i = 0;
      for (; i + 3 <= c.size(); i += 3) {
        const Sum s = full_adder(b, c[i], c[i + 1], c[i + 2]);
        next[k].push_back(s.sum);
        next[k + 1].push_back(s.carry);
      }
      if (c.size() - i == 2) {
        const Sum s = half_adder(b, c[i], c[i + 1]);
        next[k].push_back(s.sum);
        next[k + 1].push_back(s.carry);
      } else if (c.size() - i == 1) {
        next[k].push_back(c[i]);
      }
    }
    cols = std::move(next);
  }
  Lit carry = kFalse;
  for (unsigned k = 0; k < 2 * width; ++k) {
    const Lit x = !cols[k].empty() ? cols[k][0] : kFalse;
    const Lit y = cols[k].size() > 1 ? cols[k][1] : kFalse;
    const Sum s = full_adder(b, x, y, carry);
    b.add_output(s.sum);
    carry = s.carry;
  }
  return b.take();
}

Aig generate_base(Family f, unsigned width) {
  switch (f) {
    case Family::kAdderRipple:
      return adder_ripple(width);
    case Family::kAdderCla:
      return adder_cla(width);
    case Family::kMultArray:
      return mult_array(width);
    case Family::kMultColumnwise:
      return mult_columnwise(width);
  }
  throw GenError("unknown family");
}

Aig replicated(const Aig& block, unsigned copies) {
  if (copies == 0) throw GenError("replicated: copies must be at least 1");
  const uint32_t np = block.num_pis();
  Aig out(np * copies);
  std::vector<Lit> outputs;
  for (unsigned c = 0; c < copies; ++c) {
    std::vector<Lit> map(block.num_nodes(), kFalse);
    for (uint32_t i = 0; i < np; ++i) map[i + 1] = out.pi(c * np + i);
    for (uint32_t n = np + 1; n < block.num_nodes(); ++n) {
      const AndNode& g = block.node(n);
      map[n] = out.add_and(map[g.fanin0.node()] ^ g.fanin0.inverted(), map[g.fanin1.node()] ^ g.fanin1.inverted());
    }
    for (Lit o : block.outputs()) outputs.push_back(map[o.node()] ^ o.inverted());
  }
  for (Lit o : outputs) out.add_output(o);
  return out;
}

Aig rewrite(const Aig& base, unsigned steps, uint64_t seed, unsigned max_oracle_pis) {
  std::mt19937_64 rng(seed);
  Aig cur = copy_live(base, base.outputs());
  for (unsigned s = 0; s < steps; ++s) {
    const auto sites = collect_sites(cur);
    if (sites.empty()) break;
    // Pick the move kind first so that rare kinds still get chosen.
    std::vector<Move> kinds;
    for (const Site& site : sites) {
      if (std::find(kinds.begin(), kinds.end(), site.move) == kinds.end()) kinds.push_back(site.move);
    }
    std::sort(kinds.begin(), kinds.end());
    const Move kind = kinds[rng() % kinds.size()];
    std::vector<const Site*> pool;
    for (const Site& site : sites) {
      if (site.move == kind) pool.push_back(&site);
    }
    cur = apply_site(cur, *pool[rng() % pool.size()], rng);
    cur = copy_live(cur, cur.outputs());
  }
  if (base.num_pis() <= max_oracle_pis && !oracle_equivalent(base, cur, max_oracle_pis)) {
    throw std::logic_error("rewrite produced an inequivalent netlist");
  }
  return cur;
}

Aig corrupt(const Aig& base, uint64_t seed, unsigned max_pis) {
  if (base.num_pis() > max_pis) {
    throw GenError("corrupt: " + std::to_string(base.num_pis()) + " PIs is beyond the oracle limit of " +
                   std::to_string(max_pis) + "; inequivalence could not be verified");
  }
  const Aig clean = copy_live(base, base.outputs());
  std::vector<uint32_t> gates;
  for (uint32_t n = clean.num_pis() + 1; n < clean.num_nodes(); ++n) gates.push_back(n);
  if (gates.empty()) throw GenError("corrupt: netlist has no AND gate");
  std::mt19937_64 rng(seed);
  for (unsigned attempt = 0; attempt < 4 * gates.size() + 64; ++attempt) {
    const uint32_t victim = gates[rng() % gates.size()];
    const unsigned which = rng() & 1u;
    Aig out(clean.num_pis());
    for (uint32_t n = clean.num_pis() + 1; n < clean.num_nodes(); ++n) {
      AndNode g = clean.node(n);
      if (n == victim) (which == 0 ? g.fanin0 : g.fanin1) = !(which == 0 ? g.fanin0 : g.fanin1);
      out.add_and(g.fanin0, g.fanin1);
    }
    for (Lit o : clean.outputs()) out.add_output(o);
    if (!oracle_equivalent(base, out, max_pis)) return out;
  }
  throw GenError("corrupt: every attempted flip left the function unchanged");
}

Aig generate(const GenSpec& spec) {
  Aig block = generate_base(spec.family, spec.width);
  if (spec.rewrite_steps > 0) block = rewrite(block, spec.rewrite_steps, spec.seed);
  Aig out = spec.copies > 1 ? replicated(block, spec.copies) : std::move(block);
  if (spec.corrupt) out = corrupt(out, spec.seed);
  return out;
}

Aig select_outputs(const Aig& aig, const std::vector<uint32_t>& outputs) {
  std::vector<Lit> lits;
  for (uint32_t o : outputs) {
    if (o >= aig.num_outputs()) throw GenError("select_outputs: output " + std::to_string(o) + " out of range");
    lits.push_back(aig.output(o));
  }
  return copy_live(aig, lits);
}

Aig random_and_or(unsigned num_pis, unsigned gates, uint64_t seed) {
  if (num_pis < 2) throw GenError("random_and_or: need at least 2 PIs");
  std::mt19937_64 rng(seed);
  Aig aig(num_pis);
  std::vector<Lit> pool;
  for (uint32_t i = 0; i < num_pis; ++i) pool.push_back(aig.pi(i));
  // Every node pair feeds at most one gate, so no p = AND(x, y) and
  // q = AND(!x, !y) can coexist and no XOR pattern can form.
  std::set<std::pair<uint32_t, uint32_t>> used;
  Lit last = pool.back();
  for (unsigned g = 0; g < gates; ++g) {
    Lit x, y;
    bool found = false;
    for (unsigned tries = 0; tries < 64 && !found; ++tries) {
      // Bias towards recent nodes to get depth.
      const std::size_t lo = pool.size() > 8 ? pool.size() / 2 : 0;
      const std::size_t i = (rng() & 1u) ? lo + rng() % (pool.size() - lo) : rng() % pool.size();
      const std::size_t j = rng() % pool.size();
      if (pool[i].node() == pool[j].node()) continue;
      const auto key = std::minmax(pool[i].node(), pool[j].node());
      if (!used.insert(key).second) continue;
      x = pool[i];
      y = pool[j];
      found = true;
    }
    if (!found) break;
    const bool is_or = rng() & 1u;
    // Inverters only on PI edges, AND or OR otherwise.
    if (aig.is_pi(x.node()) && (rng() & 1u)) x = !x;
    if (aig.is_pi(y.node()) && (rng() & 1u)) y = !y;
    last = is_or ? !aig.add_and(!x, !y) : aig.add_and(x, y);
    pool.push_back(last);
  }
  aig.add_output(last);
  return copy_live(aig, aig.outputs());
}

Aig random_aig(unsigned num_pis, unsigned gates, unsigned outputs, uint64_t seed) {
  if (num_pis == 0) throw GenError("random_aig: need at least 1 PI");
  std::mt19937_64 rng(seed);
  Aig aig(num_pis);
  std::vector<Lit> pool;
  for (uint32_t i = 0; i < num_pis; ++i) pool.push_back(aig.pi(i));
  for (unsigned g = 0; g < gates; ++g) {
    const std::size_t lo = pool.size() > 8 ? pool.size() / 2 : 0;
    const Lit x = pool[lo + rng() % (pool.size() - lo)] ^ static_cast<bool>(rng() & 1u);
    const Lit y = pool[rng() % pool.size()] ^ static_cast<bool>(rng() & 1u);
    if (x.node() == y.node()) continue;
    pool.push_back(aig.add_and(x, y));
  }
  for (unsigned o = 0; o < outputs; ++o) {
    const std::size_t lo = pool.size() > 4 ? pool.size() - pool.size() / 4 : 0;
    aig.add_output(pool[lo + rng() % (pool.size() - lo)] ^ static_cast<bool>(rng() & 1u));
  }
  return aig;
}

Aig xor_chains(const std::vector<unsigned>& lengths) {
  uint32_t pis = 0;
  for (unsigned k : lengths) pis += k + 1;
  AigBuilder b(pis);
  uint32_t next = 0;
  for (unsigned k : lengths) {
    Lit acc = b.pi(next++);
    for (unsigned i = 0; i < k; ++i) acc = b.xor_(acc, b.pi(next++));
    b.add_output(acc);
  }
  return b.take();
}

OracleResult oracle_check(const Aig& miter, unsigned max_pis) {
  const uint32_t n = miter.num_pis();
  if (n > max_pis) {
    throw std::invalid_argument("oracle: " + std::to_string(n) + " PIs exceeds the limit of " + std::to_string(max_pis));
  }
  if (n > 63) throw std::invalid_argument("oracle: too many PIs");
  const uint64_t total = uint64_t{1} << n;
  const uint64_t chunks = n <= 6 ? 1 : total >> 6;
  const uint64_t valid = n >= 6 ? ~0ull : (uint64_t{1} << total) - 1;

  std::vector<uint64_t> value(miter.num_nodes(), 0);
  OracleResult result;
  for (uint64_t chunk = 0; chunk < chunks; ++chunk) {
    for (uint32_t i = 0; i < n; ++i) {
      value[i + 1] = i < 6 ? kLow[i] : (((chunk >> (i - 6)) & 1u) ? ~0ull : 0ull);
    }
    for (uint32_t v = n + 1; v < miter.num_nodes(); ++v) {
      const AndNode& g = miter.node(v);
      const uint64_t a = value[g.fanin0.node()] ^ (g.fanin0.inverted() ? ~0ull : 0ull);
      const uint64_t b = value[g.fanin1.node()] ^ (g.fanin1.inverted() ? ~0ull : 0ull);
      value[v] = a & b;
    }
    uint64_t hit = 0;
    for (Lit o : miter.outputs()) hit |= value[o.node()] ^ (o.inverted() ? ~0ull : 0ull);
    hit &= valid;
    if (hit != 0) {
      result.equivalent = false;
      result.pattern_index = (chunk << 6) | lowest_bit_index(hit);
      result.counterexample.resize(n);
      for (uint32_t i = 0; i < n; ++i) result.counterexample[i] = (result.pattern_index >> i) & 1u;
      return result;
    }
  }
  return result;
}

bool oracle_equivalent(const Aig& a, const Aig& b, unsigned max_pis) {
  return oracle_check(build_miter(a, b), max_pis).equivalent;
}

}  // namespace hcec::bench
