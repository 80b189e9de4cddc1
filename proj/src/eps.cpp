#include "hcec/eps.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <thread>

namespace hcec::eps {

namespace {

using Clock = std::chrono::steady_clock;

constexpr uint64_t kLowPatterns[6] = {0xaaaaaaaaaaaaaaaaull, 0xccccccccccccccccull, 0xf0f0f0f0f0f0f0f0ull,
                                      0xff00ff00ff00ff00ull, 0xffff0000ffff0000ull, 0xffffffff00000000ull};

std::size_t block_words(unsigned l) { return l <= 6 ? 1 : std::size_t{1} << (l - 6); }

uint64_t tail_mask(unsigned l) { return l >= 6 ? ~0ull : (uint64_t{1} << (1u << l)) - 1; }

// Words [offset, offset + out.size()) of PI pi_index's block in a round.
void fill_words(std::span<uint64_t> out, unsigned pi_index, uint64_t round, unsigned l, std::size_t offset) {
  if (pi_index >= l) {
    const uint64_t v = ((round >> (pi_index - l)) & 1u) ? ~0ull : 0ull;
    std::fill(out.begin(), out.end(), v);
  } else if (pi_index < 6) {
    std::fill(out.begin(), out.end(), kLowPatterns[pi_index]);
  } else {
    for (std::size_t w = 0; w < out.size(); ++w) out[w] = (((offset + w) >> (pi_index - 6)) & 1u) ? ~0ull : 0ull;
  }
}

void fill_block(std::span<uint64_t> out, unsigned pi_index, uint64_t round, unsigned l) {
  fill_words(out, pi_index, round, l, 0);
  out.back() &= tail_mask(l);
}

// Blocks are propagated in tiles of this many words so that the per-node
// buffers stay cache resident whatever the block width.
constexpr std::size_t kTileWords = 64;

struct Budget {
  Clock::time_point deadline;
  bool timed = false;
  const std::atomic<bool>* cancel = nullptr;
  const std::atomic<bool>* sibling_stop = nullptr;

  // Empty when work may continue.
  std::optional<std::string> exhausted() const {
    if (cancel && cancel->load(std::memory_order_relaxed)) return "cancelled";
    if (sibling_stop && sibling_stop->load(std::memory_order_relaxed)) return "cancelled";
    if (timed && Clock::now() >= deadline) return "timeout";
    return std::nullopt;
  }
};

// Runs rounds [begin, end) of the block schedule over one cone.
EpsVerdict run_rounds(const Cone& cone, unsigned l, uint64_t begin, uint64_t end, const Budget& budget) {
  const Aig& aig = cone.aig;
  const unsigned n_pis = aig.num_pis();
  const std::size_t words = block_words(l);
  const std::size_t tile = std::min(words, kTileWords);
  const uint64_t mask = tail_mask(l);
  std::vector<uint64_t> buf(std::size_t{aig.num_nodes()} * tile, 0);
  auto slot = [&](uint32_t node) { return std::span<uint64_t>(buf.data() + std::size_t{node} * tile, tile); };

  EpsVerdict verdict;
  verdict.rounds_total = end - begin;
  const Lit root = cone.root();
  const uint64_t mr = root.inverted() ? ~0ull : 0ull;
  for (uint64_t round = begin; round < end; ++round) {
    if (auto why = budget.exhausted()) {
      verdict.kind = EpsVerdict::Kind::kResourceOut;
      verdict.reason = *why;
      return verdict;
    }
    for (std::size_t offset = 0; offset < words; offset += tile) {
      for (unsigned j = 0; j < n_pis; ++j) fill_words(slot(j + 1), j, round, l, offset);
      for (uint32_t n = n_pis + 1; n < aig.num_nodes(); ++n) {
        const AndNode& g = aig.node(n);
        const uint64_t* a = buf.data() + std::size_t{g.fanin0.node()} * tile;
        const uint64_t* b = buf.data() + std::size_t{g.fanin1.node()} * tile;
        uint64_t* out = buf.data() + std::size_t{n} * tile;
        const uint64_t ma = g.fanin0.inverted() ? ~0ull : 0ull;
        const uint64_t mb = g.fanin1.inverted() ? ~0ull : 0ull;
        for (std::size_t w = 0; w < tile; ++w) out[w] = (a[w] ^ ma) & (b[w] ^ mb);
      }
      const uint64_t* r = buf.data() + std::size_t{root.node()} * tile;
      for (std::size_t w = 0; w < tile; ++w) {
        uint64_t v = r[w] ^ mr;
        if (offset + w + 1 == words) v &= mask;
        if (v == 0) continue;
        const uint64_t t = (offset + w) * 64 + static_cast<uint64_t>(std::countr_zero(v));
        verdict.kind = EpsVerdict::Kind::kCounterexample;
        verdict.assignment.resize(n_pis);
        for (unsigned j = 0; j < n_pis; ++j) {
          verdict.assignment[j] = j < l ? (t >> j) & 1u : (round >> (j - l)) & 1u;
        }
        verdict.rounds_completed = round - begin + 1;
        return verdict;
      }
    }
    ++verdict.rounds_completed;
  }
  verdict.kind = EpsVerdict::Kind::kEquivalent;
  return verdict;
}

EpsVerdict resource_out(std::string reason) {
  EpsVerdict v;
  v.kind = EpsVerdict::Kind::kResourceOut;
  v.reason = std::move(reason);
  return v;
}

Budget make_budget(const EpsConfig& cfg) {
  Budget b;
  b.cancel = cfg.cancel;
  if (cfg.max_seconds > 0) {
    b.timed = true;
    b.deadline = Clock::now() + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(cfg.max_seconds));
  }
  return b;
}

}  // namespace

void EpsConfig::validate() const {
  if (bits_limit < 1 || bits_limit > 30) throw std::invalid_argument("EPS bits_limit must lie in [1, 30]");
  if (workers == 0 || !std::has_single_bit(workers)) throw std::invalid_argument("EPS workers must be a power of two");
}

std::vector<BigInt> theta_sequence(unsigned n) {
  if (n == 0) throw std::invalid_argument("theta_sequence: n must be at least 1");
  std::vector<BigInt> theta;
  theta.reserve(n);
  theta.emplace_back(3);
  while (theta.size() < n) {
    const BigInt prev = theta.back() - 1;
    theta.push_back(prev * prev + 1);
  }
  return theta;
}

RationalResult eps_check_rational(const Cone& cone) {
  const Aig& aig = cone.aig;
  const unsigned n_pis = aig.num_pis();
  if (n_pis > kRationalMaxPis) {
    throw std::invalid_argument("eps_check_rational: cone has " + std::to_string(n_pis) + " PIs, reference mode allows " +
                                std::to_string(kRationalMaxPis));
  }
  std::vector<BigInt> theta = n_pis ? theta_sequence(n_pis) : std::vector<BigInt>{};
  BigInt denom = 1;
  for (const BigInt& t : theta) denom *= t;

  std::vector<BigInt> num(aig.num_nodes());
  num[0] = 0;
  for (unsigned i = 0; i < n_pis; ++i) {
    if (denom % theta[i] != 0) throw std::logic_error("theta does not divide the common denominator");
    num[i + 1] = denom / theta[i];
  }
  auto lit_value = [&](Lit l) -> BigInt { return l.inverted() ? BigInt(denom - num[l.node()]) : num[l.node()]; };
  for (uint32_t n = n_pis + 1; n < aig.num_nodes(); ++n) {
    num[n] = lit_value(aig.node(n).fanin0) & lit_value(aig.node(n).fanin1);
  }
  const BigInt root = lit_value(cone.root());

  RationalResult result;
  result.probability = BigRational(root, denom);
  if (root == 0) {
    result.verdict.kind = EpsVerdict::Kind::kEquivalent;
    return result;
  }
  const auto t = boost::multiprecision::lsb(root);
  result.verdict.kind = EpsVerdict::Kind::kCounterexample;
  result.verdict.assignment.resize(n_pis);
  for (unsigned i = 0; i < n_pis; ++i) result.verdict.assignment[i] = boost::multiprecision::bit_test(num[i + 1], t);
  return result;
}

SimVector construct_initial_value(unsigned pi_index, uint64_t round, unsigned l, unsigned num_pis) {
  if (l > num_pis || l > 30) throw std::out_of_range("construct_initial_value: block width exceeds PI count");
  if (pi_index >= num_pis) throw std::out_of_range("construct_initial_value: PI index out of range");
  if (num_pis - l >= 64 || round >= (uint64_t{1} << (num_pis - l))) {
    throw std::out_of_range("construct_initial_value: round index out of range");
  }
  SimVector v;
  v.length_bits = std::size_t{1} << l;
  v.words.resize(block_words(l));
  fill_block(v.words, pi_index, round, l);
  return v;
}

std::size_t predicted_memory(const Cone& cone, const EpsConfig& cfg) {
  const unsigned l = std::min(cone.num_pis(), cfg.bits_limit);
  return std::size_t{cone.aig.num_nodes()} * block_words(l) * sizeof(uint64_t);
}

namespace {

// Buffers actually held: one tile per node and worker.
std::size_t allocated_bytes(const Cone& cone, unsigned l, unsigned workers) {
  return std::size_t{cone.aig.num_nodes()} * std::min(block_words(l), kTileWords) * sizeof(uint64_t) * workers;
}

bool over_memory(const Cone& cone, const EpsConfig& cfg, unsigned l, unsigned workers) {
  return predicted_memory(cone, cfg) > cfg.memory_cap_bytes || allocated_bytes(cone, l, workers) > cfg.memory_cap_bytes;
}

}  // namespace

EpsVerdict eps_check(const Cone& cone, const EpsConfig& cfg) {
  cfg.validate();
  const unsigned n_pis = cone.num_pis();
  if (n_pis > cfg.max_pis) {
    return resource_out("cone has " + std::to_string(n_pis) + " PIs, limit is " + std::to_string(cfg.max_pis));
  }
  const unsigned l = std::min(n_pis, cfg.bits_limit);
  if (over_memory(cone, cfg, l, 1)) return resource_out("memory");
  return run_rounds(cone, l, 0, uint64_t{1} << (n_pis - l), make_budget(cfg));
}

EpsVerdict eps_check_parallel(const Cone& cone, const EpsConfig& cfg) {
  cfg.validate();
  if (cfg.workers == 1) return eps_check(cone, cfg);
  const unsigned n_pis = cone.num_pis();
  if (n_pis > cfg.max_pis) {
    return resource_out("cone has " + std::to_string(n_pis) + " PIs, limit is " + std::to_string(cfg.max_pis));
  }
  unsigned k = static_cast<unsigned>(std::countr_zero(cfg.workers));
  k = std::min(k, n_pis);
  // Shrink the block so that every worker owns at least one round.
  const unsigned l = std::min({n_pis, cfg.bits_limit, n_pis - k});
  const unsigned workers = 1u << k;
  if (over_memory(cone, cfg, l, workers)) return resource_out("memory");

  const uint64_t rounds = uint64_t{1} << (n_pis - l);
  const uint64_t slice = rounds / workers;

  Budget budget = make_budget(cfg);
  std::atomic<bool> stop{false};
  budget.sibling_stop = &stop;

  std::mutex lock;
  std::optional<EpsVerdict> found;
  std::optional<EpsVerdict> out_of_resources;
  uint64_t completed = 0;
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        EpsVerdict v = run_rounds(cone, l, w * slice, (w + 1) * slice, budget);
        std::lock_guard guard(lock);
        completed += v.rounds_completed;
        if (v.kind == EpsVerdict::Kind::kCounterexample) {
          if (!found) found = std::move(v);
          stop.store(true);
        } else if (v.kind == EpsVerdict::Kind::kResourceOut && !out_of_resources) {
          out_of_resources = std::move(v);
        }
      });
    }
  }
  EpsVerdict result;
  if (found) {
    result = std::move(*found);
  } else if (out_of_resources) {
    result = std::move(*out_of_resources);
  } else {
    result.kind = EpsVerdict::Kind::kEquivalent;
  }
  result.rounds_completed = completed;
  result.rounds_total = rounds;
  return result;
}

}  // namespace hcec::eps
