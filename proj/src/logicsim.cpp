#include "hcec/logicsim.hpp"

#include <algorithm>
#include <bit>
#include <unordered_map>

namespace hcec {

uint64_t mix64(uint64_t x) {
  // splitmix64 finalizer
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

uint64_t pattern_word(uint64_t seed, uint64_t pi_index, uint64_t round) {
  return mix64(mix64(mix64(seed) ^ pi_index) ^ (round * 0xd1b54a32d192ed03ull));
}

std::vector<uint64_t> simulate_word(const Aig& aig, std::span<const uint64_t> pi_words) {
  std::vector<uint64_t> v(aig.num_nodes(), 0);
  for (uint32_t i = 0; i < aig.num_pis(); ++i) v[i + 1] = pi_words[i];
  for (uint32_t n = aig.num_pis() + 1; n < aig.num_nodes(); ++n) {
    const AndNode& g = aig.node(n);
    const uint64_t a = v[g.fanin0.node()] ^ (g.fanin0.inverted() ? ~0ull : 0ull);
    const uint64_t b = v[g.fanin1.node()] ^ (g.fanin1.inverted() ? ~0ull : 0ull);
    v[n] = a & b;
  }
  return v;
}

SimVector Signatures::signature(uint32_t node) const {
  SimVector out;
  out.length_bits = patterns_;
  out.words.resize(words_);
  const std::size_t stride = class_of_.size();
  for (std::size_t w = 0; w < words_; ++w) out.words[w] = history_[w * stride + node] & history_mask_[w];
  return out;
}

void Signatures::absorb(const Aig& aig, std::span<const uint64_t> pi_words, std::span<const uint64_t> values,
                        uint64_t valid_mask) {
  const uint32_t n_nodes = static_cast<uint32_t>(class_of_.size());
  if (words_ == 0) {
    for (uint32_t n = 0; n < n_nodes; ++n) phase_[n] = values[n] & 1u;
  }
  auto normalized = [&](uint32_t n) { return (values[n] ^ (phase_[n] ? ~0ull : 0ull)) & valid_mask; };

  const std::size_t existing = classes_.size();
  for (std::size_t c = 0; c < existing; ++c) {
    if (classes_[c].size() < 2) continue;
    const uint64_t lead = normalized(classes_[c][0]);
    bool split = false;
    for (uint32_t m : classes_[c]) {
      if (normalized(m) != lead) {
        split = true;
        break;
      }
    }
    if (!split) continue;
    std::vector<uint32_t> stay;
    std::unordered_map<uint64_t, uint32_t> fresh;
    for (uint32_t m : classes_[c]) {
      const uint64_t w = normalized(m);
      if (w == lead) {
        stay.push_back(m);
        continue;
      }
      auto [it, inserted] = fresh.try_emplace(w, static_cast<uint32_t>(classes_.size()));
      if (inserted) classes_.emplace_back();
      classes_[it->second].push_back(m);
      class_of_[m] = it->second;
    }
    classes_[c] = std::move(stay);
  }
  num_classes_ = classes_.size();

  for (uint32_t o = 0; o < aig.num_outputs() && o < po_hits_.size(); ++o) {
    if (po_hits_[o]) continue;
    const Lit lit = aig.output(o);
    const uint64_t w = (values[lit.node()] ^ (lit.inverted() ? ~0ull : 0ull)) & valid_mask;
    if (w == 0) continue;
    const int t = std::countr_zero(w);
    Assignment a(num_pis_);
    for (uint32_t i = 0; i < num_pis_; ++i) a[i] = (pi_words[i] >> t) & 1u;
    po_hits_[o] = std::move(a);
  }

  if (keep_history_) {
    history_.insert(history_.end(), values.begin(), values.begin() + n_nodes);
    history_mask_.push_back(valid_mask);
  }
  patterns_ += static_cast<std::size_t>(std::popcount(valid_mask));
  ++words_;
}

Signatures simulate_random(const Aig& aig, uint64_t rounds, uint64_t seed, const SimOptions& options) {
  Signatures sig;
  const uint32_t n_nodes = aig.num_nodes();
  const uint32_t n_pis = aig.num_pis();
  sig.num_pis_ = n_pis;
  sig.seed_ = seed;
  sig.class_of_.assign(n_nodes, 0);
  sig.phase_.assign(n_nodes, 0);
  sig.classes_.emplace_back();
  for (uint32_t n = 0; n < n_nodes; ++n) sig.classes_[0].push_back(n);
  sig.num_classes_ = 1;
  sig.po_hits_.resize(aig.num_outputs());

  rounds = std::max<uint64_t>(rounds, 1);
  uint64_t exhaustive_rounds = 0;
  if (options.exhaustive_when_possible && n_pis <= 40) {
    const uint64_t space = uint64_t{1} << n_pis;
    exhaustive_rounds = std::max<uint64_t>(1, space / kWordBits);
    if (exhaustive_rounds <= rounds) {
      sig.exhaustive_ = true;
      rounds = exhaustive_rounds;
    }
  }
  sig.keep_history_ = rounds * n_nodes <= options.history_word_limit;

  std::vector<uint64_t> pi_words(n_pis);
  for (uint64_t r = 0; r < rounds; ++r) {
    uint64_t valid = ~0ull;
    if (sig.exhaustive_) {
      const uint64_t space_mask = (n_pis >= 64) ? ~0ull : ((uint64_t{1} << n_pis) - 1);
      for (uint32_t i = 0; i < n_pis; ++i) {
        uint64_t w = 0;
        for (unsigned t = 0; t < kWordBits; ++t) {
          const uint64_t p = (r * kWordBits + t) & space_mask;
          w |= ((p >> i) & 1u) << t;
        }
        pi_words[i] = w;
      }
      // Patterns beyond 2^N wrap around; count each only once.
      if (n_pis < 6) valid = (uint64_t{1} << (uint64_t{1} << n_pis)) - 1;
    } else {
      for (uint32_t i = 0; i < n_pis; ++i) pi_words[i] = pattern_word(seed, i, r);
    }
    const auto values = simulate_word(aig, pi_words);
    sig.absorb(aig, pi_words, values, valid);
  }
  return sig;
}

void refine_with_pattern(Signatures& sig, const Aig& aig, const Assignment& pattern) {
  if (pattern.size() != sig.num_pis_) throw NetlistError("refine_with_pattern: pattern does not assign every PI");
  const uint32_t n_pis = sig.num_pis_;
  std::vector<uint64_t> pi_words(n_pis);
  for (uint32_t i = 0; i < n_pis; ++i) pi_words[i] = pattern[i] ? ~0ull : 0ull;
  if (n_pis > 0) {
    const uint64_t stream = mix64(sig.seed_ ^ 0x5bd1e995ull) + sig.refinements_;
    for (unsigned t = 1; t < kWordBits; ++t) {
      const uint32_t flip = static_cast<uint32_t>(mix64(stream * kWordBits + t) % n_pis);
      pi_words[flip] ^= uint64_t{1} << t;
    }
  }
  ++sig.refinements_;
  const auto values = simulate_word(aig, pi_words);
  sig.absorb(aig, pi_words, values, ~0ull);
}

std::vector<CandidatePair> collect_candidate_pairs(const Signatures& sig, const Aig& aig) {
  const auto live = aig.live_mask();
  std::vector<CandidatePair> pairs;
  for (std::size_t c = 0; c < sig.num_classes(); ++c) {
    const auto& members = sig.members(static_cast<uint32_t>(c));
    if (members.size() < 2) continue;
    int64_t rep = -1;
    for (uint32_t m : members) {
      if (m >= aig.num_nodes() || aig.is_merged(m) || !live[m]) continue;
      if (rep < 0) {
        rep = m;
        continue;
      }
      if (!aig.is_and(m)) continue;
      const auto r = static_cast<uint32_t>(rep);
      pairs.push_back({Lit(r, false), Lit(m, false), sig.phase(r) != sig.phase(m)});
    }
  }
  std::sort(pairs.begin(), pairs.end(),
            [](const CandidatePair& x, const CandidatePair& y) { return x.b.node() < y.b.node(); });
  return pairs;
}

std::optional<Assignment> check_output_counterexample(const Signatures& sig, const Aig& miter) {
  if (miter.num_outputs() == 0) return std::nullopt;
  const auto& hit = sig.output_hit(0);
  if (!hit) return std::nullopt;
  const auto out = evaluate(miter, *hit);
  if (!out[0]) throw NetlistError("simulation counterexample does not raise the miter output");
  return hit;
}

}  // namespace hcec
