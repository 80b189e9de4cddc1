#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

#include "hcec/sat.hpp"

namespace hcec::sat {

namespace {

using Clock = std::chrono::steady_clock;

constexpr uint32_t kNoClause = UINT32_MAX;
constexpr uint32_t kUndefLit = UINT32_MAX;

inline uint32_t var_of(uint32_t lit) { return lit >> 1; }
inline uint32_t negate(uint32_t lit) { return lit ^ 1u; }
inline uint32_t from_dimacs(int x) { return (static_cast<uint32_t>(std::abs(x)) - 1) * 2 + (x < 0 ? 1u : 0u); }

double luby(double y, uint64_t x) {
  uint64_t size = 1;
  int seq = 0;
  while (size < x + 1) {
    ++seq;
    size = 2 * size + 1;
  }
  while (size - 1 != x) {
    size = (size - 1) >> 1;
    --seq;
    x = x % size;
  }
  return std::pow(y, seq);
}

struct Clause {
  std::vector<uint32_t> lits;
  bool learnt = false;
  bool deleted = false;
  uint32_t lbd = 0;
  double activity = 0;
};

struct Watcher {
  uint32_t cref;
  uint32_t blocker;
};

// Max-heap of variables keyed by activity.
class VarHeap {
 public:
  explicit VarHeap(const std::vector<double>& activity) : act_(activity) {}

  void resize(uint32_t n) { pos_.assign(n, -1); }
  bool contains(uint32_t v) const { return pos_[v] >= 0; }
  bool empty() const { return heap_.empty(); }

  void insert(uint32_t v) {
    if (contains(v)) return;
    pos_[v] = static_cast<int>(heap_.size());
    heap_.push_back(v);
    up(pos_[v]);
  }

  void increased(uint32_t v) {
    if (contains(v)) up(pos_[v]);
  }

  uint32_t pop() {
    const uint32_t top = heap_[0];
    heap_[0] = heap_.back();
    pos_[heap_[0]] = 0;
    heap_.pop_back();
    pos_[top] = -1;
    if (!heap_.empty()) down(0);
    return top;
  }

 private:
  bool before(uint32_t a, uint32_t b) const { return act_[a] > act_[b] || (act_[a] == act_[b] && a < b); }

  void up(int i) {
    const uint32_t v = heap_[i];
    while (i > 0) {
      const int parent = (i - 1) / 2;
      if (!before(v, heap_[parent])) break;
      heap_[i] = heap_[parent];
      pos_[heap_[i]] = i;
      i = parent;
    }
    heap_[i] = v;
    pos_[v] = i;
  }

  void down(int i) {
    const uint32_t v = heap_[i];
    const int n = static_cast<int>(heap_.size());
    for (;;) {
      int child = 2 * i + 1;
      if (child >= n) break;
      if (child + 1 < n && before(heap_[child + 1], heap_[child])) ++child;
      if (!before(heap_[child], v)) break;
      heap_[i] = heap_[child];
      pos_[heap_[i]] = i;
      i = child;
    }
    heap_[i] = v;
    pos_[v] = i;
  }

  const std::vector<double>& act_;
  std::vector<uint32_t> heap_;
  std::vector<int> pos_;
};

class Solver {
 public:
  explicit Solver(uint32_t num_vars) : heap_(activity_) {
    n_ = num_vars;
    assigns_.assign(n_, -1);
    level_.assign(n_, 0);
    reason_.assign(n_, kNoClause);
    polarity_.assign(n_, 1);
    activity_.assign(n_, 0.0);
    seen_.assign(n_, 0);
    watches_.resize(2 * std::size_t{n_});
    heap_.resize(n_);
    for (uint32_t v = 0; v < n_; ++v) heap_.insert(v);
  }

  bool add_clause(const std::vector<int>& dimacs) {
    if (!ok_) return false;
    std::vector<uint32_t> c;
    c.reserve(dimacs.size());
    for (int x : dimacs) {
      if (x == 0 || static_cast<uint32_t>(std::abs(x)) > n_) throw std::invalid_argument("clause literal out of range");
      c.push_back(from_dimacs(x));
    }
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
    std::vector<uint32_t> kept;
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (i + 1 < c.size() && c[i + 1] == negate(c[i])) return true;  // tautology
      const int val = value(c[i]);
      if (val == 1) return true;
      if (val == 0) continue;
      kept.push_back(c[i]);
    }
    if (kept.empty()) return ok_ = false;
    if (kept.size() == 1) {
      enqueue(kept[0], kNoClause);
      if (propagate() != kNoClause) ok_ = false;
      return ok_;
    }
    attach(new_clause(std::move(kept), false));
    return true;
  }

  SatVerdict search(const SatBudget& budget, const std::atomic<bool>* cancel) {
    SatVerdict verdict;
    if (!ok_) {
      verdict.kind = SatVerdict::Kind::kUnsat;
      return verdict;
    }
    const auto start = Clock::now();
    max_learnts_ = std::max<double>(static_cast<double>(clauses_.size()) / 3.0, 2000.0);
    uint64_t restarts = 0;
    for (;;) {
      const uint64_t limit = static_cast<uint64_t>(luby(2.0, restarts++) * 100.0);
      const int status = run(limit, budget, cancel, start);
      if (status == 1) {
        verdict.kind = SatVerdict::Kind::kModel;
        verdict.model.assign(std::size_t{n_} + 1, 0);
        for (uint32_t v = 0; v < n_; ++v) verdict.model[v + 1] = assigns_[v] == 1 ? 1 : 0;
        break;
      }
      if (status == 0) {
        verdict.kind = SatVerdict::Kind::kUnsat;
        break;
      }
      if (status == -2) {
        verdict.kind = SatVerdict::Kind::kBudget;
        break;
      }
    }
    verdict.conflicts = conflicts_;
    return verdict;
  }

 private:
  int value(uint32_t lit) const {
    const int8_t a = assigns_[var_of(lit)];
    return a < 0 ? -1 : (a ^ static_cast<int>(lit & 1u));
  }

  uint32_t decision_level() const { return static_cast<uint32_t>(trail_lim_.size()); }

  uint32_t new_clause(std::vector<uint32_t> lits, bool learnt) {
    Clause c;
    c.lits = std::move(lits);
    c.learnt = learnt;
    clauses_.push_back(std::move(c));
    return static_cast<uint32_t>(clauses_.size() - 1);
  }

  void attach(uint32_t cref) {
    const auto& c = clauses_[cref].lits;
    watches_[c[0]].push_back({cref, c[1]});
    watches_[c[1]].push_back({cref, c[0]});
  }

  void enqueue(uint32_t lit, uint32_t reason) {
    const uint32_t v = var_of(lit);
    assigns_[v] = static_cast<int8_t>((lit & 1u) ? 0 : 1);
    level_[v] = decision_level();
    reason_[v] = reason;
    trail_.push_back(lit);
  }

  // Returns the conflicting clause or kNoClause.
  uint32_t propagate() {
    uint32_t conflict = kNoClause;
    while (qhead_ < trail_.size()) {
      const uint32_t false_lit = negate(trail_[qhead_++]);
      auto& ws = watches_[false_lit];
      std::size_t i = 0, j = 0;
      while (i < ws.size()) {
        const Watcher w = ws[i];
        if (value(w.blocker) == 1) {
          ws[j++] = ws[i++];
          continue;
        }
        Clause& c = clauses_[w.cref];
        if (c.deleted) {
          ++i;
          continue;
        }
        auto& lits = c.lits;
        if (lits[0] == false_lit) std::swap(lits[0], lits[1]);
        ++i;
        const uint32_t first = lits[0];
        if (first != w.blocker && value(first) == 1) {
          ws[j++] = {w.cref, first};
          continue;
        }
        bool moved = false;
        for (std::size_t k = 2; k < lits.size(); ++k) {
          if (value(lits[k]) != 0) {
            std::swap(lits[1], lits[k]);
            watches_[lits[1]].push_back({w.cref, first});
            moved = true;
            break;
          }
        }
        if (moved) continue;
        ws[j++] = {w.cref, first};
        if (value(first) == 0) {
          conflict = w.cref;
          qhead_ = trail_.size();
          while (i < ws.size()) ws[j++] = ws[i++];
        } else {
          enqueue(first, w.cref);
        }
      }
      ws.resize(j);
      if (conflict != kNoClause) break;
    }
    return conflict;
  }

  void bump_var(uint32_t v) {
    activity_[v] += var_inc_;
    if (activity_[v] > 1e100) {
      for (double& a : activity_) a *= 1e-100;
      var_inc_ *= 1e-100;
    }
    heap_.increased(v);
  }

  void bump_clause(Clause& c) {
    c.activity += clause_inc_;
    if (c.activity > 1e20) {
      for (Clause& d : clauses_) {
        if (d.learnt) d.activity *= 1e-20;
      }
      clause_inc_ *= 1e-20;
    }
  }

  bool redundant(uint32_t lit) const {
    const uint32_t r = reason_[var_of(lit)];
    if (r == kNoClause) return false;
    const auto& lits = clauses_[r].lits;
    for (std::size_t k = 1; k < lits.size(); ++k) {
      const uint32_t v = var_of(lits[k]);
      if (!seen_[v] && level_[v] > 0) return false;
    }
    return true;
  }

  void analyze(uint32_t conflict, std::vector<uint32_t>& learnt, uint32_t& back_level) {
    int path = 0;
    uint32_t p = kUndefLit;
    learnt.clear();
    learnt.push_back(kUndefLit);
    std::size_t index = trail_.size();
    do {
      Clause& c = clauses_[conflict];
      if (c.learnt) bump_clause(c);
      for (std::size_t k = (p == kUndefLit ? 0 : 1); k < c.lits.size(); ++k) {
        const uint32_t q = c.lits[k];
        const uint32_t v = var_of(q);
        if (seen_[v] || level_[v] == 0) continue;
        bump_var(v);
        seen_[v] = 1;
        if (level_[v] >= decision_level()) {
          ++path;
        } else {
          learnt.push_back(q);
        }
      }
      while (!seen_[var_of(trail_[--index])]) {
      }
      p = trail_[index];
      conflict = reason_[var_of(p)];
      seen_[var_of(p)] = 0;
      --path;
    } while (path > 0);
    learnt[0] = negate(p);

    // Local minimization: drop literals implied by the rest of the clause.
    analyze_stack_ = learnt;
    std::size_t keep = 1;
    for (std::size_t k = 1; k < learnt.size(); ++k) {
      if (!redundant(learnt[k])) learnt[keep++] = learnt[k];
    }
    learnt.resize(keep);
    for (uint32_t q : analyze_stack_) seen_[var_of(q)] = 0;

    back_level = 0;
    if (learnt.size() > 1) {
      std::size_t max_i = 1;
      for (std::size_t k = 2; k < learnt.size(); ++k) {
        if (level_[var_of(learnt[k])] > level_[var_of(learnt[max_i])]) max_i = k;
      }
      std::swap(learnt[1], learnt[max_i]);
      back_level = level_[var_of(learnt[1])];
    }
  }

  uint32_t lbd_of(const std::vector<uint32_t>& lits) {
    ++lbd_stamp_;
    if (level_stamp_.size() < decision_level() + 1) level_stamp_.resize(decision_level() + 1, 0);
    uint32_t count = 0;
    for (uint32_t q : lits) {
      const uint32_t lv = level_[var_of(q)];
      if (level_stamp_[lv] != lbd_stamp_) {
        level_stamp_[lv] = lbd_stamp_;
        ++count;
      }
    }
    return count;
  }

  void cancel_until(uint32_t level) {
    if (decision_level() <= level) return;
    for (std::size_t k = trail_.size(); k-- > trail_lim_[level];) {
      const uint32_t v = var_of(trail_[k]);
      polarity_[v] = trail_[k] & 1u;
      assigns_[v] = -1;
      reason_[v] = kNoClause;
      heap_.insert(v);
    }
    trail_.resize(trail_lim_[level]);
    trail_lim_.resize(level);
    qhead_ = trail_.size();
  }

  bool locked(uint32_t cref) const {
    const auto& lits = clauses_[cref].lits;
    const uint32_t v = var_of(lits[0]);
    return reason_[v] == cref && value(lits[0]) == 1;
  }

  void reduce_db() {
    std::vector<uint32_t> learnts;
    for (uint32_t i = 0; i < clauses_.size(); ++i) {
      if (clauses_[i].learnt && !clauses_[i].deleted) learnts.push_back(i);
    }
    std::sort(learnts.begin(), learnts.end(), [&](uint32_t a, uint32_t b) {
      const Clause& x = clauses_[a];
      const Clause& y = clauses_[b];
      if (x.lbd != y.lbd) return x.lbd > y.lbd;
      return x.activity < y.activity;
    });
    const std::size_t target = learnts.size() / 2;
    std::size_t removed = 0;
    for (uint32_t cref : learnts) {
      if (removed >= target) break;
      Clause& c = clauses_[cref];
      if (c.lbd <= 2 || c.lits.size() <= 2 || locked(cref)) continue;
      c.deleted = true;
      c.lits.clear();
      c.lits.shrink_to_fit();
      ++removed;
    }
    for (auto& ws : watches_) {
      std::erase_if(ws, [&](const Watcher& w) { return clauses_[w.cref].deleted; });
    }
    num_learnts_ -= removed;
  }

  uint32_t pick_branch() {
    while (!heap_.empty()) {
      const uint32_t v = heap_.pop();
      if (assigns_[v] < 0) return 2 * v + polarity_[v];
    }
    return kUndefLit;
  }

  // 1 = model, 0 = unsat, -1 = restart, -2 = budget.
  int run(uint64_t conflict_limit, const SatBudget& budget, const std::atomic<bool>* cancel, Clock::time_point start) {
    uint64_t local = 0;
    std::vector<uint32_t> learnt;
    for (;;) {
      const uint32_t conflict = propagate();
      if (conflict != kNoClause) {
        ++conflicts_;
        ++local;
        if (decision_level() == 0) return 0;
        uint32_t back_level = 0;
        analyze(conflict, learnt, back_level);
        // LBD needs the levels as they were at the conflict.
        const uint32_t lbd = learnt.size() > 1 ? lbd_of(learnt) : 1;
        cancel_until(back_level);
        if (learnt.size() == 1) {
          enqueue(learnt[0], kNoClause);
        } else {
          const uint32_t cref = new_clause(learnt, true);
          clauses_[cref].lbd = lbd;
          attach(cref);
          bump_clause(clauses_[cref]);
          ++num_learnts_;
          enqueue(learnt[0], cref);
        }
        var_inc_ /= 0.95;
        clause_inc_ /= 0.999;

        if (cancel && cancel->load(std::memory_order_relaxed)) return -2;
        if (conflicts_ >= budget.max_conflicts) return -2;
        if ((conflicts_ & 255u) == 0 && budget.max_seconds > 0 &&
            std::chrono::duration<double>(Clock::now() - start).count() >= budget.max_seconds) {
          return -2;
        }
        continue;
      }
      if (local >= conflict_limit) {
        cancel_until(0);
        return -1;
      }
      if (static_cast<double>(num_learnts_) >= max_learnts_ + static_cast<double>(trail_.size())) {
        reduce_db();
        max_learnts_ *= 1.1;
      }
      const uint32_t next = pick_branch();
      if (next == kUndefLit) return 1;
      trail_lim_.push_back(static_cast<uint32_t>(trail_.size()));
      enqueue(next, kNoClause);
    }
  }

  uint32_t n_ = 0;
  bool ok_ = true;
  std::vector<int8_t> assigns_;
  std::vector<uint32_t> level_;
  std::vector<uint32_t> reason_;
  std::vector<uint8_t> polarity_;
  std::vector<double> activity_;
  std::vector<uint8_t> seen_;
  std::vector<std::vector<Watcher>> watches_;
  std::vector<Clause> clauses_;
  std::vector<uint32_t> trail_;
  std::vector<uint32_t> trail_lim_;
  std::vector<uint32_t> analyze_stack_;
  std::vector<uint32_t> level_stamp_;
  uint32_t lbd_stamp_ = 0;
  std::size_t qhead_ = 0;
  VarHeap heap_;
  double var_inc_ = 1.0;
  double clause_inc_ = 1.0;
  double max_learnts_ = 0;
  std::size_t num_learnts_ = 0;
  uint64_t conflicts_ = 0;
};

}  // namespace

SatVerdict solve(const Cnf& cnf, const SatBudget& budget, const std::atomic<bool>* cancel) {
  Solver solver(cnf.num_vars);
  for (const auto& clause : cnf.clauses) {
    if (!solver.add_clause(clause)) break;
  }
  SatVerdict verdict = solver.search(budget, cancel);
  if (verdict.kind == SatVerdict::Kind::kModel && !cnf.satisfied_by(verdict.model)) {
    throw std::logic_error("CDCL returned a model that violates the formula");
  }
  return verdict;
}

}  // namespace hcec::sat
