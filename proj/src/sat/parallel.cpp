#include <algorithm>
#include <bit>
#include <mutex>
#include <optional>
#include <thread>

#include "hcec/sat.hpp"

namespace hcec::sat {

std::vector<uint32_t> select_cube_variables(const Cnf& cnf, unsigned k) {
  std::vector<uint64_t> occurrences(std::size_t{cnf.num_vars} + 1, 0);
  for (const auto& clause : cnf.clauses) {
    for (int x : clause) ++occurrences[static_cast<std::size_t>(std::abs(x))];
  }
  std::vector<uint32_t> vars(cnf.num_vars);
  for (uint32_t v = 0; v < cnf.num_vars; ++v) vars[v] = v + 1;
  std::stable_sort(vars.begin(), vars.end(), [&](uint32_t a, uint32_t b) { return occurrences[a] > occurrences[b]; });
  vars.resize(std::min<std::size_t>(k, vars.size()));
  return vars;
}

SatVerdict solve_parallel(const Cnf& cnf, unsigned workers, const SatBudget& budget, const std::atomic<bool>* cancel) {
  if (workers < 2 || !std::has_single_bit(workers)) {
    throw std::invalid_argument("solve_parallel: workers must be a power of two and at least 2");
  }
  const auto cube_vars = select_cube_variables(cnf, static_cast<unsigned>(std::countr_zero(workers)));
  const unsigned cubes = 1u << cube_vars.size();

  std::atomic<bool> stop{false};
  std::atomic<bool> relay_cancel{false};
  std::mutex lock;
  std::optional<SatVerdict> model;
  bool any_budget = false;
  uint64_t conflicts = 0;
  {
    std::vector<std::jthread> pool;
    // Forwards the caller's cancellation and a sibling's success to every cube.
    std::jthread watchdog([&](std::stop_token st) {
      while (!st.stop_requested()) {
        if (stop.load() || (cancel && cancel->load())) {
          relay_cancel.store(true);
          return;
        }
        std::this_thread::sleep_for(std::chrono::milliseconds(1));
      }
    });
    for (unsigned c = 0; c < cubes; ++c) {
      pool.emplace_back([&, c] {
        Cnf sub = cnf;
        for (std::size_t i = 0; i < cube_vars.size(); ++i) {
          const int v = static_cast<int>(cube_vars[i]);
          sub.clauses.push_back({((c >> i) & 1u) ? v : -v});
        }
        SatVerdict v = solve(sub, budget, &relay_cancel);
        std::lock_guard guard(lock);
        conflicts += v.conflicts;
        if (v.kind == SatVerdict::Kind::kModel) {
          if (!model) model = std::move(v);
          stop.store(true);
        } else if (v.kind == SatVerdict::Kind::kBudget) {
          any_budget = true;
        }
      });
    }
    for (auto& t : pool) t.join();
    watchdog.request_stop();
  }
  SatVerdict verdict;
  if (model) {
    verdict = std::move(*model);
    if (!cnf.satisfied_by(verdict.model)) throw std::logic_error("cube model violates the original formula");
  } else if (any_budget) {
    verdict.kind = SatVerdict::Kind::kBudget;
  } else {
    verdict.kind = SatVerdict::Kind::kUnsat;
  }
  verdict.conflicts = conflicts;
  return verdict;
}

}  // namespace hcec::sat
