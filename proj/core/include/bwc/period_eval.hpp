#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "bwc/product.hpp"
#include "bwc/rational.hpp"
#include "bwc/strategies.hpp"

namespace bwc {

struct BudgetExceeded : std::runtime_error {
  BudgetExceeded() : std::runtime_error("evaluation budget exceeded") {}
};

// Exact evaluation of a combined strategy inside one end component, period
// by period: a phase-(a) block of K steps or a phase-(b) block of L steps is
// summarized by its end-state distribution, expected reward and the sums the
// adversary can achieve. The blocks form a small renewal chain (for the
// expectation) and a small ratio graph (for the worst case), so nothing of
// size K*W*|U| is ever built.
class CombinedEvaluator {
 public:
  // `budget` bounds the number of elementary DP operations.
  CombinedEvaluator(const Mdp& p, const EcPlan& ec, std::uint64_t budget = 4'000'000'000ULL);

  // Expected mean-payoff when the combined strategy starts in phase (a) at s.
  const Rational& expectation_from(StateId s) const;
  // Worst-case mean-payoff from s when the adversary keeps to E_Delta.
  const Rational& worst_case_from(StateId s) const;
  // P2 states of the component where the adversary gets to move, from s.
  const std::vector<StateId>& adversary_states_from(StateId s) const;

  std::uint64_t work() const { return work_; }

 private:
  void phase_a_expectation(std::size_t start);
  void phase_a_worst(std::size_t start);
  void phase_b();
  void solve();
  void charge(std::uint64_t n);

  const Mdp& p_;
  const EcPlan& ec_;
  std::uint64_t budget_;
  std::uint64_t work_ = 0;
  std::vector<StateId> states_;  // local index -> base state
  std::vector<int> local_;       // base state -> local index or -1
  std::size_t k_ = 0;

  // Phase (a), per start: probabilities of ending in v with sum > 0 / <= 0,
  // expected sum; achievable minimal positive / minimal sums; visited P2 states.
  std::vector<std::vector<Rational>> a_pos_, a_nonpos_;
  std::vector<Rational> a_reward_;
  std::vector<std::vector<std::optional<std::int64_t>>> a_min_pos_, a_min_;
  std::vector<std::vector<char>> a_adv_;
  // Phase (b): L-step transition matrix, expected reward, min sums.
  std::vector<std::vector<Rational>> b_trans_;
  std::vector<Rational> b_reward_;
  std::vector<std::vector<std::optional<std::int64_t>>> b_min_;
  std::vector<std::vector<char>> b_adv_;

  std::vector<Rational> expectation_, worst_;
  std::vector<std::vector<StateId>> adversary_;
};

// Minimum ratio weight/length over cycles reachable from `start` in a graph
// with positive arc lengths (Dinkelbach iterations with exact negative-cycle
// detection). nullopt when no cycle is reachable.
struct RatioArc {
  std::uint32_t from, to;
  Rational weight;
  Rational length;
};
std::optional<Rational> min_cycle_ratio(std::size_t nodes, const std::vector<RatioArc>& arcs,
                                        std::uint32_t start);

}  // namespace bwc
