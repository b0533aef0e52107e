#pragma once

#include <optional>
#include <vector>

#include "bwc/game.hpp"
#include "bwc/rational.hpp"

namespace bwc {

// States from which `player` forces a visit to `target`.
std::vector<char> attractor(const GameGraph& g, Player player, const std::vector<char>& target);

// Least energy progress measure for per-edge weights w. credit[s] is the
// minimal initial credit P1 needs from s, nullopt when no finite credit
// suffices. strategy[s] is a credit-respecting edge for winning P1 states.
struct EnergySolution {
  std::vector<std::optional<Weight>> credit;
  std::vector<EdgeId> strategy;
  std::size_t lifts = 0;
  bool winning(StateId s) const { return credit[s].has_value(); }
};
EnergySolution solve_energy(const GameGraph& g, const std::vector<Weight>& w);

struct WorstCaseResult {
  std::vector<char> winning;     // S_WC
  std::vector<EdgeId> strategy;  // memoryless P1 strategy on winning states
  bool all_winning() const;
};

// P1 states ensuring MP > 0 (decided as MP >= 1/|S| on |S|*w - 1).
WorstCaseResult mp_strictly_positive_region(const GameGraph& g);
// MP > t, resp. MP >= t.
WorstCaseResult mp_above(const GameGraph& g, const Rational& t);
WorstCaseResult mp_at_least(const GameGraph& g, const Rational& t);

// Exact game value from s: a fraction with denominator at most |S|.
Rational mp_optimal_value(const GameGraph& g, StateId s);
std::vector<Rational> mp_optimal_values(const GameGraph& g);

// Memoryless strategy guaranteeing MP > threshold from every winning state.
// Throws std::invalid_argument when the initial state is not winning.
std::vector<EdgeId> extract_wc_strategy(const GameGraph& g, const Rational& threshold);

// Truncated-sum unfolding for the shortest-path worst case. Only the part
// reachable from (initial, 0) is built; every counter value >= mu is merged
// into one sink. The returned game is the subgame on the P1 attractor R of
// the unsaturated targets, with targets made absorbing (zero self-loop).
struct SpUnfolding {
  GameGraph game;                   // G_mu, initial (s_init, 0) when inside R
  std::vector<StateId> state_of;    // original state per node
  std::vector<Weight> counter;      // truncated sum so far per node
  std::vector<EdgeId> edge_of;      // original edge, kNoEdge for added loops
  bool initial_in_r = false;
  std::size_t explored = 0;         // nodes of the reachable unfolding
  std::size_t full_size = 0;        // |S| * (mu + 1)
};
SpUnfolding sp_worst_case_unfold(const GameGraph& g, Weight mu);

}  // namespace bwc
