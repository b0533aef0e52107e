#pragma once

#include <optional>
#include <vector>

#include "bwc/game.hpp"
#include "bwc/product.hpp"
#include "bwc/rational.hpp"

namespace bwc {

struct EndComponent {
  enum class Class : std::uint8_t { Unclassified, Winning, Losing };
  std::vector<StateId> states;  // sorted
  Class classification = Class::Unclassified;
  std::optional<Rational> gain;
  friend bool operator==(const EndComponent&, const EndComponent&) = default;
};

struct MecDecomposition {
  std::vector<EndComponent> components;
  std::vector<int> member;  // component index per state, -1 when in none
};

// Maximal end components w.r.t. E_Delta, optionally inside a state subset.
MecDecomposition mec_decompose(const Mdp& p, const std::vector<char>* domain = nullptr);

// Subgame G_Delta restricted to a state set: E_Delta edges with both ends
// inside; stochastic states become P2 states with only their support.
Subgame delta_subgame(const Mdp& p, const std::vector<char>& states);

// Maximal winning end components. Losing components found on the way are
// reported through `losing` when non-null.
std::vector<EndComponent> mwec(const Mdp& p, std::vector<EndComponent>* losing = nullptr);

struct GainSolution {
  std::vector<Rational> gain;
  std::vector<Rational> bias;
  std::vector<EdgeId> policy;  // chosen edge per P1 state, kNoEdge elsewhere
  std::size_t iterations = 0;
  bool unichain = false;       // meaningful for in-component solutions
};

// Optimal expected mean-payoff from every state (multichain policy
// iteration with exact solves).
GainSolution max_expected_mp(const Mdp& p);
// Same with per-edge weights replacing those of the graph.
GainSolution max_expected_mp(const Mdp& p, const std::vector<Weight>& weights);

// Optimal gain inside one end component. The witness policy is redirected so
// that its chain on the component has a single recurrent class.
GainSolution optimal_gain_in(const Mdp& p, const std::vector<StateId>& ec);

struct CostSolution {
  std::vector<Extended> value;  // +inf where the target is not a.s. reachable
  std::vector<EdgeId> policy;
  std::size_t iterations = 0;
};

// Minimal expected total weight until the first visit to a target.
CostSolution min_expected_truncated_sum(const Mdp& p, const std::vector<char>& target);

// States from which P1 reaches `target` with probability one.
std::vector<char> almost_sure_reach(const Mdp& p, const std::vector<char>& target);

// Probability of visiting `target` (within `horizon` steps when given).
Rational reach_probability(const MarkovChain& mc, StateId from, const std::vector<char>& target,
                           std::optional<std::size_t> horizon = std::nullopt);
// Distribution over chain states after exactly n steps.
std::vector<Rational> distribution_at(const MarkovChain& mc, StateId from, std::size_t n);

// Expected mean-payoff from every state of the chain.
std::vector<Rational> mc_expected_mp_all(const MarkovChain& mc);
Rational mc_expected_mp(const MarkovChain& mc, StateId from);

// Expected total weight until a target is hit; +inf when the target is
// missed with positive probability.
Extended mc_expected_total(const MarkovChain& mc, StateId from, const std::vector<char>& target);

struct BsccInfo {
  std::vector<std::vector<StateId>> classes;
  std::vector<std::vector<Rational>> stationary;  // aligned with classes
  std::vector<Rational> gain;
};
BsccInfo bottom_components(const MarkovChain& mc);

}  // namespace bwc
