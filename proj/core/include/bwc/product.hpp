#pragma once

#include <unordered_map>
#include <vector>

#include "bwc/game.hpp"
#include "bwc/machine.hpp"
#include "bwc/rational.hpp"

namespace bwc {

// Game with the P2 side fixed to a memoryless distribution map.
struct Mdp {
  GameGraph graph;
  std::vector<Distribution> delta;  // empty for P1 states

  bool stochastic(StateId s) const { return graph.owner(s) == Player::P2; }
  // Edges in E_Delta: all P1 edges, P2 edges of positive probability.
  std::vector<char> support_edges() const;
  Rational prob(EdgeId e) const;
};

// Finite Markov chain. Every state carries a distribution over its out-edges.
struct MarkovChain {
  GameGraph graph;
  std::vector<Distribution> delta;
  // Origin of each chain state and edge when the chain comes from fix_both.
  std::vector<StateId> state_of;
  std::vector<Mem> mem1_of, mem2_of;
  std::vector<EdgeId> edge_of;

  std::size_t size() const { return graph.num_states(); }
};

struct ProductGame {
  GameGraph game;
  std::vector<StateId> state_of;
  std::vector<Mem> mem_of;
  std::vector<EdgeId> edge_of;
  // The machine re-expressed on the product: one memory element.
  TableMachine memoryless;

  StateId find(StateId s, Mem m) const;

  struct KeyHash {
    std::size_t operator()(const std::pair<StateId, Mem>& k) const noexcept {
      return std::hash<Mem>()(k.second * 0x9e3779b97f4a7c15ULL ^ k.first);
    }
  };
  std::unordered_map<std::pair<StateId, Mem>, StateId, KeyHash> index;
};

// G x M over reachable (state, memory) pairs. Every game edge is kept, so
// the other player (and the machine's own zero-probability moves) stay free;
// outputs are required at all reachable `owner` states.
ProductGame product_with_machine(const GameGraph& g, const Machine& m,
                                 Player owner = Player::P2);

// P := G[model] for a memoryless model.
Mdp fix_player2(const GameGraph& g, const TableMachine& model);

// G[s1, s2] over reachable (state, mem1, mem2) triples.
MarkovChain fix_both(const GameGraph& g, const Machine& s1, const Machine& s2,
                     std::size_t limit = 1u << 22);

// Markov chain of an MDP under a memoryless (possibly randomized) policy.
MarkovChain fix_policy(const Mdp& p, const std::vector<Distribution>& policy);

struct TransformedGame {
  GameGraph game;
  Rational a, b;  // mu = a / b
  Rational threshold(const Rational& nu) const { return b * nu - a; }
  Rational back(const Rational& v) const { return (v + a) / b; }
};

// w'(e) = b * w(e) - a for mu = a / b; worst-case threshold becomes 0.
TransformedGame transform_weights_mp(const GameGraph& g, const Rational& mu);

}  // namespace bwc
