#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bwc/game.hpp"
#include "bwc/machine.hpp"
#include "bwc/rational.hpp"
#include "bwc/types.hpp"

namespace bwc {

struct Digraph {
  struct Arc {
    std::uint32_t from, to;
    Weight weight;
  };
  std::size_t nodes = 0;
  std::vector<Arc> arcs;
};

struct MeanCycle {
  Rational mean;
  std::vector<std::uint32_t> nodes;  // cycle in traversal order
};

// Minimum mean cycle. Karp's table algorithm, with a zero reduced-weight
// cycle extracted afterwards.
std::optional<MeanCycle> karp_min_mean_cycle(const Digraph& g);
// Howard's policy iteration, exact. Used for large components.
std::optional<MeanCycle> howard_min_mean_cycle(const Digraph& g);
// Component-wise dispatch between the two.
std::optional<MeanCycle> min_mean_cycle(const Digraph& g);

// Game x strategy over reachable (state, memory) pairs: P1 follows the
// strategy's support, P2 may take any edge. With `stop_at_targets`, target
// nodes are not expanded.
struct StrategyProduct {
  Digraph graph;
  std::vector<StateId> state_of;
  std::vector<Mem> mem_of;
  std::vector<EdgeId> edge_of;  // per arc
};
StrategyProduct strategy_product(const GameGraph& g, const Machine& strategy,
                                 bool stop_at_targets = false, std::size_t limit = 1u << 22);

// Plays the first out-edge on targets where the wrapped machine has no
// output, so behaviour after a target never blocks a chain construction.
class TargetPadded final : public Machine {
 public:
  TargetPadded(const GameGraph& g, const Machine& inner) : g_(g), inner_(inner) {}
  Mem initial() const override { return inner_.initial(); }
  Mem update(Mem m, EdgeId e) const override { return inner_.update(m, e); }
  bool has_output(Mem m, StateId s) const override {
    return inner_.has_output(m, s) || g_.is_target(s);
  }
  Distribution next(Mem m, StateId s) const override {
    if (inner_.has_output(m, s)) return inner_.next(m, s);
    return dirac(g_.out(s)[0]);
  }
  std::string mem_name(Mem m) const override { return inner_.mem_name(m); }
  std::optional<std::size_t> declared_size() const override { return inner_.declared_size(); }

 private:
  const GameGraph& g_;
  const Machine& inner_;
};

// Worst-case mean-payoff that the strategy guarantees from the initial state.
Rational worst_case_mp(const GameGraph& g, const Machine& strategy);

VerificationReport verify_mp(const GameGraph& g, const Machine& strategy, const Machine& model,
                             const Rational& mu, const Rational& nu);
// Targets are those of the game.
VerificationReport verify_sp(const GameGraph& g, const Machine& strategy, const Machine& model,
                             const Rational& mu, const Rational& nu);

}  // namespace bwc
