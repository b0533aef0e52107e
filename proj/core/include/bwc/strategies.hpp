#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "bwc/game.hpp"
#include "bwc/machine.hpp"
#include "bwc/product.hpp"
#include "bwc/rational.hpp"

namespace bwc {

// Memory word of the structured strategies (56 bits):
//   mode:3 | ec:7 | counter:21 | sum:25 (offset binary)
enum class Mode : std::uint8_t {
  PhaseA = 0,   // expectation phase, counter = steps taken, sum = running sum
  PhaseB = 1,   // compensation phase, counter = steps taken
  Secure = 2,   // worst-case strategy forever
  Prefix = 3,   // global prefix, counter = steps taken
};

struct MemFields {
  Mode mode = Mode::PhaseA;
  std::uint32_t ec = 0;
  std::uint32_t counter = 0;
  std::int64_t sum = 0;
};

inline constexpr std::uint32_t kMaxCounter = (1u << 21) - 1;
inline constexpr std::int64_t kMaxSum = (std::int64_t{1} << 24) - 1;
inline constexpr std::uint32_t kMaxEcs = 1u << 7;

Mem encode(const MemFields& f);
MemFields decode(Mem m);

// Parameters of the combined strategy inside one winning end component of a
// base game (the game after preprocessing).
struct EcPlan {
  std::vector<StateId> states;  // sorted
  std::vector<EdgeId> e1;       // per base state: expectation-optimal edge
  std::vector<EdgeId> wc;       // per base state: worst-case edge inside the EC
  std::uint32_t K = 1;
  std::uint32_t L = 0;
  Weight W = 0;            // max |weight| inside the EC; Sum is clamped to K*W
  Rational gain;           // optimal expectation inside the EC
  Rational mu_star;        // worst-case value guaranteed by wc
};

// Everything the structured machines need, expressed on the base game.
struct StructuredPlan {
  std::vector<Weight> weight;   // per base edge
  std::vector<StateId> src;     // per base edge
  std::vector<StateId> dst;     // per base edge
  std::vector<Player> owner;    // per base state
  std::vector<char> support;    // per base edge: in E_Delta
  std::vector<int> ec_of;       // per base state: EC index or -1
  std::vector<EcPlan> ecs;
  std::vector<EdgeId> secure;   // game-wide worst-case strategy; empty = no switch
  std::vector<EdgeId> prefix;   // global prefix policy; used when N > 0
  std::uint32_t N = 0;
  StateId initial = 0;
};

StructuredPlan make_plan_base(const GameGraph& base, const std::vector<char>& support);

// Combined / witness-and-secure / global strategy on the base game, chosen by
// the plan: N > 0 starts with the prefix, a non-empty `secure` enables the
// switch on off-support adversary edges.
class StructuredStrategy final : public Machine {
 public:
  explicit StructuredStrategy(std::shared_ptr<const StructuredPlan> plan);
  Mem initial() const override;
  Mem update(Mem m, EdgeId e) const override;
  bool has_output(Mem m, StateId s) const override;
  Distribution next(Mem m, StateId s) const override;
  std::string mem_name(Mem m) const override;
  const StructuredPlan& plan() const { return *plan_; }

 private:
  Mem enter(StateId s) const;  // memory when the suffix starts in s
  EdgeId choice(Mem m, StateId s) const;
  std::shared_ptr<const StructuredPlan> plan_;
};

// Maps a strategy on the base game (G restricted to some states, times the
// adversary model) back to the original game. The model memory rides in the
// top 8 bits.
class LiftedStrategy final : public Machine {
 public:
  // `sub` maps base-subgame ids to the original game, `prod` is the product of
  // that subgame with `model`. Pass an identity subgame when nothing was cut.
  LiftedStrategy(std::shared_ptr<const GameGraph> original, std::shared_ptr<const Subgame> sub,
                 std::shared_ptr<const ProductGame> prod, std::shared_ptr<const Machine> model,
                 std::shared_ptr<const Machine> inner);
  Mem initial() const override;
  Mem update(Mem m, EdgeId e) const override;
  bool has_output(Mem m, StateId s) const override;
  Distribution next(Mem m, StateId s) const override;
  std::string mem_name(Mem m) const override;
  const Machine& inner() const { return *inner_; }

 private:
  static constexpr int kShift = 56;
  static constexpr Mem kLow = (Mem{1} << kShift) - 1;
  StateId base_state(StateId s, Mem model_mem) const;
  EdgeId base_edge(StateId bs, EdgeId e) const;

  std::shared_ptr<const GameGraph> g_;
  std::shared_ptr<const Subgame> sub_;
  std::shared_ptr<const ProductGame> prod_;
  std::shared_ptr<const Machine> model_;
  std::shared_ptr<const Machine> inner_;
  std::vector<EdgeId> parent_edge_;  // product edge -> original edge
  bool single_model_mem_ = false;
};

// Identity subgame of g (all states and edges kept).
Subgame identity_subgame(const GameGraph& g);

// Shortest-path strategy with memory (truncated sum so far, model memory):
// a table from (state, model memory, sum) to an edge.
class SpCounterStrategy final : public Machine {
 public:
  SpCounterStrategy(std::shared_ptr<const GameGraph> g, std::shared_ptr<const Machine> model, Weight mu);
  void set_choice(StateId s, Mem model_mem, Weight sum, EdgeId e);
  Mem initial() const override;
  Mem update(Mem m, EdgeId e) const override;
  bool has_output(Mem m, StateId s) const override;
  Distribution next(Mem m, StateId s) const override;
  std::string mem_name(Mem m) const override;
  std::size_t table_size() const { return table_.size(); }
  // Number of distinct (sum, model memory) pairs used by the table.
  std::size_t memory_count() const;

 private:
  // Memory word: running sum (saturated at mu) in the low 32 bits, model
  // memory above.
  static Mem word(Weight sum, Mem model_mem) { return (model_mem << 32) | static_cast<Mem>(sum); }
  std::shared_ptr<const GameGraph> g_;
  std::shared_ptr<const Machine> model_;
  Weight mu_;
  std::unordered_map<std::pair<StateId, Mem>, EdgeId, ProductGame::KeyHash> table_;
};

}  // namespace bwc
