#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "bwc/game.hpp"
#include "bwc/rational.hpp"

namespace bwc {

using Mem = std::uint64_t;

struct Choice {
  EdgeId edge;
  Rational prob;
  friend bool operator==(const Choice&, const Choice&) = default;
};

// A distribution over the out-edges of one state. Entries are kept sorted by
// edge id and have strictly positive probabilities, except when a model
// explicitly lists a zero-probability edge (kept so the support is visible).
using Distribution = std::vector<Choice>;

Distribution dirac(EdgeId e);
Rational total_mass(const Distribution& d);
void normalize_order(Distribution& d);

// Stochastic Moore machine over the edges of one fixed game. The memory is
// updated when leaving a state, from the edge that was taken; a machine whose
// update only looks at the source state is the textbook special case.
class Machine {
 public:
  virtual ~Machine() = default;
  virtual Mem initial() const = 0;
  virtual Mem update(Mem m, EdgeId e) const = 0;
  virtual bool has_output(Mem m, StateId s) const = 0;
  virtual Distribution next(Mem m, StateId s) const = 0;
  virtual std::string mem_name(Mem m) const;
  // Number of memory elements when it is known up front.
  virtual std::optional<std::size_t> declared_size() const { return std::nullopt; }
};

using MachinePtr = std::shared_ptr<const Machine>;

// Machine given by explicit tables, as read from a .bwcm file.
class TableMachine final : public Machine {
 public:
  TableMachine() = default;
  TableMachine(const GameGraph& g, std::string name);

  const std::string& name() const { return name_; }
  void set_name(std::string n) { name_ = std::move(n); }

  Mem add_memory(std::string id);
  void set_initial(Mem m) { initial_ = m; }
  // Source-state level update: applies to every edge leaving s.
  void set_state_update(Mem m, StateId s, Mem to);
  void set_edge_update(Mem m, EdgeId e, Mem to);
  void set_output(Mem m, StateId s, Distribution d);

  std::size_t size() const { return mem_names_.size(); }
  std::optional<Mem> find_memory(const std::string& id) const;
  bool memoryless() const { return mem_names_.size() == 1; }

  Mem initial() const override { return initial_; }
  Mem update(Mem m, EdgeId e) const override;
  bool has_output(Mem m, StateId s) const override;
  Distribution next(Mem m, StateId s) const override;
  std::string mem_name(Mem m) const override { return mem_names_.at(m); }
  std::optional<std::size_t> declared_size() const override { return size(); }

  std::optional<Mem> state_update(Mem m, StateId s) const;
  std::optional<Mem> edge_update(Mem m, EdgeId e) const;

  struct OutputRow { Mem mem; StateId state; };
  // Output rows in insertion order.
  const std::vector<OutputRow>& output_rows() const { return output_order_; }
  struct UpdateRow { Mem mem; bool per_edge; std::uint32_t key; Mem to; };
  const std::vector<UpdateRow>& update_rows() const { return update_order_; }

  friend bool operator==(const TableMachine& a, const TableMachine& b);

 private:
  static std::uint64_t key(Mem m, std::uint32_t x) { return (m << 32) | x; }

  std::string name_;
  std::vector<StateId> edge_src_;
  std::vector<std::string> mem_names_;
  std::unordered_map<std::string, Mem> mem_index_;
  Mem initial_ = 0;
  std::unordered_map<std::uint64_t, Mem> state_upd_;
  std::unordered_map<std::uint64_t, Mem> edge_upd_;
  std::unordered_map<std::uint64_t, Distribution> out_;
  std::vector<OutputRow> output_order_;
  std::vector<UpdateRow> update_order_;
};

// Problems with a machine used on behalf of `owner` in game g: wrong mass,
// edges of the wrong state, outputs on states of the other player.
std::vector<std::string> check_machine(const GameGraph& g, const TableMachine& m, Player owner);

// Memoryless pure machine from a choice of edge per state (kNoEdge = none).
TableMachine memoryless_pure(const GameGraph& g, const std::vector<EdgeId>& choice,
                             std::string name = "strategy");
// Memoryless model that is uniform over the out-edges of every `owner` state.
TableMachine memoryless_uniform(const GameGraph& g, Player owner, std::string name = "model");

// Explicit table for the part of a machine reachable in g when it plays for
// `owner` (its own moves follow its support, the other side is arbitrary).
// Throws std::length_error when more than `limit` memory elements are reached.
TableMachine materialize(const GameGraph& g, const Machine& m, Player owner,
                         std::size_t limit = 1u << 20);

// Deterministic count of (memory, state) pairs reachable as above.
std::size_t reachable_pairs(const GameGraph& g, const Machine& m, Player owner,
                            std::size_t limit = 1u << 24);

}  // namespace bwc
