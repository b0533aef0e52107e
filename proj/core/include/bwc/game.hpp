#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace bwc {

using StateId = std::uint32_t;
using EdgeId = std::uint32_t;
using Weight = std::int64_t;

inline constexpr StateId kNoState = static_cast<StateId>(-1);
inline constexpr EdgeId kNoEdge = static_cast<EdgeId>(-1);

enum class Player : std::uint8_t { P1, P2 };

struct Edge {
  StateId src;
  StateId dst;
  Weight weight;
  friend bool operator==(const Edge&, const Edge&) = default;
};

// Weighted two-player game graph. States and edges are indexed densely in
// declaration order. Parallel edges between the same pair of states are
// allowed as long as their weights differ; an edge is then identified by
// (src, dst, weight).
class GameGraph {
 public:
  GameGraph() = default;
  explicit GameGraph(std::string name) : name_(std::move(name)) {}

  const std::string& name() const { return name_; }
  void set_name(std::string n) { name_ = std::move(n); }

  StateId add_state(std::string id, Player owner);
  EdgeId add_edge(StateId src, StateId dst, Weight w);
  void set_initial(StateId s) { initial_ = s; }
  void add_target(StateId s);
  void set_targets(std::vector<StateId> t);

  std::size_t num_states() const { return names_.size(); }
  std::size_t num_edges() const { return edges_.size(); }

  const std::string& state_name(StateId s) const { return names_[s]; }
  Player owner(StateId s) const { return owner_[s]; }
  const Edge& edge(EdgeId e) const { return edges_[e]; }
  const std::vector<Edge>& edges() const { return edges_; }
  std::span<const EdgeId> out(StateId s) const { return out_[s]; }
  std::span<const EdgeId> in(StateId s) const { return in_[s]; }

  StateId initial() const { return initial_; }
  bool has_initial() const { return initial_ != kNoState; }
  const std::vector<StateId>& targets() const { return targets_; }
  bool is_target(StateId s) const;

  std::optional<StateId> find_state(std::string_view id) const;
  // First edge src -> dst in declaration order, optionally with a given weight.
  std::optional<EdgeId> find_edge(StateId src, StateId dst,
                                  std::optional<Weight> w = std::nullopt) const;
  // Number of edges src -> dst.
  std::size_t multiplicity(StateId src, StateId dst) const;

  Weight max_abs_weight() const;
  std::vector<StateId> successors(StateId s) const;

  friend bool operator==(const GameGraph& a, const GameGraph& b);

 private:
  std::string name_;
  std::vector<std::string> names_;
  std::vector<Player> owner_;
  std::vector<Edge> edges_;
  std::vector<std::vector<EdgeId>> out_;
  std::vector<std::vector<EdgeId>> in_;
  std::unordered_map<std::string, StateId> index_;
  StateId initial_ = kNoState;
  std::vector<StateId> targets_;
  std::vector<char> target_flag_;
};

struct Violation {
  enum class Kind : std::uint8_t { Deadlock, DuplicateEdge, MissingInitial, BadReference };
  Kind kind;
  std::string message;
};

// Structural checks: non-blocking, no duplicate (src, dst, weight) edges,
// initial state present.
std::vector<Violation> validate(const GameGraph& g);

// Subgame induced by a state subset. Edges leaving the subset are dropped.
// The returned vectors map new ids to old ones.
struct Subgame {
  GameGraph game;
  std::vector<StateId> to_parent_state;
  std::vector<EdgeId> to_parent_edge;
  std::vector<StateId> from_parent_state;  // kNoState outside the subset
};
Subgame restrict_to(const GameGraph& g, const std::vector<char>& keep,
                    const std::vector<char>* edge_keep = nullptr);

// Replaces every extra edge of a parallel group by a path through a fresh
// single-successor state carrying the same weight on both halves. Afterwards
// at most one edge joins any ordered pair of states.
GameGraph split_parallel_edges(const GameGraph& g);

}  // namespace bwc
