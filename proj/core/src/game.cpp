#include "bwc/game.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace bwc {

StateId GameGraph::add_state(std::string id, Player owner) {
  if (index_.count(id)) throw std::invalid_argument("duplicate state '" + id + "'");
  auto s = static_cast<StateId>(names_.size());
  index_.emplace(id, s);
  names_.push_back(std::move(id));
  owner_.push_back(owner);
  out_.emplace_back();
  in_.emplace_back();
  target_flag_.push_back(0);
  return s;
}

EdgeId GameGraph::add_edge(StateId src, StateId dst, Weight w) {
  if (src >= names_.size() || dst >= names_.size())
    throw std::out_of_range("edge endpoint out of range");
  auto e = static_cast<EdgeId>(edges_.size());
  edges_.push_back({src, dst, w});
  out_[src].push_back(e);
  in_[dst].push_back(e);
  return e;
}

void GameGraph::add_target(StateId s) {
  if (target_flag_.at(s)) return;
  target_flag_[s] = 1;
  targets_.push_back(s);
}

void GameGraph::set_targets(std::vector<StateId> t) {
  std::fill(target_flag_.begin(), target_flag_.end(), 0);
  targets_.clear();
  for (StateId s : t) add_target(s);
}

bool GameGraph::is_target(StateId s) const { return target_flag_[s] != 0; }

std::optional<StateId> GameGraph::find_state(std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::optional<EdgeId> GameGraph::find_edge(StateId src, StateId dst,
                                           std::optional<Weight> w) const {
  for (EdgeId e : out_[src]) {
    if (edges_[e].dst == dst && (!w || edges_[e].weight == *w)) return e;
  }
  return std::nullopt;
}

std::size_t GameGraph::multiplicity(StateId src, StateId dst) const {
  std::size_t n = 0;
  for (EdgeId e : out_[src]) n += edges_[e].dst == dst;
  return n;
}

Weight GameGraph::max_abs_weight() const {
  Weight m = 0;
  for (const auto& e : edges_) m = std::max(m, e.weight < 0 ? -e.weight : e.weight);
  return m;
}

std::vector<StateId> GameGraph::successors(StateId s) const {
  std::vector<StateId> r;
  for (EdgeId e : out_[s]) {
    if (std::find(r.begin(), r.end(), edges_[e].dst) == r.end()) r.push_back(edges_[e].dst);
  }
  return r;
}

bool operator==(const GameGraph& a, const GameGraph& b) {
  return a.name_ == b.name_ && a.names_ == b.names_ && a.owner_ == b.owner_ &&
         a.edges_ == b.edges_ && a.initial_ == b.initial_ && a.targets_ == b.targets_;
}

std::vector<Violation> validate(const GameGraph& g) {
  std::vector<Violation> v;
  for (StateId s = 0; s < g.num_states(); ++s) {
    if (g.out(s).empty())
      v.push_back({Violation::Kind::Deadlock, "deadlock at " + g.state_name(s)});
    std::set<std::pair<StateId, Weight>> seen;
    for (EdgeId e : g.out(s)) {
      const Edge& ed = g.edge(e);
      if (!seen.insert({ed.dst, ed.weight}).second) {
        v.push_back({Violation::Kind::DuplicateEdge,
                     "duplicate edge " + g.state_name(s) + " -> " + g.state_name(ed.dst) +
                         " weight " + std::to_string(ed.weight)});
      }
    }
  }
  if (!g.has_initial() && g.num_states() > 0)
    v.push_back({Violation::Kind::MissingInitial, "no initial state"});
  return v;
}

Subgame restrict_to(const GameGraph& g, const std::vector<char>& keep,
                    const std::vector<char>* edge_keep) {
  Subgame r;
  r.game.set_name(g.name());
  r.from_parent_state.assign(g.num_states(), kNoState);
  for (StateId s = 0; s < g.num_states(); ++s) {
    if (!keep[s]) continue;
    r.from_parent_state[s] = r.game.add_state(g.state_name(s), g.owner(s));
    r.to_parent_state.push_back(s);
  }
  for (StateId s : r.to_parent_state) {
    for (EdgeId e : g.out(s)) {
      const Edge& ed = g.edge(e);
      if (!keep[ed.dst]) continue;
      if (edge_keep && !(*edge_keep)[e]) continue;
      r.game.add_edge(r.from_parent_state[s], r.from_parent_state[ed.dst], ed.weight);
      r.to_parent_edge.push_back(e);
    }
  }
  if (g.has_initial() && keep[g.initial()]) r.game.set_initial(r.from_parent_state[g.initial()]);
  for (StateId t : g.targets()) {
    if (keep[t]) r.game.add_target(r.from_parent_state[t]);
  }
  return r;
}

GameGraph split_parallel_edges(const GameGraph& g) {
  GameGraph r(g.name());
  for (StateId s = 0; s < g.num_states(); ++s) r.add_state(g.state_name(s), g.owner(s));
  std::size_t fresh = 0;
  for (StateId s = 0; s < g.num_states(); ++s) {
    std::set<StateId> used;
    for (EdgeId e : g.out(s)) {
      const Edge& ed = g.edge(e);
      if (used.insert(ed.dst).second) {
        r.add_edge(s, ed.dst, ed.weight);
        continue;
      }
      std::string id;
      do {
        id = g.state_name(s) + "_" + g.state_name(ed.dst) + "_" + std::to_string(fresh++);
      } while (r.find_state(id));
      StateId mid = r.add_state(id, Player::P1);
      r.add_edge(s, mid, ed.weight);
      r.add_edge(mid, ed.dst, ed.weight);
    }
  }
  if (g.has_initial()) r.set_initial(g.initial());
  for (StateId t : g.targets()) r.add_target(t);
  return r;
}

}  // namespace bwc
