#include "bwc/machine.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <stdexcept>
#include <unordered_set>

namespace bwc {

Distribution dirac(EdgeId e) { return {Choice{e, Rational(1)}}; }

Rational total_mass(const Distribution& d) {
  Rational t;
  for (const auto& c : d) t += c.prob;
  return t;
}

void normalize_order(Distribution& d) {
  std::sort(d.begin(), d.end(), [](const Choice& a, const Choice& b) { return a.edge < b.edge; });
}

std::string Machine::mem_name(Mem m) const { return "m" + std::to_string(m); }

TableMachine::TableMachine(const GameGraph& g, std::string name) : name_(std::move(name)) {
  edge_src_.reserve(g.num_edges());
  for (const auto& e : g.edges()) edge_src_.push_back(e.src);
}

Mem TableMachine::add_memory(std::string id) {
  if (mem_index_.count(id)) throw std::invalid_argument("duplicate memory '" + id + "'");
  Mem m = mem_names_.size();
  mem_index_.emplace(id, m);
  mem_names_.push_back(std::move(id));
  return m;
}

std::optional<Mem> TableMachine::find_memory(const std::string& id) const {
  auto it = mem_index_.find(id);
  if (it == mem_index_.end()) return std::nullopt;
  return it->second;
}

void TableMachine::set_state_update(Mem m, StateId s, Mem to) {
  auto [it, fresh] = state_upd_.insert_or_assign(key(m, s), to);
  if (fresh) update_order_.push_back({m, false, s, to});
  else for (auto& r : update_order_) if (r.mem == m && !r.per_edge && r.key == s) r.to = to;
}

void TableMachine::set_edge_update(Mem m, EdgeId e, Mem to) {
  auto [it, fresh] = edge_upd_.insert_or_assign(key(m, e), to);
  if (fresh) update_order_.push_back({m, true, e, to});
  else for (auto& r : update_order_) if (r.mem == m && r.per_edge && r.key == e) r.to = to;
}

void TableMachine::set_output(Mem m, StateId s, Distribution d) {
  normalize_order(d);
  auto [it, fresh] = out_.insert_or_assign(key(m, s), std::move(d));
  if (fresh) output_order_.push_back({m, s});
}

std::optional<Mem> TableMachine::state_update(Mem m, StateId s) const {
  auto it = state_upd_.find(key(m, s));
  if (it == state_upd_.end()) return std::nullopt;
  return it->second;
}

std::optional<Mem> TableMachine::edge_update(Mem m, EdgeId e) const {
  auto it = edge_upd_.find(key(m, e));
  if (it == edge_upd_.end()) return std::nullopt;
  return it->second;
}

Mem TableMachine::update(Mem m, EdgeId e) const {
  if (auto it = edge_upd_.find(key(m, e)); it != edge_upd_.end()) return it->second;
  if (auto it = state_upd_.find(key(m, edge_src_.at(e))); it != state_upd_.end())
    return it->second;
  return m;  // rows may be omitted when the memory stays put
}

bool TableMachine::has_output(Mem m, StateId s) const { return out_.count(key(m, s)) != 0; }

Distribution TableMachine::next(Mem m, StateId s) const {
  auto it = out_.find(key(m, s));
  if (it == out_.end()) throw std::out_of_range("no output for memory " + mem_name(m));
  return it->second;
}

bool operator==(const TableMachine& a, const TableMachine& b) {
  if (a.mem_names_ != b.mem_names_ || a.initial_ != b.initial_) return false;
  if (a.state_upd_ != b.state_upd_ || a.edge_upd_ != b.edge_upd_) return false;
  return a.out_ == b.out_;
}

std::vector<std::string> check_machine(const GameGraph& g, const TableMachine& m, Player owner) {
  std::vector<std::string> errs;
  for (const auto& row : m.output_rows()) {
    const std::string where = "(" + m.mem_name(row.mem) + ", " + g.state_name(row.state) + ")";
    if (g.owner(row.state) != owner) errs.push_back("output for a state of the other player " + where);
    Distribution d = m.next(row.mem, row.state);
    Rational sum;
    for (const auto& c : d) {
      if (c.edge >= g.num_edges() || g.edge(c.edge).src != row.state)
        errs.push_back("support outside successors at " + where);
      if (c.prob.sign() < 0) errs.push_back("negative probability at " + where);
      sum += c.prob;
    }
    if (sum != Rational(1)) errs.push_back("distribution at " + where + " sums to " + sum.str());
  }
  return errs;
}

TableMachine memoryless_pure(const GameGraph& g, const std::vector<EdgeId>& choice,
                             std::string name) {
  TableMachine m(g, std::move(name));
  m.add_memory("m0");
  for (StateId s = 0; s < g.num_states(); ++s) {
    if (s < choice.size() && choice[s] != kNoEdge) m.set_output(0, s, dirac(choice[s]));
  }
  return m;
}

TableMachine memoryless_uniform(const GameGraph& g, Player owner, std::string name) {
  TableMachine m(g, std::move(name));
  m.add_memory("m0");
  for (StateId s = 0; s < g.num_states(); ++s) {
    if (g.owner(s) != owner || g.out(s).empty()) continue;
    Distribution d;
    auto n = static_cast<long long>(g.out(s).size());
    for (EdgeId e : g.out(s)) d.push_back({e, Rational(1, n)});
    m.set_output(0, s, std::move(d));
  }
  return m;
}

namespace {

struct PairHash {
  std::size_t operator()(const std::pair<Mem, StateId>& p) const noexcept {
    return std::hash<Mem>()(p.first * 0x9e3779b97f4a7c15ULL ^ p.second);
  }
};

template <class Visit>
void explore(const GameGraph& g, const Machine& m, Player owner, std::size_t limit, Visit&& visit) {
  std::unordered_set<std::pair<Mem, StateId>, PairHash> seen;
  std::deque<std::pair<Mem, StateId>> queue;
  auto push = [&](Mem mem, StateId s) {
    if (seen.insert({mem, s}).second) {
      if (seen.size() > limit) throw std::length_error("machine product exceeds limit");
      queue.emplace_back(mem, s);
    }
  };
  push(m.initial(), g.initial());
  while (!queue.empty()) {
    auto [mem, s] = queue.front();
    queue.pop_front();
    std::vector<EdgeId> moves;
    std::optional<Distribution> d;
    if (g.owner(s) == owner && m.has_output(mem, s)) {
      d = m.next(mem, s);
      for (const auto& c : *d)
        if (c.prob.sign() > 0) moves.push_back(c.edge);
    } else {
      moves.assign(g.out(s).begin(), g.out(s).end());
    }
    visit(mem, s, d, moves);
    for (EdgeId e : moves) push(m.update(mem, e), g.edge(e).dst);
  }
}

}  // namespace

TableMachine materialize(const GameGraph& g, const Machine& m, Player owner, std::size_t limit) {
  TableMachine t(g, "strategy");
  std::map<Mem, Mem> ids;
  auto id_of = [&](Mem mem) {
    auto it = ids.find(mem);
    if (it != ids.end()) return it->second;
    if (ids.size() >= limit) throw std::length_error("machine exceeds materialization limit");
    std::string name = m.mem_name(mem);
    for (int k = 1; t.find_memory(name); ++k) name = m.mem_name(mem) + "." + std::to_string(k);
    Mem fresh = t.add_memory(name);
    ids.emplace(mem, fresh);
    return fresh;
  };
  t.set_initial(id_of(m.initial()));
  explore(g, m, owner, limit * std::max<std::size_t>(1, g.num_states()),
          [&](Mem mem, StateId s, const std::optional<Distribution>& d,
              const std::vector<EdgeId>& moves) {
            Mem self = id_of(mem);
            if (d) t.set_output(self, s, *d);
            if (moves.empty()) return;
            std::optional<Mem> common;
            bool uniform = true;
            std::vector<std::pair<EdgeId, Mem>> ups;
            for (EdgeId e : g.out(s)) {
              if (std::find(moves.begin(), moves.end(), e) == moves.end()) continue;
              Mem to = id_of(m.update(mem, e));
              ups.emplace_back(e, to);
              if (!common) common = to;
              else if (*common != to) uniform = false;
            }
            if (uniform && moves.size() == g.out(s).size()) {
              if (*common != self) t.set_state_update(self, s, *common);
            } else {
              for (auto [e, to] : ups)
                if (to != self) t.set_edge_update(self, e, to);
            }
          });
  return t;
}

std::size_t reachable_pairs(const GameGraph& g, const Machine& m, Player owner, std::size_t limit) {
  std::size_t n = 0;
  explore(g, m, owner, limit,
          [&](Mem, StateId, const std::optional<Distribution>&, const std::vector<EdgeId>&) { ++n; });
  return n;
}

}  // namespace bwc
