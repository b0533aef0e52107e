#include "bwc/product.hpp"

#include <deque>
#include <stdexcept>
#include <tuple>

namespace bwc {

std::vector<char> Mdp::support_edges() const {
  std::vector<char> keep(graph.num_edges(), 1);
  for (StateId s = 0; s < graph.num_states(); ++s) {
    if (!stochastic(s)) continue;
    for (EdgeId e : graph.out(s)) keep[e] = 0;
    for (const auto& c : delta[s])
      if (c.prob.sign() > 0) keep[c.edge] = 1;
  }
  return keep;
}

Rational Mdp::prob(EdgeId e) const {
  StateId s = graph.edge(e).src;
  for (const auto& c : delta[s])
    if (c.edge == e) return c.prob;
  return Rational(0);
}

StateId ProductGame::find(StateId s, Mem m) const {
  auto it = index.find({s, m});
  return it == index.end() ? kNoState : it->second;
}

ProductGame product_with_machine(const GameGraph& g, const Machine& m, Player owner) {
  if (!g.has_initial()) throw std::invalid_argument("product of a game without initial state");
  ProductGame p;
  p.game.set_name(g.name());
  std::deque<StateId> queue;
  auto node = [&](StateId s, Mem mem) {
    std::pair<StateId, Mem> k{s, mem};
    auto it = p.index.find(k);
    if (it != p.index.end()) return it->second;
    std::string name = g.state_name(s);
    if (m.declared_size().value_or(2) != 1) name += "." + m.mem_name(mem);
    while (p.game.find_state(name)) name += "'";
    StateId id = p.game.add_state(name, g.owner(s));
    p.index.emplace(k, id);
    p.state_of.push_back(s);
    p.mem_of.push_back(mem);
    queue.push_back(id);
    return id;
  };
  p.game.set_initial(node(g.initial(), m.initial()));
  while (!queue.empty()) {
    StateId u = queue.front();
    queue.pop_front();
    StateId s = p.state_of[u];
    Mem mem = p.mem_of[u];
    if (g.owner(s) == owner && !m.has_output(mem, s))
      throw std::runtime_error("machine output undefined at (" + m.mem_name(mem) + ", " +
                               g.state_name(s) + ")");
    for (EdgeId e : g.out(s)) {
      StateId v = node(g.edge(e).dst, m.update(mem, e));
      p.game.add_edge(u, v, g.edge(e).weight);
      p.edge_of.push_back(e);
    }
  }
  for (StateId t : g.targets())
    for (StateId u = 0; u < p.game.num_states(); ++u)
      if (p.state_of[u] == t) p.game.add_target(u);

  p.memoryless = TableMachine(p.game, "memoryless");
  p.memoryless.add_memory("m0");
  for (StateId u = 0; u < p.game.num_states(); ++u) {
    StateId s = p.state_of[u];
    if (g.owner(s) != owner) continue;
    Distribution src = m.next(p.mem_of[u], s);
    Distribution d;
    auto outs = p.game.out(u);
    auto orig = g.out(s);
    for (const auto& c : src) {
      std::size_t pos = 0;
      while (pos < orig.size() && orig[pos] != c.edge) ++pos;
      if (pos == orig.size()) throw std::runtime_error("machine output outside successors");
      d.push_back({outs[pos], c.prob});
    }
    p.memoryless.set_output(0, u, std::move(d));
  }
  return p;
}

Mdp fix_player2(const GameGraph& g, const TableMachine& model) {
  if (model.size() != 1) throw std::invalid_argument("fix_player2 needs a memoryless model");
  Mdp p{g, std::vector<Distribution>(g.num_states())};
  for (StateId s = 0; s < g.num_states(); ++s) {
    if (g.owner(s) != Player::P2) continue;
    if (!model.has_output(0, s))
      throw std::runtime_error("model output undefined at " + g.state_name(s));
    p.delta[s] = model.next(0, s);
  }
  return p;
}

namespace {

struct TripleHash {
  std::size_t operator()(const std::tuple<StateId, Mem, Mem>& t) const noexcept {
    auto [s, a, b] = t;
    std::size_t h = s;
    h = h * 0x9e3779b97f4a7c15ULL ^ a;
    h = h * 0x9e3779b97f4a7c15ULL ^ b;
    return h ^ (h >> 29);
  }
};

}  // namespace

MarkovChain fix_both(const GameGraph& g, const Machine& s1, const Machine& s2, std::size_t limit) {
  MarkovChain mc;
  mc.graph.set_name(g.name());
  std::unordered_map<std::tuple<StateId, Mem, Mem>, StateId, TripleHash> index;
  std::deque<StateId> queue;
  auto node = [&](StateId s, Mem a, Mem b) {
    auto key = std::make_tuple(s, a, b);
    auto it = index.find(key);
    if (it != index.end()) return it->second;
    if (index.size() >= limit) throw std::length_error("Markov chain exceeds limit");
    std::string name = g.state_name(s);
    if (s1.declared_size().value_or(2) != 1) name += "." + s1.mem_name(a);
    if (s2.declared_size().value_or(2) != 1) name += "." + s2.mem_name(b);
    StateId id = static_cast<StateId>(index.size());
    if (mc.graph.find_state(name)) name += "#" + std::to_string(id);
    mc.graph.add_state(name, g.owner(s));
    index.emplace(key, id);
    mc.state_of.push_back(s);
    mc.mem1_of.push_back(a);
    mc.mem2_of.push_back(b);
    mc.delta.emplace_back();
    queue.push_back(id);
    return id;
  };
  mc.graph.set_initial(node(g.initial(), s1.initial(), s2.initial()));
  while (!queue.empty()) {
    StateId u = queue.front();
    queue.pop_front();
    StateId s = mc.state_of[u];
    Mem a = mc.mem1_of[u], b = mc.mem2_of[u];
    const Machine& who = g.owner(s) == Player::P1 ? s1 : s2;
    Mem wm = g.owner(s) == Player::P1 ? a : b;
    if (!who.has_output(wm, s))
      throw std::runtime_error("dangling output at (" + who.mem_name(wm) + ", " +
                               g.state_name(s) + ")");
    Distribution d = who.next(wm, s);
    Distribution out;
    for (const auto& c : d) {
      if (c.prob.sign() <= 0) continue;
      const Edge& e = g.edge(c.edge);
      StateId v = node(e.dst, s1.update(a, c.edge), s2.update(b, c.edge));
      EdgeId ne = mc.graph.add_edge(u, v, e.weight);
      mc.edge_of.push_back(c.edge);
      out.push_back({ne, c.prob});
    }
    mc.delta[u] = std::move(out);
  }
  return mc;
}

MarkovChain fix_policy(const Mdp& p, const std::vector<Distribution>& policy) {
  MarkovChain mc;
  const GameGraph& g = p.graph;
  mc.graph.set_name(g.name());
  for (StateId s = 0; s < g.num_states(); ++s) {
    mc.graph.add_state(g.state_name(s), g.owner(s));
    mc.state_of.push_back(s);
  }
  mc.delta.resize(g.num_states());
  for (StateId s = 0; s < g.num_states(); ++s) {
    const Distribution& d = p.stochastic(s) ? p.delta[s] : policy.at(s);
    for (const auto& c : d) {
      if (c.prob.sign() <= 0) continue;
      const Edge& e = g.edge(c.edge);
      EdgeId ne = mc.graph.add_edge(s, e.dst, e.weight);
      mc.edge_of.push_back(c.edge);
      mc.delta[s].push_back({ne, c.prob});
    }
  }
  if (g.has_initial()) mc.graph.set_initial(g.initial());
  for (StateId t : g.targets()) mc.graph.add_target(t);
  return mc;
}

TransformedGame transform_weights_mp(const GameGraph& g, const Rational& mu) {
  TransformedGame t{GameGraph(g.name()), Rational(mu.num()), Rational(mu.den())};
  if (!mu.num().fits_slong_p() || !mu.den().fits_slong_p())
    throw std::overflow_error("threshold too large");
  long a = mu.num().get_si(), b = mu.den().get_si();
  for (StateId s = 0; s < g.num_states(); ++s) t.game.add_state(g.state_name(s), g.owner(s));
  for (const auto& e : g.edges()) t.game.add_edge(e.src, e.dst, b * e.weight - a);
  if (g.has_initial()) t.game.set_initial(g.initial());
  for (StateId s : g.targets()) t.game.add_target(s);
  return t;
}

}  // namespace bwc
