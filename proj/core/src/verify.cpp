#include "bwc/verify.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <stdexcept>
#include <unordered_map>

#include "bwc/mdp_analysis.hpp"
#include "bwc/product.hpp"
#include "bwc/scc.hpp"

namespace bwc {

namespace {

constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max();

using Local = std::vector<std::vector<std::pair<std::uint32_t, Weight>>>;

// Cycle in the subgraph of arcs accepted by `keep`, found by iterative DFS.
template <typename Keep>
std::vector<std::uint32_t> find_cycle(const Local& adj, Keep keep) {
  const std::size_t n = adj.size();
  std::vector<char> color(n, 0);
  std::vector<std::uint32_t> parent(n, 0);
  for (std::uint32_t root = 0; root < n; ++root) {
    if (color[root]) continue;
    std::vector<std::pair<std::uint32_t, std::size_t>> stack{{root, 0}};
    color[root] = 1;
    while (!stack.empty()) {
      auto& [u, i] = stack.back();
      if (i == adj[u].size()) {
        color[u] = 2;
        stack.pop_back();
        continue;
      }
      auto [v, w] = adj[u][i++];
      if (!keep(u, v, w)) continue;
      if (color[v] == 1) {
        std::vector<std::uint32_t> cyc{v};
        for (std::uint32_t x = u; x != v; x = parent[x]) cyc.push_back(x);
        std::reverse(cyc.begin() + 1, cyc.end());
        return cyc;
      }
      if (color[v] == 0) {
        color[v] = 1;
        parent[v] = u;
        stack.emplace_back(v, 0);
      }
    }
  }
  return {};
}

MeanCycle karp_local(const Local& adj) {
  const std::size_t n = adj.size();
  std::vector<std::vector<std::int64_t>> d(n + 1, std::vector<std::int64_t>(n, kInf));
  d[0][0] = 0;
  for (std::size_t k = 1; k <= n; ++k) {
    for (std::uint32_t u = 0; u < n; ++u) {
      if (d[k - 1][u] == kInf) continue;
      for (auto [v, w] : adj[u]) d[k][v] = std::min(d[k][v], d[k - 1][u] + w);
    }
  }
  std::optional<Rational> best;
  for (std::uint32_t v = 0; v < n; ++v) {
    if (d[n][v] == kInf) continue;
    std::optional<Rational> worst;
    for (std::size_t k = 0; k < n; ++k) {
      if (d[k][v] == kInf) continue;
      Rational r(d[n][v] - d[k][v], static_cast<long long>(n - k));
      if (!worst || r > *worst) worst = r;
    }
    if (worst && (!best || *worst < *best)) best = worst;
  }
  MeanCycle mc;
  mc.mean = *best;
  // Potentials for the reduced weights q*w - p; tight arcs contain an
  // optimal cycle.
  const mpz_class p = best->num(), q = best->den();
  std::vector<mpz_class> pot(n);
  std::vector<char> has(n, 0);
  for (std::size_t k = 0; k <= n; ++k) {
    for (std::uint32_t v = 0; v < n; ++v) {
      if (d[k][v] == kInf) continue;
      mpz_class val = q * mpz_class(static_cast<long>(d[k][v])) - mpz_class(static_cast<long>(k)) * p;
      if (!has[v] || val < pot[v]) { pot[v] = val; has[v] = 1; }
    }
  }
  mc.nodes = find_cycle(adj, [&](std::uint32_t u, std::uint32_t v, Weight w) {
    return has[u] && has[v] && pot[u] + q * mpz_class(static_cast<long>(w)) - p == pot[v];
  });
  return mc;
}

MeanCycle howard_local(const Local& adj) {
  const std::size_t n = adj.size();
  std::vector<std::size_t> pol(n, 0);
  std::vector<Rational> eta(n), x(n);
  for (;;) {
    // Evaluate the functional graph of the policy.
    std::vector<int> stamp(n, -1);
    std::vector<char> done(n, 0);
    for (std::uint32_t s = 0; s < n; ++s) {
      if (done[s]) continue;
      std::vector<std::uint32_t> path;
      std::uint32_t u = s;
      while (!done[u] && stamp[u] != static_cast<int>(s)) {
        stamp[u] = static_cast<int>(s);
        path.push_back(u);
        u = adj[u][pol[u]].first;
      }
      std::size_t tail_end = path.size();
      if (!done[u]) {
        // New cycle starting at u.
        auto it = std::find(path.begin(), path.end(), u);
        std::size_t start = static_cast<std::size_t>(it - path.begin());
        Rational sum;
        for (std::size_t i = start; i < path.size(); ++i) sum += Rational(adj[path[i]][pol[path[i]]].second);
        Rational mean = sum / Rational(static_cast<long long>(path.size() - start));
        x[u] = Rational(0);
        eta[u] = mean;
        done[u] = 1;
        for (std::size_t i = path.size(); i-- > start + 1;) {
          std::uint32_t v = path[i];
          auto [t, w] = adj[v][pol[v]];
          eta[v] = mean;
          x[v] = Rational(w) - mean + x[t];
          done[v] = 1;
        }
        tail_end = start;
      }
      for (std::size_t i = tail_end; i-- > 0;) {
        std::uint32_t v = path[i];
        auto [t, w] = adj[v][pol[v]];
        eta[v] = eta[t];
        x[v] = Rational(w) - eta[t] + x[t];
        done[v] = 1;
      }
    }
    bool changed = false;
    for (std::uint32_t v = 0; v < n; ++v) {
      std::size_t best = pol[v];
      for (std::size_t i = 0; i < adj[v].size(); ++i)
        if (eta[adj[v][i].first] < eta[adj[v][best].first]) best = i;
      if (best != pol[v]) { pol[v] = best; changed = true; }
    }
    if (!changed) {
      for (std::uint32_t v = 0; v < n; ++v) {
        std::size_t best = pol[v];
        auto value = [&](std::size_t i) {
          return Rational(adj[v][i].second) - eta[v] + x[adj[v][i].first];
        };
        Rational bv = value(best);
        for (std::size_t i = 0; i < adj[v].size(); ++i) {
          if (eta[adj[v][i].first] != eta[v]) continue;
          Rational val = value(i);
          if (val < bv) { bv = val; best = i; }
        }
        if (best != pol[v] && bv < x[v]) { pol[v] = best; changed = true; }
      }
    }
    if (!changed) break;
  }
  std::uint32_t arg = 0;
  for (std::uint32_t v = 1; v < n; ++v)
    if (eta[v] < eta[arg]) arg = v;
  MeanCycle mc;
  mc.mean = eta[arg];
  std::vector<char> seen(n, 0);
  std::uint32_t u = arg;
  while (!seen[u]) { seen[u] = 1; u = adj[u][pol[u]].first; }
  std::uint32_t c = u;
  do { mc.nodes.push_back(c); c = adj[c][pol[c]].first; } while (c != u);
  return mc;
}

enum class Method { Karp, Howard, Auto };

std::optional<MeanCycle> min_mean_cycle_with(const Digraph& g, Method m) {
  Adjacency adj(g.nodes);
  for (const auto& a : g.arcs) adj[a.from].push_back(a.to);
  auto scc = tarjan_scc(adj);
  std::vector<std::uint32_t> local(g.nodes, 0);
  std::vector<Local> comps(scc.members.size());
  for (const auto& comp : scc.members)
    for (std::size_t i = 0; i < comp.size(); ++i) local[comp[i]] = static_cast<std::uint32_t>(i);
  for (std::size_t c = 0; c < scc.members.size(); ++c) comps[c].resize(scc.members[c].size());
  for (const auto& a : g.arcs) {
    if (scc.comp[a.from] != scc.comp[a.to]) continue;
    comps[scc.comp[a.from]][local[a.from]].emplace_back(local[a.to], a.weight);
  }
  std::optional<MeanCycle> best;
  for (std::size_t c = 0; c < comps.size(); ++c) {
    const auto& l = comps[c];
    if (l.size() == 1 && l[0].empty()) continue;
    bool karp = m == Method::Karp || (m == Method::Auto && l.size() <= 1024);
    MeanCycle r = karp ? karp_local(l) : howard_local(l);
    if (best && !(r.mean < best->mean)) continue;
    for (auto& v : r.nodes) v = scc.members[c][v];
    best = std::move(r);
  }
  return best;
}

std::string describe_cycle(const GameGraph& g, const Machine& strategy, const StrategyProduct& p,
                           const std::vector<std::uint32_t>& cyc) {
  std::string s;
  for (auto v : cyc) {
    if (!s.empty()) s += " -> ";
    s += g.state_name(p.state_of[v]);
    if (strategy.declared_size().value_or(2) != 1) s += "." + strategy.mem_name(p.mem_of[v]);
  }
  if (!cyc.empty()) {
    s += " -> " + g.state_name(p.state_of[cyc[0]]);
    if (strategy.declared_size().value_or(2) != 1) s += "." + strategy.mem_name(p.mem_of[cyc[0]]);
  }
  return s;
}

}  // namespace

std::optional<MeanCycle> karp_min_mean_cycle(const Digraph& g) {
  return min_mean_cycle_with(g, Method::Karp);
}
std::optional<MeanCycle> howard_min_mean_cycle(const Digraph& g) {
  return min_mean_cycle_with(g, Method::Howard);
}
std::optional<MeanCycle> min_mean_cycle(const Digraph& g) {
  return min_mean_cycle_with(g, Method::Auto);
}

StrategyProduct strategy_product(const GameGraph& g, const Machine& strategy, bool stop_at_targets,
                                 std::size_t limit) {
  StrategyProduct p;
  std::unordered_map<std::pair<StateId, Mem>, std::uint32_t, ProductGame::KeyHash> index;
  std::deque<std::uint32_t> queue;
  auto node = [&](StateId s, Mem m) {
    auto [it, fresh] = index.emplace(std::make_pair(s, m), static_cast<std::uint32_t>(p.state_of.size()));
    if (fresh) {
      if (index.size() > limit) throw std::length_error("strategy product exceeds limit");
      p.state_of.push_back(s);
      p.mem_of.push_back(m);
      queue.push_back(it->second);
    }
    return it->second;
  };
  node(g.initial(), strategy.initial());
  while (!queue.empty()) {
    std::uint32_t u = queue.front();
    queue.pop_front();
    StateId s = p.state_of[u];
    Mem m = p.mem_of[u];
    if (stop_at_targets && g.is_target(s)) continue;
    auto push = [&](EdgeId e) {
      const Edge& ed = g.edge(e);
      std::uint32_t v = node(ed.dst, strategy.update(m, e));
      p.graph.arcs.push_back({u, v, ed.weight});
      p.edge_of.push_back(e);
    };
    if (g.owner(s) == Player::P1) {
      if (!strategy.has_output(m, s))
        throw std::runtime_error("strategy has no output at (" + strategy.mem_name(m) + ", " +
                                 g.state_name(s) + ")");
      for (const auto& c : strategy.next(m, s))
        if (c.prob.sign() > 0) push(c.edge);
    } else {
      for (EdgeId e : g.out(s)) push(e);
    }
  }
  p.graph.nodes = p.state_of.size();
  return p;
}

Rational worst_case_mp(const GameGraph& g, const Machine& strategy) {
  auto p = strategy_product(g, strategy);
  auto c = min_mean_cycle(p.graph);
  if (!c) throw std::runtime_error("strategy product has no cycle");
  return c->mean;
}

VerificationReport verify_mp(const GameGraph& g, const Machine& strategy, const Machine& model,
                             const Rational& mu, const Rational& nu) {
  VerificationReport r;
  r.objective = Objective::MeanPayoff;
  auto prod = strategy_product(g, strategy);
  r.worst_case_product = {prod.graph.nodes, prod.graph.arcs.size()};
  auto cyc = min_mean_cycle(prod.graph);
  if (!cyc) throw std::runtime_error("strategy product has no cycle");
  r.worst_case = Extended(cyc->mean);
  r.pass_worst_case = cyc->mean > mu;
  if (!r.pass_worst_case)
    r.note = "worst cycle " + describe_cycle(g, strategy, prod, cyc->nodes);
  auto chain = fix_both(g, strategy, model);
  r.chain = {chain.size(), chain.graph.num_edges()};
  Rational e = mc_expected_mp(chain, chain.graph.initial());
  r.expectation = Extended(e);
  r.pass_expectation = e > nu;
  return r;
}

VerificationReport verify_sp(const GameGraph& g, const Machine& strategy, const Machine& model,
                             const Rational& mu, const Rational& nu) {
  VerificationReport r;
  r.objective = Objective::ShortestPath;
  TargetPadded s1(g, strategy), s2(g, model);
  auto prod = strategy_product(g, s1, true);
  r.worst_case_product = {prod.graph.nodes, prod.graph.arcs.size()};
  const std::size_t n = prod.graph.nodes;
  Adjacency adj(n);
  Local ladj(n);
  for (const auto& a : prod.graph.arcs) {
    adj[a.from].push_back(a.to);
    ladj[a.from].emplace_back(a.to, a.weight);
  }
  auto scc = tarjan_scc(adj);
  bool cyclic = false;
  for (const auto& comp : scc.members) {
    if (comp.size() > 1) cyclic = true;
    else
      for (auto v : adj[comp[0]])
        if (v == comp[0]) cyclic = true;
  }
  if (cyclic) {
    r.worst_case = Extended::pos_inf();
    r.note = "target avoidable along " +
             describe_cycle(g, strategy, prod, find_cycle(ladj, [](auto, auto, auto) { return true; }));
  } else {
    std::vector<Weight> longest(n, 0);
    for (const auto& comp : scc.members) {
      std::uint32_t v = comp[0];
      Weight best = 0;
      for (auto [t, w] : ladj[v]) best = std::max(best, w + longest[t]);
      longest[v] = best;
    }
    r.worst_case = Extended(Rational(static_cast<long long>(longest[0])));
  }
  r.pass_worst_case = r.worst_case < Extended(mu);
  // The chain is only needed up to the first target visit.
  auto chain = fix_both(g, s1, s2);
  r.chain = {chain.size(), chain.graph.num_edges()};
  std::vector<char> tgt(chain.size(), 0);
  for (StateId v = 0; v < chain.size(); ++v) tgt[v] = g.is_target(chain.state_of[v]);
  r.expectation = mc_expected_total(chain, chain.graph.initial(), tgt);
  r.pass_expectation = r.expectation < Extended(nu);
  return r;
}

}  // namespace bwc
