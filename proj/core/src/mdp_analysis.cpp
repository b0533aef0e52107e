#include "bwc/mdp_analysis.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <stdexcept>

#include "bwc/game_solvers.hpp"
#include "bwc/linalg.hpp"
#include "bwc/scc.hpp"

namespace bwc {

namespace {

struct Row {
  std::vector<std::pair<StateId, Rational>> next;
  Rational reward;  // expected immediate weight
};
using Chain = std::vector<Row>;

Chain chain_of(const MarkovChain& mc) {
  Chain c(mc.size());
  for (StateId s = 0; s < mc.size(); ++s) {
    for (const auto& ch : mc.delta[s]) {
      const Edge& e = mc.graph.edge(ch.edge);
      c[s].next.emplace_back(e.dst, ch.prob);
      c[s].reward += ch.prob * Rational(e.weight);
    }
  }
  return c;
}

Adjacency adjacency(const Chain& c) {
  Adjacency a(c.size());
  for (std::size_t s = 0; s < c.size(); ++s)
    for (const auto& [t, p] : c[s].next) a[s].push_back(t);
  return a;
}

// Solves x = b + P x for the states without a fixed value, component by
// component in reverse topological order. Components of free states must be
// transient (they leak towards fixed states).
std::vector<Rational> solve_by_scc(const Chain& c, const std::vector<Rational>& b,
                                   const std::vector<std::optional<Rational>>& fixed) {
  const std::size_t n = c.size();
  std::vector<Rational> x(n);
  std::vector<char> active(n, 0);
  for (std::size_t s = 0; s < n; ++s) {
    if (fixed[s]) x[s] = *fixed[s];
    else active[s] = 1;
  }
  auto scc = tarjan_scc(adjacency(c), &active);
  std::vector<int> local(n, -1);
  for (const auto& comp : scc.members) {
    if (comp.size() == 1) {
      StateId s = comp[0];
      Rational self, rhs = b[s];
      for (const auto& [t, p] : c[s].next) {
        if (t == s) self += p;
        else rhs += p * x[t];
      }
      if (self == Rational(1)) throw std::runtime_error("singular chain system");
      x[s] = rhs / (Rational(1) - self);
      continue;
    }
    const std::size_t k = comp.size();
    for (std::size_t i = 0; i < k; ++i) local[comp[i]] = static_cast<int>(i);
    Matrix a(k, std::vector<Rational>(k));
    std::vector<Rational> rhs(k);
    for (std::size_t i = 0; i < k; ++i) {
      StateId s = comp[i];
      a[i][i] = Rational(1);
      rhs[i] = b[s];
      for (const auto& [t, p] : c[s].next) {
        if (active[t] && local[t] >= 0) a[i][local[t]] -= p;
        else rhs[i] += p * x[t];
      }
    }
    auto sol = solve_linear(std::move(a), std::move(rhs));
    if (!sol) throw std::runtime_error("singular chain system");
    for (std::size_t i = 0; i < k; ++i) x[comp[i]] = (*sol)[i];
    for (StateId s : comp) local[s] = -1;
  }
  return x;
}

struct Bottoms {
  std::vector<std::vector<StateId>> classes;
  std::vector<int> of;  // class index per state, -1 for transient
};

Bottoms find_bottoms(const Chain& c) {
  auto scc = tarjan_scc(adjacency(c));
  Bottoms b;
  b.of.assign(c.size(), -1);
  for (const auto& comp : scc.members) {
    auto id = scc.comp[comp[0]];
    bool closed = true;
    for (StateId s : comp)
      for (const auto& [t, p] : c[s].next)
        if (scc.comp[t] != id) closed = false;
    if (!closed) continue;
    for (StateId s : comp) b.of[s] = static_cast<int>(b.classes.size());
    b.classes.push_back(comp);
  }
  std::sort(b.classes.begin(), b.classes.end());
  for (std::size_t i = 0; i < b.classes.size(); ++i)
    for (StateId s : b.classes[i]) b.of[s] = static_cast<int>(i);
  return b;
}

std::vector<Rational> class_stationary(const Chain& c, const std::vector<StateId>& cls) {
  const std::size_t k = cls.size();
  std::map<StateId, std::size_t> pos;
  for (std::size_t i = 0; i < k; ++i) pos[cls[i]] = i;
  Matrix p(k, std::vector<Rational>(k));
  for (std::size_t i = 0; i < k; ++i)
    for (const auto& [t, pr] : c[cls[i]].next) p[i][pos.at(t)] += pr;
  return stationary(p);
}

// Gain and bias (normalized by pi * h = 0 on every recurrent class).
void evaluate(const Chain& c, std::vector<Rational>& g, std::vector<Rational>& h) {
  const std::size_t n = c.size();
  auto bot = find_bottoms(c);
  std::vector<std::optional<Rational>> fixed_g(n), fixed_h(n);
  for (const auto& cls : bot.classes) {
    auto pi = class_stationary(c, cls);
    Rational gain;
    for (std::size_t i = 0; i < cls.size(); ++i) gain += pi[i] * c[cls[i]].reward;
    const std::size_t k = cls.size();
    std::map<StateId, std::size_t> pos;
    for (std::size_t i = 0; i < k; ++i) pos[cls[i]] = i;
    Matrix a(k, std::vector<Rational>(k));
    std::vector<Rational> rhs(k);
    for (std::size_t i = 0; i < k; ++i) {
      a[i][i] += Rational(1);
      for (const auto& [t, pr] : c[cls[i]].next) a[i][pos.at(t)] -= pr;
      rhs[i] = c[cls[i]].reward - gain;
    }
    a[0] = pi;
    rhs[0] = Rational(0);
    auto sol = solve_linear(std::move(a), std::move(rhs));
    if (!sol) throw std::runtime_error("bias system inconsistent");
    for (std::size_t i = 0; i < k; ++i) {
      fixed_g[cls[i]] = gain;
      fixed_h[cls[i]] = (*sol)[i];
    }
  }
  std::vector<Rational> zero(n);
  g = solve_by_scc(c, zero, fixed_g);
  std::vector<Rational> b(n);
  for (std::size_t s = 0; s < n; ++s) b[s] = c[s].reward - g[s];
  h = solve_by_scc(c, b, fixed_h);
}

Chain chain_for_policy(const Mdp& p, const std::vector<EdgeId>& policy,
                       const std::vector<char>* keep = nullptr,
                       const std::vector<Weight>* weights = nullptr) {
  const GameGraph& g = p.graph;
  auto wt = [&](EdgeId e) { return weights ? (*weights)[e] : g.edge(e).weight; };
  Chain c(g.num_states());
  for (StateId s = 0; s < g.num_states(); ++s) {
    if (keep && !(*keep)[s]) {
      c[s].next.emplace_back(s, Rational(1));
      continue;
    }
    if (p.stochastic(s)) {
      for (const auto& ch : p.delta[s]) {
        if (ch.prob.sign() <= 0) continue;
        const Edge& e = g.edge(ch.edge);
        c[s].next.emplace_back(e.dst, ch.prob);
        c[s].reward += ch.prob * Rational(wt(ch.edge));
      }
    } else {
      const Edge& e = g.edge(policy[s]);
      c[s].next.emplace_back(e.dst, Rational(1));
      c[s].reward = Rational(wt(policy[s]));
    }
  }
  return c;
}

// Multichain policy iteration restricted to `keep` (all states when null):
// P1 states only use edges whose destination satisfies `allowed`.
GainSolution policy_iteration(const Mdp& p, const std::vector<char>* keep,
                              const std::vector<Weight>* weights = nullptr) {
  const GameGraph& g = p.graph;
  auto wt = [&](EdgeId e) { return weights ? (*weights)[e] : g.edge(e).weight; };
  const std::size_t n = g.num_states();
  auto usable = [&](EdgeId e) { return !keep || (*keep)[g.edge(e).dst]; };
  GainSolution sol;
  sol.policy.assign(n, kNoEdge);
  for (StateId s = 0; s < n; ++s) {
    if (p.stochastic(s) || (keep && !(*keep)[s])) continue;
    for (EdgeId e : g.out(s))
      if (usable(e)) { sol.policy[s] = e; break; }
    if (sol.policy[s] == kNoEdge) throw std::runtime_error("policy iteration: blocked state");
  }
  for (;;) {
    ++sol.iterations;
    auto chain = chain_for_policy(p, sol.policy, keep, weights);
    evaluate(chain, sol.gain, sol.bias);
    bool changed = false;
    // First stage: improve the gain.
    for (StateId s = 0; s < n; ++s) {
      if (sol.policy[s] == kNoEdge) continue;
      EdgeId best = sol.policy[s];
      Rational best_g = sol.gain[g.edge(best).dst];
      for (EdgeId e : g.out(s)) {
        if (!usable(e)) continue;
        const Rational& v = sol.gain[g.edge(e).dst];
        if (v > best_g) { best = e; best_g = v; }
      }
      if (best != sol.policy[s]) { sol.policy[s] = best; changed = true; }
    }
    if (changed) continue;
    // Second stage: among gain-optimal actions, improve the bias.
    for (StateId s = 0; s < n; ++s) {
      if (sol.policy[s] == kNoEdge) continue;
      EdgeId cur = sol.policy[s];
      const Rational& gs = sol.gain[g.edge(cur).dst];
      EdgeId best = cur;
      Rational best_v = Rational(wt(cur)) + sol.bias[g.edge(cur).dst];
      for (EdgeId e : g.out(s)) {
        if (!usable(e) || sol.gain[g.edge(e).dst] != gs) continue;
        Rational v = Rational(wt(e)) + sol.bias[g.edge(e).dst];
        if (v > best_v) { best = e; best_v = v; }
      }
      if (best != cur) { sol.policy[s] = best; changed = true; }
    }
    if (!changed) break;
  }
  return sol;
}

}  // namespace

MecDecomposition mec_decompose(const Mdp& p, const std::vector<char>* domain) {
  const GameGraph& g = p.graph;
  const std::size_t n = g.num_states();
  auto support = p.support_edges();
  std::vector<char> alive(n, 1);
  if (domain) alive = *domain;
  std::vector<int> comp_of(n, 0);
  // Repeatedly: drop states that cannot stay in their candidate, then split
  // candidates into SCCs.
  for (bool changed = true; changed;) {
    changed = false;
    bool pruned = true;
    while (pruned) {
      pruned = false;
      for (StateId s = 0; s < n; ++s) {
        if (!alive[s]) continue;
        bool ok;
        if (p.stochastic(s)) {
          ok = true;
          bool any = false;
          for (EdgeId e : g.out(s)) {
            if (!support[e]) continue;
            any = true;
            StateId t = g.edge(e).dst;
            if (!alive[t] || comp_of[t] != comp_of[s]) ok = false;
          }
          ok = ok && any;
        } else {
          ok = false;
          for (EdgeId e : g.out(s)) {
            StateId t = g.edge(e).dst;
            if (alive[t] && comp_of[t] == comp_of[s]) ok = true;
          }
        }
        if (!ok) { alive[s] = 0; pruned = true; changed = true; }
      }
    }
    Adjacency adj(n);
    for (StateId s = 0; s < n; ++s) {
      if (!alive[s]) continue;
      for (EdgeId e : g.out(s)) {
        StateId t = g.edge(e).dst;
        if (support[e] && alive[t] && comp_of[t] == comp_of[s]) adj[s].push_back(t);
      }
    }
    auto scc = tarjan_scc(adj, &alive);
    std::vector<int> next(n, -1);
    for (StateId s = 0; s < n; ++s)
      if (alive[s]) next[s] = static_cast<int>(scc.comp[s]);
    // Stop once the SCC split leaves the partition as it was.
    std::map<int, int> old_to_new, new_to_old;
    for (StateId s = 0; s < n; ++s) {
      if (!alive[s]) continue;
      auto it1 = old_to_new.emplace(comp_of[s], next[s]).first;
      auto it2 = new_to_old.emplace(next[s], comp_of[s]).first;
      if (it1->second != next[s] || it2->second != comp_of[s]) changed = true;
    }
    for (StateId s = 0; s < n; ++s)
      if (alive[s]) comp_of[s] = next[s];
  }
  MecDecomposition d;
  d.member.assign(n, -1);
  std::map<int, std::vector<StateId>> groups;
  for (StateId s = 0; s < n; ++s)
    if (alive[s]) groups[comp_of[s]].push_back(s);
  std::vector<std::vector<StateId>> comps;
  for (auto& [k, v] : groups) comps.push_back(std::move(v));
  std::sort(comps.begin(), comps.end());
  for (auto& c : comps) {
    for (StateId s : c) d.member[s] = static_cast<int>(d.components.size());
    d.components.push_back({std::move(c), EndComponent::Class::Unclassified, std::nullopt});
  }
  return d;
}

Subgame delta_subgame(const Mdp& p, const std::vector<char>& states) {
  auto support = p.support_edges();
  return restrict_to(p.graph, states, &support);
}

std::vector<EndComponent> mwec(const Mdp& p, std::vector<EndComponent>* losing) {
  std::vector<EndComponent> out;
  std::vector<std::vector<char>> work;
  work.emplace_back(p.graph.num_states(), 1);
  while (!work.empty()) {
    auto domain = std::move(work.back());
    work.pop_back();
    auto dec = mec_decompose(p, &domain);
    for (auto& u : dec.components) {
      std::vector<char> in(p.graph.num_states(), 0);
      for (StateId s : u.states) in[s] = 1;
      auto sub = delta_subgame(p, in);
      auto wc = mp_strictly_positive_region(sub.game);
      std::vector<char> rest(p.graph.num_states(), 0);
      bool any_losing = false;
      for (StateId i = 0; i < sub.game.num_states(); ++i) {
        if (wc.winning[i]) rest[sub.to_parent_state[i]] = 1;
        else any_losing = true;
      }
      if (!any_losing) {
        u.classification = EndComponent::Class::Winning;
        out.push_back(std::move(u));
        continue;
      }
      if (losing) {
        EndComponent l = u;
        l.classification = EndComponent::Class::Losing;
        losing->push_back(std::move(l));
      }
      work.push_back(std::move(rest));
    }
  }
  std::sort(out.begin(), out.end(),
            [](const EndComponent& a, const EndComponent& b) { return a.states < b.states; });
  if (losing)
    std::sort(losing->begin(), losing->end(),
              [](const EndComponent& a, const EndComponent& b) { return a.states < b.states; });
  return out;
}

GainSolution max_expected_mp(const Mdp& p) { return policy_iteration(p, nullptr); }

GainSolution max_expected_mp(const Mdp& p, const std::vector<Weight>& weights) {
  return policy_iteration(p, nullptr, &weights);
}

GainSolution optimal_gain_in(const Mdp& p, const std::vector<StateId>& ec) {
  const GameGraph& g = p.graph;
  const std::size_t n = g.num_states();
  std::vector<char> keep(n, 0);
  for (StateId s : ec) keep[s] = 1;
  GainSolution sol = policy_iteration(p, &keep);
  // Pick the first recurrent class of the optimal policy and route every
  // other state of the component towards it.
  auto chain = chain_for_policy(p, sol.policy, &keep);
  auto bot = find_bottoms(chain);
  std::vector<StateId> target_cls;
  for (const auto& cls : bot.classes) {
    if (keep[cls[0]]) { target_cls = cls; break; }
  }
  std::vector<char> done(n, 0);
  for (StateId s : target_cls) done[s] = 1;
  auto support = p.support_edges();
  for (bool grew = true; grew;) {
    grew = false;
    for (StateId s : ec) {
      if (done[s]) continue;
      if (p.stochastic(s)) {
        for (EdgeId e : g.out(s))
          if (support[e] && done[g.edge(e).dst]) { done[s] = 2; break; }
      } else {
        for (EdgeId e : g.out(s)) {
          if (keep[g.edge(e).dst] && done[g.edge(e).dst] == 1) {
            sol.policy[s] = e;
            done[s] = 2;
            break;
          }
        }
      }
    }
    for (StateId s : ec)
      if (done[s] == 2) { done[s] = 1; grew = true; }
  }
  chain = chain_for_policy(p, sol.policy, &keep);
  evaluate(chain, sol.gain, sol.bias);
  bot = find_bottoms(chain);
  std::size_t inside = 0;
  for (const auto& cls : bot.classes) inside += keep[cls[0]] ? 1 : 0;
  sol.unichain = inside == 1;
  return sol;
}

std::vector<char> almost_sure_reach(const Mdp& p, const std::vector<char>& target) {
  const GameGraph& g = p.graph;
  const std::size_t n = g.num_states();
  auto support = p.support_edges();
  std::vector<char> u(n, 1);
  for (;;) {
    // States that reach the target with positive probability while P1 keeps
    // to edges inside u and stochastic states never leave u.
    std::vector<char> x = target;
    for (StateId s = 0; s < n; ++s) x[s] = x[s] && u[s];
    for (bool grew = true; grew;) {
      grew = false;
      for (StateId s = 0; s < n; ++s) {
        if (!u[s] || x[s]) continue;
        bool ok = false;
        for (EdgeId e : g.out(s)) {
          StateId t = g.edge(e).dst;
          if (p.stochastic(s)) {
            if (!support[e]) continue;
            if (!u[t]) { ok = false; break; }
            ok = ok || x[t];
          } else if (u[t] && x[t]) {
            ok = true;
          }
        }
        if (ok) { x[s] = 1; grew = true; }
      }
    }
    if (x == u) return u;
    u = x;
  }
}

CostSolution min_expected_truncated_sum(const Mdp& p, const std::vector<char>& target) {
  const GameGraph& g = p.graph;
  const std::size_t n = g.num_states();
  auto good = almost_sure_reach(p, target);
  CostSolution sol;
  sol.value.assign(n, Extended::pos_inf());
  sol.policy.assign(n, kNoEdge);
  // Proper initial policy: move one layer closer to the target.
  std::vector<char> layer(n, 0);
  for (StateId s = 0; s < n; ++s) layer[s] = target[s] && good[s];
  auto support = p.support_edges();
  for (bool grew = true; grew;) {
    grew = false;
    std::vector<char> add(n, 0);
    for (StateId s = 0; s < n; ++s) {
      if (!good[s] || layer[s]) continue;
      for (EdgeId e : g.out(s)) {
        StateId t = g.edge(e).dst;
        if (!layer[t] || (p.stochastic(s) && !support[e])) continue;
        if (!p.stochastic(s)) sol.policy[s] = e;
        add[s] = 1;
        break;
      }
    }
    for (StateId s = 0; s < n; ++s)
      if (add[s]) { layer[s] = 1; grew = true; }
  }
  std::vector<char> keep = good;
  for (;;) {
    ++sol.iterations;
    Chain c(n);
    std::vector<std::optional<Rational>> fixed(n);
    std::vector<Rational> b(n);
    for (StateId s = 0; s < n; ++s) {
      if (!keep[s] || target[s]) { fixed[s] = Rational(0); continue; }
      if (p.stochastic(s)) {
        for (const auto& ch : p.delta[s]) {
          if (ch.prob.sign() <= 0) continue;
          c[s].next.emplace_back(g.edge(ch.edge).dst, ch.prob);
          b[s] += ch.prob * Rational(g.edge(ch.edge).weight);
        }
      } else {
        c[s].next.emplace_back(g.edge(sol.policy[s]).dst, Rational(1));
        b[s] = Rational(g.edge(sol.policy[s]).weight);
      }
    }
    auto v = solve_by_scc(c, b, fixed);
    bool changed = false;
    for (StateId s = 0; s < n; ++s) {
      if (!keep[s] || target[s] || p.stochastic(s)) continue;
      EdgeId cur = sol.policy[s];
      Rational best = Rational(g.edge(cur).weight) + v[g.edge(cur).dst];
      for (EdgeId e : g.out(s)) {
        StateId t = g.edge(e).dst;
        if (!keep[t]) continue;
        Rational val = Rational(g.edge(e).weight) + v[t];
        if (val < best) { best = val; sol.policy[s] = e; changed = true; }
      }
    }
    if (!changed) {
      for (StateId s = 0; s < n; ++s)
        if (keep[s]) sol.value[s] = target[s] ? Rational(0) : v[s];
      break;
    }
  }
  return sol;
}

Rational reach_probability(const MarkovChain& mc, StateId from, const std::vector<char>& target,
                           std::optional<std::size_t> horizon) {
  Chain c = chain_of(mc);
  const std::size_t n = c.size();
  if (horizon) {
    std::vector<Rational> dist(n);
    dist[from] = Rational(1);
    Rational hit;
    for (std::size_t step = 0;; ++step) {
      for (std::size_t s = 0; s < n; ++s)
        if (target[s] && dist[s].sign() != 0) { hit += dist[s]; dist[s] = Rational(0); }
      if (step == *horizon) break;
      std::vector<Rational> nd(n);
      for (std::size_t s = 0; s < n; ++s) {
        if (dist[s].sign() == 0) continue;
        for (const auto& [t, p] : c[s].next) nd[t] += dist[s] * p;
      }
      dist.swap(nd);
    }
    return hit;
  }
  // States that can reach the target at all.
  Adjacency rev(n);
  for (std::size_t s = 0; s < n; ++s)
    for (const auto& [t, p] : c[s].next) rev[t].push_back(static_cast<std::uint32_t>(s));
  std::vector<std::uint32_t> roots;
  for (std::size_t s = 0; s < n; ++s)
    if (target[s]) roots.push_back(static_cast<std::uint32_t>(s));
  auto can = reachable_from(rev, roots);
  std::vector<std::optional<Rational>> fixed(n);
  for (std::size_t s = 0; s < n; ++s) {
    if (target[s]) fixed[s] = Rational(1);
    else if (!can[s]) fixed[s] = Rational(0);
  }
  return solve_by_scc(c, std::vector<Rational>(n), fixed)[from];
}

std::vector<Rational> distribution_at(const MarkovChain& mc, StateId from, std::size_t steps) {
  Chain c = chain_of(mc);
  std::vector<Rational> dist(c.size());
  dist[from] = Rational(1);
  for (std::size_t k = 0; k < steps; ++k) {
    std::vector<Rational> nd(c.size());
    for (std::size_t s = 0; s < c.size(); ++s) {
      if (dist[s].sign() == 0) continue;
      for (const auto& [t, p] : c[s].next) nd[t] += dist[s] * p;
    }
    dist.swap(nd);
  }
  return dist;
}

BsccInfo bottom_components(const MarkovChain& mc) {
  Chain c = chain_of(mc);
  auto bot = find_bottoms(c);
  BsccInfo info;
  for (const auto& cls : bot.classes) {
    auto pi = class_stationary(c, cls);
    Rational gain;
    for (std::size_t i = 0; i < cls.size(); ++i) gain += pi[i] * c[cls[i]].reward;
    info.classes.push_back(cls);
    info.stationary.push_back(std::move(pi));
    info.gain.push_back(gain);
  }
  return info;
}

std::vector<Rational> mc_expected_mp_all(const MarkovChain& mc) {
  Chain c = chain_of(mc);
  auto bot = find_bottoms(c);
  std::vector<std::optional<Rational>> fixed(c.size());
  for (const auto& cls : bot.classes) {
    auto pi = class_stationary(c, cls);
    Rational gain;
    for (std::size_t i = 0; i < cls.size(); ++i) gain += pi[i] * c[cls[i]].reward;
    for (StateId s : cls) fixed[s] = gain;
  }
  return solve_by_scc(c, std::vector<Rational>(c.size()), fixed);
}

Rational mc_expected_mp(const MarkovChain& mc, StateId from) {
  // Only the part reachable from `from` matters.
  Chain c = chain_of(mc);
  auto reach = reachable_from(adjacency(c), {from});
  Chain sub(c.size());
  for (std::size_t s = 0; s < c.size(); ++s) {
    if (reach[s]) sub[s] = c[s];
    else sub[s].next.emplace_back(static_cast<StateId>(s), Rational(1));
  }
  auto bot = find_bottoms(sub);
  std::vector<std::optional<Rational>> fixed(c.size());
  for (const auto& cls : bot.classes) {
    if (!reach[cls[0]]) {
      fixed[cls[0]] = Rational(0);
      continue;
    }
    auto pi = class_stationary(sub, cls);
    Rational gain;
    for (std::size_t i = 0; i < cls.size(); ++i) gain += pi[i] * sub[cls[i]].reward;
    for (StateId s : cls) fixed[s] = gain;
  }
  return solve_by_scc(sub, std::vector<Rational>(c.size()), fixed)[from];
}

Extended mc_expected_total(const MarkovChain& mc, StateId from, const std::vector<char>& target) {
  Chain c = chain_of(mc);
  const std::size_t n = c.size();
  if (reach_probability(mc, from, target) != Rational(1)) return Extended::pos_inf();
  auto reach = reachable_from(adjacency(c), {from});
  std::vector<std::optional<Rational>> fixed(n);
  std::vector<Rational> b(n);
  Chain sub(n);
  for (std::size_t s = 0; s < n; ++s) {
    if (!reach[s] || target[s]) { fixed[s] = Rational(0); continue; }
    sub[s] = c[s];
    b[s] = c[s].reward;
  }
  return Extended(solve_by_scc(sub, b, fixed)[from]);
}

}  // namespace bwc
