#pragma once

// Brute-force reference implementations for the property suites. Nothing
// here calls into the solvers under test: each answer comes from plain
// enumeration plus a small exact Gaussian elimination.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "bwc/game.hpp"
#include "bwc/machine.hpp"
#include "bwc/rational.hpp"
#include "bwc/types.hpp"

namespace oracle {

using bwc::Rational;

// Dense exact solve of A x = b. A must be nonsingular.
inline std::vector<Rational> gauss(std::vector<std::vector<Rational>> a, std::vector<Rational> b) {
  const std::size_t n = b.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && a[piv][c] == Rational(0)) ++piv;
    if (piv == n) throw std::runtime_error("singular system");
    std::swap(a[piv], a[c]);
    std::swap(b[piv], b[c]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || a[r][c] == Rational(0)) continue;
      Rational f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
      b[r] -= f * b[c];
    }
  }
  std::vector<Rational> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = b[i] / a[i][i];
  return x;
}

// Finite Markov chain with an expected one-step reward per state.
struct Chain {
  std::vector<std::vector<std::pair<std::size_t, Rational>>> succ;
  std::vector<Rational> reward;
};

// Expected long-run average reward from every state: bottom classes by
// reachability closure, stationary distributions and absorption by solving
// linear systems.
inline std::vector<Rational> chain_mean_payoff(const Chain& mc) {
  const std::size_t n = mc.succ.size();
  std::vector<std::vector<char>> reach(n, std::vector<char>(n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    reach[i][i] = 1;
    for (auto& [j, p] : mc.succ[i])
      if (p > Rational(0)) reach[i][j] = 1;
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      if (reach[i][k])
        for (std::size_t j = 0; j < n; ++j)
          if (reach[k][j]) reach[i][j] = 1;
  std::vector<int> cls(n, -1);
  std::vector<Rational> value(n);
  int classes = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (cls[i] != -1) continue;
    bool bottom = true;
    for (std::size_t j = 0; j < n; ++j)
      if (reach[i][j] && !reach[j][i]) bottom = false;
    if (!bottom) continue;
    std::vector<std::size_t> members;
    for (std::size_t j = 0; j < n; ++j)
      if (reach[i][j]) members.push_back(j);
    for (std::size_t j : members) cls[j] = classes;
    ++classes;
    // pi = pi P on the class, with the last equation replaced by sum = 1.
    const std::size_t m = members.size();
    std::map<std::size_t, std::size_t> local;
    for (std::size_t k = 0; k < m; ++k) local[members[k]] = k;
    std::vector<std::vector<Rational>> a(m, std::vector<Rational>(m));
    std::vector<Rational> b(m);
    for (std::size_t k = 0; k < m; ++k) a[k][k] -= Rational(1);
    for (std::size_t k = 0; k < m; ++k)
      for (auto& [j, p] : mc.succ[members[k]]) a[local.at(j)][k] += p;
    for (std::size_t k = 0; k < m; ++k) a[m - 1][k] = Rational(1);
    b[m - 1] = Rational(1);
    auto pi = gauss(a, b);
    Rational g;
    for (std::size_t k = 0; k < m; ++k) g += pi[k] * mc.reward[members[k]];
    for (std::size_t j : members) value[j] = g;
  }
  std::vector<std::size_t> transient;
  std::map<std::size_t, std::size_t> tidx;
  for (std::size_t i = 0; i < n; ++i)
    if (cls[i] == -1) {
      tidx[i] = transient.size();
      transient.push_back(i);
    }
  if (!transient.empty()) {
    const std::size_t m = transient.size();
    std::vector<std::vector<Rational>> a(m, std::vector<Rational>(m));
    std::vector<Rational> b(m);
    for (std::size_t k = 0; k < m; ++k) {
      a[k][k] += Rational(1);
      for (auto& [j, p] : mc.succ[transient[k]]) {
        if (cls[j] == -1) a[k][tidx.at(j)] -= p;
        else b[k] += p * value[j];
      }
    }
    auto x = gauss(a, b);
    for (std::size_t k = 0; k < m; ++k) value[transient[k]] = x[k];
  }
  return value;
}

// Plain game with probabilities on P2 edges taken from a memoryless model.
struct Game {
  struct E {
    std::size_t src, dst;
    Rational w;
    Rational p;  // model probability, P2 edges only
  };
  std::vector<bool> p1;
  std::vector<E> edges;
  std::vector<std::vector<std::size_t>> out;
  std::size_t init = 0;
};

inline Game from_instance(const bwc::BwcInstance& inst) {
  const auto& g = inst.game;
  Game o;
  o.init = g.initial();
  o.out.resize(g.num_states());
  for (bwc::StateId s = 0; s < g.num_states(); ++s) o.p1.push_back(g.owner(s) == bwc::Player::P1);
  for (bwc::EdgeId e = 0; e < g.num_edges(); ++e) {
    const auto& ed = g.edge(e);
    o.out[ed.src].push_back(o.edges.size());
    o.edges.push_back({ed.src, ed.dst, Rational(static_cast<long long>(ed.weight)), Rational(0)});
  }
  for (bwc::StateId s = 0; s < g.num_states(); ++s) {
    if (o.p1[s] || !inst.model.has_output(inst.model.initial(), s)) continue;
    for (const auto& c : inst.model.next(inst.model.initial(), s)) o.edges[c.edge].p = c.prob;
  }
  return o;
}

// Minimum mean over simple cycles reachable from `from` using only edges
// with allowed[e]. Parallel edges count as distinct cycles.
inline std::optional<Rational> min_reachable_cycle_mean(const Game& g, std::size_t from,
                                                        const std::vector<char>& allowed) {
  const std::size_t n = g.p1.size();
  std::vector<char> seen(n, 0);
  std::vector<std::size_t> stack{from};
  seen[from] = 1;
  while (!stack.empty()) {
    std::size_t s = stack.back();
    stack.pop_back();
    for (std::size_t e : g.out[s])
      if (allowed[e] && !seen[g.edges[e].dst]) {
        seen[g.edges[e].dst] = 1;
        stack.push_back(g.edges[e].dst);
      }
  }
  std::optional<Rational> best;
  // Cycles whose smallest vertex is `root`, by DFS over larger vertices.
  for (std::size_t root = 0; root < n; ++root) {
    if (!seen[root]) continue;
    std::vector<char> on(n, 0);
    std::function<void(std::size_t, Rational, std::size_t)> dfs = [&](std::size_t v, Rational sum,
                                                                      std::size_t len) {
      for (std::size_t e : g.out[v]) {
        if (!allowed[e]) continue;
        std::size_t d = g.edges[e].dst;
        if (d == root) {
          Rational mean = (sum + g.edges[e].w) / Rational(static_cast<long long>(len + 1));
          if (!best || mean < *best) best = mean;
        } else if (d > root && !on[d]) {
          on[d] = 1;
          dfs(d, sum + g.edges[e].w, len + 1);
          on[d] = 0;
        }
      }
    };
    on[root] = 1;
    dfs(root, Rational(0), 0);
  }
  return best;
}

// Calls f(allowed) for every memoryless pure P1 strategy, where allowed marks
// the kept P1 edge per P1 state and every P2 edge in `base`.
inline void for_each_memoryless(const Game& g, const std::vector<char>& base,
                                const std::function<void(const std::vector<char>&)>& f) {
  std::vector<std::size_t> p1states;
  for (std::size_t s = 0; s < g.p1.size(); ++s) {
    bool any = false;
    for (std::size_t e : g.out[s]) any = any || base[e];
    if (g.p1[s] && any) p1states.push_back(s);
  }
  std::vector<char> allowed = base;
  for (std::size_t s : p1states)
    for (std::size_t e : g.out[s]) allowed[e] = 0;
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == p1states.size()) {
      f(allowed);
      return;
    }
    for (std::size_t e : g.out[p1states[i]]) {
      if (!base[e]) continue;
      allowed[e] = 1;
      rec(i + 1);
      allowed[e] = 0;
    }
  };
  rec(0);
}

// Worst-case region for MP > mu and the optimal worst-case value, over the
// edges in `base` and the states in `states`.
struct WorstCase {
  std::vector<char> winning;
  std::vector<std::optional<Rational>> value;
};
inline WorstCase worst_case(const Game& g, const std::vector<char>& base,
                            const std::vector<char>& states, const Rational& mu) {
  WorstCase r;
  r.winning.assign(g.p1.size(), 0);
  r.value.assign(g.p1.size(), std::nullopt);
  for_each_memoryless(g, base, [&](const std::vector<char>& allowed) {
    for (std::size_t s = 0; s < g.p1.size(); ++s) {
      if (!states[s]) continue;
      auto m = min_reachable_cycle_mean(g, s, allowed);
      if (!m) continue;
      if (!r.value[s] || *m > *r.value[s]) r.value[s] = m;
      if (*m > mu) r.winning[s] = 1;
    }
  });
  return r;
}

struct MpAnswer {
  bool init_winning = false;
  Rational mu_star;              // optimal worst-case value of the initial state
  std::optional<Rational> nu_star;
  bool decision = false;
  std::vector<std::uint32_t> winning_ecs;  // reachable maximal winning ECs, as bitmasks
};

// Mean-payoff BWC decision for a memoryless model and at most ~6 states.
inline MpAnswer mp_decide(const bwc::BwcInstance& inst) {
  Game g = from_instance(inst);
  const std::size_t n = g.p1.size();
  const Rational mu = inst.mu;
  MpAnswer ans;
  std::vector<char> all_edges(g.edges.size(), 1), all_states(n, 1);
  WorstCase wc = worst_case(g, all_edges, all_states, mu);
  ans.mu_star = *wc.value[g.init];
  ans.init_winning = wc.winning[g.init];
  if (!ans.init_winning) return ans;
  std::vector<char> in_wc(g.edges.size(), 0);
  for (std::size_t e = 0; e < g.edges.size(); ++e)
    in_wc[e] = wc.winning[g.edges[e].src] && wc.winning[g.edges[e].dst];

  // Winning end components among subsets of the worst-case region.
  auto support = [&](std::size_t e) { return g.p1[g.edges[e].src] || g.edges[e].p > Rational(0); };
  std::vector<std::uint32_t> winning_sets;
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    auto in = [&](std::size_t s) { return (mask >> s) & 1u; };
    bool ok = true;
    for (std::size_t s = 0; s < n && ok; ++s) {
      if (!in(s)) continue;
      if (!wc.winning[s]) ok = false;
      bool has_inside = false;
      for (std::size_t e : g.out[s]) {
        if (!support(e)) continue;
        if (in(g.edges[e].dst)) has_inside = true;
        else if (!g.p1[s]) ok = false;
      }
      if (!has_inside) ok = false;
    }
    if (!ok) continue;
    std::vector<char> sub(g.edges.size(), 0), members(n, 0);
    for (std::size_t e = 0; e < g.edges.size(); ++e)
      sub[e] = support(e) && in(g.edges[e].src) && in(g.edges[e].dst);
    for (std::size_t s = 0; s < n; ++s) members[s] = in(s);
    // Strongly connected on the support edges inside the set.
    std::size_t first = 0;
    while (!in(first)) ++first;
    auto reach_all = [&](bool reverse) {
      std::vector<char> seen(n, 0);
      std::vector<std::size_t> st{first};
      seen[first] = 1;
      while (!st.empty()) {
        std::size_t v = st.back();
        st.pop_back();
        for (std::size_t e = 0; e < g.edges.size(); ++e) {
          if (!sub[e]) continue;
          std::size_t a = reverse ? g.edges[e].dst : g.edges[e].src;
          std::size_t b = reverse ? g.edges[e].src : g.edges[e].dst;
          if (a == v && !seen[b]) {
            seen[b] = 1;
            st.push_back(b);
          }
        }
      }
      for (std::size_t s = 0; s < n; ++s)
        if (in(s) && !seen[s]) return false;
      return true;
    };
    if (!reach_all(false) || !reach_all(true)) continue;
    WorstCase inner = worst_case(g, sub, members, mu);
    bool all = true;
    for (std::size_t s = 0; s < n; ++s)
      if (in(s) && !inner.winning[s]) all = false;
    if (all) winning_sets.push_back(mask);
  }
  // Maximal ones, reported only when reachable from the initial state.
  std::vector<char> reach(n, 0);
  std::vector<std::size_t> todo{g.init};
  reach[g.init] = 1;
  while (!todo.empty()) {
    std::size_t v = todo.back();
    todo.pop_back();
    for (std::size_t e : g.out[v])
      if (in_wc[e] && !reach[g.edges[e].dst]) {
        reach[g.edges[e].dst] = 1;
        todo.push_back(g.edges[e].dst);
      }
  }
  for (std::uint32_t a : winning_sets) {
    bool maximal = true;
    for (std::uint32_t b : winning_sets)
      if (a != b && (a & b) == a) maximal = false;
    std::size_t some = 0;
    while (!((a >> some) & 1u)) ++some;
    if (maximal && reach[some]) ans.winning_ecs.push_back(a);
  }

  // P': weights outside winning ECs replaced by mu (zero after the shift).
  std::vector<Rational> w(g.edges.size(), mu);
  for (std::size_t e = 0; e < g.edges.size(); ++e)
    for (std::uint32_t m : winning_sets)
      if (((m >> g.edges[e].src) & 1u) && ((m >> g.edges[e].dst) & 1u) && support(e))
        w[e] = g.edges[e].w;

  std::optional<Rational> best;
  for_each_memoryless(g, in_wc, [&](const std::vector<char>& allowed) {
    Chain mc;
    mc.succ.resize(n);
    mc.reward.assign(n, Rational(0));
    for (std::size_t s = 0; s < n; ++s) {
      if (!wc.winning[s]) {
        mc.succ[s].push_back({s, Rational(1)});  // unreachable filler
        continue;
      }
      for (std::size_t e : g.out[s]) {
        if (!allowed[e]) continue;
        Rational p = g.p1[s] ? Rational(1) : g.edges[e].p;
        if (p == Rational(0)) continue;
        mc.succ[s].push_back({g.edges[e].dst, p});
        mc.reward[s] += p * w[e];
      }
    }
    Rational v = chain_mean_payoff(mc)[g.init];
    if (!best || v > *best) best = v;
  });
  ans.nu_star = best;
  ans.decision = *best > inst.nu;
  return ans;
}

// Shortest-path pipeline value by enumerating every pure memoryless policy of
// the unfolded (state, sum) product restricted to the worst-case-safe nodes.
// nullopt when more than `cap` policies would be needed.
struct SpAnswer {
  bwc::Extended value;
  std::size_t policies = 0;
};
inline std::optional<SpAnswer> sp_value(const bwc::BwcInstance& inst, std::int64_t mu,
                                        std::size_t cap) {
  Game g = from_instance(inst);
  const std::size_t n = g.p1.size();
  const std::size_t M = static_cast<std::size_t>(mu);
  std::vector<char> target(n, 0);
  for (auto t : inst.game.targets()) target[t] = 1;
  auto id = [&](std::size_t s, std::size_t c) { return s * M + c; };
  auto succ = [&](std::size_t e, std::size_t c) -> std::optional<std::size_t> {
    long long nc = static_cast<long long>(c) + g.edges[e].w.num().get_si();
    if (nc >= mu) return std::nullopt;  // saturated: never safe
    return id(g.edges[e].dst, static_cast<std::size_t>(nc));
  };
  // Attractor of the targets with sum < mu.
  std::vector<char> safe(n * M, 0);
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t c = 0; c < M; ++c)
      if (target[s]) safe[id(s, c)] = 1;
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t s = 0; s < n; ++s)
      for (std::size_t c = 0; c < M; ++c) {
        if (safe[id(s, c)]) continue;
        bool any = false, all = true;
        for (std::size_t e : g.out[s]) {
          auto d = succ(e, c);
          bool ok = d && safe[*d];
          any = any || ok;
          all = all && ok;
        }
        if (g.p1[s] ? any : all) {
          safe[id(s, c)] = 1;
          changed = true;
        }
      }
  }
  SpAnswer ans;
  if (M == 0 || !safe[id(g.init, 0)]) {
    ans.value = bwc::Extended::pos_inf();
    return ans;
  }
  // P1 decision nodes reachable under some safe policy.
  std::vector<std::size_t> decision_nodes;
  std::vector<char> seen(n * M, 0);
  std::vector<std::size_t> st{id(g.init, 0)};
  seen[st[0]] = 1;
  while (!st.empty()) {
    std::size_t v = st.back();
    st.pop_back();
    std::size_t s = v / M, c = v % M;
    if (target[s]) continue;
    if (g.p1[s]) decision_nodes.push_back(v);
    for (std::size_t e : g.out[s]) {
      auto d = succ(e, c);
      if (!d || !safe[*d]) continue;
      if (!g.p1[s] && g.edges[e].p == Rational(0)) continue;
      if (!seen[*d]) {
        seen[*d] = 1;
        st.push_back(*d);
      }
    }
  }
  std::vector<std::vector<std::size_t>> options(decision_nodes.size());
  std::size_t count = 1;
  for (std::size_t i = 0; i < decision_nodes.size(); ++i) {
    std::size_t s = decision_nodes[i] / M, c = decision_nodes[i] % M;
    for (std::size_t e : g.out[s]) {
      auto d = succ(e, c);
      if (d && safe[*d]) options[i].push_back(e);
    }
    count *= options[i].size();
    if (count > cap) return std::nullopt;
  }
  std::map<std::size_t, std::size_t> choice_of;
  for (std::size_t i = 0; i < decision_nodes.size(); ++i) choice_of[decision_nodes[i]] = i;
  std::vector<std::size_t> pick(decision_nodes.size(), 0);
  std::optional<Rational> best;
  for (std::size_t k = 0; k < count; ++k) {
    std::size_t rest = k;
    for (std::size_t i = 0; i < pick.size(); ++i) {
      pick[i] = rest % options[i].size();
      rest /= options[i].size();
    }
    // Sums strictly increase, so plain memoized recursion terminates.
    std::map<std::size_t, Rational> memo;
    std::function<Rational(std::size_t)> cost = [&](std::size_t v) -> Rational {
      std::size_t s = v / M, c = v % M;
      if (target[s]) return Rational(0);
      if (auto it = memo.find(v); it != memo.end()) return it->second;
      Rational r;
      if (g.p1[s]) {
        std::size_t e = options[choice_of.at(v)][pick[choice_of.at(v)]];
        r = g.edges[e].w + cost(*succ(e, c));
      } else {
        for (std::size_t e : g.out[s])
          if (g.edges[e].p > Rational(0)) r += g.edges[e].p * (g.edges[e].w + cost(*succ(e, c)));
      }
      memo[v] = r;
      return r;
    };
    Rational v = cost(id(g.init, 0));
    if (!best || v < *best) best = v;
  }
  ans.value = *best;
  ans.policies = count;
  return ans;
}

// Number of subsets of `sizes` with total at most L.
inline std::uint64_t count_small_subsets(const std::vector<std::int64_t>& sizes, std::int64_t L) {
  std::uint64_t count = 0;
  for (std::uint32_t mask = 0; mask < (1u << sizes.size()); ++mask) {
    std::int64_t h = 0;
    for (std::size_t i = 0; i < sizes.size(); ++i)
      if ((mask >> i) & 1u) h += sizes[i];
    if (h <= L) ++count;
  }
  return count;
}

}  // namespace oracle
