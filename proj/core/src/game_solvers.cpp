#include "bwc/game_solvers.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <stdexcept>
#include <unordered_map>

namespace bwc {

std::vector<char> attractor(const GameGraph& g, Player player, const std::vector<char>& target) {
  const std::size_t n = g.num_states();
  std::vector<char> in(n, 0);
  std::vector<std::size_t> remaining(n);
  std::deque<StateId> queue;
  for (StateId s = 0; s < n; ++s) {
    remaining[s] = g.out(s).size();
    if (target[s]) { in[s] = 1; queue.push_back(s); }
  }
  while (!queue.empty()) {
    StateId v = queue.front();
    queue.pop_front();
    for (EdgeId e : g.in(v)) {
      StateId u = g.edge(e).src;
      if (in[u]) continue;
      if (g.owner(u) == player || --remaining[u] == 0) {
        in[u] = 1;
        queue.push_back(u);
      }
    }
  }
  return in;
}

EnergySolution solve_energy(const GameGraph& g, const std::vector<Weight>& w) {
  const std::size_t n = g.num_states();
  // Any finite credit is at most the sum of the worst outgoing losses.
  Weight bound = 0;
  for (StateId s = 0; s < n; ++s) {
    Weight worst = 0;
    for (EdgeId e : g.out(s)) worst = std::max(worst, -w[e]);
    bound += worst;
  }
  constexpr Weight kTop = -1;
  std::vector<Weight> f(n, 0);
  auto sub = [&](Weight a, Weight wt) -> Weight {
    if (a == kTop) return kTop;
    Weight r = std::max<Weight>(0, a - wt);
    return r > bound ? kTop : r;
  };
  auto less = [&](Weight a, Weight b) {  // a < b in the order with top largest
    if (a == kTop) return false;
    if (b == kTop) return true;
    return a < b;
  };
  auto lifted = [&](StateId v) {
    bool p1 = g.owner(v) == Player::P1;
    std::optional<Weight> best;
    for (EdgeId e : g.out(v)) {
      Weight c = sub(f[g.edge(e).dst], w[e]);
      if (!best || (p1 ? less(c, *best) : less(*best, c))) best = c;
    }
    return best.value_or(kTop);
  };
  EnergySolution sol;
  std::deque<StateId> queue;
  std::vector<char> queued(n, 1);
  for (StateId s = 0; s < n; ++s) queue.push_back(s);
  while (!queue.empty()) {
    StateId v = queue.front();
    queue.pop_front();
    queued[v] = 0;
    if (f[v] == kTop) continue;
    Weight nv = lifted(v);
    if (!less(f[v], nv)) continue;
    f[v] = nv;
    ++sol.lifts;
    for (EdgeId e : g.in(v)) {
      StateId u = g.edge(e).src;
      if (!queued[u] && f[u] != kTop) { queued[u] = 1; queue.push_back(u); }
    }
  }
  sol.credit.resize(n);
  sol.strategy.assign(n, kNoEdge);
  for (StateId s = 0; s < n; ++s) {
    if (f[s] == kTop) continue;
    sol.credit[s] = f[s];
    if (g.owner(s) != Player::P1) continue;
    for (EdgeId e : g.out(s)) {
      Weight c = sub(f[g.edge(e).dst], w[e]);
      if (c != kTop && c <= f[s]) { sol.strategy[s] = e; break; }
    }
  }
  return sol;
}

bool WorstCaseResult::all_winning() const {
  return std::all_of(winning.begin(), winning.end(), [](char c) { return c != 0; });
}

namespace {

WorstCaseResult from_energy(const EnergySolution& sol) {
  WorstCaseResult r;
  r.winning.resize(sol.credit.size());
  for (std::size_t s = 0; s < sol.credit.size(); ++s) r.winning[s] = sol.winning(s);
  r.strategy = sol.strategy;
  return r;
}

Weight to_weight(const mpz_class& z) {
  if (!z.fits_slong_p()) throw std::overflow_error("weight overflow in threshold scaling");
  return z.get_si();
}

// Weights q*w - p for t = p/q, optionally scaled by n and shifted by -1.
std::vector<Weight> scaled(const GameGraph& g, const Rational& t, bool strict) {
  const Weight p = to_weight(t.num()), q = to_weight(t.den());
  const auto n = static_cast<Weight>(std::max<std::size_t>(1, g.num_states()));
  std::vector<Weight> w;
  w.reserve(g.num_edges());
  for (const auto& e : g.edges()) {
    Weight x = q * e.weight - p;
    w.push_back(strict ? n * x - 1 : x);
  }
  return w;
}

}  // namespace

WorstCaseResult mp_strictly_positive_region(const GameGraph& g) { return mp_above(g, Rational(0)); }

WorstCaseResult mp_above(const GameGraph& g, const Rational& t) {
  return from_energy(solve_energy(g, scaled(g, t, true)));
}

WorstCaseResult mp_at_least(const GameGraph& g, const Rational& t) {
  return from_energy(solve_energy(g, scaled(g, t, false)));
}

namespace {

std::vector<Rational> candidates(const GameGraph& g) {
  const auto n = static_cast<long long>(std::max<std::size_t>(1, g.num_states()));
  const long long w = g.max_abs_weight();
  std::set<Rational> c;
  for (long long b = 1; b <= n; ++b)
    for (long long a = -w * b; a <= w * b; ++a) c.insert(Rational(a, b));
  return {c.begin(), c.end()};
}

}  // namespace

std::vector<Rational> mp_optimal_values(const GameGraph& g) {
  const auto cand = candidates(g);
  const std::size_t n = g.num_states();
  // lo[s] / hi[s]: index bounds; value is the largest candidate c with
  // "MP >= c" winning. Solve all states together per probe.
  std::vector<std::size_t> lo(n, 0), hi(n, cand.size() - 1);
  std::unordered_map<std::size_t, std::vector<char>> memo;
  auto probe = [&](std::size_t idx) -> const std::vector<char>& {
    auto it = memo.find(idx);
    if (it == memo.end()) it = memo.emplace(idx, mp_at_least(g, cand[idx]).winning).first;
    return it->second;
  };
  for (StateId s = 0; s < n; ++s) {
    while (lo[s] < hi[s]) {
      std::size_t mid = (lo[s] + hi[s] + 1) / 2;
      if (probe(mid)[s]) lo[s] = mid;
      else hi[s] = mid - 1;
    }
  }
  std::vector<Rational> v(n);
  for (StateId s = 0; s < n; ++s) v[s] = cand[lo[s]];
  return v;
}

Rational mp_optimal_value(const GameGraph& g, StateId s) {
  const auto cand = candidates(g);
  std::size_t lo = 0, hi = cand.size() - 1;
  while (lo < hi) {
    std::size_t mid = (lo + hi + 1) / 2;
    if (mp_at_least(g, cand[mid]).winning[s]) lo = mid;
    else hi = mid - 1;
  }
  return cand[lo];
}

std::vector<EdgeId> extract_wc_strategy(const GameGraph& g, const Rational& threshold) {
  auto r = mp_above(g, threshold);
  if (g.has_initial() && !r.winning[g.initial()])
    throw std::invalid_argument("initial state outside the worst-case winning region");
  return r.strategy;
}

SpUnfolding sp_worst_case_unfold(const GameGraph& g, Weight mu) {
  if (mu < 1) throw std::invalid_argument("shortest-path threshold must be >= 1");
  for (const auto& e : g.edges())
    if (e.weight < 1) throw std::invalid_argument("shortest-path weights must be >= 1");
  SpUnfolding u;
  u.full_size = g.num_states() * static_cast<std::size_t>(mu + 1);

  // Reachable unfolding; node 0 is the saturated sink.
  GameGraph full;
  std::vector<StateId> st{kNoState};
  std::vector<Weight> cnt{mu};
  std::vector<EdgeId> eo;
  full.add_state("top", Player::P1);
  full.add_edge(0, 0, 0);
  eo.push_back(kNoEdge);
  std::unordered_map<std::uint64_t, StateId> index;
  std::deque<StateId> queue;
  auto node = [&](StateId s, Weight c) -> StateId {
    if (c >= mu) return 0;
    std::uint64_t k = static_cast<std::uint64_t>(c) * g.num_states() + s;
    auto it = index.find(k);
    if (it != index.end()) return it->second;
    StateId id = full.add_state(g.state_name(s) + "." + std::to_string(c), g.owner(s));
    index.emplace(k, id);
    st.push_back(s);
    cnt.push_back(c);
    queue.push_back(id);
    return id;
  };
  node(g.initial(), 0);
  while (!queue.empty()) {
    StateId v = queue.front();
    queue.pop_front();
    if (g.is_target(st[v])) continue;  // truncated sum stops at the target
    for (EdgeId e : g.out(st[v])) {
      StateId d = node(g.edge(e).dst, cnt[v] + g.edge(e).weight);
      full.add_edge(v, d, g.edge(e).weight);
      eo.push_back(e);
    }
  }
  // Targets get a placeholder loop so the attractor sees a non-blocking game.
  std::vector<char> tgt(full.num_states(), 0);
  for (StateId v = 1; v < full.num_states(); ++v) {
    if (g.is_target(st[v])) {
      tgt[v] = 1;
      full.add_edge(v, v, 0);
      eo.push_back(kNoEdge);
    }
  }
  u.explored = full.num_states() - 1;
  auto r = attractor(full, Player::P1, tgt);
  u.initial_in_r = full.num_states() > 1 && r[1];

  std::vector<StateId> remap(full.num_states(), kNoState);
  for (StateId v = 1; v < full.num_states(); ++v) {
    if (!r[v]) continue;
    remap[v] = u.game.add_state(full.state_name(v), full.owner(v));
    u.state_of.push_back(st[v]);
    u.counter.push_back(cnt[v]);
  }
  for (EdgeId e = 0; e < full.num_edges(); ++e) {
    const Edge& ed = full.edge(e);
    if (remap[ed.src] == kNoState || remap[ed.dst] == kNoState) continue;
    u.game.add_edge(remap[ed.src], remap[ed.dst], ed.weight);
    u.edge_of.push_back(eo[e]);
  }
  for (StateId v = 1; v < full.num_states(); ++v)
    if (remap[v] != kNoState && tgt[v]) u.game.add_target(remap[v]);
  if (u.initial_in_r) u.game.set_initial(remap[1]);
  return u;
}

}  // namespace bwc
