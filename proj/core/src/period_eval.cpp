#include "bwc/period_eval.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>

#include "bwc/linalg.hpp"
#include "bwc/scc.hpp"

namespace bwc {

namespace {

using Bits = std::vector<std::uint64_t>;

// dst |= src shifted up by `by` bits (down when negative).
void shift_or(Bits& dst, const Bits& src, std::int64_t by) {
  const std::int64_t n = static_cast<std::int64_t>(src.size());
  const std::int64_t words = by >= 0 ? by / 64 : -((-by + 63) / 64);
  const int bits = static_cast<int>(by - words * 64);  // 0..63
  for (std::int64_t i = 0; i < n; ++i) {
    if (!src[i]) continue;
    std::int64_t j = i + words;
    if (j >= 0 && j < n) dst[j] |= src[i] << bits;
    if (bits && j + 1 >= 0 && j + 1 < n) dst[j + 1] |= src[i] >> (64 - bits);
  }
}

std::optional<std::int64_t> first_bit_from(const Bits& b, std::int64_t from) {
  const std::int64_t n = static_cast<std::int64_t>(b.size()) * 64;
  if (from < 0) from = 0;
  for (std::int64_t i = from; i < n;) {
    std::uint64_t w = b[i / 64] >> (i % 64);
    if (w) return i + __builtin_ctzll(w);
    i = (i / 64 + 1) * 64;
  }
  return std::nullopt;
}

mpz_class lcm_of(const mpz_class& a, const mpz_class& b) {
  mpz_class r;
  mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

using RMatrix = std::vector<std::vector<Rational>>;
using MinMatrix = std::vector<std::vector<std::optional<std::int64_t>>>;

RMatrix mul(const RMatrix& a, const RMatrix& b) {
  const std::size_t n = a.size();
  RMatrix c(n, std::vector<Rational>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t l = 0; l < n; ++l) {
      if (a[i][l].sign() == 0) continue;
      for (std::size_t j = 0; j < n; ++j)
        if (b[l][j].sign() != 0) c[i][j] += a[i][l] * b[l][j];
    }
  return c;
}

std::vector<Rational> mul(const RMatrix& a, const std::vector<Rational>& v) {
  std::vector<Rational> r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j)
      if (a[i][j].sign() != 0 && v[j].sign() != 0) r[i] += a[i][j] * v[j];
  return r;
}

MinMatrix min_mul(const MinMatrix& a, const MinMatrix& b) {
  const std::size_t n = a.size();
  MinMatrix c(n, std::vector<std::optional<std::int64_t>>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t l = 0; l < n; ++l) {
      if (!a[i][l]) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (!b[l][j]) continue;
        std::int64_t v = *a[i][l] + *b[l][j];
        if (!c[i][j] || v < *c[i][j]) c[i][j] = v;
      }
    }
  return c;
}

}  // namespace

std::optional<Rational> min_cycle_ratio(std::size_t nodes, const std::vector<RatioArc>& arcs,
                                        std::uint32_t start) {
  Adjacency adj(nodes);
  for (const auto& a : arcs) adj[a.from].push_back(a.to);
  auto reach = reachable_from(adj, {start});
  std::vector<RatioArc> live;
  for (const auto& a : arcs)
    if (reach[a.from]) live.push_back(a);
  std::size_t n = 0;
  for (char c : reach) n += c ? 1 : 0;
  if (live.empty()) return std::nullopt;
  Rational lambda;
  for (const auto& a : live) {
    Rational r = a.weight / a.length;
    if (r > lambda) lambda = r;
  }
  lambda += Rational(1);
  bool found = false;
  for (;;) {
    std::vector<std::optional<Rational>> dist(nodes);
    std::vector<std::size_t> parent(nodes, live.size());
    dist[start] = Rational(0);
    std::optional<std::uint32_t> hit;
    for (std::size_t it = 0; it < n; ++it) {
      hit.reset();
      for (std::size_t i = 0; i < live.size(); ++i) {
        const auto& a = live[i];
        if (!dist[a.from]) continue;
        Rational d = *dist[a.from] + a.weight - lambda * a.length;
        if (!dist[a.to] || d < *dist[a.to]) {
          dist[a.to] = d;
          parent[a.to] = i;
          hit = a.to;
        }
      }
      if (!hit) break;
    }
    if (!hit) break;
    // Walk back into the cycle, then collect it.
    std::uint32_t x = *hit;
    for (std::size_t i = 0; i < n; ++i) x = live[parent[x]].from;
    Rational w, len;
    std::uint32_t y = x;
    do {
      const auto& a = live[parent[y]];
      w += a.weight;
      len += a.length;
      y = a.from;
    } while (y != x);
    Rational r = w / len;
    if (found && !(r < lambda)) break;
    lambda = r;
    found = true;
  }
  if (!found) return std::nullopt;
  return lambda;
}

void CombinedEvaluator::charge(std::uint64_t n) {
  work_ += n;
  if (work_ > budget_) throw BudgetExceeded();
}

CombinedEvaluator::CombinedEvaluator(const Mdp& p, const EcPlan& ec, std::uint64_t budget)
    : p_(p), ec_(ec), budget_(budget) {
  states_ = ec.states;
  k_ = states_.size();
  local_.assign(p.graph.num_states(), -1);
  for (std::size_t i = 0; i < k_; ++i) local_[states_[i]] = static_cast<int>(i);
  a_pos_.assign(k_, std::vector<Rational>(k_));
  a_nonpos_.assign(k_, std::vector<Rational>(k_));
  a_reward_.assign(k_, Rational());
  a_min_pos_.assign(k_, std::vector<std::optional<std::int64_t>>(k_));
  a_min_.assign(k_, std::vector<std::optional<std::int64_t>>(k_));
  a_adv_.assign(k_, std::vector<char>(k_, 0));
  for (std::size_t s = 0; s < k_; ++s) {
    phase_a_expectation(s);
    phase_a_worst(s);
  }
  phase_b();
  solve();
}

void CombinedEvaluator::phase_a_expectation(std::size_t start) {
  const GameGraph& g = p_.graph;
  // Common denominator of the model probabilities inside the component.
  mpz_class d = 1;
  for (StateId s : states_)
    if (p_.stochastic(s))
      for (const auto& c : p_.delta[s])
        if (c.prob.sign() > 0) d = lcm_of(d, c.prob.den());
  struct Move {
    std::uint32_t to;
    Weight w;
    mpz_class factor;
  };
  std::vector<std::vector<Move>> moves(k_);
  for (std::size_t i = 0; i < k_; ++i) {
    StateId s = states_[i];
    if (p_.stochastic(s)) {
      for (const auto& c : p_.delta[s]) {
        if (c.prob.sign() <= 0) continue;
        const Edge& e = g.edge(c.edge);
        mpz_class f = c.prob.num() * (d / c.prob.den());
        moves[i].push_back({static_cast<std::uint32_t>(local_.at(e.dst)), e.weight, f});
      }
    } else {
      const Edge& e = g.edge(ec_.e1[s]);
      moves[i].push_back({static_cast<std::uint32_t>(local_.at(e.dst)), e.weight, d});
    }
  }
  std::vector<std::unordered_map<std::int64_t, mpz_class>> cur(k_), nxt(k_);
  cur[start][0] = 1;
  for (std::uint32_t t = 0; t < ec_.K; ++t) {
    for (auto& m : nxt) m.clear();
    for (std::size_t u = 0; u < k_; ++u) {
      charge(cur[u].size() * moves[u].size() + 1);
      for (const auto& [sum, c] : cur[u])
        for (const auto& mv : moves[u]) nxt[mv.to][sum + mv.w] += c * mv.factor;
    }
    std::swap(cur, nxt);
  }
  mpz_class denom;
  mpz_pow_ui(denom.get_mpz_t(), d.get_mpz_t(), ec_.K);
  mpz_class reward = 0;
  for (std::size_t v = 0; v < k_; ++v) {
    mpz_class pos = 0, nonpos = 0;
    for (const auto& [sum, c] : cur[v]) {
      (sum > 0 ? pos : nonpos) += c;
      reward += c * mpz_class(static_cast<long>(sum));
    }
    a_pos_[start][v] = Rational(pos, denom);
    a_nonpos_[start][v] = Rational(nonpos, denom);
  }
  a_reward_[start] = Rational(reward, denom);
}

void CombinedEvaluator::phase_a_worst(std::size_t start) {
  const GameGraph& g = p_.graph;
  const std::int64_t off = static_cast<std::int64_t>(ec_.K) * ec_.W;
  const std::size_t words = static_cast<std::size_t>((2 * off + 1 + 63) / 64);
  std::vector<std::vector<std::pair<std::uint32_t, Weight>>> moves(k_);
  for (std::size_t i = 0; i < k_; ++i) {
    StateId s = states_[i];
    if (p_.stochastic(s)) {
      for (const auto& c : p_.delta[s])
        if (c.prob.sign() > 0) {
          const Edge& e = g.edge(c.edge);
          moves[i].emplace_back(local_.at(e.dst), e.weight);
        }
    } else {
      const Edge& e = g.edge(ec_.e1[s]);
      moves[i].emplace_back(local_.at(e.dst), e.weight);
    }
  }
  std::vector<Bits> cur(k_, Bits(words, 0)), nxt(k_, Bits(words, 0));
  std::vector<char> on(k_, 0), non(k_, 0);
  cur[start][static_cast<std::size_t>(off / 64)] |= std::uint64_t{1} << (off % 64);
  on[start] = 1;
  for (std::uint32_t t = 0; t < ec_.K; ++t) {
    for (std::size_t v = 0; v < k_; ++v) {
      if (non[v]) std::fill(nxt[v].begin(), nxt[v].end(), 0);
      non[v] = 0;
    }
    for (std::size_t u = 0; u < k_; ++u) {
      if (!on[u]) continue;
      if (p_.stochastic(states_[u])) a_adv_[start][u] = 1;
      for (auto [v, w] : moves[u]) {
        charge(words);
        shift_or(nxt[v], cur[u], w);
        non[v] = 1;
      }
    }
    std::swap(cur, nxt);
    std::swap(on, non);
  }
  for (std::size_t v = 0; v < k_; ++v) {
    if (!on[v]) continue;
    auto lo = first_bit_from(cur[v], 0);
    if (lo) a_min_[start][v] = *lo - off;
    auto pos = first_bit_from(cur[v], off + 1);
    if (pos) a_min_pos_[start][v] = *pos - off;
  }
}

void CombinedEvaluator::phase_b() {
  const GameGraph& g = p_.graph;
  RMatrix m(k_, std::vector<Rational>(k_));
  std::vector<Rational> r(k_);
  MinMatrix mm(k_, std::vector<std::optional<std::int64_t>>(k_));
  auto put_min = [&](std::size_t u, std::size_t v, Weight w) {
    if (!mm[u][v] || w < *mm[u][v]) mm[u][v] = w;
  };
  for (std::size_t i = 0; i < k_; ++i) {
    StateId s = states_[i];
    if (p_.stochastic(s)) {
      for (const auto& c : p_.delta[s]) {
        if (c.prob.sign() <= 0) continue;
        const Edge& e = g.edge(c.edge);
        std::size_t v = static_cast<std::size_t>(local_.at(e.dst));
        m[i][v] += c.prob;
        r[i] += c.prob * Rational(e.weight);
        put_min(i, v, e.weight);
      }
    } else {
      const Edge& e = g.edge(ec_.wc[s]);
      std::size_t v = static_cast<std::size_t>(local_.at(e.dst));
      m[i][v] += Rational(1);
      r[i] = Rational(e.weight);
      put_min(i, v, e.weight);
    }
  }
  // Doubling: (M^a, S_a) with S_a the expected reward of a steps.
  RMatrix res(k_, std::vector<Rational>(k_));
  for (std::size_t i = 0; i < k_; ++i) res[i][i] = Rational(1);
  std::vector<Rational> sres(k_);
  MinMatrix mres(k_, std::vector<std::optional<std::int64_t>>(k_));
  for (std::size_t i = 0; i < k_; ++i) mres[i][i] = 0;
  RMatrix base = m;
  std::vector<Rational> sbase = r;
  MinMatrix mbase = mm;
  for (std::uint32_t l = ec_.L; l; l >>= 1) {
    charge(4 * k_ * k_ * k_ + 1);
    if (l & 1) {
      auto add = mul(res, sbase);
      for (std::size_t i = 0; i < k_; ++i) sres[i] += add[i];
      res = mul(res, base);
      mres = min_mul(mres, mbase);
    }
    if (l > 1) {
      auto add = mul(base, sbase);
      for (std::size_t i = 0; i < k_; ++i) sbase[i] += add[i];
      base = mul(base, base);
      mbase = min_mul(mbase, mbase);
    }
  }
  b_trans_ = std::move(res);
  b_reward_ = std::move(sres);
  b_min_ = std::move(mres);
  // States where the adversary moves during a phase-(b) block.
  b_adv_.assign(k_, std::vector<char>(k_, 0));
  for (std::size_t v = 0; v < k_; ++v) {
    std::vector<std::size_t> depth(k_, SIZE_MAX);
    std::deque<std::size_t> q{v};
    depth[v] = 0;
    while (!q.empty()) {
      std::size_t u = q.front();
      q.pop_front();
      if (depth[u] >= ec_.L) continue;
      if (p_.stochastic(states_[u])) b_adv_[v][u] = 1;
      for (std::size_t w = 0; w < k_; ++w)
        if (mm[u][w] && depth[w] == SIZE_MAX) {
          depth[w] = depth[u] + 1;
          q.push_back(w);
        }
    }
  }
}

void CombinedEvaluator::solve() {
  const std::size_t n = 2 * k_;  // A_s = s, B_s = k + s
  const Rational K(static_cast<long long>(ec_.K)), L(static_cast<long long>(ec_.L));
  // Renewal chain over block starts.
  RMatrix t(n, std::vector<Rational>(n));
  std::vector<Rational> reward(n), length(n);
  for (std::size_t s = 0; s < k_; ++s) {
    for (std::size_t v = 0; v < k_; ++v) {
      t[s][v] += a_pos_[s][v];
      t[s][ec_.L == 0 ? v : k_ + v] += a_nonpos_[s][v];
      t[k_ + s][v] = b_trans_[s][v];
    }
    reward[s] = a_reward_[s];
    length[s] = K;
    reward[k_ + s] = b_reward_[s];
    length[k_ + s] = L;
  }
  Adjacency adj(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (t[i][j].sign() > 0) adj[i].push_back(static_cast<std::uint32_t>(j));
  auto scc = tarjan_scc(adj);
  std::vector<std::optional<Rational>> fixed(n);
  for (const auto& comp : scc.members) {
    bool closed = true;
    for (auto u : comp)
      for (auto v : adj[u])
        if (scc.comp[v] != scc.comp[u]) closed = false;
    if (!closed || adj[comp[0]].empty()) continue;
    std::vector<std::size_t> idx(comp.begin(), comp.end());
    RMatrix sub(idx.size(), std::vector<Rational>(idx.size()));
    for (std::size_t i = 0; i < idx.size(); ++i)
      for (std::size_t j = 0; j < idx.size(); ++j) sub[i][j] = t[idx[i]][idx[j]];
    auto pi = stationary(sub);
    Rational num, den;
    for (std::size_t i = 0; i < idx.size(); ++i) {
      num += pi[i] * reward[idx[i]];
      den += pi[i] * length[idx[i]];
    }
    for (auto u : comp) fixed[u] = num / den;
  }
  // Transient block starts inherit the absorption-weighted ratios.
  std::vector<std::size_t> free;
  std::vector<int> pos(n, -1);
  for (std::size_t i = 0; i < n; ++i)
    if (!fixed[i]) {
      pos[i] = static_cast<int>(free.size());
      free.push_back(i);
    }
  std::vector<Rational> value(n);
  for (std::size_t i = 0; i < n; ++i)
    if (fixed[i]) value[i] = *fixed[i];
  if (!free.empty()) {
    Matrix a(free.size(), std::vector<Rational>(free.size()));
    std::vector<Rational> b(free.size());
    for (std::size_t r = 0; r < free.size(); ++r) {
      std::size_t i = free[r];
      a[r][r] += Rational(1);
      for (std::size_t j = 0; j < n; ++j) {
        if (t[i][j].sign() == 0) continue;
        if (fixed[j]) b[r] += t[i][j] * *fixed[j];
        else a[r][pos[j]] -= t[i][j];
      }
    }
    auto sol = solve_linear(std::move(a), std::move(b));
    if (!sol) throw std::runtime_error("renewal system is singular");
    for (std::size_t r = 0; r < free.size(); ++r) value[free[r]] = (*sol)[r];
  }
  expectation_.assign(value.begin(), value.begin() + static_cast<std::ptrdiff_t>(k_));

  // Worst case: cheapest reachable block cycle per unit of time.
  std::vector<RatioArc> arcs;
  for (std::size_t s = 0; s < k_; ++s)
    for (std::size_t v = 0; v < k_; ++v) {
      auto id = [](std::size_t x) { return static_cast<std::uint32_t>(x); };
      if (a_min_pos_[s][v]) arcs.push_back({id(s), id(v), Rational(*a_min_pos_[s][v]), K});
      if (a_min_[s][v] && *a_min_[s][v] <= 0)
        arcs.push_back({id(s), id(ec_.L == 0 ? v : k_ + v), Rational(*a_min_[s][v]), K});
      if (ec_.L > 0 && b_min_[s][v]) arcs.push_back({id(k_ + s), id(v), Rational(*b_min_[s][v]), L});
    }
  Adjacency wadj(n);
  for (const auto& a : arcs) wadj[a.from].push_back(a.to);
  worst_.assign(k_, Rational());
  adversary_.assign(k_, {});
  for (std::size_t s = 0; s < k_; ++s) {
    auto r = min_cycle_ratio(n, arcs, static_cast<std::uint32_t>(s));
    if (!r) throw std::runtime_error("combined strategy has no recurrent block");
    worst_[s] = *r;
    auto reach = reachable_from(wadj, {static_cast<std::uint32_t>(s)});
    std::vector<char> adv(k_, 0);
    for (std::size_t x = 0; x < n; ++x) {
      if (!reach[x]) continue;
      const auto& src = x < k_ ? a_adv_[x] : b_adv_[x - k_];
      for (std::size_t u = 0; u < k_; ++u) adv[u] |= src[u];
    }
    for (std::size_t u = 0; u < k_; ++u)
      if (adv[u]) adversary_[s].push_back(states_[u]);
  }
}

const Rational& CombinedEvaluator::expectation_from(StateId s) const {
  return expectation_.at(static_cast<std::size_t>(local_.at(s)));
}

const Rational& CombinedEvaluator::worst_case_from(StateId s) const {
  return worst_.at(static_cast<std::size_t>(local_.at(s)));
}

const std::vector<StateId>& CombinedEvaluator::adversary_states_from(StateId s) const {
  return adversary_.at(static_cast<std::size_t>(local_.at(s)));
}

}  // namespace bwc
