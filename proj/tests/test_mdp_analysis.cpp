#include <algorithm>

#include <gtest/gtest.h>

#include "bwc/instances.hpp"
#include "bwc/mdp_analysis.hpp"
#include "oracles.hpp"

using namespace bwc;

namespace {

std::vector<std::string> names(const GameGraph& g, const std::vector<StateId>& s) {
  std::vector<std::string> r;
  for (StateId x : s) r.push_back(g.state_name(x));
  std::sort(r.begin(), r.end());
  return r;
}

using Sets = std::vector<std::vector<std::string>>;

Sets sorted_sets(const GameGraph& g, const std::vector<EndComponent>& ecs) {
  Sets r;
  for (const auto& e : ecs) r.push_back(names(g, e.states));
  std::sort(r.begin(), r.end());
  return r;
}

// Max expected mean-payoff by enumerating pure memoryless policies.
Rational brute_max_mp(const Mdp& p, StateId from) {
  const auto& g = p.graph;
  std::vector<StateId> p1;
  for (StateId s = 0; s < g.num_states(); ++s)
    if (!p.stochastic(s)) p1.push_back(s);
  std::vector<std::size_t> pick(p1.size(), 0);
  std::optional<Rational> best;
  while (true) {
    oracle::Chain mc;
    mc.succ.resize(g.num_states());
    mc.reward.assign(g.num_states(), Rational(0));
    for (StateId s = 0; s < g.num_states(); ++s) {
      if (!p.stochastic(s)) continue;
      for (const auto& c : p.delta[s]) {
        if (c.prob == Rational(0)) continue;
        mc.succ[s].push_back({g.edge(c.edge).dst, c.prob});
        mc.reward[s] += c.prob * Rational(static_cast<long long>(g.edge(c.edge).weight));
      }
    }
    for (std::size_t i = 0; i < p1.size(); ++i) {
      EdgeId e = g.out(p1[i])[pick[i]];
      mc.succ[p1[i]].push_back({g.edge(e).dst, Rational(1)});
      mc.reward[p1[i]] = Rational(static_cast<long long>(g.edge(e).weight));
    }
    Rational v = oracle::chain_mean_payoff(mc)[from];
    if (!best || v > *best) best = v;
    std::size_t i = 0;
    while (i < p1.size() && ++pick[i] == g.out(p1[i]).size()) pick[i++] = 0;
    if (i == p1.size()) break;
  }
  return *best;
}

// Min expected cost to target by enumerating pure memoryless policies;
// +inf for policies that miss the target with positive probability.
Extended brute_min_cost(const Mdp& p, const std::vector<char>& target, StateId from) {
  const auto& g = p.graph;
  const std::size_t n = g.num_states();
  std::vector<StateId> p1;
  for (StateId s = 0; s < n; ++s)
    if (!p.stochastic(s) && !target[s]) p1.push_back(s);
  std::vector<std::size_t> pick(p1.size(), 0);
  Extended best = Extended::pos_inf();
  while (true) {
    std::vector<std::vector<std::pair<StateId, Rational>>> succ(n);
    std::vector<Rational> reward(n);
    for (StateId s = 0; s < n; ++s) {
      if (target[s] || !p.stochastic(s)) continue;
      for (const auto& c : p.delta[s]) {
        if (c.prob == Rational(0)) continue;
        succ[s].push_back({g.edge(c.edge).dst, c.prob});
        reward[s] += c.prob * Rational(static_cast<long long>(g.edge(c.edge).weight));
      }
    }
    for (std::size_t i = 0; i < p1.size(); ++i) {
      EdgeId e = g.out(p1[i])[pick[i]];
      succ[p1[i]].push_back({g.edge(e).dst, Rational(1)});
      reward[p1[i]] = Rational(static_cast<long long>(g.edge(e).weight));
    }
    // Almost-sure reach in a finite chain: every reachable state can still
    // reach a target.
    std::vector<char> can(n, 0);
    for (StateId s = 0; s < n; ++s) can[s] = target[s];
    for (bool ch = true; ch;) {
      ch = false;
      for (StateId s = 0; s < n; ++s)
        if (!can[s])
          for (auto& [d, q] : succ[s])
            if (can[d]) { can[s] = 1; ch = true; break; }
    }
    std::vector<char> seen(n, 0);
    std::vector<StateId> stack{from};
    seen[from] = 1;
    bool sure = true;
    while (!stack.empty()) {
      StateId s = stack.back();
      stack.pop_back();
      if (!can[s]) sure = false;
      if (target[s]) continue;
      for (auto& [d, q] : succ[s])
        if (!seen[d]) { seen[d] = 1; stack.push_back(d); }
    }
    if (sure) {
      std::vector<StateId> idx;
      std::vector<int> at(n, -1);
      for (StateId s = 0; s < n; ++s)
        if (seen[s] && !target[s]) { at[s] = static_cast<int>(idx.size()); idx.push_back(s); }
      Rational v(0);
      if (!idx.empty()) {
        std::vector<std::vector<Rational>> a(idx.size(), std::vector<Rational>(idx.size()));
        std::vector<Rational> b(idx.size());
        for (std::size_t k = 0; k < idx.size(); ++k) {
          a[k][k] += Rational(1);
          b[k] = reward[idx[k]];
          for (auto& [d, q] : succ[idx[k]])
            if (at[d] >= 0) a[k][at[d]] -= q;
        }
        auto x = oracle::gauss(a, b);
        v = at[from] >= 0 ? x[at[from]] : Rational(0);
      }
      if (Extended(v) < best) best = v;
    }
    std::size_t i = 0;
    while (i < p1.size() && ++pick[i] == g.out(p1[i]).size()) pick[i++] = 0;
    if (i == p1.size()) break;
  }
  return best;
}

}  // namespace

TEST(Mec, Fig2Decomposition) {
  BwcInstance f2 = gen_fig2();
  Mdp p = fix_player2(f2.game, f2.model);
  MecDecomposition d = mec_decompose(p);
  EXPECT_EQ(sorted_sets(p.graph, d.components),
            (Sets{{"s10", "s11", "s9"}, {"s3", "s4"}, {"s6", "s7", "s8"}}));
  for (std::size_t i = 0; i < d.components.size(); ++i)
    for (StateId s : d.components[i].states) EXPECT_EQ(d.member[s], static_cast<int>(i));
  EXPECT_EQ(d.member[*f2.game.find_state("s1")], -1);
}

TEST(Mwec, Fig2WinningAndLosing) {
  BwcInstance f2 = gen_fig2();
  Mdp p = fix_player2(f2.game, f2.model);
  std::vector<EndComponent> losing;
  auto w = mwec(p, &losing);
  EXPECT_EQ(sorted_sets(p.graph, w), (Sets{{"s10", "s11", "s9"}, {"s6", "s7", "s8"}}));
  EXPECT_EQ(sorted_sets(p.graph, losing), (Sets{{"s3", "s4"}}));
  for (const auto& e : w) EXPECT_EQ(e.classification, EndComponent::Class::Winning);
}

TEST(Mwec, Fig3RecursesIntoLosingComponent) {
  BwcInstance f3 = gen_fig3();
  Mdp p = fix_player2(f3.game, f3.model);
  auto w = mwec(p);
  EXPECT_EQ(sorted_sets(p.graph, w), (Sets{{"s2"}, {"s5"}}));
}

TEST(ExpectedMp, Fig2GainsInComponents) {
  BwcInstance f2 = gen_fig2();
  Mdp p = fix_player2(f2.game, f2.model);
  std::vector<StateId> states{*f2.game.find_state("s9"), *f2.game.find_state("s10"),
                              *f2.game.find_state("s11")};
  std::sort(states.begin(), states.end());
  GainSolution g3 = optimal_gain_in(p, states);
  EXPECT_EQ(g3.gain[states[0]], Rational(2));
  GainSolution all = max_expected_mp(p);
  EXPECT_EQ(all.gain[p.graph.initial()], Rational(4));  // the losing s3-s4 cycle
}

TEST(ExpectedMp, PolicyIterationMatchesEnumeration) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    RandomSpec spec;
    spec.seed = 1000 + seed;
    spec.states = 2 + seed % 5;
    BwcInstance inst = gen_random(spec);
    Mdp p = fix_player2(inst.game, inst.model);
    GainSolution sol = max_expected_mp(p);
    for (StateId s = 0; s < p.graph.num_states(); ++s)
      ASSERT_EQ(sol.gain[s], brute_max_mp(p, s)) << "seed " << spec.seed << " state " << s;
  }
}

TEST(ExpectedCost, MatchesEnumerationOnRandomSp) {
  for (std::uint64_t seed = 0; seed < 150; ++seed) {
    RandomSpec spec;
    spec.seed = 5000 + seed;
    spec.states = 2 + seed % 4;
    spec.objective = Objective::ShortestPath;
    BwcInstance inst = gen_random(spec);
    Mdp p = fix_player2(inst.game, inst.model);
    std::vector<char> target(p.graph.num_states(), 0);
    for (StateId t : p.graph.targets()) target[t] = 1;
    CostSolution cs = min_expected_truncated_sum(p, target);
    ASSERT_EQ(cs.value[p.graph.initial()], brute_min_cost(p, target, p.graph.initial()))
        << "seed " << spec.seed;
  }
}

TEST(MarkovChains, ReachAndDistribution) {
  BwcInstance f4 = gen_fig4();
  TableMachine s = fig4_combined_strategy(f4);
  MarkovChain mc = fix_both(f4.game, s, f4.model);
  ASSERT_EQ(mc.size(), 4u);
  std::vector<char> s9(mc.size(), 0);
  for (StateId x = 0; x < mc.size(); ++x) s9[x] = f4.game.state_name(mc.state_of[x]) == "s9";
  EXPECT_EQ(reach_probability(mc, mc.graph.initial(), s9, 2), Rational(0));
  EXPECT_EQ(reach_probability(mc, mc.graph.initial(), s9, 3), Rational(1, 2));
  EXPECT_EQ(reach_probability(mc, mc.graph.initial(), s9), Rational(1));
  auto d = distribution_at(mc, mc.graph.initial(), 2);
  Rational mass;
  for (const auto& x : d) mass += x;
  EXPECT_EQ(mass, Rational(1));
  BsccInfo b = bottom_components(mc);
  ASSERT_EQ(b.classes.size(), 1u);
  EXPECT_EQ(b.gain[0], Rational(5, 3));
  EXPECT_EQ(mc_expected_mp(mc, mc.graph.initial()), Rational(5, 3));
}

TEST(MarkovChains, OracleAgreesOnBscc) {
  BwcInstance f4 = gen_fig4();
  TableMachine s = fig4_combined_strategy(f4);
  MarkovChain mc = fix_both(f4.game, s, f4.model);
  oracle::Chain c;
  c.succ.resize(mc.size());
  c.reward.assign(mc.size(), Rational(0));
  for (StateId x = 0; x < mc.size(); ++x)
    for (const auto& ch : mc.delta[x]) {
      c.succ[x].push_back({mc.graph.edge(ch.edge).dst, ch.prob});
      c.reward[x] += ch.prob * Rational(static_cast<long long>(mc.graph.edge(ch.edge).weight));
    }
  EXPECT_EQ(oracle::chain_mean_payoff(c)[mc.graph.initial()], Rational(5, 3));
}
