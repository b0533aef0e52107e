#include <random>

#include <gtest/gtest.h>

#include "bwc/game_solvers.hpp"
#include "bwc/instances.hpp"
#include "bwc/verify.hpp"
#include "oracles.hpp"

using namespace bwc;

namespace {

StateId st(const GameGraph& g, const char* n) { return *g.find_state(n); }

// Minimum simple-cycle mean of a digraph by exhaustive enumeration.
std::optional<Rational> brute_min_mean(const Digraph& d) {
  oracle::Game g;
  g.p1.assign(d.nodes, true);
  g.out.resize(d.nodes);
  for (const auto& a : d.arcs) {
    g.out[a.from].push_back(g.edges.size());
    g.edges.push_back({a.from, a.to, Rational(static_cast<long long>(a.weight)), Rational(0)});
  }
  std::vector<char> all(g.edges.size(), 1);
  std::optional<Rational> best;
  for (std::size_t s = 0; s < d.nodes; ++s) {
    auto m = oracle::min_reachable_cycle_mean(g, s, all);
    if (m && (!best || *m < *best)) best = m;
  }
  return best;
}

Rational cycle_mean(const Digraph& d, const MeanCycle& c) {
  // Recompute from the node sequence using the lightest arc per hop.
  Rational sum;
  for (std::size_t i = 0; i < c.nodes.size(); ++i) {
    std::uint32_t a = c.nodes[i], b = c.nodes[(i + 1) % c.nodes.size()];
    std::optional<Weight> w;
    for (const auto& arc : d.arcs)
      if (arc.from == a && arc.to == b && (!w || arc.weight < *w)) w = arc.weight;
    EXPECT_TRUE(w.has_value());
    sum += Rational(static_cast<long long>(w.value_or(0)));
  }
  return sum / Rational(static_cast<long long>(c.nodes.size()));
}

}  // namespace

TEST(Attractor, Fig3ReachOfS5) {
  BwcInstance f3 = gen_fig3();
  const auto& g = f3.game;
  std::vector<char> t(g.num_states(), 0);
  t[st(g, "s5")] = 1;
  auto a1 = attractor(g, Player::P1, t);
  EXPECT_TRUE(a1[st(g, "s5")]);
  EXPECT_FALSE(a1[st(g, "s3")]);  // P2 picks s4
  EXPECT_FALSE(a1[st(g, "s1")]);
  auto a2 = attractor(g, Player::P2, t);
  EXPECT_TRUE(a2[st(g, "s3")]);
  EXPECT_FALSE(a2[st(g, "s1")]);  // P1 can go to s2
}

TEST(Energy, CreditsOnSmallCycle) {
  GameGraph g("e");
  auto a = g.add_state("a", Player::P1);
  auto b = g.add_state("b", Player::P2);
  g.add_edge(a, b, -3);
  g.add_edge(b, a, 2);
  g.add_edge(b, b, 0);
  g.set_initial(a);
  EnergySolution s = solve_energy(g, {-3, 2, 0});
  EXPECT_FALSE(s.winning(a));  // the a-b cycle loses energy
  EnergySolution t = solve_energy(g, {-3, 4, 0});
  ASSERT_TRUE(t.winning(a));
  EXPECT_EQ(*t.credit[a], 3);
  EXPECT_EQ(*t.credit[b], 0);
}

TEST(MinMeanCycle, KarpAndHowardMatchEnumeration) {
  std::mt19937_64 rng(11);
  for (int iter = 0; iter < 400; ++iter) {
    Digraph d;
    d.nodes = 1 + rng() % 6;
    std::size_t m = rng() % 14;
    for (std::size_t i = 0; i < m; ++i)
      d.arcs.push_back({static_cast<std::uint32_t>(rng() % d.nodes),
                        static_cast<std::uint32_t>(rng() % d.nodes),
                        static_cast<Weight>(rng() % 11) - 5});
    auto expect = brute_min_mean(d);
    auto k = karp_min_mean_cycle(d);
    auto h = howard_min_mean_cycle(d);
    auto c = min_mean_cycle(d);
    ASSERT_EQ(expect.has_value(), k.has_value()) << iter;
    ASSERT_EQ(expect.has_value(), h.has_value()) << iter;
    ASSERT_EQ(expect.has_value(), c.has_value()) << iter;
    if (!expect) continue;
    EXPECT_EQ(k->mean, *expect) << iter;
    EXPECT_EQ(h->mean, *expect) << iter;
    EXPECT_EQ(c->mean, *expect) << iter;
    EXPECT_EQ(cycle_mean(d, *k), *expect) << iter;
    EXPECT_EQ(cycle_mean(d, *h), *expect) << iter;
  }
}

TEST(MeanPayoffGames, ValuesMatchMemorylessEnumeration) {
  for (std::uint64_t seed = 0; seed < 150; ++seed) {
    RandomSpec spec;
    spec.seed = seed;
    spec.states = 2 + seed % 4;
    BwcInstance inst = gen_random(spec);
    oracle::Game og = oracle::from_instance(inst);
    std::vector<char> all_e(og.edges.size(), 1), all_s(og.p1.size(), 1);
    auto values = mp_optimal_values(inst.game);
    for (Rational t : {Rational(-1), Rational(0), Rational(1, 2)}) {
      auto wc = oracle::worst_case(og, all_e, all_s, t);
      auto above = mp_above(inst.game, t), at_least = mp_at_least(inst.game, t);
      for (StateId s = 0; s < inst.game.num_states(); ++s) {
        ASSERT_EQ(static_cast<bool>(above.winning[s]), static_cast<bool>(wc.winning[s]))
            << "seed " << seed << " state " << s;
        ASSERT_EQ(*wc.value[s], values[s]) << "seed " << seed << " state " << s;
        ASSERT_EQ(static_cast<bool>(at_least.winning[s]), values[s] >= t);
      }
    }
    auto pos = mp_strictly_positive_region(inst.game);
    for (StateId s = 0; s < inst.game.num_states(); ++s)
      EXPECT_EQ(static_cast<bool>(pos.winning[s]), values[s] > Rational(0));
  }
}

TEST(MeanPayoffGames, ExtractedStrategyGuaranteesThreshold) {
  BwcInstance f2 = gen_fig2();
  auto choice = extract_wc_strategy(f2.game, Rational(0));
  TableMachine m = memoryless_pure(f2.game, choice);
  EXPECT_GT(worst_case_mp(f2.game, m), Rational(0));
  EXPECT_EQ(mp_optimal_value(f2.game, f2.game.initial()), Rational(1));
}

TEST(SpUnfold, Fig1SafeRegion) {
  BwcInstance f1 = gen_fig1();
  SpUnfolding u = sp_worst_case_unfold(f1.game, 60);
  EXPECT_TRUE(u.initial_in_r);
  EXPECT_EQ(u.full_size, f1.game.num_states() * 61);
  // Every node of the safe region: longest path to a target stays below mu.
  for (StateId s = 0; s < u.game.num_states(); ++s) EXPECT_LT(u.counter[s], 60);
  SpUnfolding tight = sp_worst_case_unfold(f1.game, 3);
  EXPECT_FALSE(tight.initial_in_r);
}
