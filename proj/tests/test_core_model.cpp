#include <gtest/gtest.h>

#include "bwc/game.hpp"
#include "bwc/instances.hpp"
#include "bwc/machine.hpp"
#include "bwc/product.hpp"
#include "bwc/rational.hpp"

using namespace bwc;

TEST(Rational, ParseAndPrint) {
  EXPECT_EQ(Rational::parse("6/4")->str(), "3/2");
  EXPECT_EQ(Rational::parse("-7")->str(), "-7");
  EXPECT_EQ(Rational::parse("0/5")->str(), "0");
  EXPECT_FALSE(Rational::parse("1/0"));
  EXPECT_FALSE(Rational::parse("abc"));
  EXPECT_FALSE(Rational::parse("1.5"));
  EXPECT_EQ(Rational(1, 3) + Rational(1, 6), Rational(1, 2));
  EXPECT_LT(Rational(-1, 2), Rational(0));
}

TEST(Rational, ExtendedOrdering) {
  Extended a = Rational(5), n = Extended::neg_inf(), p = Extended::pos_inf();
  EXPECT_LT(n, a);
  EXPECT_LT(a, p);
  EXPECT_TRUE(a.finite());
  EXPECT_FALSE(p.finite());
  EXPECT_EQ(*Extended::parse("+inf"), p);
  EXPECT_EQ(*Extended::parse("-inf"), n);
  EXPECT_EQ(Extended::parse("3/4")->value(), Rational(3, 4));
}

TEST(GameGraph, ParallelEdgesNeedDistinctWeights) {
  GameGraph g("g");
  auto a = g.add_state("a", Player::P1);
  auto b = g.add_state("b", Player::P2);
  g.add_edge(a, b, 1);
  g.add_edge(a, b, 2);
  g.add_edge(b, a, 0);
  g.set_initial(a);
  EXPECT_TRUE(validate(g).empty());
  EXPECT_EQ(g.multiplicity(a, b), 2u);
  EXPECT_EQ(*g.find_edge(a, b, 2), 1u);
  g.add_edge(a, b, 2);
  auto v = validate(g);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].kind, Violation::Kind::DuplicateEdge);
}

TEST(GameGraph, DeadlockAndInitialAreReported) {
  GameGraph g("g");
  g.add_state("a", Player::P1);
  auto v = validate(g);
  ASSERT_EQ(v.size(), 2u);
}

TEST(GameGraph, SplitParallelEdgesKeepsSums) {
  BwcInstance f2 = gen_fig2();
  GameGraph s = split_parallel_edges(f2.game);
  for (StateId a = 0; a < s.num_states(); ++a)
    for (StateId b = 0; b < s.num_states(); ++b) EXPECT_LE(s.multiplicity(a, b), 1u);
  EXPECT_EQ(s.num_states(), f2.game.num_states() + 4);  // four parallel pairs
  EXPECT_TRUE(validate(s).empty());
}

TEST(GameGraph, RestrictDropsLeavingEdges) {
  BwcInstance f2 = gen_fig2();
  std::vector<char> keep(f2.game.num_states(), 0);
  for (const char* n : {"s9", "s10", "s11"}) keep[*f2.game.find_state(n)] = 1;
  Subgame sub = restrict_to(f2.game, keep);
  EXPECT_EQ(sub.game.num_states(), 3u);
  EXPECT_EQ(sub.game.num_edges(), 5u);
  for (EdgeId e = 0; e < sub.game.num_edges(); ++e) {
    const Edge& pe = f2.game.edge(sub.to_parent_edge[e]);
    EXPECT_EQ(pe.weight, sub.game.edge(e).weight);
  }
}

TEST(Machine, EdgeUpdatesOverrideStateUpdates) {
  GameGraph g("g");
  auto a = g.add_state("a", Player::P1);
  auto e0 = g.add_edge(a, a, 0);
  auto e1 = g.add_edge(a, a, 1);
  g.set_initial(a);
  TableMachine m(g, "m");
  auto x = m.add_memory("x"), y = m.add_memory("y");
  m.set_initial(x);
  m.set_state_update(x, a, y);
  m.set_edge_update(x, e1, x);
  m.set_output(x, a, dirac(e0));
  m.set_output(y, a, dirac(e1));
  EXPECT_EQ(m.update(x, e0), y);
  EXPECT_EQ(m.update(x, e1), x);
  EXPECT_EQ(m.update(y, e0), y);  // no row: memory unchanged
  EXPECT_TRUE(check_machine(g, m, Player::P1).empty());
}

TEST(Machine, CheckFindsBadMass) {
  BwcInstance f2 = gen_fig2();
  TableMachine m = f2.model;
  auto s2 = *f2.game.find_state("s2");
  m.set_output(0, s2, {{f2.game.out(s2)[0], Rational(1, 3)}});
  EXPECT_FALSE(check_machine(f2.game, m, Player::P2).empty());
}

TEST(Machine, MaterializeReproducesBehaviour) {
  BwcInstance f1 = gen_fig1();
  TableMachine s = fig1_train_then_bicycle(f1);
  TableMachine t = materialize(f1.game, s, Player::P1);
  EXPECT_EQ(t.size(), s.size());
  MarkovChain a = fix_both(f1.game, s, f1.model), b = fix_both(f1.game, t, f1.model);
  EXPECT_EQ(a.size(), b.size());
}

TEST(Product, FixPlayer2CopiesModel) {
  BwcInstance f3 = gen_fig3();
  Mdp p = fix_player2(f3.game, f3.model);
  auto s3 = *f3.game.find_state("s3");
  ASSERT_EQ(p.delta[s3].size(), 2u);
  EXPECT_EQ(p.delta[s3][0].prob, Rational(1, 2));
  EXPECT_TRUE(p.delta[*f3.game.find_state("s1")].empty());
}

TEST(Product, TransformedWeights) {
  BwcInstance f5 = gen_fig5();
  TransformedGame t = transform_weights_mp(f5.game, Rational(-3, 2));
  for (EdgeId e = 0; e < f5.game.num_edges(); ++e)
    EXPECT_EQ(t.game.edge(e).weight, 2 * f5.game.edge(e).weight + 3);
  EXPECT_EQ(t.threshold(Rational(-3, 2)), Rational(0));
  EXPECT_EQ(t.back(Rational(0)), Rational(-3, 2));
}

TEST(Product, MachineProductOverReachablePairs) {
  BwcInstance f1 = gen_fig1();
  TableMachine s = fig1_train_then_bicycle(f1);
  ProductGame pg = product_with_machine(f1.game, s, Player::P1);
  // The product also keeps the strategy's own deviations.
  EXPECT_GE(pg.game.num_states(), reachable_pairs(f1.game, s, Player::P1));
  EXPECT_EQ(pg.state_of[pg.game.initial()], f1.game.initial());
}
