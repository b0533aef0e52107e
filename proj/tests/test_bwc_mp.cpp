#include <algorithm>
#include <set>
#include <tuple>

#include <gtest/gtest.h>

#include "bwc/bwc_mp.hpp"
#include "bwc/instances.hpp"
#include "bwc/period_eval.hpp"
#include "bwc/verify.hpp"
#include "support.hpp"

using namespace bwc;

namespace {

using support::ec_names;
using support::Sets;

MpPreprocessed pre_of(const BwcInstance& inst) { return std::get<MpPreprocessed>(preprocess(inst)); }

}  // namespace

TEST(Fig2, WinningEcsAndNuStar) {
  BwcInstance f2 = gen_fig2();
  MpPreprocessed pre = pre_of(f2);
  MpDecision d = decide_mp(pre);
  EXPECT_EQ(ec_names(pre, d.winning), (Sets{{"s10", "s11", "s9"}, {"s6", "s7", "s8"}}));
  EXPECT_EQ(ec_names(pre, d.losing), (Sets{{"s3", "s4"}}));
  EXPECT_EQ(d.nu_star, Rational(3));
  for (Rational nu : {Rational(0), Rational(3, 2), Rational(29, 10)}) {
    f2.nu = nu;
    EXPECT_TRUE(decide(f2).decision);
  }
  for (Rational nu : {Rational(3), Rational(31, 10), Rational(4)}) {
    f2.nu = nu;
    EXPECT_FALSE(decide(f2).decision);
  }
}

TEST(Fig3, MaximalWinningEcs) {
  BwcInstance f3 = gen_fig3();
  MpPreprocessed pre = pre_of(f3);
  MpDecision d = decide_mp(pre);
  EXPECT_EQ(ec_names(pre, d.winning), (Sets{{"s2"}, {"s5"}}));
  EXPECT_EQ(d.nu_star, Rational(10));
}

TEST(Fig4, CombinedStrategyChainStructure) {
  BwcInstance f4 = gen_fig4();
  TableMachine s = fig4_combined_strategy(f4);
  MarkovChain mc = fix_both(f4.game, s, f4.model);
  ASSERT_EQ(mc.size(), 4u);
  // Expected chain: A=(s10, Sum>0) -> B=s11 -> {C=(s10, Sum<=0), A} and
  // C -> D=s9 -> A, with the weights and probabilities below.
  struct Arc {
    int from, to;
    Weight w;
    Rational p;
  };
  const std::vector<std::string> label{"s10", "s11", "s10", "s9"};
  const std::vector<Arc> expect{{0, 1, 0, Rational(1)},  {1, 2, -1, Rational(1, 2)},
                                {1, 0, 9, Rational(1, 2)}, {2, 3, 1, Rational(1)},
                                {3, 0, 1, Rational(1)}};
  std::vector<int> perm{0, 1, 2, 3};
  bool found = false;
  do {
    if (static_cast<StateId>(perm[0]) != mc.graph.initial()) continue;
    bool ok = true;
    for (int i = 0; i < 4 && ok; ++i) ok = f4.game.state_name(mc.state_of[perm[i]]) == label[i];
    std::multiset<std::tuple<int, int, Weight, std::string>> a, b;
    for (const auto& e : expect) a.insert({perm[e.from], perm[e.to], e.w, e.p.str()});
    for (StateId x = 0; x < mc.size(); ++x)
      for (const auto& c : mc.delta[x])
        b.insert({static_cast<int>(x), static_cast<int>(mc.graph.edge(c.edge).dst),
                  mc.graph.edge(c.edge).weight, c.prob.str()});
    if (ok && a == b) found = true;
  } while (!found && std::next_permutation(perm.begin(), perm.end()));
  EXPECT_TRUE(found);
  VerificationReport r = verify_mp(f4.game, s, f4.model, Rational(0), Rational(3, 2));
  EXPECT_EQ(r.expectation.value(), Rational(5, 3));
  EXPECT_EQ(r.worst_case.value(), Rational(1, 4));
  EXPECT_TRUE(r.passed());
}

TEST(Fig4, EvaluatorAgreesWithVerifierAcrossK) {
  BwcInstance f4 = gen_fig4();
  MpPreprocessed pre = pre_of(f4);
  MpDecision d = decide_mp(pre);
  ASSERT_EQ(d.winning.size(), 1u);
  Rational prev(-100);
  for (std::uint32_t K : {2u, 4u, 8u, 16u}) {
    EcPlan ec = make_ec_plan(pre.mdp, d.winning[0].states, K);
    CombinedEvaluator ev(pre.mdp, ec);
    auto m = lift(pre, plan_combined(pre, ec));
    VerificationReport r = verify_mp(f4.game, *m, f4.model, Rational(0), Rational(1));
    EXPECT_EQ(r.expectation.value(), ev.expectation_from(pre.mdp.graph.initial())) << K;
    EXPECT_EQ(r.worst_case.value(), ev.worst_case_from(pre.mdp.graph.initial())) << K;
    EXPECT_GT(r.worst_case.value(), Rational(0)) << K;
    EXPECT_GE(r.expectation.value(), prev) << K;
    EXPECT_LT(r.expectation.value(), ec.gain) << K;
    prev = r.expectation.value();
  }
}

TEST(Fig2, WitnessAndSecureInU2) {
  BwcInstance f2 = gen_fig2();
  BwcInstance u2 = sub_instance(f2, {"s6", "s7", "s8", "s9", "s10", "s11"}, "s6");
  MpPreprocessed pre = pre_of(u2);
  MpDecision d = decide_mp(pre);
  int idx = d.ec_of[pre.mdp.graph.initial()];
  ASSERT_GE(idx, 0);
  EcPlan ec = make_ec_plan(pre.mdp, d.winning[idx].states, 2, 2);
  auto ws = lift(pre, plan_witness_and_secure(pre, ec));
  VerificationReport r = verify_mp(u2.game, *ws, u2.model, Rational(0), Rational(2));
  EXPECT_EQ(r.expectation.value(), Rational(13, 6));

  // Force the zero-probability edge s7 -> s6 (weight -1) and check the
  // strategy from there on.
  const GameGraph& g = u2.game;
  StateId s6 = *g.find_state("s6"), s7 = *g.find_state("s7");
  EdgeId off = *g.find_edge(s7, s6, -1);
  std::optional<Mem> at_s7 = support::memory_on_reaching(g, *ws, s7);
  ASSERT_TRUE(at_s7.has_value());
  GameGraph from_s6 = g;
  from_s6.set_initial(s6);
  support::Restarted after(*ws, ws->update(*at_s7, off));
  EXPECT_EQ(worst_case_mp(from_s6, after), Rational(1));
}

TEST(Fig2, GlobalStrategyShortPrefix) {
  BwcInstance f2 = gen_fig2();
  MpPreprocessed pre = pre_of(f2);
  MpDecision d = decide_mp(pre);
  auto plan = plan_global(pre, d, 6, 2, 2);
  GlobalEvaluation ev = evaluate_global(pre, *plan);
  EXPECT_EQ(ev.in_ec_probability, Rational(3, 8));
  EXPECT_GE(ev.expectation, Rational(23, 16));
  auto m = lift(pre, plan);
  VerificationReport r = verify_mp(f2.game, *m, f2.model, Rational(0), Rational(23, 16));
  EXPECT_EQ(r.expectation.value(), ev.expectation);
  EXPECT_EQ(r.worst_case.value(), ev.worst_case);
  // With K = L = 2 the guarantee degrades to exactly 0 (not strictly above).
  EXPECT_EQ(ev.worst_case, Rational(0));
}

TEST(Fig2, GlobalStrategyLongPrefix) {
  BwcInstance f2 = gen_fig2();
  MpPreprocessed pre = pre_of(f2);
  MpDecision d = decide_mp(pre);
  auto plan = plan_global(pre, d, 25, 2, 2);
  GlobalEvaluation ev = evaluate_global(pre, *plan);
  EXPECT_GT(ev.expectation, Rational(2));
  auto m = lift(pre, plan);
  VerificationReport r = verify_mp(f2.game, *m, f2.model, Rational(0), Rational(2));
  EXPECT_EQ(r.expectation.value(), ev.expectation);
  EXPECT_EQ(r.worst_case.value(), ev.worst_case);
}

TEST(Fig2, SynthesisPassesBothThresholds) {
  BwcInstance f2 = gen_fig2();
  for (Rational nu : {Rational(3, 2), Rational(2), Rational(5, 2)}) {
    f2.nu = nu;
    MpResult r = solve_mp(f2, true);
    ASSERT_EQ(r.verdict.synthesis, SynthesisStatus::Success) << nu;
    ASSERT_TRUE(r.verdict.report);
    EXPECT_GT(r.verdict.report->worst_case.value(), Rational(0));
    EXPECT_GT(r.verdict.report->expectation.value(), nu);
    // Independent check of the synthesized machine.
    VerificationReport again = verify_mp(f2.game, *r.strategy, f2.model, f2.mu, nu);
    EXPECT_TRUE(again.passed());
  }
}

TEST(Fig5, NegativeThresholds) {
  BwcInstance f5 = gen_fig5();
  MpResult r = solve_mp(f5, true);
  EXPECT_TRUE(r.verdict.decision);
  EXPECT_EQ(r.verdict.value.value(), Rational(-1));
  ASSERT_EQ(r.verdict.synthesis, SynthesisStatus::Success);
  EXPECT_TRUE(r.verdict.report->passed());
}

TEST(EarlyNo, ThresholdAboveWorstCaseValue) {
  BwcInstance f2 = gen_fig2();
  f2.mu = Rational(1);  // the s9-s10 loop reaches exactly 1
  Verdict v = decide(f2);
  EXPECT_FALSE(v.decision);
  EXPECT_TRUE(v.early_no);
  EXPECT_EQ(v.value, Extended::neg_inf());
}

TEST(Fig6, MemoryGrowsWithX) {
  std::uint32_t prev_l = 0;
  for (Weight X : {2, 10, 50}) {
    BwcInstance f6 = gen_fig6(X);
    MpResult r = solve_mp(f6, true);
    ASSERT_TRUE(r.verdict.decision) << X;
    ASSERT_EQ(r.verdict.synthesis, SynthesisStatus::Success) << X;
    ASSERT_TRUE(r.plan);
    ASSERT_EQ(r.plan->ecs.size(), 1u);
    const std::uint32_t L = r.plan->ecs[0].L;
    EXPECT_GE(L, static_cast<std::uint32_t>(X / 2 + 1)) << X;
    EXPECT_GT(L, prev_l);
    prev_l = L;
    EXPECT_GT(r.verdict.report->expectation.value(), Rational(11, 10));
    EXPECT_GT(r.verdict.report->worst_case.value(), Rational(0));
  }
}

TEST(ApproxNu, BracketsNuStar) {
  BwcInstance f2 = gen_fig2();
  Rational eps(1, 64);
  Rational v = approx_optimal_nu(f2, eps);
  EXPECT_LT(v, Rational(3));
  EXPECT_GE(v, Rational(3) - eps);
  f2.nu = v;
  EXPECT_TRUE(decide(f2).decision);
}

TEST(Synthesis, FixedParametersAndCap) {
  BwcInstance f4 = gen_fig4();
  f4.nu = Rational(3, 2);
  SynthesisOptions opt;
  opt.k_fixed = 2;
  opt.n_fixed = 0;
  opt.l_override = 2;
  MpResult r = solve_mp(f4, true, opt);
  ASSERT_EQ(r.verdict.synthesis, SynthesisStatus::Success);
  EXPECT_EQ(r.verdict.parameters, "N=0 K=2 L=2");
  EXPECT_EQ(r.verdict.report->expectation.value(), Rational(5, 3));
  opt = {};
  opt.k_max = 2;
  opt.n_max = 1;
  f4.nu = Rational(199, 100);
  MpResult c = solve_mp(f4, true, opt);
  EXPECT_TRUE(c.verdict.decision);
  EXPECT_EQ(c.verdict.synthesis, SynthesisStatus::CapHit);
}
