#include <filesystem>

#include <gtest/gtest.h>

#include "bwc/bwc_mp.hpp"
#include "bwc/instances.hpp"
#include "bwc/textio.hpp"

using namespace bwc;

namespace {

std::string first_diagnostic(const std::string& text, bool machine = false) {
  try {
    if (machine) parse_machine(text, gen_fig3().game, {"m.bwcm"});
    else parse_game(text, {"g.bwcg"});
  } catch (const ParseError& e) {
    return e.diagnostics().at(0).str();
  }
  return "";
}

}  // namespace

class RoundTrip : public ::testing::TestWithParam<std::string> {};

TEST_P(RoundTrip, GameAndModel) {
  BwcInstance inst = builtin(GetParam());
  GameGraph g = parse_game(serialize(inst.game));
  EXPECT_EQ(g, inst.game);
  EXPECT_EQ(serialize(g), serialize(inst.game));
  TableMachine m = parse_machine(serialize(inst.model, inst.game), g);
  EXPECT_EQ(m, inst.model);
}

TEST_P(RoundTrip, InstanceOnDisk) {
  BwcInstance inst = builtin(GetParam());
  auto dir = std::filesystem::temp_directory_path() / ("bwc_rt_" + GetParam());
  std::filesystem::create_directories(dir);
  save_instance(inst, dir.string(), inst.name);
  BwcInstance back = load_instance((dir / (inst.name + ".bwci")).string());
  EXPECT_EQ(back.game, inst.game);
  EXPECT_EQ(back.model, inst.model);
  EXPECT_EQ(back.mu, inst.mu);
  EXPECT_EQ(back.nu, inst.nu);
  EXPECT_EQ(back.objective, inst.objective);
  std::filesystem::remove_all(dir);
}

INSTANTIATE_TEST_SUITE_P(Builtins, RoundTrip, ::testing::ValuesIn(builtin_names()));

TEST(TextIo, StrategyTablesRoundTrip) {
  BwcInstance f4 = gen_fig4();
  TableMachine s = fig4_combined_strategy(f4);
  EXPECT_EQ(parse_machine(serialize(s, f4.game), f4.game), s);
  BwcInstance f1 = gen_fig1();
  TableMachine t = fig1_train_then_bicycle(f1);
  EXPECT_EQ(parse_machine(serialize(t, f1.game), f1.game), t);
}

TEST(TextIo, RandomGamesRoundTrip) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    RandomSpec spec;
    spec.seed = seed;
    spec.states = 3 + seed % 4;
    spec.objective = seed % 2 ? Objective::ShortestPath : Objective::MeanPayoff;
    BwcInstance inst = gen_random(spec);
    GameGraph g = parse_game(serialize(inst.game));
    ASSERT_EQ(g, inst.game) << seed;
    ASSERT_EQ(parse_machine(serialize(inst.model, g), g), inst.model) << seed;
  }
}

TEST(TextIo, CommentsAndBlankLines) {
  GameGraph g = parse_game(
      "# header\n"
      "game tiny\n\n"
      "state a p1   # trailing\n"
      "state b p2\n"
      "edge a b 3\n"
      "edge b a -2\n"
      "init a\n");
  EXPECT_EQ(g.num_states(), 2u);
  EXPECT_EQ(g.edge(1).weight, -2);
}

TEST(TextIo, DiagnosticsCarryPositions) {
  EXPECT_EQ(first_diagnostic("game g\nstate a p1\nedge a zz 1\ninit a\n").rfind("g.bwcg:3:", 0), 0u);
  EXPECT_NE(first_diagnostic("game g\nstate a p3\n").find("g.bwcg:2:"), std::string::npos);
  EXPECT_NE(first_diagnostic("game g\nstate a p1\nedge a a x\ninit a\n").find("g.bwcg:3:"),
            std::string::npos);
  EXPECT_NE(first_diagnostic("game g\nstate a p1\nedge a a 1\nedge a a 1\ninit a\n").find("g.bwcg:4:"),
            std::string::npos);
  EXPECT_NE(first_diagnostic("bogus\n").find("g.bwcg:1:1"), std::string::npos);
  EXPECT_NE(first_diagnostic("model m\nmem x\ninit x\nnext x s3 s4 1/3\nnext x s3 s5 1/3\n", true)
                .find("m.bwcm:"),
            std::string::npos);
  EXPECT_NE(first_diagnostic("model m\nmem x\ninit y\n", true).find("m.bwcm:3:"), std::string::npos);
}

TEST(TextIo, SplitMultiedgesOption) {
  std::string text = "game g\nstate a p1\nedge a a 1\nedge a a 1\ninit a\n";
  EXPECT_THROW(parse_game(text), ParseError);
  ParseOptions opt;
  opt.split_multiedges = true;
  GameGraph g = parse_game(text, opt);
  EXPECT_EQ(g.num_states(), 2u);
  EXPECT_TRUE(validate(g).empty());
}

TEST(TextIo, VerdictRoundTrip) {
  BwcInstance f2 = gen_fig2();
  MpResult r = solve_mp(f2, true);
  ASSERT_TRUE(r.verdict.report);
  std::string text = serialize(r.verdict);
  EXPECT_EQ(parse_verdict(text), r.verdict);
  Verdict v = decide(gen_fig5());
  EXPECT_EQ(parse_verdict(serialize(v)), v);
}

TEST(TextIo, DotOutputMentionsStates) {
  BwcInstance f3 = gen_fig3();
  std::string dot = to_dot(f3.game);
  EXPECT_NE(dot.find("digraph"), std::string::npos);
  EXPECT_NE(dot.find("s5"), std::string::npos);
  EXPECT_NE(to_dot(fix_player2(f3.game, f3.model)).find("1/2"), std::string::npos);
}
