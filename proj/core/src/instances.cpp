#include "bwc/instances.hpp"

#include "bwc/bwc_mp.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

namespace bwc {

namespace {

struct Builder {
  BwcInstance inst;
  std::vector<std::pair<StateId, Distribution>> outputs;

  StateId state(const std::string& id, Player p) { return inst.game.add_state(id, p); }
  EdgeId edge(StateId a, StateId b, Weight w) { return inst.game.add_edge(a, b, w); }
  void output(StateId s, Distribution d) { outputs.emplace_back(s, std::move(d)); }

  // Memoryless model from the recorded outputs.
  BwcInstance finish(const Rational& mu, const Rational& nu, Objective obj) {
    inst.model = TableMachine(inst.game, "model");
    Mem m = inst.model.add_memory("m");
    inst.model.set_initial(m);
    for (auto& [s, d] : outputs) inst.model.set_output(m, s, std::move(d));
    inst.mu = mu;
    inst.nu = nu;
    inst.objective = obj;
    return std::move(inst);
  }
};

Rational q(long long a, long long b = 1) { return Rational(a, b); }

// Uniform integer in [lo, hi] by rejection, identical on every platform.
std::int64_t uniform(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
  const std::uint64_t range = static_cast<std::uint64_t>(hi - lo) + 1;
  if (range == 0) return static_cast<std::int64_t>(rng());
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % range;
  std::uint64_t x;
  do x = rng();
  while (x >= limit);
  return lo + static_cast<std::int64_t>(x % range);
}

bool coin(std::mt19937_64& rng, double p) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53 < p;
}

}  // namespace

BwcInstance gen_fig1() {
  Builder b;
  b.inst.name = "fig1";
  b.inst.game.set_name("fig1");
  auto home = b.state("home", Player::P1);
  auto station = b.state("station", Player::P2);
  auto waiting = b.state("waiting", Player::P1);
  auto traffic = b.state("traffic", Player::P2);
  auto work = b.state("work", Player::P1);
  b.edge(home, station, 2);   // train
  b.edge(home, traffic, 1);   // car
  b.edge(home, work, 45);     // bicycle
  auto delay = b.edge(station, waiting, 1);
  auto departs = b.edge(station, work, 35);
  b.edge(waiting, home, 2);     // back home
  b.edge(waiting, station, 3);  // wait
  auto light = b.edge(traffic, work, 20);
  auto medium = b.edge(traffic, work, 30);
  auto heavy = b.edge(traffic, work, 70);
  b.edge(work, work, 1);
  b.inst.game.set_initial(home);
  b.inst.game.add_target(work);
  b.output(station, {{delay, q(1, 10)}, {departs, q(9, 10)}});
  b.output(traffic, {{light, q(2, 10)}, {medium, q(7, 10)}, {heavy, q(1, 10)}});
  return b.finish(q(60), q(38), Objective::ShortestPath);
}

BwcInstance gen_fig2() {
  Builder b;
  b.inst.name = "fig2";
  b.inst.game.set_name("fig2");
  const Player P1 = Player::P1, P2 = Player::P2;
  StateId s[12];
  const Player owner[12] = {P1, P1, P2, P1, P2, P2, P1, P2, P2, P1, P1, P2};
  for (int i = 1; i <= 11; ++i) s[i] = b.state("s" + std::to_string(i), owner[i]);
  b.edge(s[1], s[9], 0);
  b.edge(s[1], s[2], -1);
  auto e21 = b.edge(s[2], s[1], -1);
  auto e23 = b.edge(s[2], s[3], -1);
  b.edge(s[3], s[5], -1);
  b.edge(s[3], s[4], 0);
  auto e43a = b.edge(s[4], s[3], 17);
  auto e43b = b.edge(s[4], s[3], -1);
  auto e56 = b.edge(s[5], s[6], 0);
  auto e51 = b.edge(s[5], s[1], -1);
  b.edge(s[6], s[7], 0);
  b.edge(s[6], s[9], 0);
  b.edge(s[6], s[8], 0);
  auto e76a = b.edge(s[7], s[6], 1);
  auto e76b = b.edge(s[7], s[6], -1);
  auto e86a = b.edge(s[8], s[6], -1);
  auto e86b = b.edge(s[8], s[6], 13);
  b.edge(s[9], s[10], 1);
  b.edge(s[10], s[9], 1);
  b.edge(s[10], s[11], 0);
  auto e1110a = b.edge(s[11], s[10], -1);
  auto e1110b = b.edge(s[11], s[10], 9);
  b.inst.game.set_initial(s[1]);
  b.output(s[2], {{e21, q(1, 2)}, {e23, q(1, 2)}});
  b.output(s[4], {{e43a, q(1, 2)}, {e43b, q(1, 2)}});
  b.output(s[5], {{e56, q(1, 2)}, {e51, q(1, 2)}});
  b.output(s[7], {{e76a, q(1)}, {e76b, q(0)}});
  b.output(s[8], {{e86a, q(1, 2)}, {e86b, q(1, 2)}});
  b.output(s[11], {{e1110a, q(1, 2)}, {e1110b, q(1, 2)}});
  return b.finish(q(0), q(3, 2), Objective::MeanPayoff);
}

BwcInstance gen_fig3() {
  Builder b;
  b.inst.name = "fig3";
  b.inst.game.set_name("fig3");
  auto s1 = b.state("s1", Player::P1);
  auto s2 = b.state("s2", Player::P1);
  auto s3 = b.state("s3", Player::P2);
  auto s4 = b.state("s4", Player::P1);
  auto s5 = b.state("s5", Player::P1);
  b.edge(s1, s2, 0);
  b.edge(s1, s3, 0);
  b.edge(s2, s2, 1);
  auto e34 = b.edge(s3, s4, 0);
  auto e35 = b.edge(s3, s5, 0);
  b.edge(s4, s1, -1);
  b.edge(s5, s1, 0);
  b.edge(s5, s5, 10);
  b.inst.game.set_initial(s1);
  b.output(s3, {{e34, q(1, 2)}, {e35, q(1, 2)}});
  return b.finish(q(0), q(5), Objective::MeanPayoff);
}

BwcInstance gen_fig4() {
  BwcInstance u = sub_instance(gen_fig2(), {"s9", "s10", "s11"}, "s10");
  u.name = "fig4";
  u.game.set_name("fig4");
  u.model.set_name("model");
  return u;
}

TableMachine fig4_combined_strategy(const BwcInstance& fig4) {
  auto pre = preprocess(fig4);
  if (!std::holds_alternative<MpPreprocessed>(pre)) throw std::invalid_argument("not the fig4 game");
  const auto& p = std::get<MpPreprocessed>(pre);
  MpDecision dec = decide_mp(p);
  if (dec.winning.size() != 1) throw std::invalid_argument("not the fig4 game");
  EcPlan ec = make_ec_plan(p.mdp, dec.winning[0].states, 2, 2);
  auto m = lift(p, plan_combined(p, ec));
  TableMachine t = materialize(fig4.game, *m, Player::P1);
  t.set_name("combined_k2_l2");
  return t;
}

BwcInstance gen_fig5() {
  Builder b;
  b.inst.name = "fig5";
  b.inst.game.set_name("fig5");
  auto s0 = b.state("s0", Player::P1);
  auto s1 = b.state("s1", Player::P2);
  auto s2 = b.state("s2", Player::P1);
  b.edge(s0, s1, 0);
  b.edge(s0, s2, 0);
  auto lo = b.edge(s1, s0, -4);
  auto hi = b.edge(s1, s0, 4);
  b.edge(s2, s2, -1);
  b.inst.game.set_initial(s0);
  b.output(s1, {{lo, q(1, 10)}, {hi, q(9, 10)}});
  return b.finish(q(-3, 2), q(-5, 4), Objective::MeanPayoff);
}

BwcInstance gen_fig6(Weight X) {
  if (X < 1) throw std::invalid_argument("X must be at least 1");
  Builder b;
  b.inst.name = "fig6_x" + std::to_string(X);
  b.inst.game.set_name(b.inst.name);
  auto s1 = b.state("s1", Player::P1);
  auto s2 = b.state("s2", Player::P1);
  auto s3 = b.state("s3", Player::P2);
  b.edge(s1, s2, 1);
  b.edge(s2, s1, 1);
  b.edge(s1, s3, 0);
  auto lo = b.edge(s3, s1, -X);
  auto hi = b.edge(s3, s1, X + 5);
  b.inst.game.set_initial(s1);
  b.output(s3, {{lo, q(1, 2)}, {hi, q(1, 2)}});
  return b.finish(q(0), q(11, 10), Objective::MeanPayoff);
}

Rational sp_family_cost(Weight mu, std::uint32_t n) {
  Rational e;
  for (std::uint32_t i = 0; i < n; ++i) e += Rational(mpz_class(2), mpz_class(1) << i);
  e += Rational(mpz_class(static_cast<long>(mu / 2)), mpz_class(1) << n);
  return e;
}

BwcInstance gen_sp_family(Weight mu) {
  if (mu < 13 || (mu - 13) % 4 != 0) throw std::invalid_argument("mu must be 13 + 4k");
  Builder b;
  b.inst.name = "fig7_mu" + std::to_string(mu);
  b.inst.game.set_name(b.inst.name);
  auto s1 = b.state("s1", Player::P1);
  auto s2 = b.state("s2", Player::P2);
  auto s3 = b.state("s3", Player::P1);
  b.edge(s1, s2, 1);
  b.edge(s1, s3, mu / 2);
  auto back = b.edge(s2, s1, 1);
  auto on = b.edge(s2, s3, 1);
  b.edge(s3, s3, 1);
  b.inst.game.set_initial(s1);
  b.inst.game.add_target(s3);
  b.output(s2, {{back, q(1, 2)}, {on, q(1, 2)}});
  auto n = static_cast<std::uint32_t>(mu / 4);
  return b.finish(q(mu), sp_family_cost(mu, n - 1), Objective::ShortestPath);
}

TableMachine fig1_train_then_bicycle(const BwcInstance& fig1) {
  const GameGraph& g = fig1.game;
  auto id = [&](const char* n) {
    auto s = g.find_state(n);
    if (!s) throw std::invalid_argument("not the fig1 game");
    return *s;
  };
  StateId home = id("home"), station = id("station"), waiting = id("waiting"), work = id("work");
  TableMachine m(g, "train_then_bicycle");
  Mem d[4];
  for (int i = 0; i < 4; ++i) d[i] = m.add_memory("d" + std::to_string(i));
  m.set_initial(d[0]);
  EdgeId delay = *g.find_edge(station, waiting);
  for (int i = 0; i < 3; ++i) m.set_edge_update(d[i], delay, d[i + 1]);
  EdgeId train = *g.find_edge(home, station), bike = *g.find_edge(home, work);
  EdgeId wait = *g.find_edge(waiting, station), back = *g.find_edge(waiting, home);
  EdgeId loop = *g.find_edge(work, work);
  for (int i = 0; i < 3; ++i) m.set_output(d[i], home, dirac(train));
  m.set_output(d[3], home, dirac(bike));
  for (int i = 1; i < 3; ++i) m.set_output(d[i], waiting, dirac(wait));
  m.set_output(d[3], waiting, dirac(back));
  for (int i = 0; i < 4; ++i) m.set_output(d[i], work, dirac(loop));
  return m;
}

KthReduction kth_constants(const KthSubsetInstance& inst) {
  const Weight n = static_cast<Weight>(inst.sizes.size());
  if (n < 1 || n > 20) throw std::invalid_argument("need between 1 and 20 elements");
  KthReduction r;
  Weight total = 0;
  for (Weight h : inst.sizes) {
    if (h < 1) throw std::invalid_argument("sizes must be at least 1");
    r.scaled.push_back((n + 1) * h);
    total += (n + 1) * h;
  }
  r.Q = total;  // every element selected; each scaled size exceeds 1
  r.T = (n + 1) * (inst.L + 1) - 1;
  r.mu = (Weight{1} << (n + 1)) * n * (r.Q + 2);
  r.x1 = r.mu - r.T - 2;
  r.x2 = 1;
  r.x3 = r.mu - r.Q - 2;
  const mpz_class two_n = mpz_class(1) << static_cast<unsigned>(n);
  mpz_class k(static_cast<unsigned long>(inst.K));
  r.nu = Rational(k * (r.T + 2) + (two_n - k) * static_cast<long>(r.mu), two_n);
  return r;
}

BwcInstance reduce_kth_subset(const KthSubsetInstance& inst) {
  KthReduction r = kth_constants(inst);
  const std::size_t n = inst.sizes.size();
  Builder b;
  b.inst.name = "kth";
  b.inst.game.set_name("kth");
  std::vector<StateId> a;
  for (std::size_t i = 0; i < n; ++i) a.push_back(b.state("a" + std::to_string(i + 1), Player::P2));
  auto choice = b.state("choice", Player::P1);
  auto se = b.state("se", Player::P2);
  auto swc = b.state("swc", Player::P2);
  auto target = b.state("target", Player::P1);
  for (std::size_t i = 0; i < n; ++i) {
    StateId next = i + 1 < n ? a[i + 1] : choice;
    auto up = b.edge(a[i], next, r.scaled[i]);
    auto down = b.edge(a[i], next, 1);
    b.output(a[i], {{up, q(1, 2)}, {down, q(1, 2)}});
  }
  b.edge(choice, se, 1);
  b.edge(choice, swc, 1);
  auto ex1 = b.edge(se, target, r.x1);
  auto ex2 = b.edge(se, target, r.x2);
  auto ex3 = b.edge(swc, target, r.x3);
  b.edge(target, target, 1);
  b.output(se, {{ex1, q(0)}, {ex2, q(1)}});
  b.output(swc, {{ex3, q(1)}});
  b.inst.game.set_initial(a[0]);
  b.inst.game.add_target(target);
  return b.finish(Rational(static_cast<long long>(r.mu)), r.nu, Objective::ShortestPath);
}

BwcInstance gen_random(const RandomSpec& spec) {
  if (spec.states < 2) throw std::invalid_argument("need at least 2 states");
  if (spec.max_weight < 1) throw std::invalid_argument("max weight must be at least 1");
  const bool sp = spec.objective == Objective::ShortestPath;
  std::mt19937_64 rng(spec.seed);
  Builder b;
  b.inst.name = "random_" + std::to_string(spec.seed);
  b.inst.game.set_name(b.inst.name);
  const std::uint32_t n = spec.states;
  for (std::uint32_t i = 0; i < n; ++i)
    b.state("s" + std::to_string(i), coin(rng, 0.5) ? Player::P2 : Player::P1);
  const Weight lo = sp ? 1 : -spec.max_weight;
  for (StateId s = 0; s < n; ++s) {
    if (sp && s + 1 == n) {
      b.edge(s, s, 1);  // target
      continue;
    }
    std::vector<StateId> succ;
    for (StateId t = 0; t < n; ++t)
      if (coin(rng, spec.density)) succ.push_back(t);
    // Shortest-path games chain every state to the next so the target is reachable.
    if (sp && std::find(succ.begin(), succ.end(), s + 1) == succ.end()) succ.push_back(s + 1);
    if (succ.empty()) succ.push_back(static_cast<StateId>(uniform(rng, 0, n - 1)));
    for (StateId t : succ) b.edge(s, t, uniform(rng, lo, spec.max_weight));
  }
  b.inst.game.set_initial(0);
  if (sp) b.inst.game.add_target(n - 1);
  for (StateId s = 0; s < n; ++s) {
    if (b.inst.game.owner(s) != Player::P2) continue;
    auto out = b.inst.game.out(s);
    Distribution d;
    for (EdgeId e : out) d.push_back({e, q(1, static_cast<long long>(out.size()))});
    b.output(s, std::move(d));
  }
  if (sp) {
    Weight mu = 2 * static_cast<Weight>(n) * spec.max_weight;
    return b.finish(q(mu), q(mu), Objective::ShortestPath);
  }
  return b.finish(q(0), q(0), Objective::MeanPayoff);
}

BwcInstance sub_instance(const BwcInstance& inst, const std::vector<std::string>& states,
                         const std::string& initial) {
  if (inst.model.size() != 1) throw std::invalid_argument("sub_instance needs a memoryless model");
  const GameGraph& g = inst.game;
  std::vector<char> keep(g.num_states(), 0);
  for (const auto& n : states) {
    auto s = g.find_state(n);
    if (!s) throw std::invalid_argument("unknown state " + n);
    keep[*s] = 1;
  }
  Subgame sg = restrict_to(g, keep);
  auto init = sg.game.find_state(initial);
  if (!init) throw std::invalid_argument("initial state not kept: " + initial);
  Builder b;
  b.inst.name = inst.name + "_sub";
  b.inst.game = sg.game;
  b.inst.game.set_name(b.inst.name);
  b.inst.game.set_initial(*init);
  std::vector<EdgeId> from_parent(g.num_edges(), kNoEdge);
  for (EdgeId e = 0; e < sg.to_parent_edge.size(); ++e) from_parent[sg.to_parent_edge[e]] = e;
  for (StateId s = 0; s < sg.game.num_states(); ++s) {
    StateId ps = sg.to_parent_state[s];
    if (g.owner(ps) != Player::P2) continue;
    Distribution d;
    for (const auto& c : inst.model.next(0, ps))
      if (from_parent[c.edge] != kNoEdge) d.push_back({from_parent[c.edge], c.prob});
    b.output(s, std::move(d));
  }
  return b.finish(inst.mu, inst.nu, inst.objective);
}

BwcInstance builtin(const std::string& name) {
  if (name == "fig1") return gen_fig1();
  if (name == "fig2") return gen_fig2();
  if (name == "fig3") return gen_fig3();
  if (name == "fig4") return gen_fig4();
  if (name == "fig5") return gen_fig5();
  if (name == "fig6") return gen_fig6(10);
  if (name == "fig7") return gen_sp_family(13);
  throw std::invalid_argument("unknown built-in instance: " + name);
}

std::vector<std::string> builtin_names() { return {"fig1", "fig2", "fig3", "fig4", "fig5", "fig6", "fig7"}; }

}  // namespace bwc
