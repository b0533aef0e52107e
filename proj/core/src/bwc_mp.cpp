#include "bwc/bwc_mp.hpp"

#include <algorithm>
#include <exception>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <unordered_set>

#include "bwc/game_solvers.hpp"
#include "bwc/period_eval.hpp"
#include "bwc/scc.hpp"
#include "bwc/verify.hpp"

namespace bwc {

namespace {

// The original model seen through a subgame: edge ids are translated both
// ways. Only edges kept by the subgame can be offered by the model, which
// holds for P2 states inside S_WC.
class SubgameModel final : public Machine {
 public:
  SubgameModel(const Subgame& sub, const Machine& model) : sub_(sub), model_(model) {
    from_parent_edge_.assign(sub.to_parent_edge.empty()
                                 ? 0
                                 : *std::max_element(sub.to_parent_edge.begin(),
                                                     sub.to_parent_edge.end()) + 1,
                             kNoEdge);
    for (EdgeId e = 0; e < sub.to_parent_edge.size(); ++e)
      from_parent_edge_[sub.to_parent_edge[e]] = e;
  }
  Mem initial() const override { return model_.initial(); }
  Mem update(Mem m, EdgeId e) const override { return model_.update(m, sub_.to_parent_edge[e]); }
  bool has_output(Mem m, StateId s) const override {
    return model_.has_output(m, sub_.to_parent_state[s]);
  }
  Distribution next(Mem m, StateId s) const override {
    Distribution d = model_.next(m, sub_.to_parent_state[s]);
    for (auto& c : d) {
      EdgeId e = c.edge < from_parent_edge_.size() ? from_parent_edge_[c.edge] : kNoEdge;
      if (e == kNoEdge) throw std::runtime_error("model leaves the worst-case winning region");
      c.edge = e;
    }
    normalize_order(d);
    return d;
  }
  std::string mem_name(Mem m) const override { return model_.mem_name(m); }
  std::optional<std::size_t> declared_size() const override { return model_.declared_size(); }

 private:
  const Subgame& sub_;
  const Machine& model_;
  std::vector<EdgeId> from_parent_edge_;
};

// Worst-case mean-payoff of a memoryless P1 choice from every state: the
// cheapest cycle reachable when P2 is unrestricted.
std::vector<Rational> memoryless_worst_from_all(const GameGraph& g,
                                                const std::vector<EdgeId>& choice) {
  const std::size_t n = g.num_states();
  Adjacency adj(n);
  std::vector<std::vector<EdgeId>> used(n);
  for (StateId s = 0; s < n; ++s) {
    if (g.owner(s) == Player::P1) {
      if (choice[s] != kNoEdge) used[s].push_back(choice[s]);
    } else {
      used[s].assign(g.out(s).begin(), g.out(s).end());
    }
    for (EdgeId e : used[s]) adj[s].push_back(g.edge(e).dst);
  }
  auto scc = tarjan_scc(adj);
  std::vector<std::optional<Rational>> best(scc.members.size());
  // Reverse topological order: successors' components come first.
  for (std::size_t c = 0; c < scc.members.size(); ++c) {
    const auto& comp = scc.members[c];
    std::vector<int> local(n, -1);
    for (std::size_t i = 0; i < comp.size(); ++i) local[comp[i]] = static_cast<int>(i);
    Digraph d;
    d.nodes = comp.size();
    std::optional<Rational> b;
    for (auto u : comp)
      for (EdgeId e : used[u]) {
        StateId v = g.edge(e).dst;
        if (scc.comp[v] == c)
          d.arcs.push_back({static_cast<std::uint32_t>(local[u]),
                            static_cast<std::uint32_t>(local[v]), g.edge(e).weight});
        else if (best[scc.comp[v]] && (!b || *best[scc.comp[v]] < *b))
          b = best[scc.comp[v]];
      }
    if (!d.arcs.empty()) {
      if (auto mc = min_mean_cycle(d); mc && (!b || mc->mean < *b)) b = mc->mean;
    }
    best[c] = b;
  }
  std::vector<Rational> out(n);
  for (StateId s = 0; s < n; ++s) {
    if (!best[scc.comp[s]]) throw std::runtime_error("blocking state under secure strategy");
    out[s] = *best[scc.comp[s]];
  }
  return out;
}

std::vector<Distribution> as_policy(const GameGraph& g, const std::vector<EdgeId>& choice) {
  std::vector<Distribution> pol(g.num_states());
  for (StateId s = 0; s < g.num_states(); ++s)
    if (g.owner(s) == Player::P1 && choice[s] != kNoEdge) pol[s] = dirac(choice[s]);
  return pol;
}

std::string join_l(const std::vector<EcPlan>& ecs) {
  std::string s;
  for (std::size_t i = 0; i < ecs.size(); ++i) s += (i ? "," : "") + std::to_string(ecs[i].L);
  return s;
}

// Upper bound on the number of memory elements of a structured plan.
std::size_t memory_bound(const StructuredPlan& p) {
  std::size_t n = p.N + (p.secure.empty() ? 0 : 1);
  for (const auto& ec : p.ecs)
    n += static_cast<std::size_t>(ec.K) * (2 * static_cast<std::size_t>(ec.K) * ec.W + 1) + ec.L;
  return n;
}

// Values of the suffix strategies (everything after the prefix) for one K,
// on the transformed scale.
struct Suffix {
  std::vector<std::unique_ptr<CombinedEvaluator>> ev;
  std::vector<Rational> expectation;  // per base state
  std::vector<Rational> worst;        // per base state
  std::uint64_t work = 0;
};

struct SecureInfo {
  std::vector<EdgeId> strategy;
  std::vector<Rational> worst;
  std::vector<Rational> expectation;
};

SecureInfo secure_info(const Mdp& p) {
  SecureInfo si;
  auto wc = mp_strictly_positive_region(p.graph);
  si.strategy = wc.strategy;
  si.worst = memoryless_worst_from_all(p.graph, si.strategy);
  si.expectation = mc_expected_mp_all(fix_policy(p, as_policy(p.graph, si.strategy)));
  return si;
}

Suffix evaluate_suffix(const Mdp& p, const StructuredPlan& plan, const SecureInfo& sec,
                       std::uint64_t budget) {
  Suffix sx;
  sx.expectation = sec.expectation;
  sx.worst = sec.worst;
  auto support = p.support_edges();
  for (const auto& ec : plan.ecs) {
    auto ev = std::make_unique<CombinedEvaluator>(p, ec, budget > sx.work ? budget - sx.work : 0);
    sx.work += ev->work();
    for (StateId s : ec.states) {
      sx.expectation[s] = ev->expectation_from(s);
      Rational w = ev->worst_case_from(s);
      if (!plan.secure.empty())
        for (StateId u : ev->adversary_states_from(s))
          for (EdgeId e : p.graph.out(u))
            if (!support[e]) w = std::min(w, sec.worst[p.graph.edge(e).dst]);
      sx.worst[s] = w;
    }
    sx.ev.push_back(std::move(ev));
  }
  return sx;
}

// State distribution and possible states after exactly N prefix steps.
struct PrefixState {
  std::size_t steps = 0;
  std::vector<Rational> dist;
  std::vector<char> layer;
};

class PrefixWalker {
 public:
  PrefixWalker(const Mdp& p, const std::vector<EdgeId>& prefix)
      : p_(p), prefix_(prefix), chain_(fix_policy(p, as_policy(p.graph, prefix))) {
    const std::size_t n = p.graph.num_states();
    cur_.dist.assign(n, Rational());
    cur_.dist[p.graph.initial()] = Rational(1);
    cur_.layer.assign(n, 0);
    cur_.layer[p.graph.initial()] = 1;
  }
  const PrefixState& advance_to(std::size_t N) {
    const GameGraph& g = p_.graph;
    const std::size_t n = g.num_states();
    while (cur_.steps < N) {
      std::vector<Rational> d(n);
      for (StateId s = 0; s < n; ++s) {
        if (cur_.dist[s].sign() == 0) continue;
        for (const auto& c : chain_.delta[s])
          d[chain_.graph.edge(c.edge).dst] += cur_.dist[s] * c.prob;
      }
      std::vector<char> l(n, 0);
      for (StateId s = 0; s < n; ++s) {
        if (!cur_.layer[s]) continue;
        if (g.owner(s) == Player::P1) {
          l[g.edge(prefix_[s]).dst] = 1;
        } else {
          for (EdgeId e : g.out(s)) l[g.edge(e).dst] = 1;
        }
      }
      cur_.dist = std::move(d);
      cur_.layer = std::move(l);
      ++cur_.steps;
    }
    return cur_;
  }

 private:
  const Mdp& p_;
  const std::vector<EdgeId>& prefix_;
  MarkovChain chain_;
  PrefixState cur_;
};

struct Combined {
  Rational expectation, worst, in_ec;
};

Combined combine(const StructuredPlan& plan, const PrefixState& ps, const Suffix& sx) {
  Combined c;
  bool first = true;
  for (StateId s = 0; s < ps.dist.size(); ++s) {
    if (ps.dist[s].sign() != 0) {
      c.expectation += ps.dist[s] * sx.expectation[s];
      if (plan.ec_of[s] >= 0) c.in_ec += ps.dist[s];
    }
    if (ps.layer[s] && (first || sx.worst[s] < c.worst)) {
      c.worst = sx.worst[s];
      first = false;
    }
  }
  return c;
}

}  // namespace

std::variant<MpPreprocessed, EarlyNo> preprocess(const BwcInstance& inst) {
  if (inst.objective != Objective::MeanPayoff)
    throw std::invalid_argument("mean-payoff pipeline called on a shortest-path instance");
  if (!inst.game.has_initial()) throw std::invalid_argument("game has no initial state");
  MpPreprocessed pre;
  pre.original = std::make_shared<GameGraph>(inst.game);
  pre.model = std::make_shared<TableMachine>(inst.model);
  pre.transformed = transform_weights_mp(*pre.original, inst.mu);
  auto wc = mp_strictly_positive_region(pre.transformed.game);
  pre.s_wc = wc.winning;
  if (!wc.winning[pre.original->initial()]) return EarlyNo{};
  auto sub = std::make_shared<Subgame>(restrict_to(pre.transformed.game, wc.winning));
  SubgameModel adapter(*sub, *pre.model);
  auto prod = std::make_shared<ProductGame>(product_with_machine(sub->game, adapter, Player::P2));
  pre.mdp = fix_player2(prod->game, prod->memoryless);
  pre.sub = std::move(sub);
  pre.product = std::move(prod);
  pre.nu_prime = pre.transformed.threshold(inst.nu);
  return pre;
}

MpDecision decide_mp(const MpPreprocessed& pre) {
  MpDecision dec;
  const Mdp& p = pre.mdp;
  dec.winning = mwec(p, &dec.losing);
  dec.ec_of.assign(p.graph.num_states(), -1);
  for (std::size_t i = 0; i < dec.winning.size(); ++i)
    for (StateId s : dec.winning[i].states) dec.ec_of[s] = static_cast<int>(i);
  auto support = p.support_edges();
  dec.p_prime_weights.resize(p.graph.num_edges());
  for (EdgeId e = 0; e < p.graph.num_edges(); ++e) {
    const Edge& ed = p.graph.edge(e);
    bool inside = support[e] && dec.ec_of[ed.src] >= 0 && dec.ec_of[ed.src] == dec.ec_of[ed.dst];
    dec.p_prime_weights[e] = inside ? ed.weight : 0;
  }
  dec.p_prime = max_expected_mp(p, dec.p_prime_weights);
  dec.nu_star_prime = dec.p_prime.gain[p.graph.initial()];
  dec.nu_star = pre.transformed.back(dec.nu_star_prime);
  dec.decision = dec.nu_star_prime > pre.nu_prime;
  return dec;
}

Verdict decide(const BwcInstance& inst) {
  Verdict v;
  v.objective = Objective::MeanPayoff;
  auto pre = preprocess(inst);
  if (std::holds_alternative<EarlyNo>(pre)) {
    v.early_no = true;
    v.value = Extended::neg_inf();
    return v;
  }
  auto dec = decide_mp(std::get<MpPreprocessed>(pre));
  v.decision = dec.decision;
  v.value = dec.nu_star;
  return v;
}

EcPlan make_ec_plan(const Mdp& p, const std::vector<StateId>& ec, std::uint32_t K,
                    std::optional<std::uint32_t> l_override) {
  if (K == 0) throw std::invalid_argument("K must be at least 1");
  const std::size_t n = p.graph.num_states();
  std::vector<char> in(n, 0);
  for (StateId s : ec) in[s] = 1;
  Subgame sg = delta_subgame(p, in);
  auto vals = mp_optimal_values(sg.game);
  Rational mu_star = *std::min_element(vals.begin(), vals.end());
  if (mu_star.sign() <= 0) throw std::invalid_argument("not a winning end component");

  EcPlan plan;
  plan.states = ec;
  std::sort(plan.states.begin(), plan.states.end());
  plan.K = K;
  plan.mu_star = mu_star;
  plan.W = sg.game.max_abs_weight();
  plan.e1.assign(n, kNoEdge);
  plan.wc.assign(n, kNoEdge);
  auto wc = mp_at_least(sg.game, mu_star);
  for (StateId ss = 0; ss < sg.game.num_states(); ++ss)
    if (sg.game.owner(ss) == Player::P1 && p.graph.owner(sg.to_parent_state[ss]) == Player::P1)
      plan.wc[sg.to_parent_state[ss]] = sg.to_parent_edge[wc.strategy[ss]];
  auto opt = optimal_gain_in(p, plan.states);
  for (StateId s : plan.states)
    if (p.graph.owner(s) == Player::P1) plan.e1[s] = opt.policy[s];
  plan.gain = opt.gain[plan.states.front()];
  if (l_override) {
    plan.L = *l_override;
  } else {
    Rational size(static_cast<long long>(plan.states.size()));
    Rational w(static_cast<long long>(plan.W));
    Rational x = (Rational(static_cast<long long>(K)) * w + size * w + size * mu_star) / mu_star;
    mpz_class l = x.num() / x.den() + 1;
    if (!l.fits_uint_p() || l > kMaxCounter) throw std::length_error("L out of range");
    plan.L = static_cast<std::uint32_t>(l.get_ui());
  }
  return plan;
}

std::shared_ptr<const StructuredPlan> plan_combined(const MpPreprocessed& pre, const EcPlan& ec) {
  const Mdp& p = pre.mdp;
  auto plan = std::make_shared<StructuredPlan>(make_plan_base(p.graph, p.support_edges()));
  if (!std::binary_search(ec.states.begin(), ec.states.end(), p.graph.initial()))
    throw std::invalid_argument("initial state outside the end component");
  for (StateId s : ec.states) plan->ec_of[s] = 0;
  plan->ecs = {ec};
  return plan;
}

std::shared_ptr<const StructuredPlan> plan_witness_and_secure(const MpPreprocessed& pre,
                                                              const EcPlan& ec) {
  auto base = plan_combined(pre, ec);
  auto plan = std::make_shared<StructuredPlan>(*base);
  plan->secure = mp_strictly_positive_region(pre.mdp.graph).strategy;
  return plan;
}

std::shared_ptr<const StructuredPlan> plan_global(const MpPreprocessed& pre,
                                                  const MpDecision& dec, std::uint32_t N,
                                                  std::uint32_t K,
                                                  std::optional<std::uint32_t> l_override) {
  const Mdp& p = pre.mdp;
  auto plan = std::make_shared<StructuredPlan>(make_plan_base(p.graph, p.support_edges()));
  plan->ec_of = dec.ec_of;
  for (const auto& ec : dec.winning) plan->ecs.push_back(make_ec_plan(p, ec.states, K, l_override));
  plan->secure = mp_strictly_positive_region(p.graph).strategy;
  plan->prefix = dec.p_prime.policy;
  plan->N = N;
  return plan;
}

std::shared_ptr<const Machine> lift(const MpPreprocessed& pre,
                                    std::shared_ptr<const StructuredPlan> plan) {
  auto inner = std::make_shared<StructuredStrategy>(std::move(plan));
  return std::make_shared<LiftedStrategy>(pre.original, pre.sub, pre.product, pre.model, inner);
}

GlobalEvaluation evaluate_global(const MpPreprocessed& pre, const StructuredPlan& plan,
                                 std::uint64_t budget) {
  const Mdp& p = pre.mdp;
  SecureInfo sec = secure_info(p);
  if (!plan.secure.empty()) sec.strategy = plan.secure;
  Suffix sx = evaluate_suffix(p, plan, sec, budget);
  PrefixState ps;
  if (plan.N > 0) {
    PrefixWalker walker(p, plan.prefix);
    ps = walker.advance_to(plan.N);
  } else {
    ps.dist.assign(p.graph.num_states(), Rational());
    ps.dist[p.graph.initial()] = Rational(1);
    ps.layer.assign(p.graph.num_states(), 0);
    ps.layer[p.graph.initial()] = 1;
  }
  Combined c = combine(plan, ps, sx);
  GlobalEvaluation ge;
  ge.expectation = pre.transformed.back(c.expectation);
  ge.worst_case = pre.transformed.back(c.worst);
  ge.in_ec_probability = c.in_ec;
  ge.work = sx.work;
  return ge;
}

MpResult solve_mp(const BwcInstance& inst, bool synthesize, const SynthesisOptions& opt) {
  MpResult res;
  Verdict& v = res.verdict;
  v.objective = Objective::MeanPayoff;
  auto pre_v = preprocess(inst);
  if (std::holds_alternative<EarlyNo>(pre_v)) {
    v.early_no = true;
    v.value = Extended::neg_inf();
    v.synthesis = synthesize ? SynthesisStatus::Infeasible : SynthesisStatus::NotRequested;
    return res;
  }
  const MpPreprocessed& pre = std::get<MpPreprocessed>(pre_v);
  MpDecision dec = decide_mp(pre);
  v.decision = dec.decision;
  v.value = dec.nu_star;
  if (!synthesize) return res;
  if (!dec.decision) {
    v.synthesis = SynthesisStatus::Infeasible;
    return res;
  }

  const Mdp& p = pre.mdp;
  const std::size_t S = p.graph.num_states();
  std::vector<std::uint32_t> Ns, Ks;
  if (opt.n_fixed) {
    Ns.push_back(*opt.n_fixed);
  } else {
    if (dec.ec_of[p.graph.initial()] >= 0) Ns.push_back(0);
    for (std::size_t n = S; n <= opt.n_max; n *= 2) Ns.push_back(static_cast<std::uint32_t>(n));
  }
  if (opt.k_fixed) {
    Ks.push_back(*opt.k_fixed);
  } else {
    for (std::uint32_t k = 2; k <= opt.k_max; k *= 2) Ks.push_back(k);
  }

  SecureInfo sec = secure_info(p);
  std::vector<std::shared_ptr<const StructuredPlan>> plans(Ks.size());
  std::vector<std::unique_ptr<Suffix>> suffix(Ks.size());
  std::vector<char> unusable(Ks.size(), 0);  // parameters out of machine range
  std::uint64_t spent = 0;
  bool cap_hit = false;

  auto build = [&](std::size_t i, std::uint64_t budget) {
    auto plan = std::make_shared<StructuredPlan>(*plan_global(pre, dec, 0, Ks[i], opt.l_override));
    StructuredStrategy check(plan);  // throws when out of range
    (void)check;
    suffix[i] = std::make_unique<Suffix>(evaluate_suffix(p, *plan, sec, budget));
    plans[i] = plan;
  };
  // Evaluates suffixes lazily, `jobs` consecutive K values at a time.
  auto ensure = [&](std::size_t i) {
    if (suffix[i] || unusable[i] || cap_hit) return;
    std::size_t hi = std::min(Ks.size(), i + std::max(1u, opt.jobs));
    std::vector<std::exception_ptr> errs(hi - i);
    std::uint64_t share = opt.budget > spent ? (opt.budget - spent) / (hi - i) : 0;
    auto job = [&](std::size_t j) {
      try {
        build(j, share);
      } catch (...) {
        errs[j - i] = std::current_exception();
      }
    };
    if (hi - i == 1) {
      job(i);
    } else {
      std::vector<std::thread> pool;
      for (std::size_t j = i; j < hi; ++j)
        if (!suffix[j] && !unusable[j]) pool.emplace_back(job, j);
      for (auto& t : pool) t.join();
    }
    for (std::size_t j = i; j < hi; ++j) {
      if (suffix[j]) spent += suffix[j]->work;
      if (!errs[j - i]) continue;
      try {
        std::rethrow_exception(errs[j - i]);
      } catch (const BudgetExceeded&) {
        cap_hit = true;
      } catch (const std::length_error&) {
        unusable[j] = 1;
      } catch (const std::overflow_error&) {
        unusable[j] = 1;
      }
    }
  };

  PrefixWalker walker(p, dec.p_prime.policy);
  for (std::uint32_t N : Ns) {
    const PrefixState& ps = walker.advance_to(N);
    for (std::size_t i = 0; i < Ks.size(); ++i) {
      ensure(i);
      if (cap_hit) break;
      if (unusable[i]) continue;
      Combined c = combine(*plans[i], ps, *suffix[i]);
      if (c.worst.sign() <= 0 || c.expectation <= pre.nu_prime) continue;

      auto plan = std::make_shared<StructuredPlan>(*plans[i]);
      plan->N = N;
      res.plan = plan;
      res.strategy = lift(pre, plan);
      v.synthesis = SynthesisStatus::Success;
      v.parameters = "N=" + std::to_string(N) + " K=" + std::to_string(Ks[i]) +
                     " L=" + join_l(plan->ecs);
      VerificationReport r;
      r.objective = Objective::MeanPayoff;
      r.worst_case = pre.transformed.back(c.worst);
      r.expectation = pre.transformed.back(c.expectation);
      r.pass_worst_case = true;
      r.pass_expectation = true;
      std::size_t bound = memory_bound(*plan);
      v.memory_size = bound;
      if (bound * pre.original->num_states() <= opt.exact_check_limit) {
        r = verify_mp(*pre.original, *res.strategy, *pre.model, inst.mu, inst.nu);
        auto sp = strategy_product(*pre.original, *res.strategy);
        std::unordered_set<Mem> mems(sp.mem_of.begin(), sp.mem_of.end());
        v.memory_size = mems.size();
        if (r.worst_case != Extended(pre.transformed.back(c.worst)) ||
            r.expectation != Extended(pre.transformed.back(c.expectation)))
          r.note = "period evaluation disagrees with the product";
      } else {
        r.note = "compositional evaluation";
      }
      v.report = r;
      return res;
    }
    if (cap_hit) break;
  }
  v.synthesis = SynthesisStatus::CapHit;
  std::ostringstream caps;
  caps << "N<=" << (opt.n_fixed ? *opt.n_fixed : opt.n_max)
       << " K<=" << (opt.k_fixed ? *opt.k_fixed : opt.k_max);
  if (cap_hit) caps << " budget";
  v.parameters = caps.str();
  return res;
}

Rational approx_optimal_nu(const BwcInstance& inst, const Rational& eps) {
  if (eps.sign() <= 0) throw std::invalid_argument("eps must be positive");
  auto pre_v = preprocess(inst);
  if (std::holds_alternative<EarlyNo>(pre_v))
    throw std::invalid_argument("worst-case requirement is unsatisfiable");
  const auto& pre = std::get<MpPreprocessed>(pre_v);
  MpDecision dec = decide_mp(pre);
  // decide(nu) is yes iff nu_star > nu; only that comparison is queried.
  Rational lo = inst.mu;
  Rational hi(static_cast<long long>(inst.game.max_abs_weight()));
  if (hi < lo) hi = lo;
  while (hi - lo > eps) {
    Rational mid = (lo + hi) / Rational(2);
    if (dec.nu_star > mid) lo = mid;
    else hi = mid;
  }
  return lo;
}

}  // namespace bwc
