#include "bwc/bwc_sp.hpp"

#include <deque>
#include <stdexcept>

#include "bwc/mdp_analysis.hpp"
#include "bwc/verify.hpp"

namespace bwc {

namespace {

// The model on the unfolded game: edges are translated through edge_of;
// targets play their absorbing loop.
class UnfoldedModel final : public Machine {
 public:
  UnfoldedModel(const SpUnfolding& u, const Machine& model) : u_(u), model_(model) {}
  Mem initial() const override { return model_.initial(); }
  Mem update(Mem m, EdgeId e) const override {
    EdgeId oe = u_.edge_of[e];
    return oe == kNoEdge ? m : model_.update(m, oe);
  }
  bool has_output(Mem m, StateId s) const override {
    return u_.game.is_target(s) || model_.has_output(m, u_.state_of[s]);
  }
  Distribution next(Mem m, StateId s) const override {
    if (u_.game.is_target(s)) return dirac(u_.game.out(s)[0]);
    Distribution d = model_.next(m, u_.state_of[s]);
    for (auto& c : d) {
      EdgeId found = kNoEdge;
      for (EdgeId ue : u_.game.out(s))
        if (u_.edge_of[ue] == c.edge) found = ue;
      if (found == kNoEdge) throw std::runtime_error("model edge missing from the unfolding");
      c.edge = found;
    }
    normalize_order(d);
    return d;
  }
  std::string mem_name(Mem m) const override { return model_.mem_name(m); }
  std::optional<std::size_t> declared_size() const override { return model_.declared_size(); }

 private:
  const SpUnfolding& u_;
  const Machine& model_;
};

Weight integral(const Rational& x, const char* what) {
  if (x.den() != 1 || !x.num().fits_slong_p())
    throw std::invalid_argument(std::string(what) + " must be an integer");
  return x.num().get_si();
}

}  // namespace

SpResult sp_decide_and_synthesize(const BwcInstance& inst, bool synthesize) {
  if (inst.objective != Objective::ShortestPath)
    throw std::invalid_argument("shortest-path pipeline called on a mean-payoff instance");
  if (inst.game.targets().empty()) throw std::invalid_argument("no target states");
  const Weight mu = integral(inst.mu, "mu");

  SpResult res;
  Verdict& v = res.verdict;
  v.objective = Objective::ShortestPath;
  SpUnfolding u = sp_worst_case_unfold(inst.game, mu);
  res.unfolded_states = u.game.num_states();
  if (!u.initial_in_r) {
    v.early_no = true;
    v.value = Extended::pos_inf();
    v.synthesis = synthesize ? SynthesisStatus::Infeasible : SynthesisStatus::NotRequested;
    return res;
  }
  UnfoldedModel adapter(u, inst.model);
  ProductGame prod = product_with_machine(u.game, adapter, Player::P2);
  res.product_states = prod.game.num_states();
  Mdp p = fix_player2(prod.game, prod.memoryless);
  std::vector<char> target(p.graph.num_states(), 0);
  for (StateId t : p.graph.targets()) target[t] = 1;
  CostSolution cs = min_expected_truncated_sum(p, target);
  const Extended& value = cs.value[p.graph.initial()];
  v.value = value;
  v.decision = value.finite() && value.value() < inst.nu;
  if (!synthesize) return res;
  if (!v.decision) {
    v.synthesis = SynthesisStatus::Infeasible;
    return res;
  }

  auto g = std::make_shared<GameGraph>(inst.game);
  auto model = std::make_shared<TableMachine>(inst.model);
  auto strat = std::make_shared<SpCounterStrategy>(g, model, mu);
  // Only product states reachable under the policy get a table entry.
  std::vector<char> seen(p.graph.num_states(), 0);
  std::deque<StateId> q{p.graph.initial()};
  seen[p.graph.initial()] = 1;
  while (!q.empty()) {
    StateId ps = q.front();
    q.pop_front();
    if (target[ps]) continue;
    std::vector<EdgeId> moves;
    if (p.graph.owner(ps) == Player::P1) {
      EdgeId pe = cs.policy[ps];
      StateId node = prod.state_of[ps];
      strat->set_choice(u.state_of[node], prod.mem_of[ps], u.counter[node],
                        u.edge_of[prod.edge_of[pe]]);
      moves.push_back(pe);
    } else {
      moves.assign(p.graph.out(ps).begin(), p.graph.out(ps).end());
    }
    for (EdgeId e : moves) {
      StateId d = p.graph.edge(e).dst;
      if (!seen[d]) {
        seen[d] = 1;
        q.push_back(d);
      }
    }
  }
  res.strategy = strat;
  v.synthesis = SynthesisStatus::Success;
  v.memory_size = strat->memory_count();
  v.parameters = "mu=" + std::to_string(mu);
  v.report = verify_sp(*g, *strat, *model, inst.mu, inst.nu);
  return res;
}

std::uint32_t sp_optimal_n_for_family(const BwcInstance& inst) {
  const GameGraph& g = inst.game;
  auto s1 = g.find_state("s1"), s2 = g.find_state("s2"), s3 = g.find_state("s3");
  if (!s1 || !s2 || !s3 || g.num_states() != 3 || inst.objective != Objective::ShortestPath)
    throw std::invalid_argument("not an instance of the shortest-path memory family");
  Weight mu = integral(inst.mu, "mu");
  if (mu < 13 || (mu - 13) % 4 != 0) throw std::invalid_argument("mu must be 13 + 4k");
  auto up = g.find_edge(*s1, *s2), back = g.find_edge(*s2, *s1);
  if (!up || !back) throw std::invalid_argument("not an instance of the shortest-path memory family");
  SpResult r = sp_decide_and_synthesize(inst, true);
  if (!r.strategy) throw std::runtime_error("no strategy synthesized");
  // Follow the branch where the adversary always sends the play back to s1.
  const Machine& m = *r.strategy;
  Mem mem = m.initial();
  std::uint32_t n = 0;
  for (Weight guard = 0; guard <= mu; ++guard) {
    Distribution d = m.next(mem, *s1);
    if (d.size() != 1) throw std::runtime_error("strategy is not pure");
    if (d[0].edge != *up) return n;
    ++n;
    mem = m.update(m.update(mem, *up), *back);
  }
  throw std::runtime_error("strategy never leaves the s1/s2 loop");
}

}  // namespace bwc
