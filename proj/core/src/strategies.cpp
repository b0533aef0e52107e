#include "bwc/strategies.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

namespace bwc {

Mem encode(const MemFields& f) {
  if (f.counter > kMaxCounter) throw std::overflow_error("strategy counter out of range");
  if (f.sum > kMaxSum || f.sum < -kMaxSum) throw std::overflow_error("strategy sum out of range");
  Mem m = static_cast<Mem>(f.mode);
  m |= static_cast<Mem>(f.ec & (kMaxEcs - 1)) << 3;
  m |= static_cast<Mem>(f.counter) << 10;
  m |= static_cast<Mem>(f.sum + kMaxSum + 1) << 31;
  return m;
}

MemFields decode(Mem m) {
  MemFields f;
  f.mode = static_cast<Mode>(m & 7);
  f.ec = static_cast<std::uint32_t>((m >> 3) & (kMaxEcs - 1));
  f.counter = static_cast<std::uint32_t>((m >> 10) & kMaxCounter);
  f.sum = static_cast<std::int64_t>((m >> 31) & ((Mem{1} << 25) - 1)) - kMaxSum - 1;
  return f;
}

StructuredPlan make_plan_base(const GameGraph& base, const std::vector<char>& support) {
  StructuredPlan p;
  for (const Edge& e : base.edges()) {
    p.weight.push_back(e.weight);
    p.src.push_back(e.src);
    p.dst.push_back(e.dst);
  }
  for (StateId s = 0; s < base.num_states(); ++s) p.owner.push_back(base.owner(s));
  p.support = support;
  p.ec_of.assign(base.num_states(), -1);
  p.initial = base.initial();
  return p;
}

StructuredStrategy::StructuredStrategy(std::shared_ptr<const StructuredPlan> plan)
    : plan_(std::move(plan)) {
  if (plan_->ecs.size() > kMaxEcs) throw std::length_error("too many end components");
  for (const auto& ec : plan_->ecs) {
    if (ec.K == 0 || ec.K > kMaxCounter || ec.L > kMaxCounter)
      throw std::length_error("combined strategy parameters out of range");
    if (static_cast<std::int64_t>(ec.K) * ec.W > kMaxSum)
      throw std::length_error("combined strategy sum range out of range");
  }
  if (plan_->N > kMaxCounter) throw std::length_error("prefix length out of range");
}

Mem StructuredStrategy::enter(StateId s) const {
  int ec = plan_->ec_of[s];
  if (ec >= 0) return encode({Mode::PhaseA, static_cast<std::uint32_t>(ec), 0, 0});
  return encode({Mode::Secure, 0, 0, 0});
}

Mem StructuredStrategy::initial() const {
  if (plan_->N > 0) return encode({Mode::Prefix, 0, 0, 0});
  return enter(plan_->initial);
}

Mem StructuredStrategy::update(Mem m, EdgeId e) const {
  const StructuredPlan& p = *plan_;
  MemFields f = decode(m);
  switch (f.mode) {
    case Mode::Secure:
      return m;
    case Mode::Prefix:
      if (f.counter + 1 < p.N) return encode({Mode::Prefix, 0, f.counter + 1, 0});
      return enter(p.dst[e]);
    default:
      break;
  }
  if (!p.secure.empty() && p.owner[p.src[e]] == Player::P2 && !p.support[e])
    return encode({Mode::Secure, 0, 0, 0});
  const EcPlan& ec = p.ecs[f.ec];
  if (f.mode == Mode::PhaseA) {
    std::int64_t bound = static_cast<std::int64_t>(ec.K) * ec.W;
    std::int64_t sum = std::clamp<std::int64_t>(f.sum + p.weight[e], -bound, bound);
    if (f.counter + 1 < ec.K) return encode({Mode::PhaseA, f.ec, f.counter + 1, sum});
    if (sum > 0 || ec.L == 0) return encode({Mode::PhaseA, f.ec, 0, 0});
    return encode({Mode::PhaseB, f.ec, 0, 0});
  }
  if (f.counter + 1 < ec.L) return encode({Mode::PhaseB, f.ec, f.counter + 1, 0});
  return encode({Mode::PhaseA, f.ec, 0, 0});
}

EdgeId StructuredStrategy::choice(Mem m, StateId s) const {
  const StructuredPlan& p = *plan_;
  if (p.owner[s] != Player::P1) return kNoEdge;
  MemFields f = decode(m);
  switch (f.mode) {
    case Mode::Prefix:
      return p.prefix.empty() ? kNoEdge : p.prefix[s];
    case Mode::Secure:
      return p.secure.empty() ? kNoEdge : p.secure[s];
    case Mode::PhaseA:
      return f.ec < p.ecs.size() ? p.ecs[f.ec].e1[s] : kNoEdge;
    case Mode::PhaseB:
      return f.ec < p.ecs.size() ? p.ecs[f.ec].wc[s] : kNoEdge;
  }
  return kNoEdge;
}

bool StructuredStrategy::has_output(Mem m, StateId s) const { return choice(m, s) != kNoEdge; }

Distribution StructuredStrategy::next(Mem m, StateId s) const {
  EdgeId e = choice(m, s);
  if (e == kNoEdge) throw std::out_of_range("structured strategy has no output here");
  return dirac(e);
}

std::string StructuredStrategy::mem_name(Mem m) const {
  MemFields f = decode(m);
  std::string ec = plan_->ecs.size() > 1 ? "U" + std::to_string(f.ec) + "." : "";
  switch (f.mode) {
    case Mode::PhaseA:
      return ec + "a" + std::to_string(f.counter) + "_" + std::to_string(f.sum);
    case Mode::PhaseB:
      return ec + "b" + std::to_string(f.counter);
    case Mode::Secure:
      return "sec";
    case Mode::Prefix:
      return "pre" + std::to_string(f.counter);
  }
  return "?";
}

Subgame identity_subgame(const GameGraph& g) {
  return restrict_to(g, std::vector<char>(g.num_states(), 1));
}

LiftedStrategy::LiftedStrategy(std::shared_ptr<const GameGraph> original,
                               std::shared_ptr<const Subgame> sub,
                               std::shared_ptr<const ProductGame> prod,
                               std::shared_ptr<const Machine> model,
                               std::shared_ptr<const Machine> inner)
    : g_(std::move(original)),
      sub_(std::move(sub)),
      prod_(std::move(prod)),
      model_(std::move(model)),
      inner_(std::move(inner)) {
  auto size = model_->declared_size();
  if (size && *size > 256) throw std::length_error("model has more than 256 memory elements");
  single_model_mem_ = size && *size == 1;
  parent_edge_.resize(prod_->game.num_edges());
  for (EdgeId pe = 0; pe < prod_->game.num_edges(); ++pe)
    parent_edge_[pe] = sub_->to_parent_edge[prod_->edge_of[pe]];
}

StateId LiftedStrategy::base_state(StateId s, Mem model_mem) const {
  StateId ss = sub_->from_parent_state[s];
  if (ss == kNoState) return kNoState;
  return prod_->find(ss, model_mem);
}

EdgeId LiftedStrategy::base_edge(StateId bs, EdgeId e) const {
  for (EdgeId pe : prod_->game.out(bs))
    if (parent_edge_[pe] == e) return pe;
  return kNoEdge;
}

Mem LiftedStrategy::initial() const {
  return inner_->initial() | (model_->initial() << kShift);
}

Mem LiftedStrategy::update(Mem m, EdgeId e) const {
  Mem mm = m >> kShift;
  StateId bs = base_state(g_->edge(e).src, mm);
  if (bs == kNoState) return m;
  EdgeId pe = base_edge(bs, e);
  if (pe == kNoEdge) return m;
  Mem inner = inner_->update(m & kLow, pe);
  if (inner > kLow) throw std::overflow_error("inner strategy memory exceeds 56 bits");
  return inner | (model_->update(mm, e) << kShift);
}

bool LiftedStrategy::has_output(Mem m, StateId s) const {
  StateId bs = base_state(s, m >> kShift);
  return bs != kNoState && inner_->has_output(m & kLow, bs);
}

Distribution LiftedStrategy::next(Mem m, StateId s) const {
  StateId bs = base_state(s, m >> kShift);
  if (bs == kNoState) throw std::out_of_range("lifted strategy left its domain");
  Distribution d = inner_->next(m & kLow, bs);
  for (auto& c : d) c.edge = parent_edge_[c.edge];
  normalize_order(d);
  return d;
}

std::string LiftedStrategy::mem_name(Mem m) const {
  std::string n = inner_->mem_name(m & kLow);
  if (!single_model_mem_) n += "_" + model_->mem_name(m >> kShift);
  return n;
}

SpCounterStrategy::SpCounterStrategy(std::shared_ptr<const GameGraph> g,
                                     std::shared_ptr<const Machine> model, Weight mu)
    : g_(std::move(g)), model_(std::move(model)), mu_(mu) {}

void SpCounterStrategy::set_choice(StateId s, Mem model_mem, Weight sum, EdgeId e) {
  table_[{s, word(std::min(sum, mu_), model_mem)}] = e;
}

Mem SpCounterStrategy::initial() const { return word(0, model_->initial()); }

Mem SpCounterStrategy::update(Mem m, EdgeId e) const {
  Weight sum = static_cast<Weight>(m & 0xffffffffULL);
  Weight next = std::min(sum + g_->edge(e).weight, mu_);
  return word(next, model_->update(m >> 32, e));
}

bool SpCounterStrategy::has_output(Mem m, StateId s) const {
  return table_.count({s, m}) > 0 || g_->is_target(s);
}

Distribution SpCounterStrategy::next(Mem m, StateId s) const {
  auto it = table_.find({s, m});
  if (it != table_.end()) return dirac(it->second);
  if (g_->is_target(s)) return dirac(g_->out(s)[0]);
  throw std::out_of_range("shortest-path strategy has no output here");
}

std::string SpCounterStrategy::mem_name(Mem m) const {
  Weight sum = static_cast<Weight>(m & 0xffffffffULL);
  std::string n = sum >= mu_ ? std::string("top") : "c" + std::to_string(sum);
  if (model_->declared_size().value_or(2) != 1) n += "_" + model_->mem_name(m >> 32);
  return n;
}

std::size_t SpCounterStrategy::memory_count() const {
  std::unordered_set<Mem> seen;
  for (const auto& [k, e] : table_) seen.insert(k.second);
  return seen.size();
}

}  // namespace bwc
