#pragma once

#include <algorithm>
#include <deque>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "bwc/bwc_mp.hpp"
#include "bwc/machine.hpp"

namespace support {

using namespace bwc;
using Sets = std::vector<std::vector<std::string>>;

// End components of the base game named by their original states.
inline Sets ec_names(const MpPreprocessed& pre, const std::vector<EndComponent>& ecs) {
  Sets r;
  for (const auto& e : ecs) {
    std::vector<std::string> n;
    for (StateId s : e.states)
      n.push_back(pre.original->state_name(pre.sub->to_parent_state[pre.product->state_of[s]]));
    std::sort(n.begin(), n.end());
    r.push_back(n);
  }
  std::sort(r.begin(), r.end());
  return r;
}

// Same machine started in another memory element.
class Restarted final : public Machine {
 public:
  Restarted(const Machine& m, Mem start) : m_(m), start_(start) {}
  Mem initial() const override { return start_; }
  Mem update(Mem m, EdgeId e) const override { return m_.update(m, e); }
  bool has_output(Mem m, StateId s) const override { return m_.has_output(m, s); }
  Distribution next(Mem m, StateId s) const override { return m_.next(m, s); }

 private:
  const Machine& m_;
  Mem start_;
};

// Memory of `strategy` on first reaching `at` (breadth-first over plays
// consistent with it), or nullopt if unreachable.
inline std::optional<Mem> memory_on_reaching(const GameGraph& g, const Machine& strategy,
                                             StateId at) {
  std::deque<std::pair<StateId, Mem>> q{{g.initial(), strategy.initial()}};
  std::set<std::pair<StateId, Mem>> seen{q.front()};
  while (!q.empty()) {
    auto [s, m] = q.front();
    q.pop_front();
    if (s == at) return m;
    std::vector<EdgeId> moves;
    if (g.owner(s) == Player::P1)
      for (const auto& c : strategy.next(m, s)) moves.push_back(c.edge);
    else
      moves.assign(g.out(s).begin(), g.out(s).end());
    for (EdgeId e : moves) {
      std::pair<StateId, Mem> nx{g.edge(e).dst, strategy.update(m, e)};
      if (seen.insert(nx).second) q.push_back(nx);
    }
  }
  return std::nullopt;
}

}  // namespace support
