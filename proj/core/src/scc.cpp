#include "bwc/scc.hpp"

#include <algorithm>

namespace bwc {

SccResult tarjan_scc(const Adjacency& adj, const std::vector<char>* active) {
  const auto n = static_cast<std::uint32_t>(adj.size());
  constexpr std::uint32_t kUnset = static_cast<std::uint32_t>(-1);
  SccResult r;
  r.comp.assign(n, kUnset);
  std::vector<std::uint32_t> index(n, kUnset), low(n, 0), stack;
  std::vector<char> on_stack(n, 0);
  std::vector<std::pair<std::uint32_t, std::size_t>> call;
  std::uint32_t counter = 0;
  auto is_active = [&](std::uint32_t v) { return !active || (*active)[v]; };

  for (std::uint32_t root = 0; root < n; ++root) {
    if (index[root] != kUnset || !is_active(root)) continue;
    call.push_back({root, 0});
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!call.empty()) {
      auto& [v, pos] = call.back();
      if (pos < adj[v].size()) {
        std::uint32_t w = adj[v][pos++];
        if (!is_active(w)) continue;
        if (index[w] == kUnset) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = 1;
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      std::uint32_t done = v;
      call.pop_back();
      if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[done]);
      if (low[done] == index[done]) {
        auto c = static_cast<std::uint32_t>(r.members.size());
        r.members.emplace_back();
        std::uint32_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          r.comp[w] = c;
          r.members.back().push_back(w);
        } while (w != done);
        std::sort(r.members.back().begin(), r.members.back().end());
      }
    }
  }
  return r;
}

std::vector<char> reachable_from(const Adjacency& adj, const std::vector<std::uint32_t>& roots) {
  std::vector<char> seen(adj.size(), 0);
  std::vector<std::uint32_t> stack;
  for (auto r : roots) {
    if (!seen[r]) { seen[r] = 1; stack.push_back(r); }
  }
  while (!stack.empty()) {
    auto v = stack.back();
    stack.pop_back();
    for (auto w : adj[v]) {
      if (!seen[w]) { seen[w] = 1; stack.push_back(w); }
    }
  }
  return seen;
}

}  // namespace bwc
