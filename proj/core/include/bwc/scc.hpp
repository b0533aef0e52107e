#pragma once

#include <cstdint>
#include <vector>

namespace bwc {

using Adjacency = std::vector<std::vector<std::uint32_t>>;

struct SccResult {
  std::vector<std::uint32_t> comp;  // component index per node
  // Components in reverse topological order: edges only go from a component
  // to components with a smaller or equal index.
  std::vector<std::vector<std::uint32_t>> members;
};

// Iterative Tarjan. `active` (optional) masks nodes that take part.
SccResult tarjan_scc(const Adjacency& adj, const std::vector<char>* active = nullptr);

// Nodes reachable from `roots` (forward) in adj.
std::vector<char> reachable_from(const Adjacency& adj, const std::vector<std::uint32_t>& roots);

}  // namespace bwc
