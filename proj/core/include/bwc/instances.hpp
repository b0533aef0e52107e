#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bwc/machine.hpp"
#include "bwc/rational.hpp"
#include "bwc/types.hpp"

namespace bwc {

// Named instances: fig1, fig2, fig3, fig4, fig5, fig6 (X = 10), fig7 (mu = 13).
BwcInstance builtin(const std::string& name);
std::vector<std::string> builtin_names();

BwcInstance gen_fig1();
BwcInstance gen_fig2();
BwcInstance gen_fig3();
BwcInstance gen_fig5();
// fig2 restricted to its end component {s9, s10, s11}, starting in s10.
BwcInstance gen_fig4();
// The combined strategy with K = L = 2 on gen_fig4(), as an explicit table.
TableMachine fig4_combined_strategy(const BwcInstance& fig4);
// Mean-payoff family with weights {1, 0, -X, X+5}; thresholds (0, 11/10).
BwcInstance gen_fig6(Weight X);
// Shortest-path family for mu = 13 + 4k; nu = e(n-1) with n = floor(mu/4).
BwcInstance gen_sp_family(Weight mu);

// e(n) = sum_{i<n} 2/2^i + floor(mu/2)/2^n: expected cost of taking s1 -> s2
// n times before s1 -> s3 in the shortest-path family.
Rational sp_family_cost(Weight mu, std::uint32_t n);

// The commuting strategy of fig1: train, wait after the first two delays,
// go home after the third and cycle.
TableMachine fig1_train_then_bicycle(const BwcInstance& fig1);

// The instance restricted to the named states (edges leaving them dropped),
// starting in `initial`. The model must be memoryless.
BwcInstance sub_instance(const BwcInstance& inst, const std::vector<std::string>& states,
                         const std::string& initial);

struct KthSubsetInstance {
  std::vector<Weight> sizes;  // h(a) >= 1 per element
  std::uint64_t K = 1;
  Weight L = 0;
};

// Constants of the reduction for an instance.
struct KthReduction {
  Weight Q = 0, T = 0, mu = 0, x1 = 0, x2 = 1, x3 = 0;
  Rational nu;
  std::vector<Weight> scaled;  // (n + 1) * h(a)
};
KthReduction kth_constants(const KthSubsetInstance& inst);

// Shortest-path instance whose answer is yes iff at least K subsets C of
// the elements have h(C) <= L.
BwcInstance reduce_kth_subset(const KthSubsetInstance& inst);

struct RandomSpec {
  std::uint64_t seed = 0;
  std::uint32_t states = 4;
  Weight max_weight = 3;
  double density = 0.5;  // probability of each extra edge
  Objective objective = Objective::MeanPayoff;
};

// Deterministic for a fixed spec on every platform (mt19937_64 with
// rejection sampling). Always passes validate(). P2 plays uniformly.
BwcInstance gen_random(const RandomSpec& spec);

}  // namespace bwc
