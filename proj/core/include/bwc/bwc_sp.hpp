#pragma once

#include <memory>

#include "bwc/game_solvers.hpp"
#include "bwc/product.hpp"
#include "bwc/strategies.hpp"
#include "bwc/types.hpp"

namespace bwc {

struct SpResult {
  Verdict verdict;
  std::shared_ptr<const SpCounterStrategy> strategy;  // on the original game
  std::size_t unfolded_states = 0;  // |R| in the truncated-sum unfolding
  std::size_t product_states = 0;
};

// Unfold to the truncated-sum game, keep P1's attractor of the targets,
// fold in the model, minimize the expected cost. Targets come from the game.
// With `synthesize`, the optimal product policy is returned as a machine over
// (cost so far, model memory) and verified on the original game.
SpResult sp_decide_and_synthesize(const BwcInstance& inst, bool synthesize = true);

// Instances of the memory family: how many times the optimal strategy takes
// s1 -> s2 before going to s3. Throws std::invalid_argument otherwise.
std::uint32_t sp_optimal_n_for_family(const BwcInstance& inst);

}  // namespace bwc
