#pragma once

#include <cstdint>
#include <string>

#include "bwc/game.hpp"
#include "bwc/machine.hpp"
#include "bwc/types.hpp"

namespace bwc {

// Pseudo-random source of every simulation: std::mt19937_64 seeded with
// seed XOR run-index. Edge choices compare one 64-bit draw against the
// cumulative probabilities scaled by 2^64, so results do not depend on the
// standard library's distribution classes.
inline constexpr const char* kSimulationRng = "mt19937_64/xor-run-index/v1";

struct SimulationOptions {
  Objective objective = Objective::MeanPayoff;
  std::size_t runs = 1000;
  std::size_t horizon = 1000;
  std::uint64_t seed = 0;
  unsigned jobs = 1;
};

struct SimulationResult {
  double mean = 0;
  double sd = 0;          // sample standard deviation of per-run values
  std::size_t runs = 0;
  std::size_t horizon = 0;
  std::size_t truncated = 0;  // SP runs that did not reach a target
  double standard_error() const;
};

// Per-run value: mean weight over `horizon` steps (MP), or total weight up
// to the first target visit, cut at `horizon` steps (SP).
SimulationResult simulate(const GameGraph& g, const Machine& strategy, const Machine& model,
                          const SimulationOptions& opt);

}  // namespace bwc
