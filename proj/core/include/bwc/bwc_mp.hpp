#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "bwc/game.hpp"
#include "bwc/machine.hpp"
#include "bwc/mdp_analysis.hpp"
#include "bwc/product.hpp"
#include "bwc/rational.hpp"
#include "bwc/strategies.hpp"
#include "bwc/types.hpp"

namespace bwc {

// Mean-payoff instance after the preprocessing steps: thresholds moved to
// (0, nu'), losing states removed, adversary model folded into the game.
// The "base game" is `mdp.graph`: product of the S_WC-subgame with the model.
struct MpPreprocessed {
  std::shared_ptr<const GameGraph> original;
  std::shared_ptr<const Machine> model;  // on the original game
  TransformedGame transformed;           // weights b*w - a, on the original states
  std::vector<char> s_wc;                // per original state
  std::shared_ptr<const Subgame> sub;    // transformed game restricted to S_WC
  std::shared_ptr<const ProductGame> product;
  Mdp mdp;                               // base game with the memoryless model
  Rational nu_prime;                     // transformed expectation threshold
};

struct EarlyNo {};

std::variant<MpPreprocessed, EarlyNo> preprocess(const BwcInstance& inst);

struct MpDecision {
  bool decision = false;
  Rational nu_star;         // original scale
  Rational nu_star_prime;   // transformed scale
  std::vector<EndComponent> winning;  // on the base game
  std::vector<EndComponent> losing;
  std::vector<Weight> p_prime_weights;  // zeroed outside winning ECs
  GainSolution p_prime;                 // max expected MP on P'
  std::vector<int> ec_of;               // base state -> winning EC index
};

MpDecision decide_mp(const MpPreprocessed& pre);
// Exact decision plus nu_star, no synthesis.
Verdict decide(const BwcInstance& inst);

// Parameters of the combined strategy in one winning EC of the base game.
// L follows floor((K*W + |U|*W + |U|*mu*) / mu*) + 1 unless overridden.
EcPlan make_ec_plan(const Mdp& p, const std::vector<StateId>& ec, std::uint32_t K,
                    std::optional<std::uint32_t> l_override = std::nullopt);

struct SynthesisOptions {
  std::uint32_t k_max = 1u << 12;
  std::uint32_t n_max = 1u << 16;
  std::optional<std::uint32_t> k_fixed;  // evaluate exactly this K
  std::optional<std::uint32_t> n_fixed;  // evaluate exactly this N
  std::optional<std::uint32_t> l_override;
  std::uint64_t budget = 20'000'000'000ULL;  // elementary evaluation steps
  unsigned jobs = 1;
  // Cross-check with the generic verifier when the product is at most this big.
  std::size_t exact_check_limit = 200'000;
};

// Plans on the base game for the three strategy shapes. The machines built
// from them run on the base game; lift() maps them to the original game.
std::shared_ptr<const StructuredPlan> plan_combined(const MpPreprocessed& pre, const EcPlan& ec);
std::shared_ptr<const StructuredPlan> plan_witness_and_secure(const MpPreprocessed& pre,
                                                              const EcPlan& ec);
std::shared_ptr<const StructuredPlan> plan_global(const MpPreprocessed& pre,
                                                  const MpDecision& dec, std::uint32_t N,
                                                  std::uint32_t K,
                                                  std::optional<std::uint32_t> l_override);
std::shared_ptr<const Machine> lift(const MpPreprocessed& pre,
                                    std::shared_ptr<const StructuredPlan> plan);

// Exact values of a global plan, computed period by period (original scale).
struct GlobalEvaluation {
  Rational expectation;
  Rational worst_case;
  Rational in_ec_probability;  // mass inside winning ECs after N steps
  std::uint64_t work = 0;
};
GlobalEvaluation evaluate_global(const MpPreprocessed& pre, const StructuredPlan& plan,
                                 std::uint64_t budget = 20'000'000'000ULL);

struct MpResult {
  Verdict verdict;
  std::shared_ptr<const Machine> strategy;  // on the original game
  std::shared_ptr<const StructuredPlan> plan;
};

// Decision, then (when asked and the answer is yes) the (N, K) search.
MpResult solve_mp(const BwcInstance& inst, bool synthesize, const SynthesisOptions& opt = {});

// Largest nu up to eps for which the answer is yes (dichotomic search on
// [mu, W]). Throws std::invalid_argument when the worst case is unsatisfiable.
Rational approx_optimal_nu(const BwcInstance& inst, const Rational& eps);

}  // namespace bwc
