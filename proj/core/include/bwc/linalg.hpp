#pragma once

#include <optional>
#include <vector>

#include "bwc/rational.hpp"

namespace bwc {

using Matrix = std::vector<std::vector<Rational>>;

// Exact Gauss-Jordan elimination for A x = b. Free variables are set to 0.
// Returns nullopt when the system is inconsistent.
std::optional<std::vector<Rational>> solve_linear(Matrix a, std::vector<Rational> b);

// Stationary distribution of an irreducible chain given by its row-stochastic
// transition matrix: v P = v, sum v = 1.
std::vector<Rational> stationary(const Matrix& p);

}  // namespace bwc
