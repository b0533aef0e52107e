#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "bwc/game.hpp"
#include "bwc/machine.hpp"
#include "bwc/rational.hpp"

namespace bwc {

enum class Objective : std::uint8_t { MeanPayoff, ShortestPath };

const char* objective_tag(Objective o);  // "mp" / "sp"

// Problem statement. For mean-payoff the worst-case threshold mu is any
// rational; for shortest path it is a natural number and weights are >= 1.
struct BwcInstance {
  std::string name;
  GameGraph game;
  TableMachine model;
  Rational mu;
  Rational nu;
  Objective objective = Objective::MeanPayoff;
};

struct ProductSize {
  std::size_t states = 0;
  std::size_t edges = 0;
  friend bool operator==(const ProductSize&, const ProductSize&) = default;
};

struct VerificationReport {
  Objective objective = Objective::MeanPayoff;
  Extended worst_case;
  Extended expectation;
  ProductSize worst_case_product;  // strategy x game, adversary unrestricted
  ProductSize chain;               // strategy x game x model
  bool pass_worst_case = false;
  bool pass_expectation = false;
  std::string note;  // e.g. a cycle witness when the SP worst case is unbounded
  bool passed() const { return pass_worst_case && pass_expectation; }
  friend bool operator==(const VerificationReport&, const VerificationReport&) = default;
};

enum class SynthesisStatus : std::uint8_t { NotRequested, Success, CapHit, Infeasible };
const char* synthesis_tag(SynthesisStatus s);

struct Verdict {
  Objective objective = Objective::MeanPayoff;
  bool decision = false;
  bool early_no = false;  // worst-case requirement already unsatisfiable
  Extended value;         // nu_star (mp) or minimal expected cost (sp)
  SynthesisStatus synthesis = SynthesisStatus::NotRequested;
  std::string parameters;  // e.g. "N=6 K=2 L=2"
  std::optional<std::size_t> memory_size;
  std::optional<VerificationReport> report;
  friend bool operator==(const Verdict&, const Verdict&) = default;
};

}  // namespace bwc
