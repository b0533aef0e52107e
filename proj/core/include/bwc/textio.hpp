#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "bwc/game.hpp"
#include "bwc/machine.hpp"
#include "bwc/product.hpp"
#include "bwc/types.hpp"

namespace bwc {

struct SourceSpan {
  std::string file;
  int line = 0;    // 1-based
  int column = 0;  // 1-based
};

struct Diagnostic {
  SourceSpan span;
  std::string message;
  std::string str() const;  // "file:line:col: message"
};

class ParseError : public std::runtime_error {
 public:
  explicit ParseError(std::vector<Diagnostic> diags);
  const std::vector<Diagnostic>& diagnostics() const { return diags_; }

 private:
  std::vector<Diagnostic> diags_;
};

struct ParseOptions {
  std::string file = "<input>";
  // Route parallel edges through fresh states instead of rejecting
  // duplicates.
  bool split_multiedges = false;
};

bool valid_identifier(std::string_view id);

GameGraph parse_game(std::string_view text, const ParseOptions& opt = {});
TableMachine parse_machine(std::string_view text, const GameGraph& g,
                           const ParseOptions& opt = {});

// Instance bundle: references a game and a model file plus thresholds.
struct InstanceFile {
  std::string game_path;
  std::string model_path;
  Rational mu;
  Rational nu;
  Objective objective = Objective::MeanPayoff;
  friend bool operator==(const InstanceFile&, const InstanceFile&) = default;
};
InstanceFile parse_instance_file(std::string_view text, const ParseOptions& opt = {});
// Reads a .bwci and the files it references (relative to its directory).
BwcInstance load_instance(const std::string& path, const ParseOptions& opt = {});
GameGraph load_game(const std::string& path, const ParseOptions& opt = {});
TableMachine load_machine(const std::string& path, const GameGraph& g,
                          const ParseOptions& opt = {});
// Writes <dir>/<stem>.bwcg, .bwcm and .bwci.
void save_instance(const BwcInstance& inst, const std::string& dir, const std::string& stem);

Verdict parse_verdict(std::string_view text, const ParseOptions& opt = {});

std::string serialize(const GameGraph& g);
std::string serialize(const TableMachine& m, const GameGraph& g);
std::string serialize(const InstanceFile& f);
std::string serialize(const Verdict& v);
std::string serialize(const VerificationReport& r);

// Textual reference to an edge as used in machine files: "dst" or "dst@w".
std::string edge_ref(const GameGraph& g, EdgeId e);

std::string to_dot(const GameGraph& g);
std::string to_dot(const Mdp& p);
std::string to_dot(const MarkovChain& mc);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

}  // namespace bwc
