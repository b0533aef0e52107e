#include "bwc/textio.hpp"

#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace bwc {

namespace {

struct Token {
  std::string_view text;
  int column;
};

struct Line {
  int number;
  std::vector<Token> tokens;
};

std::vector<Line> tokenize(std::string_view text) {
  std::vector<Line> lines;
  int number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view raw = text.substr(pos, end - pos);
    ++number;
    if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    Line line{number, {}};
    std::size_t i = 0;
    while (i < raw.size()) {
      while (i < raw.size() && (raw[i] == ' ' || raw[i] == '\t' || raw[i] == '\r')) ++i;
      std::size_t j = i;
      while (j < raw.size() && raw[j] != ' ' && raw[j] != '\t' && raw[j] != '\r') ++j;
      if (j > i) line.tokens.push_back({raw.substr(i, j - i), static_cast<int>(i + 1)});
      i = j;
    }
    if (!line.tokens.empty()) lines.push_back(std::move(line));
    if (end == text.size()) break;
    pos = end + 1;
  }
  return lines;
}

class Reporter {
 public:
  explicit Reporter(std::string file) : file_(std::move(file)) {}
  void error(int line, int col, std::string msg) {
    diags_.push_back({{file_, line, col}, std::move(msg)});
  }
  void error(const Line& l, std::size_t tok, std::string msg) {
    int col = tok < l.tokens.size() ? l.tokens[tok].column : 1;
    error(l.number, col, std::move(msg));
  }
  bool failed() const { return !diags_.empty(); }
  void throw_if_failed() {
    if (!diags_.empty()) throw ParseError(std::move(diags_));
  }

 private:
  std::string file_;
  std::vector<Diagnostic> diags_;
};

bool arity(Reporter& rep, const Line& l, std::size_t n, const char* usage) {
  if (l.tokens.size() == n) return true;
  rep.error(l, 0, std::string("expected `") + usage + "`");
  return false;
}

std::optional<long long> parse_int(std::string_view s) {
  if (s.empty()) return std::nullopt;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return std::nullopt;
  for (std::size_t k = i; k < s.size(); ++k)
    if (s[k] < '0' || s[k] > '9') return std::nullopt;
  try {
    return std::stoll(std::string(s));
  } catch (...) {
    return std::nullopt;
  }
}

// Resolves "dst" or "dst@w" among the out-edges of src.
std::optional<EdgeId> resolve_edge(const GameGraph& g, StateId src, std::string_view ref,
                                   std::string& why) {
  std::optional<Weight> w;
  std::string_view dst_id = ref;
  if (auto at = ref.find('@'); at != std::string_view::npos) {
    dst_id = ref.substr(0, at);
    auto wi = parse_int(ref.substr(at + 1));
    if (!wi) {
      why = "malformed edge weight in '" + std::string(ref) + "'";
      return std::nullopt;
    }
    w = *wi;
  }
  auto dst = g.find_state(dst_id);
  if (!dst) {
    why = "unknown state '" + std::string(dst_id) + "'";
    return std::nullopt;
  }
  if (!w && g.multiplicity(src, *dst) > 1) {
    why = "ambiguous edge " + g.state_name(src) + " -> " + std::string(dst_id) +
          " (parallel edges; write dst@weight)";
    return std::nullopt;
  }
  auto e = g.find_edge(src, *dst, w);
  if (!e) {
    why = "support outside successors: no edge " + g.state_name(src) + " -> " + std::string(ref);
    return std::nullopt;
  }
  return e;
}

std::string dirname_of(const std::string& path) {
  auto p = std::filesystem::path(path).parent_path();
  return p.empty() ? std::string(".") : p.string();
}

std::string join_path(const std::string& dir, const std::string& rel) {
  std::filesystem::path p(rel);
  if (p.is_absolute()) return rel;
  return (std::filesystem::path(dir) / p).lexically_normal().string();
}

}  // namespace

std::string Diagnostic::str() const {
  return span.file + ":" + std::to_string(span.line) + ":" + std::to_string(span.column) + ": " +
         message;
}

namespace {
std::string join_diags(const std::vector<Diagnostic>& d) {
  std::string s;
  for (const auto& x : d) s += (s.empty() ? "" : "\n") + x.str();
  return s;
}
}  // namespace

ParseError::ParseError(std::vector<Diagnostic> diags)
    : std::runtime_error(join_diags(diags)), diags_(std::move(diags)) {}

bool valid_identifier(std::string_view id) {
  if (id.empty()) return false;
  for (char c : id) {
    bool ok = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') ||
              c == '_' || c == '.' || c == '-';
    if (!ok) return false;
  }
  return true;
}

GameGraph parse_game(std::string_view text, const ParseOptions& opt) {
  Reporter rep(opt.file);
  auto lines = tokenize(text);
  GameGraph g;
  bool header = false;
  struct PendingEdge { const Line* line; std::string_view src, dst; Weight w; };
  std::vector<PendingEdge> edges;
  std::vector<std::pair<const Line*, std::string_view>> inits, targets;
  std::map<StateId, const Line*> decl;

  for (const auto& l : lines) {
    std::string_view d = l.tokens[0].text;
    if (!header && d != "game") {
      rep.error(l, 0, "missing `game` header");
      header = true;  // report once
      continue;
    }
    if (d == "game") {
      if (!arity(rep, l, 2, "game <name>")) { header = true; continue; }
      if (header && !g.name().empty()) rep.error(l, 0, "duplicate `game` header");
      header = true;
      g.set_name(std::string(l.tokens[1].text));
    } else if (d == "state") {
      if (!arity(rep, l, 3, "state <id> p1|p2")) continue;
      std::string_view id = l.tokens[1].text, who = l.tokens[2].text;
      if (!valid_identifier(id)) { rep.error(l, 1, "invalid identifier '" + std::string(id) + "'"); continue; }
      if (who != "p1" && who != "p2") { rep.error(l, 2, "owner must be p1 or p2"); continue; }
      if (g.find_state(id)) { rep.error(l, 1, "duplicate state '" + std::string(id) + "'"); continue; }
      StateId s = g.add_state(std::string(id), who == "p1" ? Player::P1 : Player::P2);
      decl[s] = &l;
    } else if (d == "edge") {
      if (!arity(rep, l, 4, "edge <src> <dst> <int>")) continue;
      auto w = parse_int(l.tokens[3].text);
      if (!w) { rep.error(l, 3, "non-integer weight '" + std::string(l.tokens[3].text) + "'"); continue; }
      edges.push_back({&l, l.tokens[1].text, l.tokens[2].text, *w});
    } else if (d == "init") {
      if (!arity(rep, l, 2, "init <id>")) continue;
      inits.emplace_back(&l, l.tokens[1].text);
    } else if (d == "target") {
      if (!arity(rep, l, 2, "target <id>")) continue;
      targets.emplace_back(&l, l.tokens[1].text);
    } else {
      rep.error(l, 0, "unknown directive '" + std::string(d) + "'");
    }
  }
  if (!header) rep.error(1, 1, "missing `game` header");

  std::set<std::tuple<StateId, StateId, Weight>> seen;
  for (const auto& pe : edges) {
    auto s = g.find_state(pe.src);
    auto t = g.find_state(pe.dst);
    if (!s) { rep.error(*pe.line, 1, "dangling state reference '" + std::string(pe.src) + "'"); continue; }
    if (!t) { rep.error(*pe.line, 2, "dangling state reference '" + std::string(pe.dst) + "'"); continue; }
    if (!seen.insert({*s, *t, pe.w}).second && !opt.split_multiedges) {
      rep.error(*pe.line, 0, "duplicate edge " + std::string(pe.src) + " -> " + std::string(pe.dst));
      continue;
    }
    g.add_edge(*s, *t, pe.w);
  }
  if (inits.empty() && header) {
    rep.error(lines.empty() ? 1 : lines.back().number, 1, "missing `init`");
  } else if (inits.size() > 1) {
    rep.error(*inits[1].first, 0, "duplicate `init`");
  }
  if (!inits.empty()) {
    if (auto s = g.find_state(inits[0].second)) g.set_initial(*s);
    else rep.error(*inits[0].first, 1, "dangling state reference '" + std::string(inits[0].second) + "'");
  }
  for (auto& [l, id] : targets) {
    if (auto s = g.find_state(id)) g.add_target(*s);
    else rep.error(*l, 1, "dangling state reference '" + std::string(id) + "'");
  }
  for (StateId s = 0; s < g.num_states(); ++s) {
    if (g.out(s).empty()) rep.error(*decl[s], 1, "deadlock at " + g.state_name(s));
  }
  rep.throw_if_failed();
  if (opt.split_multiedges) return split_parallel_edges(g);
  return g;
}

TableMachine parse_machine(std::string_view text, const GameGraph& g, const ParseOptions& opt) {
  Reporter rep(opt.file);
  auto lines = tokenize(text);
  TableMachine m(g, "");
  bool header = false;
  std::optional<std::pair<const Line*, std::string_view>> init;
  std::map<std::pair<Mem, StateId>, const Line*> first_row;
  std::map<std::pair<Mem, StateId>, Distribution> rows;
  std::set<std::pair<Mem, std::uint64_t>> updates;

  auto mem_of = [&](const Line& l, std::size_t tok) -> std::optional<Mem> {
    auto mm = m.find_memory(std::string(l.tokens[tok].text));
    if (!mm) rep.error(l, tok, "undeclared memory '" + std::string(l.tokens[tok].text) + "'");
    return mm;
  };
  auto state_of = [&](const Line& l, std::size_t tok) -> std::optional<StateId> {
    auto s = g.find_state(l.tokens[tok].text);
    if (!s) rep.error(l, tok, "dangling state reference '" + std::string(l.tokens[tok].text) + "'");
    return s;
  };

  for (const auto& l : lines) {
    std::string_view d = l.tokens[0].text;
    if (!header && d != "model") {
      rep.error(l, 0, "missing `model` header");
      header = true;
      continue;
    }
    if (d == "model") {
      if (!arity(rep, l, 2, "model <name>")) { header = true; continue; }
      header = true;
      m.set_name(std::string(l.tokens[1].text));
    } else if (d == "mem") {
      if (!arity(rep, l, 2, "mem <id>")) continue;
      std::string id(l.tokens[1].text);
      if (!valid_identifier(id)) { rep.error(l, 1, "invalid identifier '" + id + "'"); continue; }
      if (m.find_memory(id)) { rep.error(l, 1, "duplicate memory '" + id + "'"); continue; }
      m.add_memory(id);
    } else if (d == "init") {
      if (!arity(rep, l, 2, "init <mem>")) continue;
      if (init) rep.error(l, 0, "duplicate `init`");
      else init = std::make_pair(&l, l.tokens[1].text);
    } else if (d == "update") {
      if (l.tokens.size() != 4 && l.tokens.size() != 5) {
        rep.error(l, 0, "expected `update <mem> <state> [<dst>[@w]] <mem>`");
        continue;
      }
      auto from = mem_of(l, 1);
      auto s = state_of(l, 2);
      auto to = mem_of(l, l.tokens.size() - 1);
      if (!from || !s || !to) continue;
      if (l.tokens.size() == 4) {
        if (!updates.insert({*from, (1ULL << 40) | *s}).second) {
          rep.error(l, 0, "non-deterministic update row for (" + m.mem_name(*from) + ", " +
                              g.state_name(*s) + ")");
          continue;
        }
        m.set_state_update(*from, *s, *to);
      } else {
        std::string why;
        auto e = resolve_edge(g, *s, l.tokens[3].text, why);
        if (!e) { rep.error(l, 3, why); continue; }
        if (!updates.insert({*from, *e}).second) {
          rep.error(l, 0, "non-deterministic update row for (" + m.mem_name(*from) + ", " +
                              g.state_name(*s) + ", " + std::string(l.tokens[3].text) + ")");
          continue;
        }
        m.set_edge_update(*from, *e, *to);
      }
    } else if (d == "next") {
      if (!arity(rep, l, 5, "next <mem> <state> <dst>[@w] <p/q>")) continue;
      auto mm = mem_of(l, 1);
      auto s = state_of(l, 2);
      if (!mm || !s) continue;
      std::string why;
      auto e = resolve_edge(g, *s, l.tokens[3].text, why);
      if (!e) { rep.error(l, 3, why); continue; }
      auto p = Rational::parse(l.tokens[4].text);
      if (!p || p->sign() < 0 || *p > Rational(1)) {
        rep.error(l, 4, "invalid probability '" + std::string(l.tokens[4].text) + "'");
        continue;
      }
      auto key = std::make_pair(*mm, *s);
      auto& row = rows[key];
      bool dup = false;
      for (const auto& c : row) dup |= c.edge == *e;
      if (dup) { rep.error(l, 3, "edge listed twice in one distribution"); continue; }
      first_row.emplace(key, &l);
      row.push_back({*e, *p});
    } else {
      rep.error(l, 0, "unknown directive '" + std::string(d) + "'");
    }
  }
  if (!header) rep.error(1, 1, "missing `model` header");
  if (header && m.size() == 0) rep.error(1, 1, "no memory declared");
  if (init) {
    if (auto mm = m.find_memory(std::string(init->second))) m.set_initial(*mm);
    else rep.error(*init->first, 1, "undeclared memory '" + std::string(init->second) + "'");
  } else if (m.size() > 1) {
    rep.error(lines.empty() ? 1 : lines.back().number, 1, "missing `init`");
  }
  // Distribution rows in order of first appearance.
  std::vector<std::pair<const Line*, std::pair<Mem, StateId>>> order;
  for (auto& [k, l] : first_row) order.emplace_back(l, k);
  std::sort(order.begin(), order.end(),
            [](const auto& a, const auto& b) { return a.first->number < b.first->number; });
  for (auto& [l, k] : order) {
    Rational sum = total_mass(rows[k]);
    if (sum != Rational(1)) {
      rep.error(*l, 0, "distribution for (" + m.mem_name(k.first) + ", " + g.state_name(k.second) +
                           ") sums to " + sum.str());
      continue;
    }
    m.set_output(k.first, k.second, rows[k]);
  }
  rep.throw_if_failed();
  return m;
}

InstanceFile parse_instance_file(std::string_view text, const ParseOptions& opt) {
  Reporter rep(opt.file);
  InstanceFile f;
  bool have_game = false, have_mu = false, have_nu = false;
  for (const auto& l : tokenize(text)) {
    std::string_view d = l.tokens[0].text;
    if (d == "game" || d == "model") {
      if (!arity(rep, l, 2, d == "game" ? "game <path>" : "model <path>")) continue;
      (d == "game" ? f.game_path : f.model_path) = std::string(l.tokens[1].text);
      have_game |= d == "game";
    } else if (d == "mu" || d == "nu") {
      if (!arity(rep, l, 2, d == "mu" ? "mu <p/q>" : "nu <p/q>")) continue;
      auto r = Rational::parse(l.tokens[1].text);
      if (!r) { rep.error(l, 1, "malformed rational '" + std::string(l.tokens[1].text) + "'"); continue; }
      (d == "mu" ? f.mu : f.nu) = *r;
      (d == "mu" ? have_mu : have_nu) = true;
    } else if (d == "objective") {
      if (!arity(rep, l, 2, "objective mp|sp")) continue;
      if (l.tokens[1].text == "mp") f.objective = Objective::MeanPayoff;
      else if (l.tokens[1].text == "sp") f.objective = Objective::ShortestPath;
      else rep.error(l, 1, "objective must be mp or sp");
    } else {
      rep.error(l, 0, "unknown directive '" + std::string(d) + "'");
    }
  }
  if (!have_game) rep.error(1, 1, "missing `game`");
  if (f.model_path.empty()) rep.error(1, 1, "missing `model`");
  if (!have_mu) rep.error(1, 1, "missing `mu`");
  if (!have_nu) rep.error(1, 1, "missing `nu`");
  rep.throw_if_failed();
  return f;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

GameGraph load_game(const std::string& path, const ParseOptions& opt) {
  ParseOptions o = opt;
  o.file = path;
  return parse_game(read_file(path), o);
}

TableMachine load_machine(const std::string& path, const GameGraph& g, const ParseOptions& opt) {
  ParseOptions o = opt;
  o.file = path;
  return parse_machine(read_file(path), g, o);
}

BwcInstance load_instance(const std::string& path, const ParseOptions& opt) {
  ParseOptions o = opt;
  o.file = path;
  InstanceFile f = parse_instance_file(read_file(path), o);
  std::string dir = dirname_of(path);
  BwcInstance inst;
  inst.name = std::filesystem::path(path).stem().string();
  inst.game = load_game(join_path(dir, f.game_path), opt);
  inst.model = load_machine(join_path(dir, f.model_path), inst.game, opt);
  inst.mu = f.mu;
  inst.nu = f.nu;
  inst.objective = f.objective;
  return inst;
}

void save_instance(const BwcInstance& inst, const std::string& dir, const std::string& stem) {
  std::filesystem::create_directories(dir);
  write_file(join_path(dir, stem + ".bwcg"), serialize(inst.game));
  write_file(join_path(dir, stem + ".bwcm"), serialize(inst.model, inst.game));
  InstanceFile f{stem + ".bwcg", stem + ".bwcm", inst.mu, inst.nu, inst.objective};
  write_file(join_path(dir, stem + ".bwci"), serialize(f));
}

std::string edge_ref(const GameGraph& g, EdgeId e) {
  const Edge& ed = g.edge(e);
  std::string r = g.state_name(ed.dst);
  if (g.multiplicity(ed.src, ed.dst) > 1) r += "@" + std::to_string(ed.weight);
  return r;
}

std::string serialize(const GameGraph& g) {
  std::ostringstream os;
  os << "game " << (g.name().empty() ? "unnamed" : g.name()) << "\n";
  for (StateId s = 0; s < g.num_states(); ++s)
    os << "state " << g.state_name(s) << (g.owner(s) == Player::P1 ? " p1" : " p2") << "\n";
  for (const auto& e : g.edges())
    os << "edge " << g.state_name(e.src) << " " << g.state_name(e.dst) << " " << e.weight << "\n";
  if (g.has_initial()) os << "init " << g.state_name(g.initial()) << "\n";
  for (StateId t : g.targets()) os << "target " << g.state_name(t) << "\n";
  return os.str();
}

std::string serialize(const TableMachine& m, const GameGraph& g) {
  std::ostringstream os;
  os << "model " << (m.name().empty() ? "unnamed" : m.name()) << "\n";
  for (Mem k = 0; k < m.size(); ++k) os << "mem " << m.mem_name(k) << "\n";
  if (m.size() > 0) os << "init " << m.mem_name(m.initial()) << "\n";
  for (const auto& r : m.update_rows()) {
    if (r.per_edge) {
      const Edge& e = g.edge(r.key);
      os << "update " << m.mem_name(r.mem) << " " << g.state_name(e.src) << " "
         << edge_ref(g, r.key) << " " << m.mem_name(r.to) << "\n";
    } else {
      os << "update " << m.mem_name(r.mem) << " " << g.state_name(r.key) << " "
         << m.mem_name(r.to) << "\n";
    }
  }
  for (const auto& r : m.output_rows()) {
    for (const auto& c : m.next(r.mem, r.state))
      os << "next " << m.mem_name(r.mem) << " " << g.state_name(r.state) << " "
         << edge_ref(g, c.edge) << " " << c.prob << "\n";
  }
  return os.str();
}

std::string serialize(const InstanceFile& f) {
  std::ostringstream os;
  os << "game " << f.game_path << "\n"
     << "model " << f.model_path << "\n"
     << "mu " << f.mu << "\n"
     << "nu " << f.nu << "\n"
     << "objective " << objective_tag(f.objective) << "\n";
  return os.str();
}

std::string serialize(const VerificationReport& r) {
  std::ostringstream os;
  os << "worst_case " << r.worst_case << "\n"
     << "expectation " << r.expectation << "\n"
     << "worst_case_product " << r.worst_case_product.states << " " << r.worst_case_product.edges
     << "\n"
     << "chain " << r.chain.states << " " << r.chain.edges << "\n"
     << "pass_worst_case " << (r.pass_worst_case ? "yes" : "no") << "\n"
     << "pass_expectation " << (r.pass_expectation ? "yes" : "no") << "\n";
  if (!r.note.empty()) os << "note " << r.note << "\n";
  return os.str();
}

std::string serialize(const Verdict& v) {
  std::ostringstream os;
  os << "objective " << objective_tag(v.objective) << "\n"
     << "decision " << (v.decision ? "yes" : "no") << "\n";
  if (v.early_no) os << "early_no yes\n";
  os << (v.objective == Objective::MeanPayoff ? "nu_star " : "min_expected_cost ") << v.value
     << "\n"
     << "synthesis " << synthesis_tag(v.synthesis) << "\n";
  if (!v.parameters.empty()) os << "parameters " << v.parameters << "\n";
  if (v.memory_size) os << "memory_size " << *v.memory_size << "\n";
  if (v.report) {
    os << "report\n";
    os << serialize(*v.report);
  }
  return os.str();
}

Verdict parse_verdict(std::string_view text, const ParseOptions& opt) {
  Reporter rep(opt.file);
  Verdict v;
  auto yes_no = [&](const Line& l, bool& out) {
    if (l.tokens.size() != 2 || (l.tokens[1].text != "yes" && l.tokens[1].text != "no")) {
      rep.error(l, 1, "expected yes or no");
      return;
    }
    out = l.tokens[1].text == "yes";
  };
  auto rest = [](const Line& l) {
    std::string s;
    for (std::size_t i = 1; i < l.tokens.size(); ++i) s += (i > 1 ? " " : "") + std::string(l.tokens[i].text);
    return s;
  };
  auto ext = [&](const Line& l, Extended& out) {
    auto e = l.tokens.size() == 2 ? Extended::parse(l.tokens[1].text) : std::nullopt;
    if (!e) rep.error(l, 1, "malformed value");
    else out = *e;
  };
  auto size_pair = [&](const Line& l, ProductSize& out) {
    if (l.tokens.size() != 3) { rep.error(l, 0, "expected two counts"); return; }
    out.states = std::stoull(std::string(l.tokens[1].text));
    out.edges = std::stoull(std::string(l.tokens[2].text));
  };
  VerificationReport* r = nullptr;
  for (const auto& l : tokenize(text)) {
    std::string_view d = l.tokens[0].text;
    if (d == "objective") {
      if (l.tokens.size() == 2 && l.tokens[1].text == "sp") v.objective = Objective::ShortestPath;
      else if (l.tokens.size() == 2 && l.tokens[1].text == "mp") v.objective = Objective::MeanPayoff;
      else rep.error(l, 1, "objective must be mp or sp");
      if (r) r->objective = v.objective;
    } else if (d == "decision") {
      yes_no(l, v.decision);
    } else if (d == "early_no") {
      yes_no(l, v.early_no);
    } else if (d == "nu_star" || d == "min_expected_cost") {
      ext(l, v.value);
    } else if (d == "synthesis") {
      std::string t = rest(l);
      bool ok = false;
      for (auto s : {SynthesisStatus::NotRequested, SynthesisStatus::Success,
                     SynthesisStatus::CapHit, SynthesisStatus::Infeasible}) {
        if (t == synthesis_tag(s)) { v.synthesis = s; ok = true; }
      }
      if (!ok) rep.error(l, 1, "unknown synthesis status");
    } else if (d == "parameters") {
      v.parameters = rest(l);
    } else if (d == "memory_size") {
      v.memory_size = std::stoull(rest(l));
    } else if (d == "report") {
      v.report.emplace();
      r = &*v.report;
      r->objective = v.objective;
    } else if (r && d == "worst_case") {
      ext(l, r->worst_case);
    } else if (r && d == "expectation") {
      ext(l, r->expectation);
    } else if (r && d == "worst_case_product") {
      size_pair(l, r->worst_case_product);
    } else if (r && d == "chain") {
      size_pair(l, r->chain);
    } else if (r && d == "pass_worst_case") {
      yes_no(l, r->pass_worst_case);
    } else if (r && d == "pass_expectation") {
      yes_no(l, r->pass_expectation);
    } else if (r && d == "note") {
      r->note = rest(l);
    } else {
      rep.error(l, 0, "unknown directive '" + std::string(d) + "'");
    }
  }
  rep.throw_if_failed();
  return v;
}

namespace {

std::string dot_escape(const std::string& s) {
  std::string r;
  for (char c : s) {
    if (c == '"' || c == '\\') r += '\\';
    r += c;
  }
  return r;
}

void dot_nodes(std::ostringstream& os, const GameGraph& g) {
  for (StateId s = 0; s < g.num_states(); ++s) {
    os << "  n" << s << " [label=\"" << dot_escape(g.state_name(s)) << "\", shape="
       << (g.owner(s) == Player::P1 ? "circle" : "box");
    if (g.is_target(s)) os << ", peripheries=2";
    os << "];\n";
  }
  if (g.has_initial()) os << "  init [shape=point];\n  init -> n" << g.initial() << ";\n";
}

}  // namespace

std::string to_dot(const GameGraph& g) {
  std::ostringstream os;
  os << "digraph \"" << dot_escape(g.name()) << "\" {\n";
  dot_nodes(os, g);
  for (const auto& e : g.edges())
    os << "  n" << e.src << " -> n" << e.dst << " [label=\"" << e.weight << "\"];\n";
  os << "}\n";
  return os.str();
}

std::string to_dot(const Mdp& p) {
  std::ostringstream os;
  os << "digraph \"" << dot_escape(p.graph.name()) << "\" {\n";
  dot_nodes(os, p.graph);
  for (EdgeId e = 0; e < p.graph.num_edges(); ++e) {
    const Edge& ed = p.graph.edge(e);
    os << "  n" << ed.src << " -> n" << ed.dst << " [label=\"" << ed.weight;
    if (p.stochastic(ed.src)) os << ";" << p.prob(e);
    os << "\"];\n";
  }
  os << "}\n";
  return os.str();
}

std::string to_dot(const MarkovChain& mc) {
  std::ostringstream os;
  os << "digraph \"" << dot_escape(mc.graph.name()) << "\" {\n";
  dot_nodes(os, mc.graph);
  for (StateId s = 0; s < mc.size(); ++s) {
    for (const auto& c : mc.delta[s]) {
      const Edge& ed = mc.graph.edge(c.edge);
      os << "  n" << ed.src << " -> n" << ed.dst << " [label=\"" << ed.weight << ";" << c.prob
         << "\"];\n";
    }
  }
  os << "}\n";
  return os.str();
}

const char* objective_tag(Objective o) { return o == Objective::MeanPayoff ? "mp" : "sp"; }

const char* synthesis_tag(SynthesisStatus s) {
  switch (s) {
    case SynthesisStatus::Success: return "ok";
    case SynthesisStatus::CapHit: return "cap_hit";
    case SynthesisStatus::Infeasible: return "infeasible";
    default: return "not_requested";
  }
}

}  // namespace bwc
