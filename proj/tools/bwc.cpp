// bwc: command-line front end for the beyond-worst-case solvers.
//
// Exit codes: 0 yes, 1 no, 2 usage or parse error, 3 synthesis cap hit
// (decision yes).

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "bwc/bwc_mp.hpp"
#include "bwc/bwc_sp.hpp"
#include "bwc/instances.hpp"
#include "bwc/simulate.hpp"
#include "bwc/textio.hpp"
#include "bwc/verify.hpp"

namespace {

using namespace bwc;

constexpr int kYes = 0;
constexpr int kNo = 1;
constexpr int kUsage = 2;
constexpr int kCapHit = 3;

struct Output {
  bool json = false;
  bool color = false;

  // Key-value lines; a bare key opens a nested section for the rest.
  void emit(const std::string& text) const {
    if (!json) {
      std::istringstream in(text);
      std::string line;
      while (std::getline(in, line)) std::cout << paint(line) << "\n";
      return;
    }
    nlohmann::ordered_json root = nlohmann::ordered_json::object();
    nlohmann::ordered_json* cur = &root;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
      auto sp = line.find(' ');
      if (sp == std::string::npos) {
        root[line] = nlohmann::ordered_json::object();
        cur = &root[line];
        continue;
      }
      (*cur)[line.substr(0, sp)] = line.substr(sp + 1);
    }
    std::cout << root.dump(2) << "\n";
  }

  std::string paint(const std::string& line) const {
    if (!color) return line;
    if (line == "decision yes" || line.ends_with(" yes")) return "\033[32m" + line + "\033[0m";
    if (line == "decision no" || line.ends_with(" no")) return "\033[31m" + line + "\033[0m";
    return line;
  }
};

Rational parse_q(const std::string& s, const char* flag) {
  auto r = Rational::parse(s);
  if (!r) throw std::invalid_argument(std::string("malformed rational for ") + flag + ": " + s);
  return *r;
}

Objective parse_objective(const std::string& s) {
  if (s == "mp") return Objective::MeanPayoff;
  if (s == "sp") return Objective::ShortestPath;
  throw std::invalid_argument("objective must be mp or sp");
}

void add_targets(GameGraph& g, const std::vector<std::string>& names) {
  for (const auto& n : names) {
    auto s = g.find_state(n);
    if (!s) throw std::invalid_argument("unknown target state " + n);
    if (!g.is_target(*s)) g.add_target(*s);
  }
}

std::string write_strategy(const GameGraph& g, const Machine& m, const std::string& path) {
  TableMachine t = materialize(g, m, Player::P1);
  t.set_name("strategy");
  write_file(path, serialize(t, g));
  return path;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Beyond-worst-case synthesis for mean-payoff and shortest-path games"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand
  Output out;
  const char* env = std::getenv("BWC_COLOR");
  out.color = env && std::string(env) == "1";
  unsigned jobs = 1;
  bool split = false;
  app.add_flag("--json", out.json, "Structured output mirroring the key-value report");
  app.add_option("--jobs", jobs, "Worker threads for simulation and (N, K) search")
      ->check(CLI::Range(1u, 256u));
  app.add_flag("--split-multiedges", split,
               "Route parallel edges through fresh states when reading games");

  // solve
  auto* solve = app.add_subcommand("solve", "Decide an instance and optionally synthesize");
  std::string inst_path, strategy_out, nu_s, mu_s;
  bool synthesize = false;
  SynthesisOptions sopt;
  std::uint32_t k_fixed = 0, n_fixed = 0, l_fixed = 0;
  solve->add_option("instance", inst_path, "Instance file (.bwci)")->required();
  solve->add_flag("--synthesize", synthesize, "Search for a witness strategy");
  solve->add_option("--strategy-out", strategy_out, "Write the strategy as a .bwcm table");
  solve->add_option("--k-max", sopt.k_max, "Largest K tried (mean-payoff)");
  solve->add_option("--n-max", sopt.n_max, "Largest N tried (mean-payoff)");
  solve->add_option("--k", k_fixed, "Try only this K");
  solve->add_option("--n", n_fixed, "Try only this N");
  solve->add_option("--l", l_fixed, "Use this L instead of the formula");
  solve->add_option("--nu", nu_s, "Override the expectation threshold");
  solve->add_option("--mu", mu_s, "Override the worst-case threshold");

  // verify / simulate share their inputs
  std::string game_path, model_path, strat_path, obj_s = "mp";
  std::vector<std::string> targets;
  std::string vmu = "0", vnu = "0";
  auto* verify = app.add_subcommand("verify", "Check a strategy exactly");
  for (auto* sc : {verify}) {
    sc->add_option("--game", game_path)->required();
    sc->add_option("--model", model_path)->required();
    sc->add_option("--strategy", strat_path)->required();
    sc->add_option("--objective", obj_s);
    sc->add_option("--target", targets, "Extra target state (repeatable)");
  }
  verify->add_option("--mu", vmu)->required();
  verify->add_option("--nu", vnu)->required();

  auto* simulate = app.add_subcommand("simulate", "Monte-Carlo estimate of a strategy");
  SimulationOptions simopt;
  simulate->add_option("--game", game_path)->required();
  simulate->add_option("--model", model_path)->required();
  simulate->add_option("--strategy", strat_path)->required();
  simulate->add_option("--objective", obj_s);
  simulate->add_option("--target", targets, "Extra target state (repeatable)");
  simulate->add_option("--runs", simopt.runs)->check(CLI::PositiveNumber);
  simulate->add_option("--seed", simopt.seed);
  simulate->add_option("--horizon", simopt.horizon)->check(CLI::PositiveNumber);

  // gen
  auto* gen = app.add_subcommand("gen", "Write a built-in or generated instance");
  std::string gen_name, out_dir, stem, sizes_s, gen_obj = "mp";
  Weight gx = 10, gmu = 13, gl = 0, gmaxw = 3;
  std::uint64_t gk = 1, gseed = 0;
  std::uint32_t gstates = 4;
  double gdensity = 0.5;
  gen->add_option("name", gen_name, "fig1 fig2 fig3 fig4 fig5 fig6 fig7 kth random")->required();
  gen->add_option("--out", out_dir, "Output directory")->required();
  gen->add_option("--stem", stem, "File stem (default: instance name)");
  gen->add_option("--x", gx, "fig6 parameter X");
  gen->add_option("--mu", gmu, "fig7 threshold (13 + 4k)");
  gen->add_option("--sizes", sizes_s, "kth: comma-separated element sizes");
  gen->add_option("--k", gk, "kth: number of subsets");
  gen->add_option("--l", gl, "kth: size bound");
  gen->add_option("--seed", gseed, "random: seed");
  gen->add_option("--states", gstates, "random: number of states");
  gen->add_option("--max-weight", gmaxw, "random: largest |weight|");
  gen->add_option("--density", gdensity, "random: edge probability");
  gen->add_option("--objective", gen_obj, "random: mp or sp");

  auto* approx = app.add_subcommand("approx-nu", "Approximate the best expectation threshold");
  std::string eps_s = "1/100";
  approx->add_option("instance", inst_path)->required();
  approx->add_option("--eps", eps_s);

  auto* dot = app.add_subcommand("export-dot", "Graphviz rendering of a game or instance");
  std::string dot_path;
  dot->add_option("file", dot_path, ".bwcg or .bwci file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kUsage;
  }

  ParseOptions popt;
  popt.split_multiedges = split;
  try {
    if (*solve) {
      popt.file = inst_path;
      BwcInstance inst = load_instance(inst_path, popt);
      if (!nu_s.empty()) inst.nu = parse_q(nu_s, "--nu");
      if (!mu_s.empty()) inst.mu = parse_q(mu_s, "--mu");
      sopt.jobs = jobs;
      if (k_fixed) sopt.k_fixed = k_fixed;
      if (n_fixed) sopt.n_fixed = n_fixed;
      if (l_fixed) sopt.l_override = l_fixed;
      Verdict v;
      std::shared_ptr<const Machine> strategy;
      if (inst.objective == Objective::MeanPayoff) {
        auto r = solve_mp(inst, synthesize || !strategy_out.empty(), sopt);
        v = r.verdict;
        strategy = r.strategy;
      } else {
        auto r = sp_decide_and_synthesize(inst, synthesize || !strategy_out.empty());
        v = r.verdict;
        strategy = r.strategy;
      }
      out.emit(serialize(v));
      if (strategy && !strategy_out.empty()) {
        try {
          write_strategy(inst.game, *strategy, strategy_out);
        } catch (const std::length_error& e) {
          std::cerr << "warning: strategy not written: " << e.what() << "\n";
        }
      }
      if (!v.decision) return kNo;
      return v.synthesis == SynthesisStatus::CapHit ? kCapHit : kYes;
    }

    if (*verify || *simulate) {
      popt.file = game_path;
      GameGraph g = load_game(game_path, popt);
      add_targets(g, targets);
      popt.file = model_path;
      TableMachine model = load_machine(model_path, g, popt);
      popt.file = strat_path;
      TableMachine strat = load_machine(strat_path, g, popt);
      Objective obj = parse_objective(obj_s);
      if (*verify) {
        Rational mu = parse_q(vmu, "--mu"), nu = parse_q(vnu, "--nu");
        auto r = obj == Objective::MeanPayoff ? verify_mp(g, strat, model, mu, nu)
                                              : verify_sp(g, strat, model, mu, nu);
        out.emit("objective " + std::string(objective_tag(obj)) + "\n" + serialize(r));
        return r.passed() ? kYes : kNo;
      }
      simopt.objective = obj;
      simopt.jobs = jobs;
      auto r = bwc::simulate(g, strat, model, simopt);
      std::ostringstream os;
      os.precision(10);
      os << "objective " << objective_tag(obj) << "\n"
         << "rng mt19937_64/xor-run-index/v1\n"
         << "seed " << simopt.seed << "\n"
         << "runs " << r.runs << "\n"
         << "horizon " << r.horizon << "\n"
         << "mean " << r.mean << "\n"
         << "sd " << r.sd << "\n"
         << "standard_error " << r.standard_error() << "\n"
         << "truncated " << r.truncated << "\n";
      out.emit(os.str());
      return kYes;
    }

    if (*gen) {
      BwcInstance inst;
      std::optional<TableMachine> extra;  // accompanying strategy file
      if (gen_name == "fig6") {
        inst = gen_fig6(gx);
      } else if (gen_name == "fig7") {
        inst = gen_sp_family(gmu);
      } else if (gen_name == "kth") {
        KthSubsetInstance k;
        std::istringstream in(sizes_s);
        std::string tok;
        while (std::getline(in, tok, ',')) k.sizes.push_back(std::stoll(tok));
        k.K = gk;
        k.L = gl;
        inst = reduce_kth_subset(k);
      } else if (gen_name == "random") {
        RandomSpec spec;
        spec.seed = gseed;
        spec.states = gstates;
        spec.max_weight = gmaxw;
        spec.density = gdensity;
        spec.objective = parse_objective(gen_obj);
        inst = gen_random(spec);
      } else {
        inst = builtin(gen_name);
        if (gen_name == "fig1") extra = fig1_train_then_bicycle(inst);
        if (gen_name == "fig4") extra = fig4_combined_strategy(inst);
      }
      if (stem.empty()) stem = inst.name;
      std::filesystem::create_directories(out_dir);
      save_instance(inst, out_dir, stem);
      std::ostringstream os;
      os << "game " << (std::filesystem::path(out_dir) / (stem + ".bwcg")).string() << "\n"
         << "model " << (std::filesystem::path(out_dir) / (stem + ".bwcm")).string() << "\n"
         << "instance " << (std::filesystem::path(out_dir) / (stem + ".bwci")).string() << "\n";
      if (extra) {
        auto p = (std::filesystem::path(out_dir) / (stem + "_strategy.bwcm")).string();
        write_file(p, serialize(*extra, inst.game));
        os << "strategy " << p << "\n";
      }
      out.emit(os.str());
      return kYes;
    }

    if (*approx) {
      popt.file = inst_path;
      BwcInstance inst = load_instance(inst_path, popt);
      Rational eps = parse_q(eps_s, "--eps");
      Rational v = approx_optimal_nu(inst, eps);
      out.emit("eps " + eps.str() + "\nnu_hat " + v.str() + "\n");
      return kYes;
    }

    if (*dot) {
      popt.file = dot_path;
      if (dot_path.ends_with(".bwci")) {
        BwcInstance inst = load_instance(dot_path, popt);
        if (inst.model.memoryless()) std::cout << to_dot(fix_player2(inst.game, inst.model));
        else std::cout << to_dot(inst.game);
      } else {
        std::cout << to_dot(load_game(dot_path, popt));
      }
      return kYes;
    }
  } catch (const ParseError& e) {
    for (const auto& d : e.diagnostics()) std::cerr << d.str() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
