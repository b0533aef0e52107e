#include "bwc/simulate.hpp"

#include <cmath>
#include <random>
#include <thread>

#include "bwc/product.hpp"
#include "bwc/verify.hpp"

namespace bwc {

namespace {

struct Step {
  std::uint64_t threshold;  // draw < threshold selects this step
  std::uint32_t to;
  Weight weight;
};

struct FlatChain {
  std::vector<std::uint32_t> first;  // CSR offsets
  std::vector<Step> steps;
  std::vector<char> target;
};

std::uint64_t scaled(const Rational& cum) {
  mpz_class v = (cum.num() << 64) / cum.den();
  if (v >= (mpz_class(1) << 64)) return UINT64_MAX;
  return std::stoull(v.get_str());
}

FlatChain flatten(const MarkovChain& mc, const GameGraph& g) {
  FlatChain f;
  f.first.push_back(0);
  for (StateId s = 0; s < mc.size(); ++s) {
    Rational cum;
    const auto& d = mc.delta[s];
    for (std::size_t i = 0; i < d.size(); ++i) {
      cum += d[i].prob;
      const Edge& e = mc.graph.edge(d[i].edge);
      f.steps.push_back({i + 1 == d.size() ? UINT64_MAX : scaled(cum), e.dst, e.weight});
    }
    f.first.push_back(static_cast<std::uint32_t>(f.steps.size()));
    f.target.push_back(g.is_target(mc.state_of[s]));
  }
  return f;
}

}  // namespace

double SimulationResult::standard_error() const {
  return runs ? sd / std::sqrt(static_cast<double>(runs)) : 0.0;
}

SimulationResult simulate(const GameGraph& g, const Machine& strategy, const Machine& model,
                          const SimulationOptions& opt) {
  const bool sp = opt.objective == Objective::ShortestPath;
  TargetPadded s1(g, strategy), s2(g, model);
  auto mc = sp ? fix_both(g, s1, s2) : fix_both(g, strategy, model);
  auto flat = flatten(mc, g);
  const std::uint32_t start = mc.graph.initial();

  std::vector<double> value(opt.runs);
  std::vector<char> cut(opt.runs, 0);
  auto run_range = [&](std::size_t lo, std::size_t hi) {
    for (std::size_t r = lo; r < hi; ++r) {
      std::mt19937_64 rng(opt.seed ^ static_cast<std::uint64_t>(r));
      std::uint32_t u = start;
      std::int64_t sum = 0;
      std::size_t t = 0;
      for (; t < opt.horizon; ++t) {
        if (sp && flat.target[u]) break;
        std::uint64_t x = flat.first[u + 1] - flat.first[u] > 1 ? rng() : 0;
        std::uint32_t i = flat.first[u];
        while (x >= flat.steps[i].threshold) ++i;
        sum += flat.steps[i].weight;
        u = flat.steps[i].to;
      }
      if (sp) {
        value[r] = static_cast<double>(sum);
        cut[r] = !flat.target[u];
      } else {
        value[r] = static_cast<double>(sum) / static_cast<double>(opt.horizon);
      }
    }
  };
  unsigned jobs = std::max(1u, opt.jobs);
  if (jobs == 1 || opt.runs < 2 * jobs) {
    run_range(0, opt.runs);
  } else {
    std::vector<std::thread> pool;
    std::size_t chunk = (opt.runs + jobs - 1) / jobs;
    for (unsigned j = 0; j < jobs; ++j) {
      std::size_t lo = j * chunk, hi = std::min(opt.runs, lo + chunk);
      if (lo < hi) pool.emplace_back(run_range, lo, hi);
    }
    for (auto& th : pool) th.join();
  }

  SimulationResult res;
  res.runs = opt.runs;
  res.horizon = opt.horizon;
  long double sum = 0;
  for (std::size_t r = 0; r < opt.runs; ++r) {
    sum += value[r];
    res.truncated += cut[r];
  }
  long double mean = opt.runs ? sum / opt.runs : 0;
  long double ss = 0;
  for (double v : value) ss += (v - mean) * (v - mean);
  res.mean = static_cast<double>(mean);
  res.sd = opt.runs > 1 ? static_cast<double>(std::sqrt(ss / (opt.runs - 1))) : 0.0;
  return res;
}

}  // namespace bwc
