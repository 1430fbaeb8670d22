// Timing harness for the solver's round evaluation: the serial reference
// (workers = 1) against the parallel sweep on a growing family of toggle
// games. Wall times vary between runs; verdicts and sizes must not.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "pg/reductions.hpp"
#include "pg/solver.hpp"

using namespace pg;
using Clock = std::chrono::steady_clock;

namespace {

// Conjunction over `vars` variables with alternating ownership, all false.
// Doubling the variable count roughly squares the solve time, which makes
// the family a convenient ladder for timing.
G5Instance chain_instance(std::uint32_t vars) {
  G5Instance inst;
  for (std::uint32_t i = 0; i < vars; ++i)
    inst.vars.push_back({"x" + std::to_string(i), i % 2 == 1, false});
  auto chain = [&](auto&& self, std::uint32_t from) -> std::uint32_t {
    std::uint32_t node = std::uint32_t(inst.formula.size());
    inst.formula.emplace_back();
    if (from + 1 == vars) {
      inst.formula[node] = {G5Instance::Node::Kind::Lit, from, true, 0, 0};
    } else {
      std::uint32_t leaf = std::uint32_t(inst.formula.size());
      inst.formula.push_back({G5Instance::Node::Kind::Lit, from, true, 0, 0});
      std::uint32_t rest = self(self, from + 1);
      inst.formula[node] = {G5Instance::Node::Kind::And, 0, true, leaf, rest};
    }
    return node;
  };
  chain(chain, 0);
  return inst;
}

double best_of(int reps, const PetriGame& game, const SolveOptions& options,
               Verdict& out) {
  double best = 0.0;
  for (int r = 0; r < reps; ++r) {
    auto start = Clock::now();
    Verdict v = decide(game, options);
    std::chrono::duration<double, std::milli> took = Clock::now() - start;
    if (r == 0 || took.count() < best) best = took.count();
    out = std::move(v);
  }
  return best;
}

}  // namespace

int main(int argc, char** argv) {
  unsigned workers = std::max(2u, std::thread::hardware_concurrency());
  std::uint32_t min_vars = 4, max_vars = 9;
  int reps = 3;

  CLI::App app{"solver timing: serial reference against the parallel sweep"};
  app.add_option("--workers", workers, "parallel worker count")
      ->check(CLI::Range(2u, 256u));
  app.add_option("--max-vars", max_vars, "largest toggle instance")
      ->check(CLI::Range(2u, 12u));
  app.add_option("--reps", reps, "repetitions per measurement, best kept")
      ->check(CLI::Range(1, 20));
  CLI11_PARSE(app, argc, argv);
  if (min_vars > max_vars) min_vars = max_vars;

  std::printf("round evaluation: serial reference vs %u workers, best of %d\n\n",
              workers, reps);
  std::printf("  vars  markings  sat calls  serial ms  parallel ms  speedup\n");

  bool agree = true;
  for (std::uint32_t vars = min_vars; vars <= max_vars; ++vars) {
    PetriGame game = gen_g5(chain_instance(vars));
    Verdict serial, parallel;
    double serial_ms = best_of(reps, game, {SolveMode::Auto, 1}, serial);
    double parallel_ms = best_of(reps, game, {SolveMode::Auto, workers}, parallel);
    agree = agree && serial.winner == parallel.winner &&
            serial.stats.sat_calls == parallel.stats.sat_calls;
    std::printf("  %4u  %8llu  %9llu  %9.1f  %11.1f  %6.2fx\n", vars,
                (unsigned long long)serial.stats.reachable_markings,
                (unsigned long long)serial.stats.sat_calls, serial_ms,
                parallel_ms, parallel_ms > 0.0 ? serial_ms / parallel_ms : 0.0);
  }

  if (!agree) {
    std::fprintf(stderr, "error: serial and parallel runs disagree\n");
    return 2;
  }
  std::printf("\nverdicts and sat call counts agree across worker counts\n");
  return 0;
}
