// lgo: benchmark runner, class generator and single-problem solver.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lgo/bench.hpp"
#include "lgo/errors.hpp"
#include "lgo/gkls.hpp"
#include "lgo/objective.hpp"
#include "lgo/result.hpp"

namespace {

using namespace lgo;

std::vector<std::string> split_csv(const std::string& joined) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : joined) {
    if (c == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

struct BuiltinProblem {
  std::function<double(std::span<const double>)> fn;
  BoxDomain domain;
  double lipschitz = 0.0;  // usable a-priori constant, 0 when unknown
};

// Small catalogue of classic closed-form test problems.
std::map<std::string, BuiltinProblem> builtin_problems() {
  std::map<std::string, BuiltinProblem> out;
  out.emplace("parabola-1d",
              BuiltinProblem{[](std::span<const double> x) {
                               return (x[0] - 0.3) * (x[0] - 0.3);
                             },
                             BoxDomain({0.0}, {1.0}), 1.4});
  // f(x) = sin x + sin(10x/3), the usual univariate multiextremal probe
  out.emplace("sines-1d",
              BuiltinProblem{[](std::span<const double> x) {
                               return std::sin(x[0]) +
                                      std::sin(10.0 * x[0] / 3.0);
                             },
                             BoxDomain({2.7}, {7.5}), 4.34});
  out.emplace("parabola-2d",
              BuiltinProblem{[](std::span<const double> x) {
                               const double dx = x[0] - 0.3;
                               const double dy = x[1] + 0.4;
                               return dx * dx + dy * dy;
                             },
                             BoxDomain({-1.0, -1.0}, {1.0, 1.0}), 0.0});
  // six-hump camel on its usual box
  out.emplace("camel-2d",
              BuiltinProblem{[](std::span<const double> x) {
                               const double a = x[0], b = x[1];
                               return (4.0 - 2.1 * a * a +
                                       a * a * a * a / 3.0) *
                                          a * a +
                                      a * b + (-4.0 + 4.0 * b * b) * b * b;
                             },
                             BoxDomain({-3.0, -2.0}, {3.0, 2.0}), 0.0});
  return out;
}

int cmd_bench_run(const std::string& methods_csv, const std::string& manifest,
                  double delta, std::uint64_t cap, const std::string& out_dir,
                  unsigned jobs, double lipschitz) {
  GklsClass klass = load_manifest(manifest);

  BenchConfig config;
  config.methods = split_csv(methods_csv);
  config.class_id = std::filesystem::path(manifest).stem().string();
  config.delta = delta;
  config.cap = cap;
  config.jobs = jobs;
  config.params.a_priori_L = lipschitz;
  std::vector<BenchmarkRecord> records = run_benchmark(klass, config);

  ReportMeta meta{config.class_id, klass.spec.dimension, delta, cap};
  emit_report(records, meta, out_dir);

  std::map<std::string, std::vector<BenchmarkRecord>> by_method;
  for (const BenchmarkRecord& r : records) by_method[r.method].push_back(r);
  for (const std::string& m : config.methods) {
    const auto& recs = by_method[m];
    if (recs.size() == 100) {
      PercentileColumns cols = percentile_columns(recs);
      std::printf("%-14s trials 50%%: %-12s 100%%: %s\n", m.c_str(),
                  format_percentile(cols.trials_p50, cols.unsolved).c_str(),
                  format_percentile(cols.trials_p100, cols.unsolved).c_str());
    } else {
      std::uint64_t solved = 0;
      for (const BenchmarkRecord& r : recs) solved += r.hit ? 1 : 0;
      std::printf("%-14s solved %llu/%zu\n", m.c_str(),
                  static_cast<unsigned long long>(solved), recs.size());
    }
  }
  std::printf("report written to %s\n", out_dir.c_str());
  return 0;
}

int cmd_gkls_dump(std::size_t n, std::size_t m, const std::string& preset,
                  std::uint64_t seed) {
  GklsPreset p;
  if (preset == "simple") {
    p = GklsPreset::Simple;
  } else if (preset == "hard") {
    p = GklsPreset::Hard;
  } else {
    throw InputError("--preset must be simple or hard");
  }
  GklsClassSpec spec = GklsClassSpec::preset(n, p, seed, m);
  std::vector<GklsFunction> functions = generate_class(spec);
  write_manifest(std::cout, spec, functions);
  return 0;
}

int cmd_solve(const std::string& method, const std::string& problem,
              std::uint64_t budget, double lipschitz) {
  std::function<double(std::span<const double>)> fn;
  std::optional<BoxDomain> domain;
  double builtin_l = 0.0;

  const std::size_t colon = problem.rfind(':');
  const auto builtins = builtin_problems();
  if (auto it = builtins.find(problem); it != builtins.end()) {
    fn = it->second.fn;
    domain = it->second.domain;
    builtin_l = it->second.lipschitz;
  } else if (colon != std::string::npos && colon + 1 < problem.size()) {
    const std::string path = problem.substr(0, colon);
    const std::uint64_t index = std::stoull(problem.substr(colon + 1));
    GklsClass klass = load_manifest(path);
    if (index == 0 || index > klass.functions.size())
      throw InputError("manifest holds functions 1.." +
                       std::to_string(klass.functions.size()));
    auto shared = std::make_shared<GklsFunction>(
        std::move(klass.functions[index - 1]));
    fn = [shared](std::span<const double> x) { return shared->value(x); };
    domain = shared->domain();
  } else {
    std::string names;
    for (const auto& [name, unused] : builtins) names += " " + name;
    throw InputError("unknown problem '" + problem +
                     "'; use manifest:idx or one of:" + names);
  }

  MethodParams params;
  params.a_priori_L = lipschitz > 0.0 ? lipschitz : builtin_l;
  Objective objective(fn, budget);
  SolverResult result =
      run_method(method, params, objective, *domain, StoppingCriteria{budget, {}, {}});

  std::printf("method: %s\n", method.c_str());
  std::printf("status: %s\n", to_string(result.status));
  std::printf("trials: %llu\n",
              static_cast<unsigned long long>(result.trials_used));
  std::printf("hyperintervals: %llu\n",
              static_cast<unsigned long long>(result.hyperintervals_generated));
  std::printf("best value: %.17g\n", result.best_value);
  std::printf("best point:");
  for (double c : result.best_point) std::printf(" %.17g", c);
  std::printf("\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lipschitz global optimization toolkit"};
  app.require_subcommand(1);

  auto* bench = app.add_subcommand("bench", "benchmark harness");
  bench->require_subcommand(1);
  auto* bench_run = bench->add_subcommand("run", "run methods over a class");
  std::string methods, manifest, out_dir;
  double delta = 0.0;
  std::uint64_t cap = 0;
  unsigned jobs = 1;
  double lipschitz = 0.0;
  bench_run->add_option("--methods", methods, "comma-separated method names")
      ->required();
  bench_run->add_option("--class", manifest, "class manifest file")
      ->required();
  bench_run->add_option("--delta", delta, "accuracy coefficient in (0,1]")
      ->required();
  bench_run->add_option("--cap", cap, "trial budget per run")->required();
  bench_run->add_option("--out", out_dir, "report output directory")
      ->required();
  bench_run->add_option("--jobs", jobs, "parallel workers (default 1)");
  bench_run->add_option("--lipschitz", lipschitz,
                        "a-priori constant for piyavskij");

  auto* gkls = app.add_subcommand("gkls", "test class generation");
  gkls->require_subcommand(1);
  auto* gkls_dump = gkls->add_subcommand("dump", "write a class manifest");
  std::size_t n = 0, m = 10;
  std::string preset;
  std::uint64_t seed = 0;
  gkls_dump->add_option("--n", n, "dimension (2..5)")->required();
  gkls_dump->add_option("--m", m, "minima per function (default 10)");
  gkls_dump->add_option("--preset", preset, "simple or hard")->required();
  gkls_dump->add_option("--seed", seed, "class seed")->required();

  auto* solve = app.add_subcommand("solve", "run one method on one problem");
  std::string method, problem;
  std::uint64_t budget = 0;
  solve->add_option("--method", method, "method name")->required();
  solve->add_option("--problem", problem, "builtin name or manifest:idx")
      ->required();
  solve->add_option("--budget", budget, "trial budget")->required();
  solve->add_option("--lipschitz", lipschitz,
                    "a-priori constant for piyavskij");

  CLI11_PARSE(app, argc, argv);

  try {
    if (bench_run->parsed())
      return cmd_bench_run(methods, manifest, delta, cap, out_dir, jobs,
                           lipschitz);
    if (gkls_dump->parsed()) return cmd_gkls_dump(n, m, preset, seed);
    if (solve->parsed()) return cmd_solve(method, problem, budget, lipschitz);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
