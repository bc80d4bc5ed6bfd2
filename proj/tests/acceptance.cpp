// Acceptance suite: one self-contained check per criterion, one pass/fail
// line each. Run with --only N to restrict to a single criterion.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "lgo/bench.hpp"
#include "lgo/diagonal.hpp"
#include "lgo/direct.hpp"
#include "lgo/domain.hpp"
#include "lgo/errors.hpp"
#include "lgo/gkls.hpp"
#include "lgo/minorant.hpp"
#include "lgo/nondominance.hpp"
#include "lgo/objective.hpp"
#include "oracles.hpp"

namespace {

using namespace lgo;
namespace fs = std::filesystem;

struct CheckFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require(bool ok, const std::string& what) {
  if (!ok) throw CheckFailure(what);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  require(in.good(), "cannot open " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ---------------------------------------------------------------------------
// 1. Minorant soundness on random max-of-cones functions.

void criterion_1() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> pos(0.0, 1.0);
  for (int fn = 0; fn < 100; ++fn) {
    const std::size_t n = 1 + fn % 3;
    oracles::ConeField field = oracles::make_cone_field(rng, n, 12, 3.0);
    std::vector<Trial> trials;
    for (int i = 0; i < 10; ++i) {
      Trial t;
      t.point.resize(n);
      for (double& c : t.point) c = pos(rng);
      t.value = field(t.point);
      trials.push_back(std::move(t));
    }
    std::vector<double> x(n);
    for (int s = 0; s < 10000; ++s) {
      for (double& c : x) c = pos(rng);
      const double lower = minorant_value(trials, field.L, x);
      require(lower <= field(x) + 1e-12,
              "minorant exceeds the function it bounds");
    }
  }
  require(seconds_since(t0) < 5.0, "criterion 1 exceeded its runtime budget");
}

// ---------------------------------------------------------------------------
// 2. Potentially-optimal selection equals the brute-force constant sweep on
// random lattice instances realisable as genuine rectangles.

void criterion_2() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(4242);
  const double eps = 1e-4;

  for (int inst = 0; inst < 1000; ++inst) {
    const std::size_t count = 1 + rng() % 20;
    std::vector<int> level(count);
    for (auto& l : level) l = static_cast<int>(rng() % 3);

    // per-level base values on a quarter-integer lattice, resampled until no
    // three group minima are collinear (a collinear middle vertex is only
    // reachable at one exact constant, which no finite sweep can hit)
    std::array<long, 3> base_n{};
    std::array<bool, 3> present{};
    for (auto l : level) present[static_cast<std::size_t>(l)] = true;
    while (true) {
      for (int l = 0; l < 3; ++l) base_n[l] = 12 + static_cast<long>(rng() % 21);
      if (present[0] && present[1] && present[2] &&
          4 * base_n[1] == 3 * base_n[2] + base_n[0])
        continue;  // d ascends as the level drops: l=2 small, l=0 large
      break;
    }

    std::array<bool, 3> base_used{};
    std::vector<double> f(count);
    for (std::size_t i = 0; i < count; ++i) {
      const int l = level[i];
      const double base = 0.25 * static_cast<double>(base_n[l]);
      if (!base_used[l]) {
        base_used[l] = true;
        f[i] = base;
      } else {
        f[i] = (rng() % 2 == 0) ? base
                                : base + 0.5 * static_cast<double>(1 + rng() % 6);
      }
    }

    std::vector<CenterRect> rects;
    std::vector<MeasurePoint> points;
    std::vector<double> d(count);
    for (std::size_t i = 0; i < count; ++i) {
      const int l = level[i];
      const std::uint64_t slots = l == 0 ? 1 : (l == 1 ? 3 : 9);
      const double center = (static_cast<double>(rng() % slots) + 0.5) /
                            static_cast<double>(slots);
      rects.emplace_back(std::vector<double>{center},
                         std::vector<std::uint16_t>{
                             static_cast<std::uint16_t>(l)},
                         f[i], DirectVariant::Direct);
      d[i] = rects.back().measure();
      points.push_back({d[i], f[i]});
    }
    const double f_min = *std::min_element(f.begin(), f.end());

    const auto via_rects = potentially_optimal(rects, f_min, eps);
    const auto via_points = nondominated_select(points, f_min, eps);
    const auto want = oracles::kgrid_select(d, f, f_min, eps);
    require(via_rects == want,
            "potentially_optimal disagrees with the constant sweep");
    require(via_points == want,
            "nondominated_select disagrees with the constant sweep");
  }
  require(seconds_since(t0) < 30.0,
          "criterion 2 exceeded its runtime budget");
}

// ---------------------------------------------------------------------------
// 3. Diagonal partitions tile the domain exactly; vertex sharing reaches
// incidence 3 without ever exceeding 2^N.

oracles::Rational3 cell_volume(const DiagCell& cell) {
  oracles::Rational3 v = oracles::rat3(1, 0);
  for (const GridCoord& w : cell.widths())
    v = oracles::rat3_mul(v, oracles::rat3(w.num, w.depth));
  return v;
}

void criterion_3() {
  const auto t0 = std::chrono::steady_clock::now();

  std::mt19937_64 rng(33);
  for (int seq = 0; seq < 10000; ++seq) {
    const std::size_t n = 1 + seq % 3;
    const BoxDomain domain = BoxDomain::unit_cube(n);
    VertexStore store;
    auto eval = [&](const ExactVertex& v) {
      double s = 0.0;
      for (std::size_t j = 0; j < n; ++j) s += v.unit(j);
      return s;
    };
    const ExactVertex a = ExactVertex::domain_corner(n, false);
    const ExactVertex b = ExactVertex::domain_corner(n, true);
    std::vector<DiagCell> leaves;
    leaves.emplace_back(a, b, store.fetch(a, eval), store.fetch(b, eval),
                        domain);

    const int steps = 3 + static_cast<int>(rng() % 6);
    for (int step = 0; step < steps; ++step) {
      const std::size_t pick = rng() % leaves.size();
      DiagTrisection tri = trisect_diagonal(leaves[pick], domain, store, eval);
      leaves.erase(leaves.begin() + static_cast<std::ptrdiff_t>(pick));
      for (DiagCell& c : tri.children) leaves.push_back(std::move(c));

      oracles::Rational3 total = oracles::rat3(0, 0);
      for (const DiagCell& c : leaves)
        total = oracles::rat3_add(total, cell_volume(c));
      require(oracles::rat3_eq(total, oracles::rat3(1, 0)),
              "leaf volumes do not sum to the domain volume exactly");
    }
  }

  // dense 2-D run: replay the partition trace and count live cells sharing
  // each diagonal endpoint
  Objective obj([](std::span<const double> x) {
    return std::sin(5.0 * x[0]) * std::cos(3.0 * x[1]) +
           0.1 * (x[0] * x[0] + x[1] * x[1]);
  });
  std::ostringstream trace;
  DiagParams params;
  params.partition_trace = &trace;
  solve_multidim_diagonal(obj, BoxDomain::unit_cube(2), params,
                          StoppingCriteria{300, {}, {}});

  struct Line {
    std::string a0, a1, b0, b1;
  };
  std::map<std::uint64_t, Line> live;
  std::istringstream in(trace.str());
  std::uint64_t id = 0, parent = 0;
  Line ln;
  std::string za, zb;
  while (in >> id >> parent >> ln.a0 >> ln.a1 >> ln.b0 >> ln.b1 >> za >> zb) {
    if (id != parent) live.erase(parent);
    live[id] = ln;
  }
  require(!live.empty(), "empty partition trace");

  std::map<std::string, int> incidence;
  for (const auto& [cid, cell] : live) {
    incidence[cell.a0 + " " + cell.a1] += 1;
    incidence[cell.b0 + " " + cell.b1] += 1;
  }
  int peak = 0;
  for (const auto& [key, count] : incidence) peak = std::max(peak, count);
  require(peak >= 3, "no vertex reaches incidence 3 in the dense run");
  require(peak <= 4, "vertex incidence exceeds 2^N");

  require(seconds_since(t0) < 10.0,
          "criterion 3 exceeded its runtime budget");
}

// ---------------------------------------------------------------------------
// 4. Generated functions carry exactly the minima they claim.

void criterion_4() {
  GklsClassSpec spec = GklsClassSpec::preset(2, GklsPreset::Simple, 909);
  spec.num_minima = 4;
  std::mt19937_64 rng(44);
  std::uniform_real_distribution<double> coord(-0.98, 0.98);

  for (std::uint64_t index = 1; index <= 10; ++index) {
    const auto t0 = std::chrono::steady_clock::now();
    GklsFunction fn = generate_function(spec, index);

    const auto found = oracles::multistart_minima(fn, 40, 1e-3);
    require(found.size() == 4, "multistart count differs from num_minima");
    for (const auto& p : found) {
      bool matched = false;
      for (const GklsMinimum& m : fn.minima()) {
        const double dist = std::hypot(p[0] - m.location[0],
                                       p[1] - m.location[1]);
        if (dist <= 1e-3) matched = true;
      }
      require(matched, "multistart found a minimum the record lacks");
    }
    for (const GklsMinimum& m : fn.minima()) {
      bool matched = false;
      for (const auto& p : found) {
        const double dist = std::hypot(p[0] - m.location[0],
                                       p[1] - m.location[1]);
        if (dist <= 1e-3) matched = true;
      }
      require(matched, "a recorded minimum was not found by multistart");
    }

    const BoxDomain& dom = fn.domain();
    for (int i = 0; i < 500; ++i) {
      for (int j = 0; j < 500; ++j) {
        std::vector<double> x{dom.lower(0) + dom.width(0) * i / 499.0,
                              dom.lower(1) + dom.width(1) * j / 499.0};
        require(fn.value(x) >= spec.global_value - 1e-9,
                "grid point below the designed global value");
      }
    }

    for (int s = 0; s < 1000; ++s) {
      std::vector<double> x{coord(rng), coord(rng)};
      const std::vector<double> g = fn.gradient(x);
      const std::vector<double> fd = oracles::central_difference_gradient(
          [&](std::span<const double> p) { return fn.value(p); }, x);
      for (std::size_t j = 0; j < 2; ++j)
        require(std::abs(g[j] - fd[j]) < 1e-4,
                "gradient disagrees with finite differences");
    }
    require(seconds_since(t0) < 60.0,
            "criterion 4 exceeded its per-function runtime budget");
  }
}

// ---------------------------------------------------------------------------
// 5. The hit protocol is the per-axis scaled-box formula.

void criterion_5() {
  std::mt19937_64 rng(55);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 10000; ++trial) {
    const std::size_t n = 1 + trial % 3;
    std::vector<double> lo(n), hi(n), xs(n), x(n);
    for (std::size_t j = 0; j < n; ++j) {
      lo[j] = -2.0 + 4.0 * unit(rng);
      hi[j] = lo[j] + 0.5 + 4.0 * unit(rng);
    }
    BoxDomain domain(lo, hi);
    const double delta = std::pow(10.0, -6.0 * unit(rng));
    const double factor = std::pow(delta, 1.0 / static_cast<double>(n));
    for (std::size_t j = 0; j < n; ++j) {
      xs[j] = lo[j] + domain.width(j) * unit(rng);
      // offsets clustered around the threshold to probe both sides
      const double scale = 0.8 + 0.4 * unit(rng);
      double off = factor * domain.width(j) * scale;
      if (rng() % 4 == 0) off = factor * domain.width(j);  // exactly on it
      x[j] = xs[j] + (rng() % 2 == 0 ? off : -off);
    }
    bool formula = true;
    for (std::size_t j = 0; j < n; ++j)
      if (!(std::abs(x[j] - xs[j]) <= factor * domain.width(j)))
        formula = false;
    require(hit_check(x, xs, delta, domain) == formula,
            "hit_check deviates from the protocol formula");
  }

  // published 2-D coefficient: delta = 1e-4 scales the box by exactly 1e-2
  const double factor = std::pow(preset_delta(2), 0.5);
  require(std::abs(factor - 0.01) <= 1e-17, "2-D tolerance factor is not 0.01");
  BoxDomain square({0.0, 0.0}, {10.0, 10.0});
  require(hit_check(std::vector{5.0999, 5.0}, std::vector{5.0, 5.0},
                    preset_delta(2), square),
          "a point inside the 0.01-scaled box must hit");
  require(!hit_check(std::vector{5.1001, 5.0}, std::vector{5.0, 5.0},
                     preset_delta(2), square),
          "a point outside the 0.01-scaled box must miss");
}

// ---------------------------------------------------------------------------
// Shared benchmark runs for criteria 6-9.

struct ClassRun {
  GklsClass klass;
  std::vector<BenchmarkRecord> records;
};

BenchConfig standard_config(const std::string& class_id) {
  BenchConfig config;
  config.methods = {"direct", "direct-l", "diag-new"};
  config.class_id = class_id;
  config.delta = 1e-4;
  config.cap = 1000000;
  config.jobs = 4;
  return config;
}

ClassRun run_class(GklsPreset preset, const std::string& class_id) {
  GklsClassSpec spec = GklsClassSpec::preset(2, preset, 424242);
  ClassRun run;
  run.klass.spec = spec;
  run.klass.functions = generate_class(spec);
  run.records = run_benchmark(run.klass, standard_config(class_id));
  return run;
}

const ClassRun& simple_run() {
  static const ClassRun run = run_class(GklsPreset::Simple, "simple");
  return run;
}

const ClassRun& hard_run() {
  static const ClassRun run = run_class(GklsPreset::Hard, "hard");
  return run;
}

std::span<const BenchmarkRecord> method_slice(
    std::span<const BenchmarkRecord> records, const std::string& method) {
  std::size_t begin = records.size(), end = 0;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (records[i].method != method) continue;
    begin = std::min(begin, i);
    end = i + 1;
  }
  require(begin < end && end - begin == 100,
          "expected a contiguous block of 100 records for " + method);
  return records.subspan(begin, end - begin);
}

// ---------------------------------------------------------------------------
// 6. Simple-class ranking and bands.

void criterion_6() {
  const auto t0 = std::chrono::steady_clock::now();
  const ClassRun& run = simple_run();

  std::map<std::string, PercentileColumns> cols;
  for (const std::string& m : {"direct", "direct-l", "diag-new"}) {
    auto slice = method_slice(run.records, m);
    for (const BenchmarkRecord& r : slice)
      require(r.hit, m + " failed to solve function " +
                         std::to_string(r.function_index));
    cols[m] = percentile_columns(slice);
    require(cols[m].unsolved == 0, m + " reports unsolved functions");
  }

  const std::uint64_t direct = cols["direct"].trials_p100.value;
  const std::uint64_t directl = cols["direct-l"].trials_p100.value;
  const std::uint64_t diag = cols["diag-new"].trials_p100.value;
  require(diag < direct, "diagonal worst case must beat DIRECT");
  require(diag < directl, "diagonal worst case must beat DIRECT-l");

  auto within = [](std::uint64_t got, double published) {
    return static_cast<double>(got) >= published / 5.0 &&
           static_cast<double>(got) <= published * 5.0;
  };
  require(within(direct, 1159.0), "DIRECT worst case outside its band");
  require(within(directl, 2318.0), "DIRECT-l worst case outside its band");
  require(within(diag, 403.0), "diagonal worst case outside its band");

  require(seconds_since(t0) < 600.0,
          "criterion 6 exceeded its runtime budget");
}

// ---------------------------------------------------------------------------
// 7. Hard-class ranking.

void criterion_7() {
  const ClassRun& run = hard_run();
  std::map<std::string, std::uint64_t> p100;
  for (const std::string& m : {"direct", "direct-l", "diag-new"}) {
    auto cols = percentile_columns(method_slice(run.records, m));
    p100[m] = cols.trials_p100.value;
    if (m == "diag-new")
      require(cols.unsolved == 0, "diagonal must solve the whole hard class");
  }
  require(p100["diag-new"] < p100["direct"],
          "diagonal worst case must beat DIRECT on the hard class");
  require(p100["diag-new"] < p100["direct-l"],
          "diagonal worst case must beat DIRECT-l on the hard class");
}

// ---------------------------------------------------------------------------
// 8. Operating characteristics: integrity of the emitted curves plus the
// qualitative ordering at the budget where the diagonal method solves all.

void criterion_8() {
  const ClassRun& run = hard_run();

  std::uint64_t k_star = 0;
  for (const BenchmarkRecord& r : method_slice(run.records, "diag-new")) {
    require(r.hit, "diagonal must solve the whole hard class");
    k_star = std::max(k_star, r.trials_to_hit);
  }
  auto solved_within = [&](const std::string& m, std::uint64_t k) {
    std::uint64_t count = 0;
    for (const BenchmarkRecord& r : method_slice(run.records, m))
      if (r.hit && r.trials_to_hit <= k) ++count;
    return count;
  };
  const std::uint64_t p_diag = solved_within("diag-new", k_star);
  const std::uint64_t p_direct = solved_within("direct", k_star);
  const std::uint64_t p_directl = solved_within("direct-l", k_star);
  require(p_diag == 100, "diagonal curve must end at 100 on its own budget");
  require(p_diag >= p_direct && p_direct >= p_directl,
          "operating characteristics are not in the published order");

  ReportMeta meta{"hard", 2, 1e-4, 1000000};
  fs::path dir_a = fs::temp_directory_path() / "lgo_acceptance_oc_a";
  fs::path dir_b = fs::temp_directory_path() / "lgo_acceptance_oc_b";
  fs::remove_all(dir_a);
  fs::remove_all(dir_b);
  emit_report(run.records, meta, dir_a.string());

  for (const std::string& m : {"direct", "direct-l", "diag-new"}) {
    std::istringstream in(slurp(dir_a / ("oc_" + m + ".dat")));
    std::string header;
    std::getline(in, header);
    require(header == "# k solved", "unexpected oc header");
    std::uint64_t k = 0, p = 0, prev_k = 0, prev_p = 0, rows = 0;
    while (in >> k >> p) {
      if (rows > 0) {
        require(k > prev_k, "oc budgets must ascend");
        require(p >= prev_p, "oc curve must be monotone");
      }
      prev_k = k;
      prev_p = p;
      ++rows;
    }
    require(rows > 0, "empty oc curve for " + m);
    std::uint64_t solved = 0;
    for (const BenchmarkRecord& r : method_slice(run.records, m))
      if (r.hit) ++solved;
    require(prev_p == solved, "terminal oc value must equal the solved count");
  }

  // recompute from the raw records and compare every emitted byte
  auto back = read_records_json((dir_a / "records.json").string());
  emit_report(back, meta, dir_b.string());
  for (const char* name :
       {"summary.csv", "records.json", "oc_direct.dat", "oc_direct-l.dat",
        "oc_diag-new.dat"})
    require(slurp(dir_a / name) == slurp(dir_b / name),
            std::string("recomputed ") + name + " differs from the original");
  fs::remove_all(dir_a);
  fs::remove_all(dir_b);
}

// ---------------------------------------------------------------------------
// 9. End-to-end determinism under parallel execution.

void criterion_9() {
  ReportMeta meta{"simple", 2, 1e-4, 1000000};
  fs::path dirs[2] = {fs::temp_directory_path() / "lgo_acceptance_det_a",
                      fs::temp_directory_path() / "lgo_acceptance_det_b"};
  for (const fs::path& dir : dirs) {
    fs::remove_all(dir);
    ClassRun run = run_class(GklsPreset::Simple, "simple");
    emit_report(run.records, meta, dir.string());
  }
  for (const char* name :
       {"summary.csv", "records.json", "oc_direct.dat", "oc_direct-l.dat",
        "oc_diag-new.dat"})
    require(slurp(dirs[0] / name) == slurp(dirs[1] / name),
            std::string(name) + " differs between identical runs");
  for (const fs::path& dir : dirs) fs::remove_all(dir);
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) {
      only = std::atoi(argv[i + 1]);
      ++i;
    } else {
      std::cerr << "usage: acceptance [--only N]\n";
      return 2;
    }
  }

  using Criterion = void (*)();
  const Criterion criteria[9] = {criterion_1, criterion_2, criterion_3,
                                 criterion_4, criterion_5, criterion_6,
                                 criterion_7, criterion_8, criterion_9};
  int failures = 0;
  for (int n = 1; n <= 9; ++n) {
    if (only != 0 && n != only) continue;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      criteria[n - 1]();
      std::printf("criterion %d: PASS (%.1f s)\n", n, seconds_since(t0));
    } catch (const std::exception& e) {
      ++failures;
      std::printf("criterion %d: FAIL (%.1f s)\n", n, seconds_since(t0));
      std::fprintf(stderr, "criterion %d failure: %s\n", n, e.what());
    }
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
