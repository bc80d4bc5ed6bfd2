#include "lgo/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <thread>

#include <json.hpp>

#include "internal.hpp"
#include "lgo/diagonal.hpp"
#include "lgo/direct.hpp"
#include "lgo/errors.hpp"
#include "lgo/geometric1d.hpp"

namespace lgo {

bool hit_check(std::span<const double> x, std::span<const double> x_star,
               double delta, const BoxDomain& domain) {
  detail::require_finite(delta, "delta");
  if (!(delta > 0.0 && delta <= 1.0))
    throw InputError("delta must lie in (0, 1]");
  const std::size_t n = domain.dimension();
  if (x.size() != n || x_star.size() != n)
    throw InputError("hit_check points must match the domain dimension");
  const double factor = std::pow(delta, 1.0 / static_cast<double>(n));
  for (std::size_t j = 0; j < n; ++j) {
    if (std::abs(x[j] - x_star[j]) > factor * domain.width(j)) return false;
  }
  return true;
}

double preset_delta(std::size_t dimension) {
  switch (dimension) {
    case 2: return 1e-4;
    case 3:
    case 4: return 1e-6;
    case 5: return 1e-7;
    default:
      throw InputError("no accuracy preset for dimension " +
                       std::to_string(dimension));
  }
}

const std::vector<std::string>& method_names() {
  static const std::vector<std::string> names = {
      "direct", "direct-l", "diag-new",
      "piyavskij", "geom-adaptive", "geom-localtune"};
  return names;
}

SolverResult run_method(const std::string& name, const MethodParams& params,
                        Objective& objective, const BoxDomain& domain,
                        const StoppingCriteria& stop) {
  if (name == "direct")
    return solve_direct(objective, domain, DirectVariant::Direct,
                        params.eps.value_or(kDirectBenchEps), stop);
  if (name == "direct-l")
    return solve_direct(objective, domain, DirectVariant::DirectL,
                        params.eps.value_or(kDirectBenchEps), stop);
  if (name == "diag-new") {
    DiagParams p;
    p.eps = params.eps.value_or(kDiagBenchEps);
    return solve_multidim_diagonal(objective, domain, p, stop);
  }
  if (name == "piyavskij") {
    if (!(params.a_priori_L > 0.0))
      throw InputError("piyavskij requires an a-priori Lipschitz constant");
    return solve_piyavskij(objective, domain,
                           LipschitzSpec::a_priori(params.a_priori_L), stop);
  }
  if (name == "geom-adaptive")
    return solve_piyavskij(objective, domain,
                           LipschitzSpec::adaptive_global(params.r, params.xi),
                           stop);
  if (name == "geom-localtune")
    return solve_piyavskij(objective, domain,
                           LipschitzSpec::local_tuning(params.r, params.xi),
                           stop);
  throw InputError("unknown method: " + name);
}

namespace {

BenchmarkRecord run_one(const std::string& method, const GklsFunction& fn,
                        const BenchConfig& config, std::uint32_t index) {
  BenchmarkRecord rec;
  rec.method = method;
  rec.class_id = config.class_id;
  rec.function_index = index;

  const BoxDomain& domain = fn.domain();
  const std::vector<double>& x_star = fn.global_minimizer();

  Objective objective([&fn](std::span<const double> x) { return fn.value(x); },
                      config.cap);
  std::uint64_t hit_at = 0;
  objective.set_observer([&](std::uint64_t idx, const Trial& t) {
    if (hit_at == 0 && hit_check(t.point, x_star, config.delta, domain)) {
      hit_at = idx;
      objective.request_stop();
    }
  });

  const auto t0 = std::chrono::steady_clock::now();
  try {
    StoppingCriteria stop{config.cap, {}, {}};
    const SolverResult res =
        run_method(method, config.params, objective, domain, stop);
    rec.hyperintervals = res.hyperintervals_generated;
    rec.status = to_string(res.status);
  } catch (const Error& e) {
    // A defective run is a failed record, not a crash of the whole sweep.
    rec.hyperintervals = 0;
    rec.status = e.what();
    hit_at = 0;
  }
  rec.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  rec.hit = hit_at > 0;
  rec.trials_to_hit = rec.hit ? hit_at : config.cap;
  return rec;
}

}  // namespace

std::vector<BenchmarkRecord> run_benchmark(const GklsClass& klass,
                                           const BenchConfig& config) {
  if (config.methods.empty()) throw InputError("no methods configured");
  for (const std::string& m : config.methods) {
    if (std::find(method_names().begin(), method_names().end(), m) ==
        method_names().end())
      throw InputError("unknown method: " + m);
  }
  if (klass.functions.empty()) throw InputError("class has no functions");
  if (!(config.delta > 0.0 && config.delta <= 1.0))
    throw InputError("delta must lie in (0, 1]");
  if (config.cap == 0) throw InputError("cap must be >= 1");
  if (config.jobs == 0) throw InputError("jobs must be >= 1");

  const std::size_t per = klass.functions.size();
  std::vector<BenchmarkRecord> records(config.methods.size() * per);

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t task = next.fetch_add(1);
      if (task >= records.size()) return;
      const std::size_t mi = task / per;
      const std::size_t fi = task % per;
      records[task] = run_one(config.methods[mi], klass.functions[fi], config,
                              static_cast<std::uint32_t>(fi + 1));
    }
  };

  const unsigned jobs =
      std::min<std::size_t>(config.jobs, records.size());
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(jobs);
    for (unsigned i = 0; i < jobs; ++i) pool.emplace_back(worker);
    for (std::thread& th : pool) th.join();
  }
  return records;
}

namespace {

// Order statistics over any record count; the public wrapper below pins the
// classic 100-function layout where the indices land on 49 and 99.
PercentileColumns percentile_columns_any(
    std::span<const BenchmarkRecord> records) {
  std::vector<std::size_t> order(records.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (records[a].trials_to_hit != records[b].trials_to_hit)
      return records[a].trials_to_hit < records[b].trials_to_hit;
    if (records[a].hyperintervals != records[b].hyperintervals)
      return records[a].hyperintervals < records[b].hyperintervals;
    return records[a].function_index < records[b].function_index;
  });

  PercentileColumns out;
  for (const BenchmarkRecord& r : records)
    if (!r.hit) out.unsolved += 1;
  const std::size_t n = records.size();
  const BenchmarkRecord& r50 = records[order[(n + 1) / 2 - 1]];
  const BenchmarkRecord& r100 = records[order[n - 1]];
  out.trials_p50 = {r50.trials_to_hit, !r50.hit};
  out.hyper_p50 = {r50.hyperintervals, !r50.hit};
  out.trials_p100 = {r100.trials_to_hit, !r100.hit};
  out.hyper_p100 = {r100.hyperintervals, !r100.hit};
  return out;
}

}  // namespace

PercentileColumns percentile_columns(
    std::span<const BenchmarkRecord> records) {
  if (records.size() != 100)
    throw InputError("percentile columns require exactly 100 records");
  return percentile_columns_any(records);
}

std::string format_percentile(const PercentileEntry& entry,
                              std::uint64_t unsolved) {
  if (entry.capped)
    return "> " + std::to_string(entry.value) + " (" +
           std::to_string(unsolved) + ")";
  return std::to_string(entry.value);
}

OperatingCharacteristic operating_characteristics(
    std::span<const BenchmarkRecord> records,
    std::span<const std::uint64_t> budgets) {
  for (std::size_t i = 1; i < budgets.size(); ++i) {
    if (budgets[i - 1] > budgets[i])
      throw InputError("budgets must be ascending");
  }
  std::vector<std::uint64_t> hits;
  hits.reserve(records.size());
  for (const BenchmarkRecord& r : records)
    if (r.hit) hits.push_back(r.trials_to_hit);
  std::sort(hits.begin(), hits.end());

  OperatingCharacteristic oc;
  oc.points.reserve(budgets.size());
  for (std::uint64_t k : budgets) {
    const auto solved = static_cast<std::uint64_t>(
        std::upper_bound(hits.begin(), hits.end(), k) - hits.begin());
    oc.points.emplace_back(k, solved);
  }
  return oc;
}

namespace {

std::string format_delta(double delta) {
  // Powers of ten print as 1e-4 style; anything else falls back to %.17g.
  const double e = std::log10(delta);
  const double re = std::round(e);
  if (std::abs(e - re) < 1e-12 && std::abs(re) < 100) {
    const long exp10 = static_cast<long>(re);
    if (std::pow(10.0, static_cast<double>(exp10)) == delta)
      return "1e" + std::to_string(exp10);
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", delta);
  return buf;
}

nlohmann::json record_to_json(const BenchmarkRecord& r) {
  return nlohmann::json{{"method", r.method},
                        {"class", r.class_id},
                        {"index", r.function_index},
                        {"trials_to_hit", r.trials_to_hit},
                        {"hyperintervals", r.hyperintervals},
                        {"hit", r.hit},
                        {"status", r.status}};
}

}  // namespace

void emit_report(std::span<const BenchmarkRecord> records,
                 const ReportMeta& meta, const std::string& out_dir) {
  if (records.empty()) throw InputError("nothing to report");
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create output directory: " + out_dir);

  std::vector<std::string> methods;
  for (const BenchmarkRecord& r : records) {
    if (std::find(methods.begin(), methods.end(), r.method) == methods.end())
      methods.push_back(r.method);
  }

  const auto path = [&](const std::string& name) {
    return (std::filesystem::path(out_dir) / name).string();
  };

  {
    std::ofstream csv(path("summary.csv"));
    if (!csv) throw IoError("cannot write " + path("summary.csv"));
    csv << "n,delta,class,method,trials_p50,trials_p100,hyper_p50,"
           "hyper_p100,unsolved\n";
    for (const std::string& m : methods) {
      std::vector<BenchmarkRecord> mine;
      for (const BenchmarkRecord& r : records)
        if (r.method == m) mine.push_back(r);
      const PercentileColumns cols = percentile_columns_any(mine);
      csv << meta.dimension << ',' << format_delta(meta.delta) << ','
          << meta.class_id << ',' << m << ','
          << format_percentile(cols.trials_p50, cols.unsolved) << ','
          << format_percentile(cols.trials_p100, cols.unsolved) << ','
          << format_percentile(cols.hyper_p50, cols.unsolved) << ','
          << format_percentile(cols.hyper_p100, cols.unsolved) << ','
          << cols.unsolved << '\n';
    }
    if (!csv) throw IoError("write failed: " + path("summary.csv"));
  }

  {
    nlohmann::json j = nlohmann::json::array();
    for (const BenchmarkRecord& r : records) j.push_back(record_to_json(r));
    std::ofstream js(path("records.json"));
    if (!js) throw IoError("cannot write " + path("records.json"));
    js << j.dump(2) << '\n';
    if (!js) throw IoError("write failed: " + path("records.json"));
  }

  for (const std::string& m : methods) {
    std::vector<BenchmarkRecord> mine;
    for (const BenchmarkRecord& r : records)
      if (r.method == m) mine.push_back(r);
    std::vector<std::uint64_t> budgets;
    for (const BenchmarkRecord& r : mine)
      if (r.hit) budgets.push_back(r.trials_to_hit);
    budgets.push_back(meta.cap);
    std::sort(budgets.begin(), budgets.end());
    budgets.erase(std::unique(budgets.begin(), budgets.end()), budgets.end());
    const OperatingCharacteristic oc = operating_characteristics(mine, budgets);

    std::ofstream dat(path("oc_" + m + ".dat"));
    if (!dat) throw IoError("cannot write oc data for " + m);
    dat << "# k solved\n";
    for (const auto& [k, p] : oc.points) dat << k << ' ' << p << '\n';
    if (!dat) throw IoError("write failed: oc data for " + m);
  }
}

std::vector<BenchmarkRecord> read_records_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw IoError("malformed records json: " + std::string(e.what()));
  }
  if (!j.is_array()) throw IoError("records json must be an array");
  std::vector<BenchmarkRecord> out;
  out.reserve(j.size());
  try {
    for (const auto& item : j) {
      BenchmarkRecord r;
      r.method = item.at("method").get<std::string>();
      r.class_id = item.at("class").get<std::string>();
      r.function_index = item.at("index").get<std::uint32_t>();
      r.trials_to_hit = item.at("trials_to_hit").get<std::uint64_t>();
      r.hyperintervals = item.at("hyperintervals").get<std::uint64_t>();
      r.hit = item.at("hit").get<bool>();
      r.status = item.at("status").get<std::string>();
      out.push_back(std::move(r));
    }
  } catch (const nlohmann::json::exception& e) {
    throw IoError("malformed records json: " + std::string(e.what()));
  }
  return out;
}

}  // namespace lgo
