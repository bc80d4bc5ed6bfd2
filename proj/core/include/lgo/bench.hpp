#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lgo/domain.hpp"
#include "lgo/gkls.hpp"
#include "lgo/lipschitz.hpp"
#include "lgo/objective.hpp"
#include "lgo/partition.hpp"
#include "lgo/result.hpp"

namespace lgo {

// Outcome of one (method, function) run. trials_to_hit is the 1-based index
// of the first trial inside the hit box, or the cap when the run failed.
// wall_seconds is informational only and never serialized.
struct BenchmarkRecord {
  std::string method;
  std::string class_id;
  std::uint32_t function_index = 0;  // 1-based
  std::uint64_t trials_to_hit = 0;
  std::uint64_t hyperintervals = 0;
  bool hit = false;
  std::string status;
  double wall_seconds = 0.0;
};

// Accuracy test: |x(j) - x*(j)| <= delta^(1/N) * (b(j) - a(j)) on every
// axis. delta must lie in (0, 1].
bool hit_check(std::span<const double> x, std::span<const double> x_star,
               double delta, const BoxDomain& domain);

// Published accuracy coefficients per dimension (2: 1e-4, 3 and 4: 1e-6,
// 5: 1e-7); other dimensions have no preset.
double preset_delta(std::size_t dimension);

// Canonical benchmark eps per solver family: the DIRECT variants run with
// Jones' 1e-4, the diagonal solver with the coarser 1e-2 its selection rule
// is tuned for. An explicit MethodParams::eps overrides both.
inline constexpr double kDirectBenchEps = 1e-4;
inline constexpr double kDiagBenchEps = 1e-2;

// Tuning knobs forwarded to solvers run by name.
struct MethodParams {
  double a_priori_L = 0.0;  // required by "piyavskij", > 0
  double r = LipschitzSpec::kDefaultR;
  double xi = LipschitzSpec::kDefaultXi;
  std::optional<double> eps;  // unset: the per-method canonical value
};

const std::vector<std::string>& method_names();
SolverResult run_method(const std::string& name, const MethodParams& params,
                        Objective& objective, const BoxDomain& domain,
                        const StoppingCriteria& stop);

struct BenchConfig {
  std::vector<std::string> methods;
  std::string class_id;
  double delta = 1e-4;
  std::uint64_t cap = 1000000;
  unsigned jobs = 1;
  MethodParams params;
};

// Run every configured method over every function of the class. Records are
// returned in canonical order (methods as configured, functions ascending)
// whatever the job count; solver failures become failed records, not
// crashes. The solver never sees the minimizer: hits are detected by an
// observer that stops the run after the hitting evaluation.
std::vector<BenchmarkRecord> run_benchmark(const GklsClass& klass,
                                           const BenchConfig& config);

struct PercentileEntry {
  std::uint64_t value = 0;
  bool capped = false;  // the defining record failed to hit
};

struct PercentileColumns {
  PercentileEntry trials_p50, trials_p100;
  PercentileEntry hyper_p50, hyper_p100;
  std::uint64_t unsolved = 0;
};

// Order statistics over exactly 100 records of one (method, class) pair,
// sorted by trials to hit; the hyperinterval columns report the counts of
// the records defining the trial percentiles.
PercentileColumns percentile_columns(std::span<const BenchmarkRecord> records);
std::string format_percentile(const PercentileEntry& entry,
                              std::uint64_t unsolved);

struct OperatingCharacteristic {
  std::vector<std::pair<std::uint64_t, std::uint64_t>> points;  // (k, P(k))
};

// P(k) = number of records hit within k trials, sampled at the given
// budgets (must be ascending).
OperatingCharacteristic operating_characteristics(
    std::span<const BenchmarkRecord> records,
    std::span<const std::uint64_t> budgets);

struct ReportMeta {
  std::string class_id;
  std::size_t dimension = 0;
  double delta = 0.0;
  std::uint64_t cap = 1000000;
};

// Writes summary.csv, records.json and one oc_<method>.dat per method into
// out_dir (created if needed). Output is byte-deterministic for equal
// records; wall times never appear in any file.
void emit_report(std::span<const BenchmarkRecord> records,
                 const ReportMeta& meta, const std::string& out_dir);
std::vector<BenchmarkRecord> read_records_json(const std::string& path);

}  // namespace lgo
