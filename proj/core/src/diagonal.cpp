#include "lgo/diagonal.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <tuple>
#include <utility>

#include "internal.hpp"
#include "lgo/divide_the_best.hpp"
#include "lgo/errors.hpp"

namespace lgo {

namespace {

constexpr auto kPow3 = [] {
  std::array<std::uint64_t, kMaxGridDepth + 1> p{};
  p[0] = 1;
  for (std::size_t i = 1; i < p.size(); ++i) p[i] = p[i - 1] * 3;
  return p;
}();

// Powers of three stay exact in a double through 3^33 (< 2^53). Dividing by
// an exact power gives the correctly rounded image of num / 3^depth, which
// keeps the map from grid coordinates to doubles monotone across depths.
constexpr std::uint32_t kExactPow3Depth = 33;

constexpr auto kPow3Dbl = [] {
  std::array<double, kExactPow3Depth + 1> p{};
  p[0] = 1.0;
  for (std::size_t i = 1; i < p.size(); ++i) p[i] = p[i - 1] * 3.0;
  return p;
}();

void check_depth(std::uint32_t depth) {
  if (depth > kMaxGridDepth)
    throw StructuralError("grid depth cap (40) exceeded");
}

}  // namespace

GridCoord canonical_coord(std::uint64_t num, std::uint32_t depth) {
  check_depth(depth);
  if (num > kPow3[depth])
    throw InputError("grid coordinate exceeds the unit range");
  while (depth > 0 && num % 3 == 0) {
    num /= 3;
    depth -= 1;
  }
  return {num, depth};
}

double unit_value(GridCoord c) {
  check_depth(c.depth);
  if (c.depth <= kExactPow3Depth)
    return static_cast<double>(c.num) / kPow3Dbl[c.depth];
  return static_cast<double>(c.num) / kPow3Dbl[kExactPow3Depth] /
         kPow3Dbl[c.depth - kExactPow3Depth];
}

namespace {

// Physical coordinate of c on axis j; the single source of truth shared by
// ExactVertex::to_point and the splittability gate below.
double axis_point(const GridCoord& c, const BoxDomain& domain, std::size_t j) {
  if (c.num == 0) return domain.lower(j);
  if (c.num == kPow3[c.depth]) return domain.upper(j);
  const double v = domain.lower(j) + unit_value(c) * domain.width(j);
  return std::clamp(v, domain.lower(j), domain.upper(j));
}

}  // namespace

ExactVertex::ExactVertex(std::vector<GridCoord> coords)
    : coords_(std::move(coords)) {
  if (coords_.empty()) throw InputError("vertex must have dimension >= 1");
  for (GridCoord& c : coords_) c = canonical_coord(c.num, c.depth);
}

ExactVertex ExactVertex::domain_corner(std::size_t dimension, bool upper) {
  if (dimension == 0) throw InputError("vertex must have dimension >= 1");
  return ExactVertex(
      std::vector<GridCoord>(dimension, GridCoord{upper ? 1u : 0u, 0}));
}

std::vector<double> ExactVertex::to_point(const BoxDomain& domain) const {
  if (domain.dimension() != dimension())
    throw InputError("vertex dimension does not match the domain");
  std::vector<double> x(dimension());
  for (std::size_t j = 0; j < dimension(); ++j)
    x[j] = axis_point(coords_[j], domain, j);
  return x;
}

std::size_t ExactVertexHash::operator()(const ExactVertex& v) const {
  std::size_t h = 1469598103934665603ull;  // FNV offset basis
  for (std::size_t j = 0; j < v.dimension(); ++j) {
    const GridCoord& c = v.coord(j);
    h = (h ^ c.num) * 1099511628211ull;
    h = (h ^ c.depth) * 1099511628211ull;
  }
  return h;
}

double VertexStore::fetch(const ExactVertex& v, const Evaluator& eval) {
  auto it = values_.find(v);
  if (it != values_.end()) {
    hits_ += 1;
    return it->second;
  }
  const double z = eval(v);  // may throw; nothing is cached then
  misses_ += 1;
  values_.emplace(v, z);
  return z;
}

namespace {

// Width of the diagonal along one axis as a canonical fraction delta/3^d.
GridCoord axis_width(const GridCoord& ca, const GridCoord& cb) {
  const std::uint32_t d = std::max(ca.depth, cb.depth);
  const std::uint64_t p = ca.num * kPow3[d - ca.depth];
  const std::uint64_t q = cb.num * kPow3[d - cb.depth];
  const std::uint64_t delta = p > q ? p - q : q - p;
  return canonical_coord(delta, d);
}

}  // namespace

DiagCell::DiagCell(ExactVertex a, ExactVertex b, double z_a, double z_b,
                   const BoxDomain& domain)
    : a_(std::move(a)), b_(std::move(b)), z_a_(z_a), z_b_(z_b),
      region_({0.0}, {1.0}) {
  detail::require_finite(z_a_, "diagonal endpoint value");
  detail::require_finite(z_b_, "diagonal endpoint value");
  const std::size_t n = domain.dimension();
  if (a_.dimension() != n || b_.dimension() != n)
    throw InputError("diagonal vertices must match the domain dimension");

  widths_.reserve(n);
  for (std::size_t j = 0; j < n; ++j) {
    GridCoord w = axis_width(a_.coord(j), b_.coord(j));
    if (w.num == 0)
      throw StructuralError("diagonal vertices coincide on an axis");
    widths_.push_back(w);
  }

  const std::vector<double> pa = a_.to_point(domain);
  const std::vector<double> pb = b_.to_point(domain);
  std::vector<double> lo(n), hi(n), terms(n);
  for (std::size_t j = 0; j < n; ++j) {
    lo[j] = std::min(pa[j], pb[j]);
    hi[j] = std::max(pa[j], pb[j]);
    const double w = unit_value(widths_[j]) * domain.width(j);
    terms[j] = w * w;
  }
  // Summing the sorted squares makes the measure identical for congruent
  // cells regardless of which axes carry which width.
  std::sort(terms.begin(), terms.end());
  double s = 0.0;
  for (double t : terms) s += t;
  half_diagonal_ = 0.5 * std::sqrt(s);
  region_ = BoxDomain(std::move(lo), std::move(hi));
}

namespace {

// Split geometry shared by trisect_diagonal and the selection-pool gate:
// the longest physical edge (ties to the lowest axis) plus the numerators of
// the new vertices u = a + 2(b-a)/3 and v = b - 2(b-a)/3 on that axis.
struct TrisectPlan {
  std::size_t axis = 0;
  std::uint32_t depth = 0;
  unsigned __int128 unum = 0;
  unsigned __int128 vnum = 0;
};

TrisectPlan plan_trisection(const DiagCell& cell, const BoxDomain& domain) {
  const std::size_t n = domain.dimension();
  std::uint32_t dmax = 0;
  for (std::size_t j = 0; j < n; ++j)
    dmax = std::max(dmax, cell.widths()[j].depth);
  TrisectPlan plan;
  long double best = -1.0L;
  for (std::size_t j = 0; j < n; ++j) {
    const GridCoord& w = cell.widths()[j];
    const unsigned __int128 scaled =
        static_cast<unsigned __int128>(w.num) * kPow3[dmax - w.depth];
    const long double len =
        static_cast<long double>(scaled) * static_cast<long double>(domain.width(j));
    if (len > best) {
      best = len;
      plan.axis = j;
    }
  }
  const GridCoord& ca = cell.a().coord(plan.axis);
  const GridCoord& cb = cell.b().coord(plan.axis);
  const std::uint32_t d = std::max(ca.depth, cb.depth);
  const unsigned __int128 p =
      static_cast<unsigned __int128>(ca.num) * kPow3[d - ca.depth];
  const unsigned __int128 q =
      static_cast<unsigned __int128>(cb.num) * kPow3[d - cb.depth];
  plan.depth = d + 1;
  plan.unum = p + 2 * q;
  plan.vnum = q + 2 * p;
  return plan;
}

// Cells at the resolution floor stay live but leave the selection pool: one
// more trisection would either pass the grid depth cap or place vertices
// that no longer realize as strictly interior doubles on the split axis.
bool diag_splittable(const DiagCell& cell, const BoxDomain& domain) {
  const TrisectPlan plan = plan_trisection(cell, domain);
  if (plan.depth > kMaxGridDepth) return false;
  const std::size_t j = plan.axis;
  const GridCoord cu =
      canonical_coord(static_cast<std::uint64_t>(plan.unum), plan.depth);
  const GridCoord cv =
      canonical_coord(static_cast<std::uint64_t>(plan.vnum), plan.depth);
  const double xa = axis_point(cell.a().coord(j), domain, j);
  const double xb = axis_point(cell.b().coord(j), domain, j);
  const double xu = axis_point(cu, domain, j);
  const double xv = axis_point(cv, domain, j);
  const double lo = std::min(xa, xb);
  const double hi = std::max(xa, xb);
  const double m1 = std::min(xu, xv);
  const double m2 = std::max(xu, xv);
  return lo < m1 && m1 < m2 && m2 < hi;
}

}  // namespace

DiagTrisection trisect_diagonal(const DiagCell& cell, const BoxDomain& domain,
                                VertexStore& store,
                                const VertexStore::Evaluator& eval) {
  const std::size_t n = domain.dimension();
  if (cell.a().dimension() != n)
    throw InputError("cell does not match the domain dimension");

  const TrisectPlan plan = plan_trisection(cell, domain);
  check_depth(plan.depth);
  const std::size_t axis = plan.axis;
  const std::uint64_t unum = static_cast<std::uint64_t>(plan.unum);
  const std::uint64_t vnum = static_cast<std::uint64_t>(plan.vnum);

  std::vector<GridCoord> ucoords, vcoords;
  ucoords.reserve(n);
  vcoords.reserve(n);
  for (std::size_t j = 0; j < n; ++j) {
    ucoords.push_back(cell.a().coord(j));
    vcoords.push_back(cell.b().coord(j));
  }
  ucoords[axis] = canonical_coord(unum, plan.depth);
  vcoords[axis] = canonical_coord(vnum, plan.depth);
  ExactVertex u(std::move(ucoords));
  ExactVertex v(std::move(vcoords));

  const double zu = store.fetch(u, eval);
  const double zv = store.fetch(v, eval);

  DiagTrisection out;
  out.axis = axis;
  out.children.emplace_back(cell.a(), v, cell.z_a(), zv, domain);
  out.children.emplace_back(u, v, zu, zv, domain);
  out.children.emplace_back(u, cell.b(), zu, cell.z_b(), domain);
  return out;
}

std::vector<std::size_t> select_nondominated(std::span<const DiagCell> cells,
                                             double f_best, double eps) {
  std::vector<MeasurePoint> pts;
  pts.reserve(cells.size());
  for (const DiagCell& c : cells)
    pts.push_back({c.half_diagonal(), c.mean_value()});
  return nondominated_select(pts, f_best, eps);
}

namespace {

// Divide-the-Best hooks for the diagonal method. Cells are grouped by exact
// half-diagonal so selection touches only one representative per size class.
struct DiagMethod {
  using Cell = DiagCell;
  using State = PartitionState<DiagCell>;
  struct Placement {
    DiagTrisection tri;
  };

  DiagParams params;
  const BoxDomain* domain = nullptr;
  VertexStore store;
  std::map<double, std::set<std::pair<double, std::uint64_t>>> groups;
  double pending_d = 0.0;
  double pending_m = 0.0;

  VertexStore::Evaluator evaluator(Objective& objective) {
    return [this, &objective](const ExactVertex& v) {
      return objective.evaluate(v.to_point(*domain));
    };
  }

  void trace(const State& state, std::uint64_t id) {
    if (!params.partition_trace) return;
    const auto& node = state.node(id);
    const DiagCell& c = node.cell;
    std::ostream& os = *params.partition_trace;
    os << id << ' ' << node.parent;
    char buf[32];
    auto put = [&](double x) {
      std::snprintf(buf, sizeof buf, "%.17g", x);
      os << ' ' << buf;
    };
    for (double x : c.a().to_point(*domain)) put(x);
    for (double x : c.b().to_point(*domain)) put(x);
    put(c.z_a());
    put(c.z_b());
    os << '\n';
  }

  void initialize(State& state, Objective& objective) {
    auto eval = evaluator(objective);
    ExactVertex a = ExactVertex::domain_corner(domain->dimension(), false);
    ExactVertex b = ExactVertex::domain_corner(domain->dimension(), true);
    const double za = store.fetch(a, eval);
    const double zb = store.fetch(b, eval);
    DiagCell root(std::move(a), std::move(b), za, zb, *domain);
    const std::uint64_t id = state.add_root(std::move(root));
    const DiagCell& cell = state.node(id).cell;
    if (diag_splittable(cell, *domain))
      groups[cell.half_diagonal()].insert({cell.mean_value(), id});
    trace(state, id);
  }

  void compute_characteristics(State&) {}  // fixed at cell creation

  std::vector<std::uint64_t> select(State& state) {
    const Trial* incumbent = state.objective->best();
    if (!incumbent) return {};
    const double f_best = incumbent->value;

    std::vector<MeasurePoint> reps;
    reps.reserve(groups.size());
    for (const auto& [d, members] : groups)
      reps.push_back({d, members.begin()->first});
    const auto chosen = nondominated_select(reps, f_best, params.eps);

    std::vector<std::uint64_t> ids;
    std::size_t g = 0;
    auto it = groups.begin();
    std::optional<std::tuple<double, double, std::uint64_t>> single;
    for (std::size_t k : chosen) {
      while (g < k) {
        ++it;
        ++g;
      }
      const auto& members = it->second;
      const double fmin = members.begin()->first;
      if (!params.subdivide_all) {
        auto key = std::make_tuple(fmin, it->first, members.begin()->second);
        if (!single || key < *single) single = key;
        continue;
      }
      for (const auto& [f, id] : members) {
        if (f != fmin) break;
        ids.push_back(id);
      }
    }
    if (!params.subdivide_all && single) ids.push_back(std::get<2>(*single));
    std::sort(ids.begin(), ids.end());
    return ids;
  }

  Placement place_trials(State& state, std::uint64_t id, Objective& objective) {
    const DiagCell& cell = state.node(id).cell;
    pending_d = cell.half_diagonal();
    pending_m = cell.mean_value();
    return {trisect_diagonal(cell, *domain, store, evaluator(objective))};
  }

  Subdivision<DiagCell> subdivide(State&, std::uint64_t, Placement&& p) {
    Subdivision<DiagCell> sub;
    sub.children = std::move(p.tri.children);
    return sub;
  }

  void post_commit(State& state, std::uint64_t parent_id,
                   std::span<const std::uint64_t> child_ids) {
    auto it = groups.find(pending_d);
    if (it != groups.end()) {
      it->second.erase({pending_m, parent_id});
      if (it->second.empty()) groups.erase(it);
    }
    for (std::uint64_t id : child_ids) {
      const DiagCell& cell = state.node(id).cell;
      if (diag_splittable(cell, *domain))
        groups[cell.half_diagonal()].insert({cell.mean_value(), id});
      trace(state, id);
    }
  }
};

}  // namespace

SolverResult solve_multidim_diagonal(Objective& objective,
                                     const BoxDomain& domain,
                                     const DiagParams& params,
                                     const StoppingCriteria& stop) {
  detail::require_finite(params.eps, "eps");
  if (params.eps < 0.0) throw InputError("eps must be >= 0");

  DiagMethod method;
  method.params = params;
  method.domain = &domain;
  return run_divide_the_best(objective, domain, method, stop);
}

}  // namespace lgo
