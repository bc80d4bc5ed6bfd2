#include "lgo/gkls.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <utility>

#include "internal.hpp"
#include "lgo/errors.hpp"

namespace lgo {

namespace {

// Placement geometry, as fractions of axis widths (margins) or of the
// maximal width (separations). The global-minimizer margin is deliberately
// independent of rho so that shrinking rho never moves the minimizer.
constexpr double kVertexMargin = 0.05;
constexpr double kGlobalMargin = 0.17;
constexpr double kLocalMargin = 0.02;
constexpr double kVertexClearance = 0.05;
constexpr double kGlobalClearance = 0.05;
constexpr double kPairSeparation = 0.10;
constexpr int kMaxAttempts = 10000;

// Uniform deviates from the raw 64-bit stream; no library distributions, so
// the draw sequence is pinned across standard library implementations.
struct Rng {
  std::mt19937_64 gen;
  explicit Rng(std::uint64_t seed) : gen(seed) {}
  double u01() { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * u01(); }
};

std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

GklsClassSpec GklsClassSpec::preset(std::size_t dimension, GklsPreset preset,
                                    std::uint64_t seed,
                                    std::size_t num_minima) {
  GklsClassSpec s;
  s.dimension = dimension;
  s.num_minima = num_minima;
  s.seed = seed;
  const bool hard = preset == GklsPreset::Hard;
  switch (dimension) {
    case 2:
      s.rho = hard ? 0.10 : 0.20;
      s.dist = 0.90;
      break;
    case 3:
    case 4:
      s.rho = 0.20;
      s.dist = hard ? 0.90 : 0.66;
      break;
    case 5:
      s.rho = hard ? 0.20 : 0.30;
      s.dist = 0.66;
      break;
    default:
      throw InputError("presets cover dimensions 2 through 5");
  }
  return s;
}

BoxDomain GklsClassSpec::resolved_domain() const {
  return domain ? *domain : BoxDomain::symmetric(dimension, 1.0);
}

GklsFunction::GklsFunction(BoxDomain domain, std::vector<GklsMinimum> minima)
    : domain_(std::move(domain)), minima_(std::move(minima)) {
  const std::size_t n = domain_.dimension();
  if (minima_.size() < 2)
    throw InputError("a function needs the vertex and at least one ball");
  if (minima_[0].radius != 0.0)
    throw InputError("minima[0] must be the paraboloid vertex (radius 0)");

  for (const GklsMinimum& m : minima_) {
    if (m.location.size() != n)
      throw InputError("minimum location dimension mismatch");
    detail::require_finite(m.location, "minimum location");
    detail::require_finite(m.value, "minimum value");
    detail::require_finite(m.radius, "minimum radius");
    if (!domain_.contains(m.location))
      throw InputError("minimum lies outside the domain");
  }

  const double t = minima_[0].value;
  const std::vector<double>& T = minima_[0].location;

  global_index_ = 0;
  for (std::size_t i = 1; i < minima_.size(); ++i) {
    if (minima_[i].value < minima_[global_index_].value) global_index_ = i;
  }
  for (std::size_t i = 0; i < minima_.size(); ++i) {
    if (i != global_index_ && minima_[i].value == minima_[global_index_].value)
      throw InputError("the global minimum value must be unique");
  }
  if (global_index_ == 0)
    throw InputError("the vertex cannot be the global minimum");

  balls_.reserve(minima_.size() - 1);
  for (std::size_t i = 1; i < minima_.size(); ++i) {
    const GklsMinimum& m = minima_[i];
    if (m.radius <= 0.0) throw InputError("ball radius must be positive");
    if (m.value > t)
      throw InputError("ball value must not exceed the vertex value");
    Ball b;
    b.minimum = i;
    b.v.resize(n);
    for (std::size_t j = 0; j < n; ++j) b.v[j] = m.location[j] - T[j];
    b.delta = euclidean_distance(m.location, T);
    if (b.delta <= m.radius)
      throw InputError("a ball must not contain the paraboloid vertex");
    b.w = b.delta * b.delta + t - m.value;
    balls_.push_back(std::move(b));
  }
}

GklsFunction GklsFunction::from_minima(BoxDomain domain,
                                       std::vector<GklsMinimum> minima) {
  return GklsFunction(std::move(domain), std::move(minima));
}

const GklsFunction::Ball* GklsFunction::find_ball(std::span<const double> x,
                                                  double& r2_out) const {
  for (const Ball& b : balls_) {
    const GklsMinimum& m = minima_[b.minimum];
    double r2 = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
      const double d = x[j] - m.location[j];
      r2 += d * d;
    }
    if (r2 <= m.radius * m.radius) {
      r2_out = r2;
      return &b;
    }
  }
  return nullptr;
}

double GklsFunction::value(std::span<const double> x) const {
  if (!domain_.contains(x, 1e-9 * domain_.max_width()))
    throw DomainError("evaluation point lies outside the domain");

  double r2 = 0.0;
  const Ball* ball = find_ball(x, r2);
  const double t = minima_[0].value;
  if (!ball) {
    // Paraboloid region: ||x - T||^2 + t, axis-ascending summation.
    const std::vector<double>& T = minima_[0].location;
    double s = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
      const double d = x[j] - T[j];
      s += d * d;
    }
    return s + t;
  }

  const GklsMinimum& m = minima_[ball->minimum];
  const double rho = m.radius;
  const double r = std::sqrt(r2);
  if (r == 0.0) return m.value;

  double tau = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j)
    tau += ball->v[j] * (x[j] - m.location[j]);
  tau /= r;

  // Per-ray cubic f_i + B r^2 + C r^3 matching the paraboloid's value and
  // slope at the ball boundary.
  const double B = (3.0 * ball->w + 4.0 * rho * tau + rho * rho) / (rho * rho);
  const double C = -2.0 * (rho * tau + ball->w) / (rho * rho * rho);
  return m.value + r2 * (B + C * r);
}

std::vector<double> GklsFunction::gradient(std::span<const double> x) const {
  if (!domain_.contains(x, 1e-9 * domain_.max_width()))
    throw DomainError("evaluation point lies outside the domain");

  const std::size_t n = x.size();
  std::vector<double> g(n, 0.0);
  double r2 = 0.0;
  const Ball* ball = find_ball(x, r2);
  if (!ball) {
    const std::vector<double>& T = minima_[0].location;
    for (std::size_t j = 0; j < n; ++j) g[j] = 2.0 * (x[j] - T[j]);
    return g;
  }

  const GklsMinimum& m = minima_[ball->minimum];
  const double rho = m.radius;
  const double r = std::sqrt(r2);
  if (r == 0.0) return g;  // the ball minimum itself

  double tau = 0.0;
  for (std::size_t j = 0; j < n; ++j)
    tau += ball->v[j] * (x[j] - m.location[j]);
  tau /= r;

  const double B = (3.0 * ball->w + 4.0 * rho * tau + rho * rho) / (rho * rho);
  const double C = -2.0 * (rho * tau + ball->w) / (rho * rho * rho);
  // d/dtau of B and C; tau varies across the ball except along the axis ray.
  const double radial = 2.0 * B * r + 3.0 * C * r2;
  const double tang = r2 * (4.0 / rho - 2.0 * r / (rho * rho));

  for (std::size_t j = 0; j < n; ++j) {
    const double xhat = (x[j] - m.location[j]) / r;
    g[j] = (radial - tang * tau / r) * xhat + (tang / r) * ball->v[j];
  }
  return g;
}

namespace {

void validate_spec(const GklsClassSpec& spec, const BoxDomain& domain) {
  if (spec.num_minima < 2)
    throw InputError("num_minima must be >= 2 (vertex plus global)");
  detail::require_finite(spec.global_value, "global_value");
  detail::require_finite(spec.floor_value, "floor_value");
  if (!(spec.global_value < spec.floor_value))
    throw InputError("global_value must lie below floor_value");
  detail::require_positive(spec.rho, "rho");
  detail::require_positive(spec.dist, "dist");
  if (domain.dimension() != spec.dimension)
    throw InputError("domain dimension does not match the spec");

  double min_w = domain.width(0);
  for (std::size_t j = 1; j < domain.dimension(); ++j)
    min_w = std::min(min_w, domain.width(j));
  const double rho_cap = (kGlobalMargin - 0.005) * min_w;
  if (spec.rho > rho_cap)
    throw GenerationError("constraint violated: rho " + fmt17(spec.rho) +
                          " exceeds the placement margin cap " +
                          fmt17(rho_cap));
  if (spec.rho > 0.95 * spec.dist)
    throw GenerationError(
        "constraint violated: rho must not exceed 0.95 * dist");
}

}  // namespace

GklsFunction generate_function(const GklsClassSpec& spec, std::uint64_t index) {
  if (index == 0) throw InputError("function index is 1-based");
  const BoxDomain domain = spec.resolved_domain();
  validate_spec(spec, domain);

  const std::size_t n = spec.dimension;
  const double fstar = spec.global_value;
  const double t = spec.floor_value;
  double wmax = 0.0;
  for (std::size_t j = 0; j < n; ++j) wmax = std::max(wmax, domain.width(j));

  Rng rng(spec.seed ^ index);

  // Paraboloid vertex.
  std::vector<double> T(n);
  for (std::size_t j = 0; j < n; ++j)
    T[j] = rng.uniform(domain.lower(j) + kVertexMargin * domain.width(j),
                       domain.upper(j) - kVertexMargin * domain.width(j));

  // Global minimizer: exactly dist away from T, inside the margin box.
  std::vector<double> Mg(n), dir(n);
  bool placed = false;
  for (int attempt = 0; attempt < kMaxAttempts && !placed; ++attempt) {
    double n2 = 0.0;
    do {
      n2 = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        dir[j] = 2.0 * rng.u01() - 1.0;
        n2 += dir[j] * dir[j];
      }
    } while (n2 > 1.0 || n2 < 1e-4);
    const double scale = spec.dist / std::sqrt(n2);
    placed = true;
    for (std::size_t j = 0; j < n; ++j) {
      Mg[j] = T[j] + dir[j] * scale;
      const double margin = kGlobalMargin * domain.width(j);
      if (Mg[j] < domain.lower(j) + margin || Mg[j] > domain.upper(j) - margin)
        placed = false;
    }
  }
  if (!placed)
    throw GenerationError(
        "constraint violated: could not place the global minimizer at "
        "distance " +
        fmt17(spec.dist) + " from the vertex inside the domain margin");

  // Local ball centres.
  const std::size_t locals = spec.num_minima - 2;
  std::vector<std::vector<double>> M(locals, std::vector<double>(n));
  for (std::size_t i = 0; i < locals; ++i) {
    bool ok = false;
    for (int attempt = 0; attempt < kMaxAttempts && !ok; ++attempt) {
      for (std::size_t j = 0; j < n; ++j)
        M[i][j] = rng.uniform(domain.lower(j) + kLocalMargin * domain.width(j),
                              domain.upper(j) - kLocalMargin * domain.width(j));
      ok = euclidean_distance(M[i], T) >= kVertexClearance * wmax &&
           euclidean_distance(M[i], Mg) >=
               spec.rho + kGlobalClearance * wmax;
      for (std::size_t k = 0; ok && k < i; ++k)
        ok = euclidean_distance(M[i], M[k]) >= kPairSeparation * wmax;
    }
    if (!ok)
      throw GenerationError(
          "constraint violated: could not place local minimizer " +
          std::to_string(i + 1) + " with the required separation");
  }

  // Radii keep every ball disjoint from its neighbours, the global ball,
  // the vertex and the domain boundary.
  std::vector<double> radius(locals);
  for (std::size_t i = 0; i < locals; ++i) {
    double lim = 0.95 * (euclidean_distance(M[i], Mg) - spec.rho);
    lim = std::min(lim, 0.95 * euclidean_distance(M[i], T));
    for (std::size_t k = 0; k < locals; ++k) {
      if (k != i)
        lim = std::min(lim, 0.45 * euclidean_distance(M[i], M[k]));
    }
    double bdist = wmax;
    for (std::size_t j = 0; j < n; ++j) {
      bdist = std::min(bdist, M[i][j] - domain.lower(j));
      bdist = std::min(bdist, domain.upper(j) - M[i][j]);
    }
    lim = std::min(lim, 0.98 * bdist);
    if (!(lim > 0.0))
      throw GenerationError(
          "constraint violated: local ball radius collapsed to zero");
    radius[i] = lim;
  }

  // Ball values, drawn in placement order.
  std::vector<GklsMinimum> minima;
  minima.reserve(spec.num_minima);
  minima.push_back({T, t, 0.0});
  minima.push_back({Mg, fstar, spec.rho});
  for (std::size_t i = 0; i < locals; ++i) {
    const double f = fstar + (t - fstar) * (0.2 + 0.8 * rng.u01());
    minima.push_back({M[i], f, radius[i]});
  }
  return GklsFunction::from_minima(domain, std::move(minima));
}

std::vector<GklsFunction> generate_class(const GklsClassSpec& spec) {
  if (spec.function_count == 0)
    throw InputError("function_count must be >= 1");
  std::vector<GklsFunction> out;
  out.reserve(spec.function_count);
  for (std::uint64_t i = 1; i <= spec.function_count; ++i)
    out.push_back(generate_function(spec, i));
  return out;
}

void write_manifest(std::ostream& os, const GklsClassSpec& spec,
                    std::span<const GklsFunction> functions) {
  if (functions.empty()) throw InputError("manifest needs >= 1 function");
  const BoxDomain def = BoxDomain::symmetric(spec.dimension, 1.0);
  const BoxDomain dom = spec.resolved_domain();
  for (std::size_t j = 0; j < spec.dimension; ++j) {
    if (dom.lower(j) != def.lower(j) || dom.upper(j) != def.upper(j))
      throw InputError("the manifest format carries the default domain only");
  }
  os << "gkls v1 " << spec.dimension << ' ' << spec.num_minima << ' '
     << fmt17(spec.global_value) << ' ' << fmt17(spec.rho) << ' ' << spec.seed
     << '\n';
  std::size_t idx = 0;
  for (const GklsFunction& f : functions) {
    idx += 1;
    if (f.dimension() != spec.dimension ||
        f.minima().size() != spec.num_minima)
      throw InputError("function does not match the manifest header");
    for (const GklsMinimum& m : f.minima()) {
      os << idx;
      for (double x : m.location) os << ' ' << fmt17(x);
      os << ' ' << fmt17(m.value) << ' ' << fmt17(m.radius) << '\n';
    }
  }
  if (!os) throw IoError("manifest write failed");
}

GklsClass read_manifest(std::istream& is) {
  std::string tag, version;
  GklsClassSpec spec;
  if (!(is >> tag >> version) || tag != "gkls" || version != "v1")
    throw IoError("not a gkls v1 manifest");
  if (!(is >> spec.dimension >> spec.num_minima >> spec.global_value >>
        spec.rho >> spec.seed))
    throw IoError("malformed manifest header");
  if (spec.dimension == 0 || spec.num_minima < 2)
    throw IoError("malformed manifest header");
  spec.dist = 0.0;  // not carried by the manifest; evaluation never needs it

  GklsClass out;
  const BoxDomain domain = BoxDomain::symmetric(spec.dimension, 1.0);
  std::size_t expected = 1;
  std::vector<GklsMinimum> minima;
  std::size_t idx = 0;
  while (is >> idx) {
    if (idx != expected)
      throw IoError("manifest records out of order at function " +
                    std::to_string(idx));
    GklsMinimum m;
    m.location.resize(spec.dimension);
    for (double& x : m.location) {
      if (!(is >> x)) throw IoError("truncated manifest record");
    }
    if (!(is >> m.value >> m.radius))
      throw IoError("truncated manifest record");
    minima.push_back(std::move(m));
    if (minima.size() == spec.num_minima) {
      out.functions.push_back(
          GklsFunction::from_minima(domain, std::move(minima)));
      minima.clear();
      expected += 1;
    }
  }
  if (!minima.empty()) throw IoError("manifest ends mid-function");
  if (out.functions.empty()) throw IoError("manifest contains no functions");
  for (const GklsFunction& f : out.functions) {
    if (std::abs(f.global_value() - spec.global_value) >
        1e-12 * std::max(1.0, std::abs(spec.global_value)))
      throw IoError("function global value disagrees with the header");
  }
  spec.function_count = out.functions.size();
  spec.domain = domain;
  out.spec = std::move(spec);
  return out;
}

GklsClass load_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open manifest: " + path);
  return read_manifest(in);
}

void save_manifest(const std::string& path, const GklsClassSpec& spec,
                   std::span<const GklsFunction> functions) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot create manifest: " + path);
  write_manifest(out, spec, functions);
  out.flush();
  if (!out) throw IoError("manifest write failed: " + path);
}

}  // namespace lgo
