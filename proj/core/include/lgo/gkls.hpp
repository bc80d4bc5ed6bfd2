#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lgo/domain.hpp"

namespace lgo {

// One recorded minimum of a generated function. radius == 0 marks the
// paraboloid vertex, which carries no overriding ball.
struct GklsMinimum {
  std::vector<double> location;
  double value = 0.0;
  double radius = 0.0;
};

enum class GklsPreset { Simple, Hard };

// Parameters of one test class. The domain defaults to [-1, 1]^N.
struct GklsClassSpec {
  std::size_t dimension = 2;
  std::size_t num_minima = 10;   // m, counting the paraboloid vertex
  double global_value = -1.0;    // f*
  double floor_value = 0.0;      // t, the paraboloid value at its vertex
  double rho = 0.2;              // attraction radius of the global minimizer
  double dist = 0.9;             // distance vertex -> global minimizer
  std::uint64_t seed = 0;
  std::size_t function_count = 100;
  std::optional<BoxDomain> domain;

  // Published class geometry for dimensions 2..5.
  static GklsClassSpec preset(std::size_t dimension, GklsPreset preset,
                              std::uint64_t seed, std::size_t num_minima = 10);

  BoxDomain resolved_domain() const;
};

// A generated test function: a paraboloid ||x - T||^2 + t with m-1 local
// ball regions, each blending a cubic dip into the paraboloid so the
// function stays C1 with known minima. minima()[0] is the vertex record.
class GklsFunction {
 public:
  static GklsFunction from_minima(BoxDomain domain,
                                  std::vector<GklsMinimum> minima);

  double value(std::span<const double> x) const;
  std::vector<double> gradient(std::span<const double> x) const;

  const BoxDomain& domain() const { return domain_; }
  std::size_t dimension() const { return domain_.dimension(); }
  const std::vector<GklsMinimum>& minima() const { return minima_; }
  std::size_t global_index() const { return global_index_; }
  double global_value() const { return minima_[global_index_].value; }
  const std::vector<double>& global_minimizer() const {
    return minima_[global_index_].location;
  }

 private:
  struct Ball {
    std::size_t minimum = 0;       // index into minima_
    std::vector<double> v;         // M_i - T
    double delta = 0.0;            // ||v||
    double w = 0.0;                // delta^2 + t - f_i
  };

  GklsFunction(BoxDomain domain, std::vector<GklsMinimum> minima);

  const Ball* find_ball(std::span<const double> x, double& r2) const;

  BoxDomain domain_;
  std::vector<GklsMinimum> minima_;
  std::size_t global_index_ = 0;
  std::vector<Ball> balls_;
};

// Deterministic generation: the same spec and index always produce the same
// function, bit for bit. index is 1-based.
GklsFunction generate_function(const GklsClassSpec& spec, std::uint64_t index);
std::vector<GklsFunction> generate_class(const GklsClassSpec& spec);

struct GklsClass {
  GklsClassSpec spec;
  std::vector<GklsFunction> functions;
};

// Plain-text manifest: a `gkls v1` header followed by one line per minimum,
// 17 significant digits, enough to rebuild every function exactly.
void write_manifest(std::ostream& os, const GklsClassSpec& spec,
                    std::span<const GklsFunction> functions);
GklsClass read_manifest(std::istream& is);
GklsClass load_manifest(const std::string& path);
void save_manifest(const std::string& path, const GklsClassSpec& spec,
                   std::span<const GklsFunction> functions);

}  // namespace lgo
