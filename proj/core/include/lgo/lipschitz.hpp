#pragma once

namespace lgo {

// How a solver obtains Lipschitz information about f.
enum class LipschitzMode {
  APriori,           // a constant L >= true Lipschitz constant is given
  AdaptiveGlobal,    // one global estimate refreshed from observed slopes
  LocalTuning,       // per-interval estimates balancing local and global info
  MultipleEstimates  // all K > 0 at once, DIRECT style
};

// Validated bundle of the Lipschitz-handling parameters.
//   r   reliability safety factor, > 1
//   xi  small positive floor keeping estimates nonzero near flat data
//   eps minimal relative improvement demanded by the MultipleEstimates test
class LipschitzSpec {
 public:
  static constexpr double kDefaultR = 1.5;
  static constexpr double kDefaultXi = 1e-8;
  static constexpr double kDefaultEps = 1e-4;

  static LipschitzSpec a_priori(double L);
  static LipschitzSpec adaptive_global(double r = kDefaultR, double xi = kDefaultXi);
  static LipschitzSpec local_tuning(double r = kDefaultR, double xi = kDefaultXi);
  static LipschitzSpec multiple_estimates(double eps = kDefaultEps);

  LipschitzMode mode() const { return mode_; }
  double constant() const;  // valid in APriori mode only
  double reliability() const { return r_; }
  double floor() const { return xi_; }
  double improvement() const { return eps_; }

 private:
  LipschitzSpec() = default;

  LipschitzMode mode_ = LipschitzMode::APriori;
  double L_ = 0.0;
  double r_ = kDefaultR;
  double xi_ = kDefaultXi;
  double eps_ = kDefaultEps;
};

}  // namespace lgo
