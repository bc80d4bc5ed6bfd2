#include "lgo/lipschitz.hpp"

#include "internal.hpp"
#include "lgo/errors.hpp"

namespace lgo {

namespace {

void check_r(double r) {
  detail::require_finite(r, "reliability r");
  if (!(r > 1.0)) throw InputError("reliability r must be > 1");
}

}  // namespace

LipschitzSpec LipschitzSpec::a_priori(double L) {
  detail::require_positive(L, "Lipschitz constant L");
  LipschitzSpec s;
  s.mode_ = LipschitzMode::APriori;
  s.L_ = L;
  return s;
}

LipschitzSpec LipschitzSpec::adaptive_global(double r, double xi) {
  check_r(r);
  detail::require_positive(xi, "floor xi");
  LipschitzSpec s;
  s.mode_ = LipschitzMode::AdaptiveGlobal;
  s.r_ = r;
  s.xi_ = xi;
  return s;
}

LipschitzSpec LipschitzSpec::local_tuning(double r, double xi) {
  check_r(r);
  detail::require_positive(xi, "floor xi");
  LipschitzSpec s;
  s.mode_ = LipschitzMode::LocalTuning;
  s.r_ = r;
  s.xi_ = xi;
  return s;
}

LipschitzSpec LipschitzSpec::multiple_estimates(double eps) {
  detail::require_finite(eps, "improvement eps");
  if (eps < 0.0) throw InputError("improvement eps must be >= 0");
  LipschitzSpec s;
  s.mode_ = LipschitzMode::MultipleEstimates;
  s.eps_ = eps;
  return s;
}

double LipschitzSpec::constant() const {
  if (mode_ != LipschitzMode::APriori)
    throw InputError("Lipschitz constant is only available in APriori mode");
  return L_;
}

}  // namespace lgo
