#include "phisolve/problem.hpp"

#include <cmath>

namespace phisolve {

void ProblemSpec::validate(double u_max) const {
  if (n_equations != 1 && n_equations != 2)
    fail(ErrorCode::InvalidParams, "n_equations must be 1 or 2");
  if (static_cast<int>(eqs.size()) != n_equations)
    fail(ErrorCode::InvalidParams, "equation count mismatch");
  if (!(lambda > 0.0)) fail(ErrorCode::InvalidParams, "lambda must be positive");
  if (theta < 0.0) fail(ErrorCode::InvalidParams, "theta must be nonnegative");
  for (int i = 0; i < n_equations; ++i) {
    const EquationSpec& e = eq(i);
    if (e.alpha < 0.0 || e.beta < 0.0 || e.gamma < 0.0 || e.xi < 0.0)
      fail(ErrorCode::InvalidParams, "exponents must be nonnegative");
    // sampled monotonicity/nonnegativity of the reaction terms
    constexpr int kSamples = 64;
    for (const Nonlinearity* nl : {&e.f, &e.g}) {
      if (nl->zero) continue;
      double prev_own = -1.0, prev_other = -1.0;
      for (int s = 0; s <= kSamples; ++s) {
        const double t = u_max * s / kSamples;
        const double at_own = nl->eval(t, t, u_max);
        const double at_other = nl->eval(t, u_max, t);
        if (at_own < 0.0 || at_other < 0.0)
          fail(ErrorCode::InvalidParams, "reaction term goes negative");
        if (at_own < prev_own - 1e-12 || at_other < prev_other - 1e-12)
          fail(ErrorCode::InvalidParams, "reaction term not nondecreasing");
        prev_own = at_own;
        prev_other = at_other;
      }
    }
  }
}

GridFunction frozen_rhs(const ProblemSpec& spec, int i, const GridFunction& own,
                        const GridFunction& other, double* norm_psi,
                        double* norm_lam) {
  const EquationSpec& e = spec.eq(i);
  const GridFunction& driver = spec.n_equations == 1 ? own : other;

  double cpsi = 1.0, clam = 1.0, npsi = 0.0, nlam = 0.0;
  if (!e.f.zero) {
    npsi = luxemburg_norm(driver, e.norm_psi).norm;
    cpsi = e.alpha == 0.0 ? 1.0 : std::pow(npsi, e.alpha);
  }
  const bool has_g = !e.g.zero && spec.theta > 0.0;
  if (has_g) {
    nlam = luxemburg_norm(driver, e.norm_lam).norm;
    clam = e.gamma == 0.0 ? 1.0 : std::pow(nlam, e.gamma);
  }
  if (norm_psi) *norm_psi = npsi;
  if (norm_lam) *norm_lam = nlam;

  GridFunction rhs(own.mesh);
  for (int n = 0; n < rhs.size(); ++n) {
    if (own.mesh->is_boundary(n)) continue;
    double val = 0.0;
    if (!e.f.zero)
      val += spec.lambda * e.f.eval(driver[n], own[n], other[n]) * cpsi;
    if (has_g) val += spec.theta * e.g.eval(driver[n], own[n], other[n]) * clam;
    rhs[n] = val;
  }
  return rhs;
}

}  // namespace phisolve
