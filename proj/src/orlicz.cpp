#include "phisolve/orlicz.hpp"

#include <cmath>

namespace phisolve {

double modular(const GridFunction& u, const NFunction& nf) {
  double s = 0.0;
  for (int i = 0; i < u.size(); ++i)
    s += u.mesh->weight(i) * nf.Phi(std::fabs(u[i]));
  return s;
}

LuxemburgResult luxemburg_norm(const GridFunction& u, const NFunction& nf) {
  LuxemburgResult res;
  if (u.max_abs() == 0.0) return res;

  const auto mod_at = [&](double lam) {
    GridFunction scaled = u;
    for (double& x : scaled.v) x /= lam;
    return modular(scaled, nf);
  };

  // initial guess: sup-norm times |Omega|^{1/l} puts the modular near 1 for
  // pure powers; bracket from there
  double lam = u.max_abs() * std::pow(u.mesh->measure(), 1.0 / nf.l());
  double m = mod_at(lam);
  double lo, hi;  // modular(lo) > 1 >= modular(hi)
  int moves = 0;
  if (m > 1.0) {
    lo = lam;
    hi = lam;
    do {
      if (++moves > 200)
        fail(ErrorCode::BracketFailure, "no upper bracket after 200 doublings");
      hi *= 2.0;
      m = mod_at(hi);
    } while (m > 1.0);
  } else {
    hi = lam;
    lo = lam;
    do {
      if (++moves > 200)
        fail(ErrorCode::BracketFailure, "no lower bracket after 200 halvings");
      lo *= 0.5;
      m = mod_at(lo);
    } while (m <= 1.0);
  }

  int iters = 0;
  while ((hi - lo) > 1e-12 * hi && iters < 200) {
    const double mid = 0.5 * (lo + hi);
    if (mod_at(mid) > 1.0)
      lo = mid;
    else
      hi = mid;
    ++iters;
  }
  res.norm = hi;
  res.modular_at_norm = mod_at(hi);
  res.bisection_iterations = iters;
  return res;
}

}  // namespace phisolve
