#pragma once

#include "phisolve/grid.hpp"
#include "phisolve/nfunction.hpp"

namespace phisolve {

/// Discrete modular int_Omega Phi(|u|) dx under the mesh quadrature.
double modular(const GridFunction& u, const NFunction& nf);

struct LuxemburgResult {
  double norm = 0.0;
  double modular_at_norm = 0.0;  // ~1 for nonzero u
  int bisection_iterations = 0;
};

/// Luxemburg norm inf{ lambda > 0 : modular(u/lambda) <= 1 } by bracketing
/// and bisection to relative width 1e-12. Throws BracketFailure if 200
/// doublings/halvings never straddle 1.
LuxemburgResult luxemburg_norm(const GridFunction& u, const NFunction& nf);

}  // namespace phisolve
