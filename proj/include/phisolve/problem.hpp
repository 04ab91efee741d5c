#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "phisolve/grid.hpp"
#include "phisolve/nfunction.hpp"
#include "phisolve/orlicz.hpp"

namespace phisolve {

/// One reaction term. The default is the power form driver^exponent; a custom
/// map may depend on both components (the generalized-system case) and must be
/// nondecreasing in each argument.
struct Nonlinearity {
  double exponent = 0.0;
  bool zero = false;
  std::function<double(double, double)> custom;  // (own, other) -> value

  double eval(double driver, double own, double other) const {
    if (zero) return 0.0;
    if (custom) return custom(own, other);
    // clamp guards against tiny negative excursions of nonnegative iterates
    return exponent == 0.0 ? 1.0 : std::pow(std::max(driver, 0.0), exponent);
  }
};

struct EquationSpec {
  NFunction op;          // Phi_i, drives the quasilinear operator
  NFunction norm_psi;    // Psi_i, norm of the concave nonlocal coefficient
  NFunction norm_lam;    // Lambda_i, norm of the convex nonlocal coefficient
  double alpha = 0.0;    // exponent on |.|_{L^Psi}
  double beta = 0.0;     // exponent of f's power form
  double gamma = 0.0;    // exponent on |.|_{L^Lambda}
  double xi = 0.0;       // exponent of g's power form
  Nonlinearity f;
  Nonlinearity g{0.0, true, nullptr};
};

/// The full nonlocal problem: scalar when n_equations == 1, cross-coupled
/// system when 2. lambda/theta scale the concave/convex terms; a pure
/// sublinear problem has lambda = 1, theta = 0.
struct ProblemSpec {
  int n_equations = 1;
  std::vector<EquationSpec> eqs;
  double lambda = 1.0;
  double theta = 0.0;
  bool generalized = false;  // nonlinearities read both components

  const EquationSpec& eq(int i) const { return eqs[static_cast<size_t>(i)]; }

  /// Sampled sanity checks: exponents nonnegative, scales positive where
  /// present, f/g nondecreasing and nonnegative on [0, u_max].
  void validate(double u_max = 10.0) const;
};

/// Right-hand side of equation `i` frozen at the given iterate(s):
///   lambda f_i(.) |driver|_{L^Psi_i}^{alpha_i} + theta g_i(.) |driver|_{L^Lambda_i}^{gamma_i}
/// where driver = own for scalars and the other component for systems.
/// The norms used are returned through norm_psi/norm_lam when non-null.
GridFunction frozen_rhs(const ProblemSpec& spec, int i, const GridFunction& own,
                        const GridFunction& other, double* norm_psi = nullptr,
                        double* norm_lam = nullptr);

}  // namespace phisolve
