#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <utility>

#include "phisolve/errors.hpp"

namespace phisolve {

enum class Family {
  PowerLaw,        // phi(t) = p t^{p-2},                     Phi(t) = |t|^p
  PowerSum,        // phi(t) = p t^{p-2} + q t^{q-2},          Phi(t) = |t|^p + |t|^q
  Elasticity,      // phi(t) = 2 g (1+t^2)^{g-1},              Phi(t) = (1+t^2)^g - 1
  MinimalSurface,  // phi(t) = g (sqrt(1+t^2)-1)^{g-1}/sqrt(1+t^2), Phi(t) = (sqrt(1+t^2)-1)^g
  Plasticity,      // phi(t) = (p t^{p-2}(1+t)ln(1+t)+t^{p-1})/(1+t), Phi(t) = |t|^p ln(1+|t|)
  Custom,
};

const char* family_name(Family f);

/// An N-function Phi(t) = int_0^{|t|} phi(s) s ds together with its density
/// phi and growth exponents l <= phi(t)t^2/Phi(t) <= m.
///
/// Instances are immutable; all evaluation methods are pure and thread-safe.
class NFunction {
 public:
  /// Default-constructs PowerLaw(2), the plain Laplacian.
  NFunction() = default;

  static NFunction power_law(double p);
  static NFunction power_sum(double p, double q);
  static NFunction elasticity(double gamma_e);
  static NFunction minimal_surface(double gamma_e);
  static NFunction plasticity(double p);

  /// User-supplied density with declared growth exponents. The declaration is
  /// validated by sampling; throws ExponentDeclarationInvalid on failure.
  /// Pass a closed-form primitive to skip the quadrature path.
  static NFunction custom(std::function<double(double)> phi, double l, double m,
                          std::function<double(double)> Phi = {});

  Family family() const { return family_; }
  double param_a() const { return a_; }
  double param_b() const { return b_; }
  double l() const { return l_; }
  double m() const { return m_; }

  /// Density phi(t), t >= 0. Throws NonFiniteValue for families singular at 0.
  double phi(double t) const;

  /// Phi(|t|), closed form where available, adaptive Simpson otherwise.
  double Phi(double t) const;

  /// (min(t^l, t^m), max(t^l, t^m)) -- the sandwich factors of the
  /// zeta_0(t) Phi(rho) <= Phi(rho t) <= zeta_1(t) Phi(rho) estimate.
  std::pair<double, double> zeta_bounds(double t) const;

  /// phi(t) t^2 / Phi(t); stays in [l, m] for a valid instance.
  double exponent_ratio(double t) const;

  /// 2^m, a Delta_2 constant K with Phi(2t) <= K Phi(t) for all t > 0.
  double delta2_bound() const { return std::pow(2.0, m_); }

  // --- operator-side density -------------------------------------------
  // The discrete Phi-Laplacian is -div(a(|grad u|) grad u) with a = op_density.
  // PowerLaw uses the conventional p-Laplacian density t^{p-2}; the remaining
  // families use phi as written.
  double op_density(double t) const;
  double op_density_deriv(double t) const;

  /// Face flux F(g) = op_density(r) g with r = sqrt(g^2 + eps^2).
  double flux(double g, double eps) const;
  /// dF/dg; strictly positive, feeds the Newton Jacobian.
  double flux_deriv(double g, double eps) const;

  std::string describe() const;

 private:
  void validate(bool is_custom) const;

  Family family_ = Family::PowerLaw;
  double a_ = 2.0;  // p (PowerLaw/PowerSum/Plasticity) or gamma_e
  double b_ = 0.0;  // q (PowerSum)
  double l_ = 2.0;
  double m_ = 2.0;
  std::function<double(double)> custom_phi_;
  std::function<double(double)> custom_Phi_;
};

/// Adaptive Simpson quadrature of f over [a, b].
/// Throws QuadratureFailure when the refinement budget is exhausted.
double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double rel_tol = 1e-12,
                        double abs_tol = 1e-300);

}  // namespace phisolve
